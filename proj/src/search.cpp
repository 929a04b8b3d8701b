#include "vqt/search.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "vqt/rng.hpp"

namespace vqt::search {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

void validate_config(const SearchConfig& cfg, int num_angles) {
  if (cfg.levels < 1) throw std::invalid_argument("levels must be >= 1");
  if (cfg.partitions < 1) throw std::invalid_argument("partitions must be >= 1");
  if (cfg.points < 1) throw std::invalid_argument("points must be >= 1");
  if (!(cfg.rescale > 0.0 && cfg.rescale <= 1.0))
    throw std::invalid_argument("rescale must lie in (0, 1]");
  if (cfg.tau < 0.0) throw std::invalid_argument("tau must be >= 0");
  if (!cfg.initial_ranges.empty() &&
      static_cast<int>(cfg.initial_ranges.size()) != num_angles)
    throw std::invalid_argument("one initial range per angle required");
}

long pow_long(int base, int exp) {
  long v = 1;
  for (int i = 0; i < exp; ++i) v *= base;
  return v;
}

// Per-angle point offsets for one level: evenly spread by default, or
// drawn once per level from a stream keyed by (seed, level).
std::vector<std::vector<double>> level_offsets(const SearchConfig& cfg, int num_angles,
                                               int level) {
  if (!cfg.randomize_points) return qubo::even_offsets(num_angles, cfg.points);
  std::mt19937_64 eng =
      rng::make_engine(cfg.seed, 0x0ffULL, static_cast<std::uint64_t>(level));
  std::vector<std::vector<double>> offsets(num_angles,
                                           std::vector<double>(cfg.points));
  for (int i = 0; i < num_angles; ++i)
    for (int k = 0; k < cfg.points; ++k) {
      double u = rng::uniform01(eng);
      while (u <= 0.0) u = rng::uniform01(eng);  // keep strictly inside (0,1)
      offsets[i][k] = u;
    }
  return offsets;
}

// Comparator for pivot selection: higher accuracy wins, ties go to lower
// energy, then to the earlier execution.
bool better_record(const ExecutionRecord& a, const ExecutionRecord& b) {
  if (a.taccuracy != b.taccuracy) return a.taccuracy > b.taccuracy;
  if (a.energy != b.energy) return a.energy < b.energy;
  if (a.level != b.level) return a.level < b.level;
  return a.group < b.group;
}

}  // namespace

std::vector<int> group_point_index(int group, int num_angles, int points) {
  std::vector<int> idx(num_angles);
  for (int i = num_angles - 1; i >= 0; --i) {
    idx[i] = group % points;
    group /= points;
  }
  return idx;
}

std::vector<std::pair<double, double>> recenter(
    const std::vector<std::pair<double, double>>& ranges,
    const std::vector<double>& pivot, double rescale) {
  if (ranges.size() != pivot.size())
    throw std::invalid_argument("pivot length must match range count");
  std::vector<std::pair<double, double>> out(ranges.size());
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const double half = (ranges[i].second - ranges[i].first) * rescale / 2.0;
    out[i] = {pivot[i] - half, pivot[i] + half};
  }
  return out;
}

bool stop_after_level(double best_before, double level_best, double tau) {
  return best_before - level_best >= tau;
}

std::vector<ExecutionRecord> run_level(const symbolic::SymbolicOperator& op,
                                       const sv::ParamCircuit& circuit,
                                       const sv::EncodedDataset& train,
                                       const sv::ReadoutSpec& readout,
                                       const std::vector<std::pair<double, double>>& ranges,
                                       int level, const SearchConfig& cfg) {
  const int a = op.num_angles;
  validate_config(cfg, a);

  const qubo::AngleGrid grid =
      qubo::make_grid(ranges, cfg.partitions, cfg.points, level_offsets(cfg, a, level),
                      level);
  const long groups = pow_long(cfg.points, a);

  std::vector<ExecutionRecord> records(groups);
#pragma omp parallel for schedule(dynamic)
  for (long g = 0; g < groups; ++g) {
    const auto t0 = std::chrono::steady_clock::now();
    ExecutionRecord rec;
    rec.level = level;
    rec.group = static_cast<int>(g);
    rec.point_index = group_point_index(static_cast<int>(g), a, cfg.points);

    const std::vector<qubo::RecordTerm> terms =
        qubo::build_record_terms_serial(op, train, grid, rec.point_index);
    qubo::QuboModel model = qubo::assemble(terms, a, cfg.partitions, cfg.lambda);
    if (cfg.noise_level > 0.0)
      model = sampler::inject_noise(
          model, cfg.noise_level,
          rng::derive_seed(cfg.seed, 0x401ULL, static_cast<std::uint64_t>(level),
                           static_cast<std::uint64_t>(g)));
    rec.qubo_vars = model.n_vars;

    const std::vector<sampler::Sample> samples = sampler::sample_serial(
        model, cfg.schedule,
        rng::derive_seed(cfg.seed, static_cast<std::uint64_t>(level),
                         static_cast<std::uint64_t>(g)));
    for (const sampler::Sample& s : samples) {
      const sampler::DecodeResult dec =
          sampler::decode(s.assignment, grid, rec.point_index);
      if (!dec.feasible) continue;
      rec.feasible = true;
      rec.angles = dec.angles;
      rec.energy = s.energy;
      break;
    }
    if (rec.feasible)
      rec.taccuracy = sv::accuracy_serial(circuit, rec.angles, train, readout);
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                      .count();
    records[g] = std::move(rec);
  }
  return records;
}

SearchResult run_search(const sv::ParamCircuit& circuit, const sv::EncodedDataset& train,
                        const sv::ReadoutSpec& readout, const SearchConfig& cfg) {
  validate_config(cfg, circuit.num_angles);

  const symbolic::SymbolicOperator surrogate = symbolic::expand_products(
      symbolic::hyperbolic_substitution(symbolic::symbolic_unitary(circuit)));

  std::vector<std::pair<double, double>> ranges = cfg.initial_ranges;
  if (ranges.empty())
    ranges.assign(circuit.num_angles, {0.0, kTwoPi});

  SearchResult result;
  ExecutionRecord best;
  bool have_best = false;

  for (int level = 1; level <= cfg.levels; ++level) {
    const std::vector<ExecutionRecord> level_records =
        run_level(surrogate, circuit, train, readout, ranges, level, cfg);
    result.levels_run = level;

    const ExecutionRecord* level_best = nullptr;
    for (const ExecutionRecord& rec : level_records) {
      if (!rec.feasible) continue;
      ++result.accuracy_evals;
      result.accuracy_map.push_back({rec.angles, rec.taccuracy});
      if (!level_best || better_record(rec, *level_best)) level_best = &rec;
    }

    if (!level_best) {
      // No feasible execution: nothing to pivot on, so the level is
      // treated as a full accuracy drop and the search stops here.
      result.records.insert(result.records.end(), level_records.begin(),
                            level_records.end());
      result.infeasible_level = true;
      if (have_best)
        result.stopped_early = stop_after_level(best.taccuracy, 0.0, cfg.tau);
      break;
    }

    const double best_before = have_best ? best.taccuracy : -1.0;
    if (!have_best || better_record(*level_best, best)) {
      best = *level_best;
      have_best = true;
    }
    const double level_best_acc = level_best->taccuracy;
    result.records.insert(result.records.end(), level_records.begin(),
                          level_records.end());

    if (level == cfg.levels) break;
    if (stop_after_level(best_before, level_best_acc, cfg.tau)) {
      result.stopped_early = true;
      break;
    }
    ranges = recenter(ranges, best.angles, cfg.rescale);
  }

  if (have_best) {
    result.found = true;
    result.best_angles = best.angles;
    result.best_taccuracy = best.taccuracy;
    result.best_energy = best.energy;
  }
  return result;
}

}  // namespace vqt::search
