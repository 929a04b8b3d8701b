#include "vqt/sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "vqt/rng.hpp"

namespace vqt::sampler {

namespace {

using Adjacency = std::vector<std::vector<std::pair<int, double>>>;

Adjacency build_adjacency(const qubo::QuboModel& model) {
  Adjacency adj(model.n_vars);
  for (const auto& [pair, coeff] : model.quadratic) {
    adj[pair.first].push_back({pair.second, coeff});
    adj[pair.second].push_back({pair.first, coeff});
  }
  return adj;
}

Sample run_read(const qubo::QuboModel& model, const Adjacency& adj,
                const Schedule& schedule, std::uint64_t seed, int read) {
  const int n = model.n_vars;
  std::mt19937_64 eng = rng::make_engine(seed, static_cast<std::uint64_t>(read));

  std::vector<std::uint8_t> x(n);
  for (int i = 0; i < n; ++i) x[i] = rng::uniform01(eng) < 0.5 ? 0 : 1;

  // field[i] = dE of setting x_i from 0 to 1 given the rest of x.
  std::vector<double> field(model.linear.begin(), model.linear.end());
  for (int i = 0; i < n; ++i)
    for (const auto& [j, c] : adj[i])
      if (x[j]) field[i] += c;

  const double ratio = schedule.beta_end / schedule.beta_start;
  for (int t = 0; t < schedule.sweeps; ++t) {
    const double frac =
        schedule.sweeps > 1 ? static_cast<double>(t) / (schedule.sweeps - 1) : 1.0;
    const double beta = schedule.beta_start * std::pow(ratio, frac);
    for (int i = 0; i < n; ++i) {
      const double de = x[i] ? -field[i] : field[i];
      if (de > 0.0 && rng::uniform01(eng) >= std::exp(-beta * de)) continue;
      x[i] ^= 1;
      const double dir = x[i] ? 1.0 : -1.0;
      for (const auto& [j, c] : adj[i]) field[j] += dir * c;
    }
  }

  Sample s;
  s.energy = model.energy(x);
  s.assignment = std::move(x);
  s.read = read;
  return s;
}

std::vector<Sample> run_reads(const qubo::QuboModel& model, const Schedule& schedule,
                              std::uint64_t seed, bool parallel) {
  if (model.n_vars <= 0) throw std::invalid_argument("empty model");
  if (schedule.sweeps < 1 || schedule.reads < 1)
    throw std::invalid_argument("schedule needs at least one sweep and one read");
  if (!(schedule.beta_start > 0.0) || !(schedule.beta_end >= schedule.beta_start))
    throw std::invalid_argument("inverse temperatures must satisfy 0 < start <= end");

  const Adjacency adj = build_adjacency(model);
  std::vector<Sample> samples(schedule.reads);
#pragma omp parallel for schedule(static) if (parallel)
  for (int r = 0; r < schedule.reads; ++r)
    samples[r] = run_read(model, adj, schedule, seed, r);

  std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) {
    return a.energy != b.energy ? a.energy < b.energy : a.read < b.read;
  });
  return samples;
}

}  // namespace

std::vector<Sample> sample(const qubo::QuboModel& model, const Schedule& schedule,
                           std::uint64_t seed) {
  return run_reads(model, schedule, seed, true);
}

std::vector<Sample> sample_serial(const qubo::QuboModel& model,
                                  const Schedule& schedule, std::uint64_t seed) {
  return run_reads(model, schedule, seed, false);
}

Sample brute_force(const qubo::QuboModel& model) {
  const int n = model.n_vars;
  if (n <= 0) throw std::invalid_argument("empty model");
  if (n > 24) throw std::invalid_argument("brute force limited to 24 variables");

  const Adjacency adj = build_adjacency(model);
  std::vector<std::uint8_t> x(n, 0);
  double energy = model.offset;

  Sample best;
  best.assignment = x;
  best.energy = energy;

  // Gray-code walk: one bit flip per step with O(degree) energy updates.
  const std::uint64_t total = 1ULL << n;
  for (std::uint64_t m = 1; m < total; ++m) {
    const int i = std::countr_zero(m);
    double de = model.linear[i];
    for (const auto& [j, c] : adj[i])
      if (x[j]) de += c;
    x[i] ^= 1;
    energy += x[i] ? de : -de;
    if (energy < best.energy ||
        (energy == best.energy && x < best.assignment)) {
      best.energy = energy;
      best.assignment = x;
    }
  }
  best.energy = model.energy(best.assignment);
  return best;
}

qubo::QuboModel inject_noise(const qubo::QuboModel& model, double level,
                             std::uint64_t seed) {
  if (level < 0.0 || level >= 1.0)
    throw std::invalid_argument("noise level must lie in [0, 1)");
  qubo::QuboModel out = model;
  std::mt19937_64 eng = rng::make_engine(seed);
  for (int i = 0; i < out.n_vars; ++i)
    if (out.linear[i] != 0.0)
      out.linear[i] *= 1.0 + rng::uniform(eng, -level, level);
  for (auto& [pair, coeff] : out.quadratic)
    if (coeff != 0.0) coeff *= 1.0 + rng::uniform(eng, -level, level);
  return out;
}

DecodeResult decode(const std::vector<std::uint8_t>& assignment,
                    const qubo::AngleGrid& grid, const std::vector<int>& point_index) {
  const int a = static_cast<int>(grid.ranges.size());
  const int d = grid.partitions;
  if (static_cast<int>(assignment.size()) < a * d)
    throw std::invalid_argument("assignment shorter than the primary block");
  if (static_cast<int>(point_index.size()) != a)
    throw std::invalid_argument("one point index per angle required");

  DecodeResult res;
  std::vector<double> angles(a);
  for (int i = 0; i < a; ++i) {
    int chosen = -1;
    int count = 0;
    for (int p = 0; p < d; ++p) {
      if (assignment[qubo::var_index(i, p, d)]) {
        chosen = p;
        ++count;
      }
    }
    if (count != 1) {
      res.violations.push_back(i);
      continue;
    }
    angles[i] = grid.values[i][chosen][point_index[i]];
  }
  res.feasible = res.violations.empty();
  if (res.feasible) res.angles = std::move(angles);
  return res;
}

qubo::QuboModel load_qubo(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  qubo::QuboModel model;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty QUBO file");
  {
    std::istringstream head(line);
    if (!(head >> model.n_vars >> model.offset) || model.n_vars <= 0)
      throw std::runtime_error("malformed QUBO header");
  }
  model.n_primary = model.n_vars;
  model.linear.assign(model.n_vars, 0.0);

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    int i = 0, j = 0;
    double coeff = 0.0;
    if (!(row >> i >> j >> coeff)) throw std::runtime_error("malformed QUBO row");
    if (i < 0 || j < 0 || i >= model.n_vars || j >= model.n_vars)
      throw std::runtime_error("QUBO row index out of range");
    if (i == j)
      model.linear[i] += coeff;
    else
      model.quadratic[{std::min(i, j), std::max(i, j)}] += coeff;
  }
  return model;
}

}  // namespace vqt::sampler
