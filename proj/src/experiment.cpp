#include "vqt/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "vqt/qubo.hpp"
#include "vqt/rng.hpp"
#include "vqt/symbolic.hpp"

namespace vqt::experiment {
namespace {

using nlohmann::json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Stream tag separating per-repeat seeds from every other derived stream.
constexpr std::uint64_t kRepeatTag = 0x9e7;

std::uint64_t repeat_seed(const ExperimentConfig& cfg, int repeat) {
  return rng::derive_seed(cfg.seed, kRepeatTag, static_cast<std::uint64_t>(repeat));
}

// Feature rows ready for amplitude encoding.  A row that collapsed to all
// zeros (possible after min-max rescaling) has no direction to encode, so
// it falls back to the uniform all-ones vector instead of failing the run.
sv::EncodedDataset encode_split(const data::LabeledDataset& ds, int qubits,
                                const sv::ReadoutSpec& readout) {
  std::vector<std::vector<double>> rows = data::feature_rows(ds);
  for (std::vector<double>& row : rows) {
    double norm2 = 0.0;
    for (double v : row) norm2 += v * v;
    if (norm2 < 1e-24) std::fill(row.begin(), row.end(), 1.0);
  }
  return sv::encode_dataset(rows, ds.labels, qubits, readout);
}

struct RepeatOutcome {
  std::vector<double> angles;
  double taccuracy = 0.0;
  double vaccuracy = 0.0;
  double iterations = 0.0;
  double seconds = 0.0;
  json detail;
};

RepeatOutcome train_once(const ExperimentConfig& cfg, const PreparedData& prepared,
                         std::uint64_t seed) {
  const sv::ParamCircuit circuit = make_circuit(cfg.circuit);
  const sv::ReadoutSpec readout = make_readout(cfg.circuit);

  RepeatOutcome out;
  const auto start = std::chrono::steady_clock::now();

  switch (cfg.method) {
    case Method::Adiabatic: {
      search::SearchConfig scfg = cfg.search;
      scfg.seed = seed;
      scfg.noise_level = cfg.noise;
      const search::SearchResult res =
          search::run_search(circuit, prepared.train, readout, scfg);
      out.angles = res.best_angles;
      out.taccuracy = res.best_taccuracy;
      out.iterations = static_cast<double>(res.records.size());
      json execs = json::array();
      for (const search::ExecutionRecord& rec : res.records)
        execs.push_back({{"level", rec.level},
                         {"group", rec.group},
                         {"feasible", rec.feasible},
                         {"energy", rec.energy},
                         {"taccuracy", rec.taccuracy},
                         {"seconds", rec.seconds},
                         {"qubo_vars", rec.qubo_vars}});
      out.detail = {{"found", res.found},
                    {"levels_run", res.levels_run},
                    {"stopped_early", res.stopped_early},
                    {"infeasible_level", res.infeasible_level},
                    {"best_energy", res.best_energy},
                    {"executions", std::move(execs)}};
      break;
    }
    case Method::Spsa: {
      baselines::SpsaConfig bcfg = cfg.spsa;
      bcfg.seed = seed;
      const baselines::TrainResult res =
          baselines::spsa_train(circuit, prepared.train, readout, bcfg);
      out.angles = res.angles;
      out.taccuracy = res.taccuracy;
      out.iterations = static_cast<double>(res.evaluations);
      out.detail = {{"loss", res.loss}, {"trace", res.trace}};
      break;
    }
    case Method::Memetic: {
      baselines::MemeticConfig bcfg = cfg.memetic;
      bcfg.seed = seed;
      const baselines::TrainResult res =
          baselines::memetic_train(circuit, prepared.train, readout, bcfg);
      out.angles = res.angles;
      out.taccuracy = res.taccuracy;
      out.iterations = static_cast<double>(res.evaluations);
      out.detail = {{"loss", res.loss}, {"trace", res.trace}};
      break;
    }
  }

  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  // Validation scoring happens outside the timed window; it is reporting,
  // not training work.
  out.vaccuracy = out.angles.empty()
                      ? 0.0
                      : sv::accuracy(circuit, out.angles, prepared.validation, readout);
  return out;
}

int levels_column(const ExperimentConfig& cfg) {
  return cfg.method == Method::Adiabatic ? cfg.search.levels : 0;
}
int parts_column(const ExperimentConfig& cfg) {
  return cfg.method == Method::Adiabatic ? cfg.search.partitions : 0;
}
int points_column(const ExperimentConfig& cfg) {
  return cfg.method == Method::Adiabatic ? cfg.search.points : 0;
}

json row_to_json(const ResultRow& row) {
  return {{"label", row.label},         {"levels", row.levels},
          {"parts", row.parts},         {"points", row.points},
          {"taccuracy", row.taccuracy}, {"time", row.time},
          {"iterations", row.iterations}, {"texec", row.texec},
          {"vaccuracy", row.vaccuracy}, {"acctime", row.acctime}};
}

std::string method_to_string(Method m) {
  switch (m) {
    case Method::Adiabatic: return "adiabatic";
    case Method::Spsa: return "spsa";
    case Method::Memetic: return "memetic";
  }
  throw std::logic_error("unreachable method");
}

Method method_from_string(const std::string& s) {
  if (s == "adiabatic") return Method::Adiabatic;
  if (s == "spsa") return Method::Spsa;
  if (s == "memetic") return Method::Memetic;
  throw std::invalid_argument("unknown method: " + s);
}

// Spreadsheet-style column labels: 0 -> A, 25 -> Z, 26 -> AA, ...
std::string cell_label(int index) {
  std::string s;
  for (int n = index;; n = n / 26 - 1) {
    s.insert(s.begin(), static_cast<char>('A' + n % 26));
    if (n < 26) break;
  }
  return s;
}

}  // namespace

ResultRow finalize_row(std::string label, int levels, int parts, int points,
                       double taccuracy, double seconds, double iterations,
                       double vaccuracy) {
  ResultRow row;
  row.label = std::move(label);
  row.levels = levels;
  row.parts = parts;
  row.points = points;
  row.taccuracy = taccuracy;
  // Wall time below clock resolution would make the ratio columns blow
  // up; clamp to a nanosecond floor.
  row.time = std::max(seconds, 1e-9);
  row.iterations = iterations;
  row.texec = row.time / std::max(iterations, 1.0);
  row.vaccuracy = vaccuracy;
  row.acctime = row.taccuracy / row.time;
  return row;
}

sv::ParamCircuit make_circuit(const CircuitConfig& cfg) {
  if (cfg.ansatz == Ansatz::RxCrx) {
    if (cfg.qubits != 2)
      throw std::invalid_argument("the rxcrx ansatz is fixed at two qubits");
    return sv::build_rx_crx();
  }
  return sv::build_twolocal(cfg.qubits, cfg.reps);
}

sv::ReadoutSpec make_readout(const CircuitConfig& cfg) {
  if (cfg.readout == "all") return sv::ReadoutSpec::all(cfg.threshold);
  int qubit = 0;
  try {
    std::size_t used = 0;
    qubit = std::stoi(cfg.readout, &used);
    if (used != cfg.readout.size()) throw std::invalid_argument(cfg.readout);
  } catch (const std::exception&) {
    throw std::invalid_argument("readout must be a qubit index or \"all\", got: " +
                                cfg.readout);
  }
  if (qubit < 0 || qubit >= cfg.qubits)
    throw std::invalid_argument("readout qubit out of range: " + cfg.readout);
  return sv::ReadoutSpec::single(qubit, cfg.threshold);
}

PreparedData prepare_data(const ExperimentConfig& cfg, std::uint64_t repeat_seed) {
  data::LabeledDataset ds =
      data::load_csv(cfg.dataset.path, cfg.dataset.label_column, cfg.dataset.positive_labels);
  if (cfg.dataset.subsample > 0 && cfg.dataset.subsample < ds.rows())
    ds = data::subsample(ds, cfg.dataset.subsample, repeat_seed);

  data::SplitBundle bundle = data::split(ds, repeat_seed);

  if (cfg.dataset.balance == "oversample")
    bundle.train = data::balance(bundle.train, data::BalanceMode::Oversample, repeat_seed);
  else if (cfg.dataset.balance == "undersample")
    bundle.train = data::balance(bundle.train, data::BalanceMode::Undersample, repeat_seed);
  else if (cfg.dataset.balance != "none")
    throw std::invalid_argument("unknown balance mode: " + cfg.dataset.balance);

  const int k =
      cfg.circuit.pca_components > 0 ? cfg.circuit.pca_components : cfg.circuit.qubits;
  if (k < bundle.train.cols()) bundle = data::pca_reduce(bundle, k);

  const sv::ReadoutSpec readout = make_readout(cfg.circuit);
  PreparedData out;
  out.train = encode_split(bundle.train, cfg.circuit.qubits, readout);
  out.validation = encode_split(bundle.validation, cfg.circuit.qubits, readout);
  out.test = encode_split(bundle.test, cfg.circuit.qubits, readout);
  out.provenance = bundle.train.provenance.steps;
  return out;
}

RunOutcome run_experiment(const ExperimentConfig& cfg) {
  if (cfg.repeats < 1) throw std::invalid_argument("repeats must be >= 1");

  RunOutcome out;
  json repeats_json = json::array();
  std::vector<std::string> provenance;
  double sum_tacc = 0.0, sum_time = 0.0, sum_iter = 0.0, sum_vacc = 0.0;

  for (int r = 0; r < cfg.repeats; ++r) {
    const std::uint64_t seed = repeat_seed(cfg, r);
    const PreparedData prepared = prepare_data(cfg, seed);
    const RepeatOutcome res = train_once(cfg, prepared, seed);

    const ResultRow row =
        finalize_row(cfg.label, levels_column(cfg), parts_column(cfg), points_column(cfg),
                     res.taccuracy, res.seconds, res.iterations, res.vaccuracy);
    out.repeat_rows.push_back(row);

    sum_tacc += res.taccuracy;
    sum_time += row.time;
    sum_iter += res.iterations;
    sum_vacc += res.vaccuracy;

    repeats_json.push_back({{"repeat", r},
                            {"seed", seed},
                            {"row", row_to_json(row)},
                            {"angles", res.angles},
                            {"detail", res.detail}});
    if (r == 0) provenance = prepared.provenance;
  }

  const double n = static_cast<double>(cfg.repeats);
  // Ratio columns are rebuilt from the averaged numerators/denominators,
  // so the averaged row satisfies the same per-row identities.
  out.averaged = finalize_row(cfg.label, levels_column(cfg), parts_column(cfg),
                              points_column(cfg), sum_tacc / n, sum_time / n, sum_iter / n,
                              sum_vacc / n);

  out.manifest = {{"label", cfg.label},
                  {"method", method_to_string(cfg.method)},
                  {"config", config_to_json(cfg)},
                  {"repeats", std::move(repeats_json)},
                  {"averaged", row_to_json(out.averaged)},
                  {"provenance", provenance}};
  return out;
}

qubo::QuboModel export_first_qubo(const ExperimentConfig& cfg) {
  const sv::ParamCircuit circuit = make_circuit(cfg.circuit);
  const std::uint64_t seed = repeat_seed(cfg, 0);
  const PreparedData prepared = prepare_data(cfg, seed);

  const symbolic::SymbolicOperator surrogate = symbolic::expand_products(
      symbolic::hyperbolic_substitution(symbolic::symbolic_unitary(circuit)));

  const int a = circuit.num_angles;
  std::vector<std::pair<double, double>> ranges = cfg.search.initial_ranges;
  if (ranges.empty()) ranges.assign(a, {0.0, kTwoPi});

  // Offsets mirror the first search level: even spread, or the stream the
  // search itself would draw for level 1 when points are randomized.
  std::vector<std::vector<double>> offsets;
  if (!cfg.search.randomize_points) {
    offsets = qubo::even_offsets(a, cfg.search.points);
  } else {
    std::mt19937_64 eng = rng::make_engine(seed, 0x0ffULL, 1ULL);
    offsets.assign(a, std::vector<double>(cfg.search.points));
    for (int i = 0; i < a; ++i)
      for (int k = 0; k < cfg.search.points; ++k) {
        double u = rng::uniform01(eng);
        while (u <= 0.0) u = rng::uniform01(eng);
        offsets[i][k] = u;
      }
  }

  const qubo::AngleGrid grid =
      qubo::make_grid(ranges, cfg.search.partitions, cfg.search.points, offsets, 1);
  const std::vector<int> point_index(a, 0);  // group 0
  const std::vector<qubo::RecordTerm> terms =
      qubo::build_record_terms(surrogate, prepared.train, grid, point_index);
  return qubo::assemble(terms, a, cfg.search.partitions, cfg.search.lambda);
}

std::vector<ResultRow> pareto_front(const std::vector<ResultRow>& rows) {
  std::vector<ResultRow> front;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < rows.size() && !dominated; ++j) {
      if (j == i) continue;
      const bool no_worse =
          rows[j].taccuracy >= rows[i].taccuracy && rows[j].time <= rows[i].time;
      const bool better =
          rows[j].taccuracy > rows[i].taccuracy || rows[j].time < rows[i].time;
      dominated = no_worse && better;
    }
    if (!dominated) front.push_back(rows[i]);
  }
  std::stable_sort(front.begin(), front.end(), [](const ResultRow& a, const ResultRow& b) {
    return a.taccuracy < b.taccuracy;
  });
  return front;
}

FiveNumber five_number(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("five_number needs at least one value");
  std::sort(values.begin(), values.end());
  const auto quantile = [&values](double p) {
    const double h = p * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  return {values.front(), quantile(0.25), quantile(0.5), quantile(0.75), values.back()};
}

std::vector<NoiseSummary> noise_sweep(const ExperimentConfig& cfg,
                                      const std::vector<double>& levels) {
  if (levels.empty()) throw std::invalid_argument("noise sweep needs at least one level");
  std::vector<NoiseSummary> out;
  out.reserve(levels.size());
  for (double level : levels) {
    ExperimentConfig cell = cfg;
    cell.noise = level;
    const RunOutcome run = run_experiment(cell);
    NoiseSummary summary;
    summary.level = level;
    for (const ResultRow& row : run.repeat_rows) summary.samples.push_back(row.taccuracy);
    summary.taccuracy = five_number(summary.samples);
    out.push_back(std::move(summary));
  }
  return out;
}

std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& base,
                                           const SweepSpec& spec) {
  const std::vector<int> levels =
      spec.levels.empty() ? std::vector<int>{base.search.levels} : spec.levels;
  const std::vector<int> partitions =
      spec.partitions.empty() ? std::vector<int>{base.search.partitions} : spec.partitions;
  const std::vector<int> points =
      spec.points.empty() ? std::vector<int>{base.search.points} : spec.points;
  const std::vector<double> noise =
      spec.noise.empty() ? std::vector<double>{base.noise} : spec.noise;

  std::vector<ExperimentConfig> cells;
  for (int L : levels)
    for (int d : partitions)
      for (int w : points)
        for (double nz : noise) {
          ExperimentConfig cell = base;
          cell.search.levels = L;
          cell.search.partitions = d;
          cell.search.points = w;
          cell.noise = nz;
          cell.label = cell_label(static_cast<int>(cells.size()));
          cells.push_back(std::move(cell));
        }
  return cells;
}

json config_to_json(const ExperimentConfig& cfg) {
  json ranges = json::array();
  for (const auto& [lo, hi] : cfg.search.initial_ranges) ranges.push_back({lo, hi});

  json doc;
  doc["dataset"] = {{"path", cfg.dataset.path},
                    {"label_column", cfg.dataset.label_column},
                    {"positive_labels", cfg.dataset.positive_labels},
                    {"subsample", cfg.dataset.subsample},
                    {"balance", cfg.dataset.balance}};
  doc["circuit"] = {{"ansatz", cfg.circuit.ansatz == Ansatz::TwoLocal ? "twolocal" : "rxcrx"},
                    {"qubits", cfg.circuit.qubits},
                    {"reps", cfg.circuit.reps},
                    {"pca_components", cfg.circuit.pca_components},
                    {"readout", cfg.circuit.readout},
                    {"threshold", cfg.circuit.threshold}};
  doc["method"] = method_to_string(cfg.method);
  doc["search"] = {{"levels", cfg.search.levels},
                   {"partitions", cfg.search.partitions},
                   {"points", cfg.search.points},
                   {"rescale", cfg.search.rescale},
                   {"tau", cfg.search.tau},
                   {"lambda", cfg.search.lambda},
                   {"sweeps", cfg.search.schedule.sweeps},
                   {"reads", cfg.search.schedule.reads},
                   {"beta_start", cfg.search.schedule.beta_start},
                   {"beta_end", cfg.search.schedule.beta_end},
                   {"randomize_points", cfg.search.randomize_points},
                   {"ranges", std::move(ranges)}};
  doc["spsa"] = {{"iterations", cfg.spsa.iterations},
                 {"a_gain", cfg.spsa.a_gain},
                 {"c_perturb", cfg.spsa.c_perturb},
                 {"calibration_samples", cfg.spsa.calibration_samples}};
  doc["memetic"] = {{"generations", cfg.memetic.generations},
                    {"population", cfg.memetic.population},
                    {"tournament", cfg.memetic.tournament},
                    {"mutation_prob", cfg.memetic.mutation_prob},
                    {"mutation_sigma", cfg.memetic.mutation_sigma},
                    {"local_search_passes", cfg.memetic.local_search_passes},
                    {"local_step", cfg.memetic.local_step}};
  doc["run"] = {{"label", cfg.label},
                {"repeats", cfg.repeats},
                {"seed", cfg.seed},
                {"noise", cfg.noise}};
  return doc;
}

ExperimentConfig config_from_json(const json& doc) {
  ExperimentConfig cfg;

  const json dataset = doc.value("dataset", json::object());
  cfg.dataset.path = dataset.value("path", cfg.dataset.path);
  cfg.dataset.label_column = dataset.value("label_column", cfg.dataset.label_column);
  cfg.dataset.positive_labels =
      dataset.value("positive_labels", cfg.dataset.positive_labels);
  cfg.dataset.subsample = dataset.value("subsample", cfg.dataset.subsample);
  cfg.dataset.balance = dataset.value("balance", cfg.dataset.balance);

  const json circuit = doc.value("circuit", json::object());
  const std::string ansatz = circuit.value("ansatz", std::string("twolocal"));
  if (ansatz == "twolocal")
    cfg.circuit.ansatz = Ansatz::TwoLocal;
  else if (ansatz == "rxcrx")
    cfg.circuit.ansatz = Ansatz::RxCrx;
  else
    throw std::invalid_argument("unknown ansatz: " + ansatz);
  cfg.circuit.qubits = circuit.value("qubits", cfg.circuit.qubits);
  cfg.circuit.reps = circuit.value("reps", cfg.circuit.reps);
  cfg.circuit.pca_components = circuit.value("pca_components", cfg.circuit.pca_components);
  if (circuit.contains("readout")) {
    const json& readout = circuit.at("readout");
    cfg.circuit.readout = readout.is_number_integer()
                              ? std::to_string(readout.get<int>())
                              : readout.get<std::string>();
  }
  cfg.circuit.threshold = circuit.value("threshold", cfg.circuit.threshold);

  cfg.method = method_from_string(doc.value("method", std::string("adiabatic")));

  const json search = doc.value("search", json::object());
  cfg.search.levels = search.value("levels", cfg.search.levels);
  cfg.search.partitions = search.value("partitions", cfg.search.partitions);
  cfg.search.points = search.value("points", cfg.search.points);
  cfg.search.rescale = search.value("rescale", cfg.search.rescale);
  cfg.search.tau = search.value("tau", cfg.search.tau);
  cfg.search.lambda = search.value("lambda", cfg.search.lambda);
  cfg.search.schedule.sweeps = search.value("sweeps", cfg.search.schedule.sweeps);
  cfg.search.schedule.reads = search.value("reads", cfg.search.schedule.reads);
  cfg.search.schedule.beta_start = search.value("beta_start", cfg.search.schedule.beta_start);
  cfg.search.schedule.beta_end = search.value("beta_end", cfg.search.schedule.beta_end);
  cfg.search.randomize_points =
      search.value("randomize_points", cfg.search.randomize_points);
  if (search.contains("ranges")) {
    cfg.search.initial_ranges.clear();
    for (const json& pair : search.at("ranges")) {
      if (!pair.is_array() || pair.size() != 2)
        throw std::invalid_argument("search.ranges entries must be [lower, upper] pairs");
      cfg.search.initial_ranges.emplace_back(pair.at(0).get<double>(),
                                             pair.at(1).get<double>());
    }
  }

  const json spsa = doc.value("spsa", json::object());
  cfg.spsa.iterations = spsa.value("iterations", cfg.spsa.iterations);
  cfg.spsa.a_gain = spsa.value("a_gain", cfg.spsa.a_gain);
  cfg.spsa.c_perturb = spsa.value("c_perturb", cfg.spsa.c_perturb);
  cfg.spsa.calibration_samples =
      spsa.value("calibration_samples", cfg.spsa.calibration_samples);

  const json memetic = doc.value("memetic", json::object());
  cfg.memetic.generations = memetic.value("generations", cfg.memetic.generations);
  cfg.memetic.population = memetic.value("population", cfg.memetic.population);
  cfg.memetic.tournament = memetic.value("tournament", cfg.memetic.tournament);
  cfg.memetic.mutation_prob = memetic.value("mutation_prob", cfg.memetic.mutation_prob);
  cfg.memetic.mutation_sigma = memetic.value("mutation_sigma", cfg.memetic.mutation_sigma);
  cfg.memetic.local_search_passes =
      memetic.value("local_search_passes", cfg.memetic.local_search_passes);
  cfg.memetic.local_step = memetic.value("local_step", cfg.memetic.local_step);

  const json run = doc.value("run", json::object());
  cfg.label = run.value("label", cfg.label);
  cfg.repeats = run.value("repeats", cfg.repeats);
  cfg.seed = run.value("seed", cfg.seed);
  cfg.noise = run.value("noise", cfg.noise);

  return cfg;
}

SweepSpec sweep_from_json(const json& doc) {
  SweepSpec spec;
  const json sweep = doc.value("sweep", json::object());
  spec.levels = sweep.value("levels", spec.levels);
  spec.partitions = sweep.value("partitions", spec.partitions);
  spec.points = sweep.value("points", spec.points);
  spec.noise = sweep.value("noise", spec.noise);
  return spec;
}

namespace {

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& err) {
    throw std::runtime_error("invalid JSON in " + path + ": " + err.what());
  }
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
  return config_from_json(parse_file(path));
}

SweepSpec load_sweep(const std::string& path) { return sweep_from_json(parse_file(path)); }

namespace {

constexpr const char* kCsvHeader =
    "label,levels,parts,points,taccuracy,time,iterations,texec,vaccuracy,acctime";

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

}  // namespace

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os.precision(12);
  os << kCsvHeader << '\n';
  for (const ResultRow& r : rows) {
    if (r.label.find(',') != std::string::npos)
      throw std::invalid_argument("row labels must not contain commas: " + r.label);
    os << r.label << ',' << r.levels << ',' << r.parts << ',' << r.points << ','
       << r.taccuracy << ',' << r.time << ',' << r.iterations << ',' << r.texec << ','
       << r.vaccuracy << ',' << r.acctime << '\n';
  }
  return os.str();
}

std::vector<ResultRow> rows_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open results file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw std::runtime_error("unexpected results header in " + path);

  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 10)
      throw std::runtime_error("malformed results row in " + path + ": " + line);
    ResultRow row;
    row.label = fields[0];
    row.levels = std::stoi(fields[1]);
    row.parts = std::stoi(fields[2]);
    row.points = std::stoi(fields[3]);
    row.taccuracy = std::stod(fields[4]);
    row.time = std::stod(fields[5]);
    row.iterations = std::stod(fields[6]);
    row.texec = std::stod(fields[7]);
    row.vaccuracy = std::stod(fields[8]);
    row.acctime = std::stod(fields[9]);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_rows(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write results file: " + path);
  out << rows_to_csv(rows);
  if (!out) throw std::runtime_error("failed writing results file: " + path);
}

}  // namespace vqt::experiment
