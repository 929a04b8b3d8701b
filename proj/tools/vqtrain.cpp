// vqtrain: command-line harness around the training toolkit.
//
// Subcommands:
//   train        run one experiment config; writes results.csv + manifest.json
//   sweep        expand the config's sweep axes and run every cell
//   pareto       filter a results CSV down to its accuracy/time Pareto front
//   noise        repeat a run across QUBO noise levels; writes five-number summaries
//   export-qubo  write the first execution's QUBO in coordinate text format
//   solve-qubo   anneal (or exhaustively solve) a QUBO file written by export-qubo

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "vqt/experiment.hpp"
#include "vqt/qubo.hpp"
#include "vqt/sampler.hpp"

namespace fs = std::filesystem;
namespace ex = vqt::experiment;

namespace {

// Config-override options shared by the run-style subcommands.  Values
// only apply when the flag was actually given.
struct Overrides {
  std::string label, method, dataset, readout, balance;
  int levels = 0, parts = 0, points = 0, repeats = 0, qubits = 0, reps = -1,
      subsample = -1;
  std::uint64_t seed = 0;
  double noise = 0.0, lambda = 0.0;

  CLI::Option *label_o = nullptr, *method_o = nullptr, *dataset_o = nullptr,
              *readout_o = nullptr, *balance_o = nullptr, *levels_o = nullptr,
              *parts_o = nullptr, *points_o = nullptr, *repeats_o = nullptr,
              *qubits_o = nullptr, *reps_o = nullptr, *subsample_o = nullptr,
              *seed_o = nullptr, *noise_o = nullptr, *lambda_o = nullptr;

  // `search_levels = false` leaves --levels free for subcommands that
  // use the name themselves (the noise sweep's level list).
  void attach(CLI::App* cmd, bool search_levels = true) {
    label_o = cmd->add_option("--label", label, "row label");
    method_o = cmd->add_option("--method", method, "adiabatic | spsa | memetic");
    dataset_o = cmd->add_option("--dataset", dataset, "dataset CSV path");
    readout_o = cmd->add_option("--readout", readout, "readout qubit index or 'all'");
    balance_o = cmd->add_option("--balance", balance, "none | oversample | undersample");
    if (search_levels) levels_o = cmd->add_option("--levels", levels, "search levels L");
    parts_o = cmd->add_option("--parts", parts, "partitions per angle d");
    points_o = cmd->add_option("--points", points, "points per partition w");
    repeats_o = cmd->add_option("--repeats", repeats, "independent repeats");
    qubits_o = cmd->add_option("--qubits", qubits, "circuit width");
    reps_o = cmd->add_option("--reps", reps, "twolocal repetition count");
    subsample_o = cmd->add_option("--subsample", subsample, "stratified subsample size (0 = all)");
    seed_o = cmd->add_option("--seed", seed, "master seed");
    noise_o = cmd->add_option("--noise", noise, "QUBO coefficient noise level");
    lambda_o = cmd->add_option("--lambda", lambda,
                               "one-hot penalty weight (default: auto)");
  }

  void apply(ex::ExperimentConfig& cfg) const {
    if (label_o->count()) cfg.label = label;
    if (method_o->count()) {
      nlohmann::json doc;
      doc["method"] = method;
      cfg.method = ex::config_from_json(doc).method;  // reuse the name mapping
    }
    if (dataset_o->count()) cfg.dataset.path = dataset;
    if (readout_o->count()) cfg.circuit.readout = readout;
    if (balance_o->count()) cfg.dataset.balance = balance;
    if (levels_o && levels_o->count()) cfg.search.levels = levels;
    if (parts_o->count()) cfg.search.partitions = parts;
    if (points_o->count()) cfg.search.points = points;
    if (repeats_o->count()) cfg.repeats = repeats;
    if (qubits_o->count()) cfg.circuit.qubits = qubits;
    if (reps_o->count()) cfg.circuit.reps = reps;
    if (subsample_o->count()) cfg.dataset.subsample = subsample;
    if (seed_o->count()) cfg.seed = seed;
    if (noise_o->count()) cfg.noise = noise;
    if (lambda_o->count()) cfg.search.lambda = lambda;
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

void print_row(const ex::ResultRow& row) {
  std::cout << row.label << ": taccuracy=" << row.taccuracy
            << " vaccuracy=" << row.vaccuracy << " time=" << row.time << "s"
            << " iterations=" << row.iterations << " acctime=" << row.acctime << "\n";
}

int run_train(const std::string& config_path, const std::string& out_dir,
              const Overrides& over) {
  ex::ExperimentConfig cfg = ex::load_config(config_path);
  over.apply(cfg);

  const ex::RunOutcome outcome = ex::run_experiment(cfg);

  fs::create_directories(out_dir);
  std::vector<ex::ResultRow> rows = outcome.repeat_rows;
  if (cfg.repeats > 1) {
    ex::ResultRow avg = outcome.averaged;
    avg.label += "-avg";
    rows.push_back(avg);
  }
  ex::write_rows(rows, (fs::path(out_dir) / "results.csv").string());
  write_text((fs::path(out_dir) / "manifest.json").string(), outcome.manifest.dump(2) + "\n");

  print_row(outcome.averaged);
  return 0;
}

int run_sweep(const std::string& config_path, const std::string& out_dir,
              const Overrides& over) {
  ex::ExperimentConfig base = ex::load_config(config_path);
  over.apply(base);
  const ex::SweepSpec spec = ex::load_sweep(config_path);

  const std::vector<ex::ExperimentConfig> cells = ex::expand_sweep(base, spec);
  std::vector<ex::ResultRow> rows;
  nlohmann::json manifests = nlohmann::json::array();
  for (const ex::ExperimentConfig& cell : cells) {
    const ex::RunOutcome outcome = ex::run_experiment(cell);
    rows.push_back(outcome.averaged);
    manifests.push_back(outcome.manifest);
    print_row(outcome.averaged);
  }

  fs::create_directories(out_dir);
  ex::write_rows(rows, (fs::path(out_dir) / "results.csv").string());
  write_text((fs::path(out_dir) / "manifests.json").string(), manifests.dump(2) + "\n");
  return 0;
}

int run_pareto(const std::string& in_path, const std::string& out_path) {
  const std::vector<ex::ResultRow> rows = ex::rows_from_csv(in_path);
  const std::vector<ex::ResultRow> front = ex::pareto_front(rows);
  const std::string csv = ex::rows_to_csv(front);
  if (out_path.empty())
    std::cout << csv;
  else
    write_text(out_path, csv);
  std::cerr << front.size() << " of " << rows.size() << " rows are non-dominated\n";
  return 0;
}

int run_noise(const std::string& config_path, const std::string& out_dir,
              const std::vector<double>& levels, const Overrides& over) {
  ex::ExperimentConfig cfg = ex::load_config(config_path);
  over.apply(cfg);

  const std::vector<ex::NoiseSummary> summaries = ex::noise_sweep(cfg, levels);

  std::ostringstream csv;
  csv.precision(12);
  csv << "level,min,q1,median,q3,max\n";
  for (const ex::NoiseSummary& s : summaries) {
    csv << s.level << ',' << s.taccuracy.min << ',' << s.taccuracy.q1 << ','
        << s.taccuracy.median << ',' << s.taccuracy.q3 << ',' << s.taccuracy.max << '\n';
    std::cout << "noise " << s.level << ": median=" << s.taccuracy.median
              << " min=" << s.taccuracy.min << " max=" << s.taccuracy.max << "\n";
  }
  fs::create_directories(out_dir);
  write_text((fs::path(out_dir) / "noise.csv").string(), csv.str());
  return 0;
}

int run_export(const std::string& config_path, const std::string& out_path,
               const Overrides& over) {
  ex::ExperimentConfig cfg = ex::load_config(config_path);
  over.apply(cfg);
  const vqt::qubo::QuboModel model = ex::export_first_qubo(cfg);
  vqt::qubo::write_qubo(model, out_path);
  std::cout << "wrote " << out_path << ": " << model.n_vars << " variables ("
            << model.n_primary << " primary, " << model.n_vars - model.n_primary
            << " auxiliary)\n";
  return 0;
}

int run_solve(const std::string& in_path, const vqt::sampler::Schedule& schedule,
              std::uint64_t seed, bool brute, int top) {
  const vqt::qubo::QuboModel model = vqt::sampler::load_qubo(in_path);
  std::vector<vqt::sampler::Sample> samples;
  if (brute)
    samples.push_back(vqt::sampler::brute_force(model));
  else
    samples = vqt::sampler::sample(model, schedule, seed);

  const int shown = std::min<int>(top, static_cast<int>(samples.size()));
  for (int i = 0; i < shown; ++i) {
    std::cout << "energy " << samples[i].energy << "  bits ";
    for (std::uint8_t b : samples[i].assignment) std::cout << int(b);
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gradient-free training toolkit for small variational classifiers"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", in_path, out_path;

  CLI::App* train = app.add_subcommand("train", "run one experiment config");
  train->add_option("--config", config_path, "JSON config file")->required();
  train->add_option("--out", out_dir, "output directory");
  Overrides train_over;
  train_over.attach(train);

  CLI::App* sweep = app.add_subcommand("sweep", "run the config's sweep grid");
  sweep->add_option("--config", config_path, "JSON config file")->required();
  sweep->add_option("--out", out_dir, "output directory");
  Overrides sweep_over;
  sweep_over.attach(sweep);

  CLI::App* pareto = app.add_subcommand("pareto", "non-dominated rows of a results CSV");
  pareto->add_option("--in", in_path, "results CSV")->required();
  pareto->add_option("--out", out_path, "front CSV (stdout when omitted)");

  std::vector<double> noise_levels;
  CLI::App* noise = app.add_subcommand("noise", "sweep QUBO coefficient noise levels");
  noise->add_option("--config", config_path, "JSON config file")->required();
  noise->add_option("--out", out_dir, "output directory");
  noise->add_option("--levels", noise_levels, "noise levels, e.g. 0,0.05,0.1")
      ->required()
      ->delimiter(',');
  Overrides noise_over;
  noise_over.attach(noise, /*search_levels=*/false);

  CLI::App* exportq = app.add_subcommand("export-qubo", "write the first execution's QUBO");
  exportq->add_option("--config", config_path, "JSON config file")->required();
  exportq->add_option("--out", out_path, "output .qubo path")->required();
  Overrides export_over;
  export_over.attach(exportq);

  vqt::sampler::Schedule schedule;
  std::uint64_t solve_seed = 1;
  bool brute = false;
  int top = 1;
  CLI::App* solve = app.add_subcommand("solve-qubo", "anneal a QUBO coordinate file");
  solve->add_option("--in", in_path, "QUBO file")->required();
  solve->add_option("--sweeps", schedule.sweeps, "sweeps per read");
  solve->add_option("--reads", schedule.reads, "independent reads");
  solve->add_option("--beta-start", schedule.beta_start, "initial inverse temperature");
  solve->add_option("--beta-end", schedule.beta_end, "final inverse temperature");
  solve->add_option("--seed", solve_seed, "sampler seed");
  solve->add_option("--top", top, "samples to print");
  solve->add_flag("--brute", brute, "exhaustive search instead of annealing");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return run_train(config_path, out_dir, train_over);
    if (sweep->parsed()) return run_sweep(config_path, out_dir, sweep_over);
    if (pareto->parsed()) return run_pareto(in_path, out_path);
    if (noise->parsed()) return run_noise(config_path, out_dir, noise_levels, noise_over);
    if (exportq->parsed()) return run_export(config_path, out_path, export_over);
    if (solve->parsed()) return run_solve(in_path, schedule, solve_seed, brute, top);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
