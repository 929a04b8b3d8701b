#pragma once

// Experiment harness: one config describes dataset preparation, circuit,
// training method and run bookkeeping.  Each repeat re-splits the data
// with a repeat-derived seed, trains, and yields one result row; a run
// additionally emits the across-repeat average row (ratio columns are
// recomputed from the averaged numerators/denominators so the row
// invariants keep holding) and a JSON manifest with enough seeds and
// settings to replay the run.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vqt/baselines.hpp"
#include "vqt/data.hpp"
#include "vqt/search.hpp"

namespace vqt::experiment {

enum class Method { Adiabatic, Spsa, Memetic };
enum class Ansatz { TwoLocal, RxCrx };

struct DatasetConfig {
  std::string path;
  std::string label_column;
  std::vector<std::string> positive_labels;
  int subsample = 0;             // 0 keeps every record
  std::string balance = "none";  // none | oversample | undersample
};

struct CircuitConfig {
  Ansatz ansatz = Ansatz::TwoLocal;
  int qubits = 2;
  int reps = 1;               // TwoLocal repetitions
  int pca_components = 0;     // 0 selects one component per qubit
  std::string readout = "0";  // qubit index, or "all" for parity readout
  double threshold = 0.5;
};

struct ExperimentConfig {
  std::string label = "run";
  DatasetConfig dataset;
  CircuitConfig circuit;
  Method method = Method::Adiabatic;
  search::SearchConfig search;
  baselines::SpsaConfig spsa;
  baselines::MemeticConfig memetic;
  int repeats = 1;
  std::uint64_t seed = 1;
  double noise = 0.0;  // QUBO coefficient noise level (adiabatic only)
};

// One line of the results table.
struct ResultRow {
  std::string label;
  int levels = 0;
  int parts = 0;
  int points = 0;
  double taccuracy = 0.0;
  double time = 0.0;        // wall seconds spent training
  double iterations = 0.0;  // executions / objective evaluations
  double texec = 0.0;       // time / iterations
  double vaccuracy = 0.0;
  double acctime = 0.0;     // taccuracy / time
};

// Fills the ratio columns from the base columns.
ResultRow finalize_row(std::string label, int levels, int parts, int points,
                       double taccuracy, double seconds, double iterations,
                       double vaccuracy);

struct RunOutcome {
  std::vector<ResultRow> repeat_rows;
  ResultRow averaged;
  nlohmann::json manifest;
};

// Full pipeline: load -> subsample -> split -> balance(train) -> PCA ->
// encode -> train (per repeat) -> score validation accuracy.
RunOutcome run_experiment(const ExperimentConfig& cfg);

// Circuit / readout described by the config.
sv::ParamCircuit make_circuit(const CircuitConfig& cfg);
sv::ReadoutSpec make_readout(const CircuitConfig& cfg);

// Prepared splits for one repeat (exposed for the export path and tests).
struct PreparedData {
  sv::EncodedDataset train;
  sv::EncodedDataset validation;
  sv::EncodedDataset test;
  std::vector<std::string> provenance;
};
PreparedData prepare_data(const ExperimentConfig& cfg, std::uint64_t repeat_seed);

// QUBO of the first execution (level 1, group 0) for the config.
qubo::QuboModel export_first_qubo(const ExperimentConfig& cfg);

// Non-dominated rows (maximize taccuracy, minimize time), sorted by
// ascending taccuracy; equal rows are all kept.
std::vector<ResultRow> pareto_front(const std::vector<ResultRow>& rows);

struct FiveNumber {
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

// Quartiles by linear interpolation between closest ranks.
FiveNumber five_number(std::vector<double> values);

struct NoiseSummary {
  double level = 0.0;
  FiveNumber taccuracy;
  std::vector<double> samples;  // per-repeat training accuracies
};

// Repeats the experiment at each noise level with identical repeat seeds,
// so the level-0 entry matches a plain run bit for bit.
std::vector<NoiseSummary> noise_sweep(const ExperimentConfig& cfg,
                                      const std::vector<double>& levels);

// Sweep axes: empty axes keep the base config's value.
struct SweepSpec {
  std::vector<int> levels;
  std::vector<int> partitions;
  std::vector<int> points;
  std::vector<double> noise;
};

// Cross-product expansion; cells get spreadsheet-style labels A, B, ...
std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& base,
                                           const SweepSpec& spec);

// JSON config document: flat sections "dataset", "circuit", "search",
// "spsa", "memetic", "run" plus optional sweep axes under "sweep".
// config_to_json / config_from_json round-trip exactly, which is what
// makes manifest replay possible.
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& doc);
SweepSpec sweep_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);
SweepSpec load_sweep(const std::string& path);

// Results CSV in the fixed column layout.
std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> rows_from_csv(const std::string& path);
void write_rows(const std::vector<ResultRow>& rows, const std::string& path);

}  // namespace vqt::experiment
