#pragma once

// Hierarchical recursive search over discretized angle space.
//
// Each level lays a d-partition / w-point grid over the current per-angle
// windows and runs one QUBO execution per relative point-index
// combination (w^a executions, row-major, angle 0 slowest).  An execution
// anneals its model, decodes the best feasible sample into candidate
// angles and scores them by training accuracy.  The best scored point so
// far becomes the pivot: the next level recenters every window on it and
// shrinks widths by the rescale factor (no clamping).  The search stops
// after `levels` levels or as soon as a level's best accuracy falls short
// of the running best by at least tau.

#include <cstdint>
#include <utility>
#include <vector>

#include "vqt/sampler.hpp"
#include "vqt/statevector.hpp"

namespace vqt::search {

struct SearchConfig {
  int levels = 1;      // L >= 1
  int partitions = 2;  // d >= 1
  int points = 1;      // w >= 1
  double rescale = 0.5;          // window shrink factor, in (0, 1]
  double tau = 1.0;              // accuracy-drop stop tolerance, >= 0
  double lambda = -1.0;          // one-hot penalty; <= 0 selects the default
                                 // 2 * sum |loss coefficients| per model
  sampler::Schedule schedule;    // annealer settings per execution
  std::uint64_t seed = 1;
  bool randomize_points = false;  // false: even offsets (k+0.5)/w
  double noise_level = 0.0;       // QUBO coefficient noise per execution
  // Per-angle initial windows; empty selects [0, 2*pi) for every angle.
  std::vector<std::pair<double, double>> initial_ranges;
};

struct ExecutionRecord {
  int level = 0;
  int group = 0;                 // flat row-major group index
  std::vector<int> point_index;  // per-angle relative point positions
  bool feasible = false;
  std::vector<double> angles;  // decoded candidate (feasible executions)
  double energy = 0.0;         // annealed energy of the decoded sample
  double taccuracy = 0.0;      // training accuracy of the candidate
  double seconds = 0.0;
  int qubo_vars = 0;
};

struct SearchResult {
  bool found = false;  // at least one feasible execution
  std::vector<double> best_angles;
  double best_taccuracy = 0.0;
  double best_energy = 0.0;
  int levels_run = 0;
  bool stopped_early = false;     // tau rule fired before the level budget
  bool infeasible_level = false;  // some level produced no feasible execution
  long accuracy_evals = 0;        // one per feasible execution
  std::vector<ExecutionRecord> records;
  // Every scored parameter set with its training accuracy, in execution order.
  std::vector<std::pair<std::vector<double>, double>> accuracy_map;
};

// Flat row-major group index -> per-angle relative point positions.
std::vector<int> group_point_index(int group, int num_angles, int points);

// Shrinks each window around the pivot: new width = old width * rescale,
// centered on the pivot component.  Bounds are not clamped.
std::vector<std::pair<double, double>> recenter(
    const std::vector<std::pair<double, double>>& ranges,
    const std::vector<double>& pivot, double rescale);

// Stop rule between levels: the drop of the level best below the running
// best reached at least tau.
bool stop_after_level(double best_before, double level_best, double tau);

// Runs the w^a executions of one level over the given windows.  `op` is
// the expanded hyperbolic surrogate of the circuit.  Executions are
// distributed over OpenMP workers; per-execution seeds derive from
// (cfg.seed, level, group), so results are identical for any worker count.
std::vector<ExecutionRecord> run_level(const symbolic::SymbolicOperator& op,
                                       const sv::ParamCircuit& circuit,
                                       const sv::EncodedDataset& train,
                                       const sv::ReadoutSpec& readout,
                                       const std::vector<std::pair<double, double>>& ranges,
                                       int level, const SearchConfig& cfg);

// Full multi-level search on the training split.
SearchResult run_search(const sv::ParamCircuit& circuit, const sv::EncodedDataset& train,
                        const sv::ReadoutSpec& readout, const SearchConfig& cfg);

}  // namespace vqt::search
