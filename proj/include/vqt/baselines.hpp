#pragma once

// Gradient-free baseline trainers: SPSA and a memetic algorithm.
//
// Both optimizers run on generic objectives (used directly by the unit
// tests) with thin adapters that train circuits against the state-vector
// loss.  SPSA follows the standard gain sequences
//     a_k = a / (k + 1 + A)^0.602,   c_k = c / (k + 1)^0.101
// with A = 0.1 * iterations and an automatic calibration of `a` from the
// measured loss response to c-sized perturbations.  The memetic algorithm
// layers tournament selection, uniform crossover, Gaussian mutation and a
// coordinate-descent refinement of the elite on top of a (mu = lambda)
// generational loop with single-individual elitism.

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "vqt/statevector.hpp"

namespace vqt::baselines {

using Objective = std::function<double(const std::vector<double>&)>;

// Mean squared error between labels and class-1 readout probabilities.
double mse_loss(const sv::ParamCircuit& circuit, const std::vector<double>& angles,
                const sv::EncodedDataset& data, const sv::ReadoutSpec& readout);

struct SpsaConfig {
  int iterations = 100;
  double a_gain = 0.2;          // target first-step magnitude when calibrating,
                                // raw `a` gain when calibration_samples == 0
  double c_perturb = 0.2;       // perturbation gain `c`
  int calibration_samples = 25; // probe pairs used to estimate the response
  std::uint64_t seed = 1;
};

struct SpsaResult {
  std::vector<double> point;
  long loss_evals = 0;          // exactly 2*iterations + 2*calibration_samples
  std::vector<double> trace;    // mean probe loss per iteration (no extra evals)
};

// Minimizes an arbitrary objective from the given start point.
SpsaResult spsa_minimize(const Objective& objective, std::vector<double> start,
                         const SpsaConfig& cfg);

struct TrainResult {
  std::vector<double> angles;
  double taccuracy = 0.0;
  double loss = 0.0;
  long evaluations = 0;       // optimizer-internal objective evaluations
  std::vector<double> trace;  // per-iteration / per-generation progress
};

// SPSA on the training-set mse_loss from a seeded random start.
TrainResult spsa_train(const sv::ParamCircuit& circuit, const sv::EncodedDataset& train,
                       const sv::ReadoutSpec& readout, const SpsaConfig& cfg);

// Fitness with an explicit tie-breaker: maximize `primary`, break exact
// ties toward the smaller `secondary`.
struct Fitness {
  double primary = 0.0;
  double secondary = 0.0;
};

inline bool fitter(const Fitness& a, const Fitness& b) {
  return a.primary != b.primary ? a.primary > b.primary : a.secondary < b.secondary;
}

using FitnessFn = std::function<Fitness(const std::vector<double>&)>;

struct MemeticConfig {
  int generations = 10;
  int population = 20;
  int tournament = 3;
  double mutation_prob = 0.15;
  double mutation_sigma = 0.2;    // stddev as a fraction of the gene range
  int local_search_passes = 3;    // coordinate passes over the elite
  double local_step = 0.02;       // fixed step as a fraction of the gene range
  std::uint64_t seed = 1;
};

struct MemeticResult {
  std::vector<double> best;
  Fitness best_fitness;
  long evaluations = 0;
  std::vector<double> trace;  // best primary fitness after each generation
};

// Maximizes a fitness over box bounds.  Population fitness evaluation is
// OpenMP-parallel; all variation uses one sequential seeded stream, so
// results do not depend on the worker count.
MemeticResult memetic_optimize(const FitnessFn& fitness,
                               const std::vector<std::pair<double, double>>& bounds,
                               const MemeticConfig& cfg);

// Convenience wrapper for plain minimization problems.
MemeticResult memetic_minimize(const Objective& objective,
                               const std::vector<std::pair<double, double>>& bounds,
                               const MemeticConfig& cfg);

// Memetic training: fitness is training accuracy with mse_loss ties.
TrainResult memetic_train(const sv::ParamCircuit& circuit,
                          const sv::EncodedDataset& train,
                          const sv::ReadoutSpec& readout, const MemeticConfig& cfg);

}  // namespace vqt::baselines
