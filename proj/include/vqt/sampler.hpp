#pragma once

// Classical samplers for the assembled QUBO models.
//
// The annealer runs independent single-bit-flip Metropolis reads over a
// geometric inverse-temperature ramp.  Each read owns an RNG stream
// derived from (seed, read index), so results do not depend on how reads
// are scheduled across OpenMP workers.

#include <cstdint>
#include <string>
#include <vector>

#include "vqt/qubo.hpp"

namespace vqt::sampler {

struct Sample {
  std::vector<std::uint8_t> assignment;
  double energy = 0.0;
  int read = 0;
};

struct Schedule {
  int sweeps = 2000;        // full single-flip passes per read
  double beta_start = 0.1;  // initial inverse temperature
  double beta_end = 10.0;   // final inverse temperature
  int reads = 64;           // independent restarts
};

// Annealed samples sorted by (energy, read index) ascending.  The OpenMP
// variant distributes reads across workers; outputs are bit-identical.
std::vector<Sample> sample(const qubo::QuboModel& model, const Schedule& schedule,
                           std::uint64_t seed);
std::vector<Sample> sample_serial(const qubo::QuboModel& model,
                                  const Schedule& schedule, std::uint64_t seed);

// Exhaustive minimum for models up to 24 variables; energy ties resolve
// to the lexicographically smallest bit vector.
Sample brute_force(const qubo::QuboModel& model);

// Multiplies every nonzero coefficient by (1 + u), u drawn uniformly from
// [-level, +level].  The offset is untouched and zeros stay zero.
// level = 0 returns a bit-identical model.
qubo::QuboModel inject_noise(const qubo::QuboModel& model, double level,
                             std::uint64_t seed);

struct DecodeResult {
  bool feasible = false;
  std::vector<double> angles;   // filled only when feasible
  std::vector<int> violations;  // angles whose one-hot block is not exactly-one
};

// Maps the primary block of an assignment back to candidate angle values
// for the execution at relative point point_index[i] per angle.
DecodeResult decode(const std::vector<std::uint8_t>& assignment,
                    const qubo::AngleGrid& grid, const std::vector<int>& point_index);

// Reads a model written in the coordinate text format of format_qubo.
qubo::QuboModel load_qubo(const std::string& path);

}  // namespace vqt::sampler
