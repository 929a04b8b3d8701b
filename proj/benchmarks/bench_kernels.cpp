// Benchmarks the OpenMP kernels against their serial reference
// implementations and checks that both produce identical results.
//
//   accuracy      per-record circuit evaluation + readout
//   sampler       annealer reads on a random dense-ish QUBO
//   record terms  per-record residual polynomial construction
//
// Usage: vqt_bench [repetitions]

#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "vqt/qubo.hpp"
#include "vqt/rng.hpp"
#include "vqt/sampler.hpp"
#include "vqt/statevector.hpp"
#include "vqt/symbolic.hpp"

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <typename Fn>
double best_seconds(Fn&& fn, int repetitions) {
  double best = 1e300;
  for (int r = 0; r < repetitions; ++r) {
    const auto t0 = Clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(Clock::now() - t0).count());
  }
  return best;
}

void report(const std::string& name, double serial, double parallel, bool identical) {
  std::cout << std::left << std::setw(14) << name << std::right << std::fixed
            << std::setprecision(3) << std::setw(10) << serial * 1e3 << " ms"
            << std::setw(10) << parallel * 1e3 << " ms" << std::setprecision(2)
            << std::setw(9) << serial / parallel << "x   "
            << (identical ? "identical" : "MISMATCH") << "\n";
}

vqt::sv::EncodedDataset synthetic_dataset(int records, int qubits, std::uint64_t seed) {
  std::mt19937_64 eng = vqt::rng::make_engine(seed);
  std::vector<std::vector<double>> features(records);
  std::vector<int> labels(records);
  const int dim = 1 << qubits;
  for (int i = 0; i < records; ++i) {
    features[i].resize(dim);
    for (double& v : features[i]) v = vqt::rng::uniform(eng, 0.01, 1.0);
    labels[i] = i % 2;
  }
  return vqt::sv::encode_dataset(features, labels, qubits,
                                 vqt::sv::ReadoutSpec::single(0));
}

vqt::qubo::QuboModel random_qubo(int n, std::uint64_t seed) {
  std::mt19937_64 eng = vqt::rng::make_engine(seed);
  vqt::qubo::QuboModel model;
  model.n_vars = n;
  model.n_primary = n;
  model.linear.resize(n);
  for (double& v : model.linear) v = vqt::rng::uniform(eng, -1.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (vqt::rng::uniform01(eng) < 0.3)
        model.quadratic[{i, j}] = vqt::rng::uniform(eng, -1.0, 1.0);
  return model;
}

bool same_terms(const std::vector<vqt::qubo::RecordTerm>& a,
                const std::vector<vqt::qubo::RecordTerm>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].residuals.size() != b[i].residuals.size()) return false;
    for (std::size_t j = 0; j < a[i].residuals.size(); ++j)
      if (a[i].residuals[j].terms() != b[i].residuals[j].terms()) return false;
  }
  return true;
}

bool same_samples(const std::vector<vqt::sampler::Sample>& a,
                  const std::vector<vqt::sampler::Sample>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].read != b[i].read || a[i].energy != b[i].energy ||
        a[i].assignment != b[i].assignment)
      return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const int repetitions = argc > 1 ? std::atoi(argv[1]) : 3;

  std::cout << "OpenMP workers: " << omp_get_max_threads() << ", best of "
            << repetitions << " runs\n";
  std::cout << std::left << std::setw(14) << "kernel" << std::right << std::setw(13)
            << "serial" << std::setw(13) << "parallel" << std::setw(10) << "speedup"
            << "\n";

  // Accuracy: wide circuit, many records.
  {
    const vqt::sv::ParamCircuit circuit = vqt::sv::build_twolocal(4, 1);
    const vqt::sv::EncodedDataset data = synthetic_dataset(8192, 4, 11);
    const vqt::sv::ReadoutSpec readout = vqt::sv::ReadoutSpec::single(0);
    std::mt19937_64 eng = vqt::rng::make_engine(12);
    std::vector<double> angles(circuit.num_angles);
    for (double& t : angles) t = vqt::rng::uniform(eng, 0.0, kTwoPi);

    double serial_acc = 0.0, parallel_acc = 0.0;
    const double ts = best_seconds(
        [&] { serial_acc = vqt::sv::accuracy_serial(circuit, angles, data, readout); },
        repetitions);
    const double tp = best_seconds(
        [&] { parallel_acc = vqt::sv::accuracy(circuit, angles, data, readout); },
        repetitions);
    report("accuracy", ts, tp, serial_acc == parallel_acc);
  }

  // Sampler: 48-variable random model, full read budget.
  {
    const vqt::qubo::QuboModel model = random_qubo(48, 21);
    const vqt::sampler::Schedule schedule;  // 2000 sweeps x 64 reads
    std::vector<vqt::sampler::Sample> serial_samples, parallel_samples;
    const double ts = best_seconds(
        [&] { serial_samples = vqt::sampler::sample_serial(model, schedule, 31); },
        repetitions);
    const double tp = best_seconds(
        [&] { parallel_samples = vqt::sampler::sample(model, schedule, 31); },
        repetitions);
    report("sampler", ts, tp, same_samples(serial_samples, parallel_samples));
  }

  // Record terms: two-angle surrogate over a few hundred records.
  {
    const vqt::sv::ParamCircuit circuit = vqt::sv::build_rx_crx();
    const vqt::sv::EncodedDataset data = synthetic_dataset(512, 2, 41);
    const vqt::symbolic::SymbolicOperator surrogate = vqt::symbolic::expand_products(
        vqt::symbolic::hyperbolic_substitution(vqt::symbolic::symbolic_unitary(circuit)));
    const auto ranges = std::vector<std::pair<double, double>>(2, {0.0, kTwoPi});
    const vqt::qubo::AngleGrid grid =
        vqt::qubo::make_grid(ranges, 3, 1, vqt::qubo::even_offsets(2, 1));
    const std::vector<int> point_index(2, 0);

    std::vector<vqt::qubo::RecordTerm> serial_terms, parallel_terms;
    const double ts = best_seconds(
        [&] {
          serial_terms =
              vqt::qubo::build_record_terms_serial(surrogate, data, grid, point_index);
        },
        repetitions);
    const double tp = best_seconds(
        [&] {
          parallel_terms = vqt::qubo::build_record_terms(surrogate, data, grid, point_index);
        },
        repetitions);
    report("record terms", ts, tp, same_terms(serial_terms, parallel_terms));
  }

  return 0;
}
