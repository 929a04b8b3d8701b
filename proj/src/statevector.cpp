#include "vqt/statevector.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include <omp.h>

namespace vqt::sv {

namespace {

using cplx = std::complex<double>;

constexpr int kMaxQubits = 6;

void check_qubits(int q) {
  if (q < 1 || q > kMaxQubits)
    throw std::invalid_argument("qubit count must be in [1, 6]");
}

// 2x2 matrix of the single-qubit rotation applied by `gate`.
void gate_matrix(GateKind kind, double theta, cplx m[2][2]) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  switch (kind) {
    case GateKind::RX:
    case GateKind::CRX:
      m[0][0] = c;
      m[0][1] = cplx(0.0, -s);
      m[1][0] = cplx(0.0, -s);
      m[1][1] = c;
      break;
    case GateKind::RY:
    case GateKind::CRY:
      m[0][0] = c;
      m[0][1] = -s;
      m[1][0] = s;
      m[1][1] = c;
      break;
    case GateKind::RZ:
      m[0][0] = std::exp(cplx(0.0, -theta / 2.0));
      m[0][1] = 0.0;
      m[1][0] = 0.0;
      m[1][1] = std::exp(cplx(0.0, theta / 2.0));
      break;
    case GateKind::CX:
      m[0][0] = 0.0;
      m[0][1] = 1.0;
      m[1][0] = 1.0;
      m[1][1] = 0.0;
      break;
  }
}

void apply_gate(Eigen::VectorXcd& amps, int q, const Gate& gate, double theta) {
  cplx m[2][2];
  gate_matrix(gate.kind, theta, m);
  const long dim = 1L << q;
  const long tbit = 1L << gate.target;
  const long cbit = gate.control >= 0 ? (1L << gate.control) : 0;
  for (long j = 0; j < dim; ++j) {
    if (j & tbit) continue;          // visit each (t=0, t=1) pair once
    if (cbit && !(j & cbit)) continue;
    const long j1 = j | tbit;
    const cplx a0 = amps[j];
    const cplx a1 = amps[j1];
    amps[j] = m[0][0] * a0 + m[0][1] * a1;
    amps[j1] = m[1][0] * a0 + m[1][1] * a1;
  }
}

}  // namespace

bool is_parameterized(GateKind kind) { return kind != GateKind::CX; }

void validate(const ParamCircuit& circuit) {
  check_qubits(circuit.num_qubits);
  if (circuit.num_angles < 0) throw std::invalid_argument("negative angle count");
  std::vector<int> uses(circuit.num_angles, 0);
  for (const Gate& g : circuit.gates) {
    if (g.target < 0 || g.target >= circuit.num_qubits)
      throw std::invalid_argument("gate target out of range");
    const bool controlled =
        g.kind == GateKind::CX || g.kind == GateKind::CRX || g.kind == GateKind::CRY;
    if (controlled) {
      if (g.control < 0 || g.control >= circuit.num_qubits)
        throw std::invalid_argument("gate control out of range");
      if (g.control == g.target)
        throw std::invalid_argument("control equals target");
    }
    if (is_parameterized(g.kind)) {
      if (g.angle < 0 || g.angle >= circuit.num_angles)
        throw std::invalid_argument("gate angle index out of range");
      ++uses[g.angle];
    }
  }
  for (int i = 0; i < circuit.num_angles; ++i)
    if (uses[i] != 1)
      throw std::invalid_argument("each angle index must be used by exactly one gate");
}

StateVector zero_state(int q) {
  check_qubits(q);
  StateVector s;
  s.num_qubits = q;
  s.amps = Eigen::VectorXcd::Zero(1L << q);
  s.amps[0] = 1.0;
  return s;
}

StateVector apply(const ParamCircuit& circuit, const std::vector<double>& angles,
                  const StateVector& in) {
  validate(circuit);
  if (static_cast<int>(angles.size()) != circuit.num_angles)
    throw std::invalid_argument("angle vector length mismatch");
  if (in.num_qubits != circuit.num_qubits ||
      in.amps.size() != (1L << circuit.num_qubits))
    throw std::invalid_argument("state dimension mismatch");
  StateVector out = in;
  for (const Gate& g : circuit.gates)
    apply_gate(out.amps, circuit.num_qubits, g,
               is_parameterized(g.kind) ? angles[g.angle] : 0.0);
  return out;
}

Eigen::MatrixXcd circuit_unitary(const ParamCircuit& circuit,
                                 const std::vector<double>& angles) {
  validate(circuit);
  if (static_cast<int>(angles.size()) != circuit.num_angles)
    throw std::invalid_argument("angle vector length mismatch");
  const long dim = 1L << circuit.num_qubits;
  Eigen::MatrixXcd u(dim, dim);
  StateVector basis;
  basis.num_qubits = circuit.num_qubits;
  for (long k = 0; k < dim; ++k) {
    basis.amps = Eigen::VectorXcd::Zero(dim);
    basis.amps[k] = 1.0;
    u.col(k) = apply(circuit, angles, basis).amps;
  }
  return u;
}

ParamCircuit build_twolocal(int q, int reps) {
  check_qubits(q);
  if (reps < 0) throw std::invalid_argument("reps must be >= 0");
  ParamCircuit c;
  c.num_qubits = q;
  c.num_angles = q * (reps + 1);
  int next = 0;
  for (int layer = 0; layer <= reps; ++layer) {
    for (int i = 0; i < q; ++i)
      c.gates.push_back({GateKind::RY, i, -1, next++});
    if (layer < reps)
      for (int i = 0; i + 1 < q; ++i)
        c.gates.push_back({GateKind::CX, i + 1, i, -1});
  }
  return c;
}

ParamCircuit build_rx_crx() {
  ParamCircuit c;
  c.num_qubits = 2;
  c.num_angles = 2;
  c.gates.push_back({GateKind::RX, 0, -1, 0});
  c.gates.push_back({GateKind::CRX, 1, 0, 1});
  return c;
}

StateVector encode_features(const std::vector<double>& features, int q) {
  check_qubits(q);
  const long dim = 1L << q;
  if (static_cast<long>(features.size()) > dim)
    throw std::invalid_argument("more features than amplitudes");
  double norm2 = 0.0;
  for (double f : features) norm2 += f * f;
  if (norm2 <= 0.0)
    throw std::invalid_argument("cannot amplitude-encode an all-zero vector");
  const double inv = 1.0 / std::sqrt(norm2);
  StateVector s;
  s.num_qubits = q;
  s.amps = Eigen::VectorXcd::Zero(dim);
  for (std::size_t i = 0; i < features.size(); ++i) s.amps[i] = features[i] * inv;
  return s;
}

StateVector encode_label(int label, int q, const ReadoutSpec& readout) {
  check_qubits(q);
  if (label != 0 && label != 1) throw std::invalid_argument("label must be 0 or 1");
  StateVector s;
  s.num_qubits = q;
  s.amps = Eigen::VectorXcd::Zero(1L << q);
  long idx = 0;
  if (label == 1)
    idx = readout.mode == ReadoutSpec::Mode::SingleQubit ? (1L << readout.qubit) : 1;
  s.amps[idx] = 1.0;
  return s;
}

double class1_probability(const StateVector& state, const ReadoutSpec& readout) {
  const long dim = state.amps.size();
  double p = 0.0;
  if (readout.mode == ReadoutSpec::Mode::SingleQubit) {
    if (readout.qubit < 0 || readout.qubit >= state.num_qubits)
      throw std::invalid_argument("readout qubit out of range");
    const long bit = 1L << readout.qubit;
    for (long j = 0; j < dim; ++j)
      if (j & bit) p += std::norm(state.amps[j]);
  } else {
    // All-qubits readout: probability mass on odd-parity basis states.
    for (long j = 0; j < dim; ++j)
      if (std::popcount(static_cast<unsigned long>(j)) & 1) p += std::norm(state.amps[j]);
  }
  return p;
}

int predict(const StateVector& state, const ReadoutSpec& readout) {
  return class1_probability(state, readout) > readout.threshold ? 1 : 0;
}

EncodedDataset encode_dataset(const std::vector<std::vector<double>>& features,
                              const std::vector<int>& labels, int q,
                              const ReadoutSpec& readout) {
  if (features.size() != labels.size())
    throw std::invalid_argument("feature/label count mismatch");
  EncodedDataset d;
  d.num_qubits = q;
  d.labels = labels;
  d.inputs.reserve(features.size());
  d.targets.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    d.inputs.push_back(encode_features(features[i], q));
    d.targets.push_back(encode_label(labels[i], q, readout));
  }
  return d;
}

namespace {

int count_correct(const ParamCircuit& circuit, const std::vector<double>& angles,
                  const EncodedDataset& data, const ReadoutSpec& readout,
                  bool parallel) {
  const long n = static_cast<long>(data.inputs.size());
  int correct = 0;
#pragma omp parallel for reduction(+ : correct) schedule(static) if (parallel)
  for (long i = 0; i < n; ++i) {
    const StateVector out = apply(circuit, angles, data.inputs[i]);
    if (predict(out, readout) == data.labels[i]) ++correct;
  }
  return correct;
}

}  // namespace

double accuracy(const ParamCircuit& circuit, const std::vector<double>& angles,
                const EncodedDataset& data, const ReadoutSpec& readout) {
  if (data.inputs.empty()) throw std::invalid_argument("empty dataset");
  return static_cast<double>(count_correct(circuit, angles, data, readout, true)) /
         static_cast<double>(data.inputs.size());
}

double accuracy_serial(const ParamCircuit& circuit, const std::vector<double>& angles,
                       const EncodedDataset& data, const ReadoutSpec& readout) {
  if (data.inputs.empty()) throw std::invalid_argument("empty dataset");
  return static_cast<double>(count_correct(circuit, angles, data, readout, false)) /
         static_cast<double>(data.inputs.size());
}

}  // namespace vqt::sv
