#pragma once

// Dense state-vector simulation for small parameterized circuits.
//
// Basis convention: qubit i maps to bit i of the basis-state index, so
// index j encodes the computational state |...b1 b0> with b_i = (j>>i)&1.
// All circuits here stay at or below six qubits, so a dense complex
// vector of 2^q amplitudes is the whole simulation state.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace vqt::sv {

struct StateVector {
  int num_qubits = 0;
  Eigen::VectorXcd amps;  // size 2^num_qubits, unit L2 norm
};

enum class GateKind { RX, RY, RZ, CRX, CRY, CX };

struct Gate {
  GateKind kind;
  int target = 0;
  int control = -1;  // >= 0 for CRX / CRY / CX
  int angle = -1;    // index into the circuit's angle vector; -1 for CX
};

// A circuit over num_qubits qubits with num_angles free rotation angles.
// Every angle index in [0, num_angles) must be used by exactly one gate;
// the symbolic pipeline relies on that, and the builders below obey it.
struct ParamCircuit {
  int num_qubits = 0;
  int num_angles = 0;
  std::vector<Gate> gates;
};

// How a prepared state is collapsed to a binary class label.
struct ReadoutSpec {
  enum class Mode { SingleQubit, AllQubits };
  Mode mode = Mode::SingleQubit;
  int qubit = 0;            // used in SingleQubit mode
  double threshold = 0.5;   // class 1 iff probability strictly exceeds this

  static ReadoutSpec single(int qubit, double threshold = 0.5) {
    return ReadoutSpec{Mode::SingleQubit, qubit, threshold};
  }
  static ReadoutSpec all(double threshold = 0.5) {
    return ReadoutSpec{Mode::AllQubits, 0, threshold};
  }
};

// Feature rows amplitude-encoded once, so inner training loops do not
// re-normalize per evaluation.
struct EncodedDataset {
  int num_qubits = 0;
  std::vector<StateVector> inputs;   // one per record
  std::vector<StateVector> targets;  // label-derived basis states
  std::vector<int> labels;           // 0/1
};

bool is_parameterized(GateKind kind);

// Throws std::invalid_argument when gate indices are out of range, a
// controlled gate reuses its target as control, or an angle index is
// unused or used twice.
void validate(const ParamCircuit& circuit);

// |0...0> on q qubits.
StateVector zero_state(int q);

// Applies the circuit to `in` and returns the evolved state.
// angles.size() must equal circuit.num_angles.
StateVector apply(const ParamCircuit& circuit, const std::vector<double>& angles,
                  const StateVector& in);

// Full 2^q x 2^q unitary, equal to the ordered product of gate matrices.
Eigen::MatrixXcd circuit_unitary(const ParamCircuit& circuit,
                                 const std::vector<double>& angles);

// Hardware-efficient ansatz: reps+1 layers of per-qubit RY rotations with a
// linear CX chain (i -> i+1) between consecutive layers.  Angle count is
// q * (reps + 1).  reps = 0 yields a single rotation layer, no entanglers.
ParamCircuit build_twolocal(int q, int reps);

// Two-qubit demo circuit: RX(theta0) on qubit 0 followed by CRX(theta1)
// with control 0 and target 1.
ParamCircuit build_rx_crx();

// L2-normalized amplitude encoding; features are zero-padded to 2^q.
// Throws std::invalid_argument when features.size() > 2^q or the vector
// has zero norm.
StateVector encode_features(const std::vector<double>& features, int q);

// Basis state the readout maps back to `label` with certainty: |0...0>
// for class 0 and the single-excitation state the readout marks as
// class 1 otherwise.
StateVector encode_label(int label, int q, const ReadoutSpec& readout);

// Probability that the readout yields class 1 for the given state.
double class1_probability(const StateVector& state, const ReadoutSpec& readout);

// 1 when class1_probability strictly exceeds the threshold, else 0.
int predict(const StateVector& state, const ReadoutSpec& readout);

EncodedDataset encode_dataset(const std::vector<std::vector<double>>& features,
                              const std::vector<int>& labels, int q,
                              const ReadoutSpec& readout);

// Fraction of records whose prediction matches the label.  The OpenMP
// variant parallelizes over records; both return identical results.
double accuracy(const ParamCircuit& circuit, const std::vector<double>& angles,
                const EncodedDataset& data, const ReadoutSpec& readout);
double accuracy_serial(const ParamCircuit& circuit, const std::vector<double>& angles,
                       const EncodedDataset& data, const ReadoutSpec& readout);

}  // namespace vqt::sv
