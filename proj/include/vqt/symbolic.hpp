#pragma once

// Symbolic circuit unitaries as sums of products of exponential binomials.
//
// Every parameterized 2x2 gate entry is a two-term exponential in one
// angle, e.g. cos(t/2) = (e^{it/2} + e^{-it/2}) / 2.  Composing gates
// therefore keeps each operator entry in the form
//
//     sum_p  coeff_p * prod_f (plus_f e^{k t_f / 2} + minus_f e^{-k t_f / 2})
//
// with k = i before the hyperbolic substitution and k = 1 after it.
// expand_products multiplies the binomials out into flat single
// exponentials exp(sum_i s_i t_i / 2) with signs s_i in {-1, 0, +1};
// binarize_signs retags those signs as binary variables b_i = (s_i+1)/2.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "vqt/statevector.hpp"

namespace vqt::symbolic {

using cplx = std::complex<double>;

// coeff * exp(k * sum_i signs[i] * theta_i / 2); signs has one slot per
// circuit angle with entries in {-1, 0, +1}.
struct ExpTerm {
  cplx coeff;
  std::vector<std::int8_t> signs;
};

// plus * e^{k theta/2} + minus * e^{-k theta/2} for one angle.
struct ExpBinomial {
  int angle = 0;
  cplx plus;
  cplx minus;
};

// coeff * product of binomials over distinct angles (ascending index).
struct ExpProduct {
  cplx coeff{1.0, 0.0};
  std::vector<ExpBinomial> factors;
};

enum class ExponentKind { Imaginary, Real };

// One operator entry: a sum of unexpanded products plus a sum of flat
// terms.  symbolic_unitary fills only `products`; expand_products moves
// everything into `terms`.  Both empty means a structural zero.
struct SymbolicEntry {
  std::vector<ExpProduct> products;
  std::vector<ExpTerm> terms;

  bool is_zero() const { return products.empty() && terms.empty(); }
};

struct SymbolicOperator {
  int num_qubits = 0;
  int num_angles = 0;
  ExponentKind kind = ExponentKind::Imaginary;
  std::vector<SymbolicEntry> entries;  // row-major, 2^q x 2^q

  const SymbolicEntry& at(long row, long col) const {
    return entries[row * (1L << num_qubits) + col];
  }
};

// Exact symbolic form of the circuit unitary (exponent kind Imaginary).
// Requires each angle index to be used by exactly one gate, which
// validate() already enforces.
SymbolicOperator symbolic_unitary(const sv::ParamCircuit& circuit);

// Real surrogate of a complex coefficient: its magnitude signed by the
// dominant component (real part, falling back to the imaginary part).
double real_surrogate(const cplx& c);

// Replaces i*theta exponents with theta ones (cos -> cosh and kin) and
// maps every stored coefficient through real_surrogate.  Throws
// std::invalid_argument when the operator is already in Real form.
SymbolicOperator hyperbolic_substitution(const SymbolicOperator& op);

// Multiplies all binomial products out into flat ExpTerms, merges equal
// sign vectors, sorts them lexicographically and drops zero coefficients.
// Idempotent.  A product of n binomials yields at most 2^n terms.
SymbolicEntry expand_products(const SymbolicEntry& entry, int num_angles);
SymbolicOperator expand_products(const SymbolicOperator& op);

// Flat term retagged with the binary vector of Eq-style substitution
// s = 2b - 1, restricted to the participating angles.
struct BinarizedTerm {
  cplx coeff;
  std::vector<int> angles;         // participating angle indices, ascending
  std::vector<std::uint8_t> bits;  // aligned with `angles`; b = (s+1)/2
};

struct BinarizedEntry {
  std::vector<BinarizedTerm> terms;
};

// Requires an expanded entry (no pending products).
BinarizedEntry binarize_signs(const SymbolicEntry& entry, int num_angles);

// Numeric value of an entry at the given angles.
cplx evaluate(const SymbolicEntry& entry, const std::vector<double>& angles,
              ExponentKind kind);

// Debug rendering: one operator entry per line, every term shown as
// `coeff * exp((+theta0 -theta1)/2)`.
std::string dump(const SymbolicOperator& op);

}  // namespace vqt::symbolic
