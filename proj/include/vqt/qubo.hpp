#pragma once

// QUBO encoding of the discretized angle-search problem.
//
// Each angle i is one-hot discretized over d partitions: binary variable
// C_{i,p} (index i*d + p) selects partition p.  Inside partition p the
// candidate value for relative point k is
//
//     v[i][p][k] = lower_i + (p + offset_i[k]) * (upper_i - lower_i) / d.
//
// A hyperbolic surrogate operator entry exp(sum_i s_i theta_i / 2) is
// linearized over those variables via the one-hot identity
//
//     exp(sum_i s_i theta_i / 2) = prod_i sum_p C_{i,p} exp(s_i v[i][p][k] / 2),
//
// which is exact whenever exactly one C_{i,p} is set per angle.  Squared
// residuals of the surrogate state map against label targets give a
// polynomial of degree up to 2a; substitution auxiliaries reduce it to a
// quadratic, and per-angle uniqueness penalties keep minima one-hot.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vqt/symbolic.hpp"

namespace vqt::qubo {

// Candidate-value grid for one hierarchical level.
struct AngleGrid {
  std::vector<std::pair<double, double>> ranges;  // per-angle [lower, upper]
  int partitions = 0;                             // d
  int points = 0;                                 // w
  int level = 1;
  std::vector<std::vector<double>> offsets;              // [angle][point], in (0,1)
  std::vector<std::vector<std::vector<double>>> values;  // [angle][partition][point]
};

// Flat index of the one-hot selector for (angle, partition).
inline int var_index(int angle, int partition, int d) { return angle * d + partition; }

// Multilinear polynomial over binary variables: monomials are sorted sets
// of variable indices (x^2 = x is folded away on multiplication).
class Polynomial {
 public:
  using Monomial = std::vector<int>;

  void add(Monomial mono, double coeff);  // sorts and merges duplicates
  void add_constant(double c) { add({}, c); }

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator*=(double s);
  Polynomial operator*(const Polynomial& other) const;

  double evaluate(const std::vector<std::uint8_t>& x) const;
  int degree() const;
  std::size_t term_count() const { return terms_.size(); }
  // Sum of |coeff| over non-constant monomials (penalty sizing).
  double abs_coeff_sum() const;

  const std::map<Monomial, double>& terms() const { return terms_; }

 private:
  std::map<Monomial, double> terms_;
};

// Per-record encoding artifacts: one residual polynomial per basis row.
// Evaluating residuals[j] at a feasible one-hot assignment gives the
// surrogate residual target_j - sum_k Q~_jk * input_k for that record.
struct RecordTerm {
  int record = 0;
  std::vector<double> target;  // real projections of the label state
  std::vector<double> input;   // real projections of the encoded features
  std::vector<Polynomial> residuals;

  std::size_t term_count() const;
};

// Assembled quadratic model.  Variables [0, n_primary) are the one-hot
// selectors; [n_primary, n_vars) are substitution auxiliaries, where
// aux_pairs[k] names the variable pair auxiliary n_primary+k stands for.
struct QuboModel {
  int n_vars = 0;
  int n_primary = 0;
  double offset = 0.0;
  std::vector<double> linear;
  std::map<std::pair<int, int>, double> quadratic;  // keys i < j
  double penalty_weight = 0.0;                      // uniqueness lambda
  std::vector<std::pair<int, int>> aux_pairs;

  double energy(const std::vector<std::uint8_t>& x) const;
};

// Builds the level grid.  offsets must hold one length-w vector per angle
// with entries strictly inside (0,1).  Throws std::invalid_argument on
// degenerate ranges (upper <= lower) or malformed offsets.
AngleGrid make_grid(const std::vector<std::pair<double, double>>& ranges,
                    int partitions, int points,
                    const std::vector<std::vector<double>>& offsets, int level = 1);

// Evenly spread offsets (k + 0.5) / w for every angle.
std::vector<std::vector<double>> even_offsets(int num_angles, int points);

// Builds one RecordTerm per dataset record for the execution whose
// relative point index is point_index[i] for angle i.  `op` must be the
// expanded hyperbolic surrogate (Real exponents, no pending products).
// The OpenMP variant parallelizes over records; results are identical.
std::vector<RecordTerm> build_record_terms(const symbolic::SymbolicOperator& op,
                                           const sv::EncodedDataset& data,
                                           const AngleGrid& grid,
                                           const std::vector<int>& point_index);
std::vector<RecordTerm> build_record_terms_serial(const symbolic::SymbolicOperator& op,
                                                  const sv::EncodedDataset& data,
                                                  const AngleGrid& grid,
                                                  const std::vector<int>& point_index);

struct QuadratizeResult {
  Polynomial quadratic;
  std::vector<std::pair<int, int>> aux_pairs;  // aux k = first_aux + k
};

// Reduces every monomial of degree >= 3 by substituting the most frequent
// variable pair with a fresh auxiliary (ties broken lexicographically).
// Each substitution adds the exactness penalty
//     P * (x_i x_j - 2 x_i y - 2 x_j y + 3 y),  P = 2 * sum |affected coeffs|,
// so minima are preserved over all assignments, not just feasible ones.
QuadratizeResult quadratize(const Polynomial& poly, int first_aux);

// Mean of the squared-residual record polynomials, plus one uniqueness
// penalty lambda * (sum_p C_{i,p} - 1)^2 per angle, quadratized into a
// QuboModel.  lambda <= 0 selects the default 2 * sum |loss coefficients|.
QuboModel assemble(const std::vector<RecordTerm>& terms, int num_angles,
                   int partitions, double lambda = -1.0);

// Coordinate text format: header "n_vars offset", then one "i j coeff"
// line per nonzero coefficient (i == j for linear terms).
std::string format_qubo(const QuboModel& model);
void write_qubo(const QuboModel& model, const std::string& path);

}  // namespace vqt::qubo
