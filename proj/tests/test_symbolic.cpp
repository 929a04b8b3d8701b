#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "vqt/rng.hpp"
#include "vqt/statevector.hpp"
#include "vqt/symbolic.hpp"

using namespace vqt;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

// Hyperbolic counterpart of the rx_crx closed form.  The substitution
// maps each stored factor coefficient to its signed magnitude, so every
// cos factor becomes cosh and every -i*sin factor becomes -sinh; the
// sin*sin entries are products of two -sinh factors and come out
// positive.
Eigen::Matrix4d rx_crx_hyperbolic(double t0, double t1) {
  const double c0 = std::cosh(t0 / 2), s0 = std::sinh(t0 / 2);
  const double c1 = std::cosh(t1 / 2), s1 = std::sinh(t1 / 2);
  Eigen::Matrix4d u = Eigen::Matrix4d::Zero();
  u(0, 0) = c0;       u(0, 1) = -s0;
  u(1, 0) = -s0 * c1; u(1, 1) = c0 * c1;  u(1, 2) = s0 * s1;  u(1, 3) = -s1 * c0;
  u(2, 2) = c0;       u(2, 3) = -s0;
  u(3, 0) = s0 * s1;  u(3, 1) = -s1 * c0; u(3, 2) = -s0 * c1; u(3, 3) = c0 * c1;
  return u;
}

symbolic::SymbolicEntry cosh_product(int n) {
  symbolic::ExpProduct prod;
  for (int i = 0; i < n; ++i) prod.factors.push_back({i, 0.5, 0.5});
  symbolic::SymbolicEntry entry;
  entry.products.push_back(prod);
  return entry;
}

}  // namespace

TEST_CASE("symbolic unitary reproduces the numeric circuit unitary") {
  for (const sv::ParamCircuit& circuit :
       {sv::build_rx_crx(), sv::build_twolocal(2, 1), sv::build_twolocal(3, 0)}) {
    const symbolic::SymbolicOperator op = symbolic::symbolic_unitary(circuit);
    CHECK(op.kind == symbolic::ExponentKind::Imaginary);

    std::mt19937_64 eng = rng::make_engine(5);
    const long dim = 1L << circuit.num_qubits;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> angles(circuit.num_angles);
      for (double& t : angles) t = rng::uniform(eng, 0.0, 2 * kPi);
      const Eigen::MatrixXcd u = sv::circuit_unitary(circuit, angles);
      for (long r = 0; r < dim; ++r)
        for (long c = 0; c < dim; ++c) {
          const cplx v = symbolic::evaluate(op.at(r, c), angles, op.kind);
          CHECK(std::abs(v - u(r, c)) < 1e-12);
        }
    }
  }
}

TEST_CASE("expansion preserves entry values and is idempotent") {
  const sv::ParamCircuit circuit = sv::build_twolocal(2, 1);
  const symbolic::SymbolicOperator op = symbolic::symbolic_unitary(circuit);
  const symbolic::SymbolicOperator flat = symbolic::expand_products(op);
  const symbolic::SymbolicOperator again = symbolic::expand_products(flat);

  std::mt19937_64 eng = rng::make_engine(17);
  std::vector<double> angles(circuit.num_angles);
  for (double& t : angles) t = rng::uniform(eng, 0.0, 2 * kPi);

  for (long r = 0; r < 4; ++r)
    for (long c = 0; c < 4; ++c) {
      const cplx a = symbolic::evaluate(op.at(r, c), angles, op.kind);
      const cplx b = symbolic::evaluate(flat.at(r, c), angles, flat.kind);
      CHECK(std::abs(a - b) < 1e-12);
      CHECK(flat.at(r, c).products.empty());
      // Idempotence: re-expansion changes nothing.
      CHECK(again.at(r, c).terms.size() == flat.at(r, c).terms.size());
    }
}

TEST_CASE("expanded terms are lex-sorted, merged, and pruned") {
  // (0.5 e^{t0/2} + 0.5 e^{-t0/2}) * (0.5 e^{t1/2} + 0.5 e^{-t1/2})
  symbolic::SymbolicEntry entry = cosh_product(2);
  const symbolic::SymbolicEntry flat = symbolic::expand_products(entry, 2);
  REQUIRE(flat.terms.size() == 4);
  // Lexicographically ascending sign vectors: --, -+, +-, ++.
  const std::vector<std::vector<std::int8_t>> expected = {
      {-1, -1}, {-1, 1}, {1, -1}, {1, 1}};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(flat.terms[i].signs == expected[i]);
    CHECK(flat.terms[i].coeff.real() == doctest::Approx(0.25).epsilon(1e-12));
  }

  // A canceling pair collapses to nothing: (a + b) with b = -a.
  symbolic::SymbolicEntry cancel;
  cancel.terms.push_back({cplx(0.5, 0.0), {1, 0}});
  cancel.terms.push_back({cplx(-0.5, 0.0), {1, 0}});
  CHECK(symbolic::expand_products(cancel, 2).terms.empty());
}

TEST_CASE("real surrogate keeps magnitude and dominant sign") {
  CHECK(symbolic::real_surrogate({3.0, -4.0}) == doctest::Approx(-5.0));
  CHECK(symbolic::real_surrogate({-3.0, 4.0}) == doctest::Approx(5.0));
  CHECK(symbolic::real_surrogate({4.0, 3.0}) == doctest::Approx(5.0));
  CHECK(symbolic::real_surrogate({0.0, -2.0}) == doctest::Approx(-2.0));
  CHECK(symbolic::real_surrogate({0.5, 0.0}) == doctest::Approx(0.5));
}

TEST_CASE("hyperbolic substitution maps the example circuit to cosh/sinh") {
  const symbolic::SymbolicOperator op =
      symbolic::symbolic_unitary(sv::build_rx_crx());
  const symbolic::SymbolicOperator surrogate = symbolic::hyperbolic_substitution(op);
  CHECK(surrogate.kind == symbolic::ExponentKind::Real);
  CHECK_THROWS_AS(symbolic::hyperbolic_substitution(surrogate), std::invalid_argument);

  std::mt19937_64 eng = rng::make_engine(29);
  for (int trial = 0; trial < 20; ++trial) {
    const double t0 = rng::uniform(eng, -2.0, 2.0);
    const double t1 = rng::uniform(eng, -2.0, 2.0);
    const Eigen::Matrix4d expected = rx_crx_hyperbolic(t0, t1);
    for (long r = 0; r < 4; ++r)
      for (long c = 0; c < 4; ++c) {
        const cplx v =
            symbolic::evaluate(surrogate.at(r, c), {t0, t1}, surrogate.kind);
        CHECK(v.imag() == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(v.real() == doctest::Approx(expected(r, c)).epsilon(1e-9));
      }
  }
}

TEST_CASE("substitution happens on the factored form, not the expansion") {
  // RY/CRY sin factors are stored with imaginary coefficients (-i/2, i/2),
  // so the order matters: taking signed magnitudes per factor maps each
  // sin to -sinh and their product to +sinh*sinh.  Expanding first would
  // leave real +-1/4 coefficients and produce -sinh*sinh instead.  This
  // pins the factored-form order.
  sv::ParamCircuit circuit{2, 2,
                           {{sv::GateKind::RY, 0, -1, 0}, {sv::GateKind::CRY, 1, 0, 1}}};
  sv::validate(circuit);
  const symbolic::SymbolicOperator surrogate = symbolic::expand_products(
      symbolic::hyperbolic_substitution(symbolic::symbolic_unitary(circuit)));
  const double t0 = 1.3, t1 = 0.4;
  // Trig entry (3,0) is sin(t0/2) sin(t1/2).
  const cplx v = symbolic::evaluate(surrogate.at(3, 0), {t0, t1}, surrogate.kind);
  CHECK(v.real() ==
        doctest::Approx(std::sinh(t0 / 2) * std::sinh(t1 / 2)).epsilon(1e-12));
}

TEST_CASE("n-angle cosh products expand into 2^n binarized terms") {
  std::mt19937_64 eng = rng::make_engine(31);
  for (int n = 1; n <= 4; ++n) {
    const symbolic::SymbolicEntry flat =
        symbolic::expand_products(cosh_product(n), n);
    REQUIRE(static_cast<int>(flat.terms.size()) == (1 << n));

    const symbolic::BinarizedEntry bin = symbolic::binarize_signs(flat, n);
    REQUIRE(bin.terms.size() == flat.terms.size());

    for (int trial = 0; trial < 250; ++trial) {
      std::vector<double> x(n);
      double expected = 1.0;
      for (double& xi : x) {
        xi = rng::uniform(eng, -3.0, 3.0);
        expected *= std::cosh(xi);
      }
      // The ExpTerm convention is exp(sum s_i theta_i / 2), so theta = 2x.
      double value = 0.0;
      for (const symbolic::BinarizedTerm& term : bin.terms) {
        double exponent = 0.0;
        for (std::size_t k = 0; k < term.angles.size(); ++k)
          exponent += (2.0 * term.bits[k] - 1.0) * x[term.angles[k]];
        value += term.coeff.real() * std::exp(exponent);
      }
      CHECK(value == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("binarize rejects unexpanded entries and drops zero signs") {
  CHECK_THROWS_AS(symbolic::binarize_signs(cosh_product(2), 2), std::invalid_argument);

  symbolic::SymbolicEntry entry;
  entry.terms.push_back({cplx(0.5, 0.0), {1, 0, -1}});
  const symbolic::BinarizedEntry bin = symbolic::binarize_signs(entry, 3);
  REQUIRE(bin.terms.size() == 1);
  CHECK(bin.terms[0].angles == std::vector<int>{0, 2});
  CHECK(bin.terms[0].bits == std::vector<std::uint8_t>{1, 0});
}

TEST_CASE("dump renders terms in the documented shape") {
  const symbolic::SymbolicOperator op =
      symbolic::symbolic_unitary(sv::build_rx_crx());
  const std::string text = symbolic::dump(symbolic::expand_products(op));
  CHECK(text.find("theta0") != std::string::npos);
  CHECK(text.find("exp(") != std::string::npos);
  CHECK(text.find("[0][0]") != std::string::npos);
}
