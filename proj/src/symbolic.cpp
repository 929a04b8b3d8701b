#include "vqt/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vqt::symbolic {

namespace {

constexpr double kZeroTol = 1e-14;

bool is_zero(const cplx& c) { return std::abs(c) < kZeroTol; }

// Symbolic 2x2 gate entry: either a scalar or a binomial in one angle.
struct GateEntry {
  bool is_scalar = true;
  cplx scalar{0.0, 0.0};
  ExpBinomial binom;

  static GateEntry zero() { return GateEntry{}; }
  static GateEntry one() { return GateEntry{true, {1.0, 0.0}, {}}; }
  static GateEntry binomial(int angle, cplx plus, cplx minus) {
    GateEntry e;
    e.is_scalar = false;
    e.binom = {angle, plus, minus};
    return e;
  }
};

// Symbolic entries of the 2x2 rotation block for a parameterized gate.
void gate_entries(sv::GateKind kind, int angle, GateEntry m[2][2]) {
  const cplx half(0.5, 0.0);
  const cplx ihalf(0.0, 0.5);
  switch (kind) {
    case sv::GateKind::RX:
    case sv::GateKind::CRX:
      // cos(t/2) and -i sin(t/2)
      m[0][0] = m[1][1] = GateEntry::binomial(angle, half, half);
      m[0][1] = m[1][0] = GateEntry::binomial(angle, -half, half);
      break;
    case sv::GateKind::RY:
    case sv::GateKind::CRY:
      // cos(t/2), -sin(t/2), sin(t/2)
      m[0][0] = m[1][1] = GateEntry::binomial(angle, half, half);
      m[0][1] = GateEntry::binomial(angle, ihalf, -ihalf);
      m[1][0] = GateEntry::binomial(angle, -ihalf, ihalf);
      break;
    case sv::GateKind::RZ:
      m[0][0] = GateEntry::binomial(angle, 0.0, 1.0);
      m[1][1] = GateEntry::binomial(angle, 1.0, 0.0);
      m[0][1] = m[1][0] = GateEntry::zero();
      break;
    case sv::GateKind::CX:
      m[0][0] = m[1][1] = GateEntry::zero();
      m[0][1] = m[1][0] = GateEntry::one();
      break;
  }
}

// entry * scalar
SymbolicEntry scaled(const SymbolicEntry& e, const cplx& s) {
  if (is_zero(s)) return {};
  SymbolicEntry out = e;
  for (ExpProduct& p : out.products) p.coeff *= s;
  for (ExpTerm& t : out.terms) t.coeff *= s;
  return out;
}

// entry * (plus e^{k t/2} + minus e^{-k t/2}); the angle is fresh by the
// exactly-once angle-use contract, so it cannot collide inside a product.
SymbolicEntry times_binomial(const SymbolicEntry& e, const ExpBinomial& b) {
  if (!e.terms.empty())
    throw std::invalid_argument("gate application expects product-form entries");
  SymbolicEntry out = e;
  for (ExpProduct& p : out.products) {
    auto pos = std::lower_bound(
        p.factors.begin(), p.factors.end(), b,
        [](const ExpBinomial& x, const ExpBinomial& y) { return x.angle < y.angle; });
    p.factors.insert(pos, b);
  }
  return out;
}

SymbolicEntry apply_gate_entry(const GateEntry& g, const SymbolicEntry& e) {
  if (e.is_zero()) return {};
  if (g.is_scalar) return scaled(e, g.scalar);
  return times_binomial(e, g.binom);
}

void add_into(SymbolicEntry& dst, SymbolicEntry&& src) {
  dst.products.insert(dst.products.end(),
                      std::make_move_iterator(src.products.begin()),
                      std::make_move_iterator(src.products.end()));
  dst.terms.insert(dst.terms.end(), std::make_move_iterator(src.terms.begin()),
                   std::make_move_iterator(src.terms.end()));
}

bool signs_less(const std::vector<std::int8_t>& a, const std::vector<std::int8_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

SymbolicOperator symbolic_unitary(const sv::ParamCircuit& circuit) {
  sv::validate(circuit);
  const long dim = 1L << circuit.num_qubits;

  SymbolicOperator op;
  op.num_qubits = circuit.num_qubits;
  op.num_angles = circuit.num_angles;
  op.kind = ExponentKind::Imaginary;
  op.entries.resize(dim * dim);

  for (long col = 0; col < dim; ++col) {
    // Evolve basis column `col` symbolically.
    std::vector<SymbolicEntry> state(dim);
    state[col].products.push_back(ExpProduct{});

    for (const sv::Gate& g : circuit.gates) {
      GateEntry m[2][2];
      gate_entries(g.kind, g.angle, m);
      const long tbit = 1L << g.target;
      const long cbit = g.control >= 0 ? (1L << g.control) : 0;
      std::vector<SymbolicEntry> next = state;
      for (long j = 0; j < dim; ++j) {
        if (j & tbit) continue;
        if (cbit && !(j & cbit)) continue;
        const long j1 = j | tbit;
        SymbolicEntry n0 = apply_gate_entry(m[0][0], state[j]);
        add_into(n0, apply_gate_entry(m[0][1], state[j1]));
        SymbolicEntry n1 = apply_gate_entry(m[1][0], state[j]);
        add_into(n1, apply_gate_entry(m[1][1], state[j1]));
        next[j] = std::move(n0);
        next[j1] = std::move(n1);
      }
      state = std::move(next);
    }

    for (long row = 0; row < dim; ++row) op.entries[row * dim + col] = state[row];
  }
  return op;
}

double real_surrogate(const cplx& c) {
  if (is_zero(c)) return 0.0;
  const double mag = std::abs(c);
  const double lead = std::abs(c.real()) >= std::abs(c.imag()) ? c.real() : c.imag();
  return std::copysign(mag, lead);
}

SymbolicOperator hyperbolic_substitution(const SymbolicOperator& op) {
  if (op.kind == ExponentKind::Real)
    throw std::invalid_argument("operator is already in hyperbolic form");
  SymbolicOperator out = op;
  out.kind = ExponentKind::Real;
  for (SymbolicEntry& e : out.entries) {
    for (ExpProduct& p : e.products) {
      p.coeff = real_surrogate(p.coeff);
      for (ExpBinomial& b : p.factors) {
        b.plus = real_surrogate(b.plus);
        b.minus = real_surrogate(b.minus);
      }
    }
    for (ExpTerm& t : e.terms) t.coeff = real_surrogate(t.coeff);
  }
  return out;
}

SymbolicEntry expand_products(const SymbolicEntry& entry, int num_angles) {
  std::vector<ExpTerm> flat = entry.terms;
  for (ExpTerm& t : flat)
    t.signs.resize(num_angles, 0);

  for (const ExpProduct& p : entry.products) {
    std::vector<ExpTerm> acc;
    acc.push_back(ExpTerm{p.coeff, std::vector<std::int8_t>(num_angles, 0)});
    for (const ExpBinomial& b : p.factors) {
      std::vector<ExpTerm> grown;
      grown.reserve(acc.size() * 2);
      for (const ExpTerm& t : acc) {
        if (!is_zero(b.plus)) {
          ExpTerm tp = t;
          tp.coeff *= b.plus;
          tp.signs[b.angle] = +1;
          grown.push_back(std::move(tp));
        }
        if (!is_zero(b.minus)) {
          ExpTerm tm = t;
          tm.coeff *= b.minus;
          tm.signs[b.angle] = -1;
          grown.push_back(std::move(tm));
        }
      }
      acc = std::move(grown);
    }
    flat.insert(flat.end(), acc.begin(), acc.end());
  }

  std::sort(flat.begin(), flat.end(),
            [](const ExpTerm& a, const ExpTerm& b) { return signs_less(a.signs, b.signs); });

  SymbolicEntry out;
  for (const ExpTerm& t : flat) {
    if (!out.terms.empty() && out.terms.back().signs == t.signs)
      out.terms.back().coeff += t.coeff;
    else
      out.terms.push_back(t);
  }
  std::erase_if(out.terms, [](const ExpTerm& t) { return is_zero(t.coeff); });
  return out;
}

SymbolicOperator expand_products(const SymbolicOperator& op) {
  SymbolicOperator out = op;
  for (SymbolicEntry& e : out.entries) e = expand_products(e, op.num_angles);
  return out;
}

BinarizedEntry binarize_signs(const SymbolicEntry& entry, int num_angles) {
  if (!entry.products.empty())
    throw std::invalid_argument("binarize_signs requires an expanded entry");
  BinarizedEntry out;
  out.terms.reserve(entry.terms.size());
  for (const ExpTerm& t : entry.terms) {
    BinarizedTerm bt;
    bt.coeff = t.coeff;
    for (int i = 0; i < num_angles; ++i) {
      if (t.signs[i] == 0) continue;
      bt.angles.push_back(i);
      bt.bits.push_back(t.signs[i] > 0 ? 1 : 0);
    }
    out.terms.push_back(std::move(bt));
  }
  return out;
}

cplx evaluate(const SymbolicEntry& entry, const std::vector<double>& angles,
              ExponentKind kind) {
  const cplx unit = kind == ExponentKind::Imaginary ? cplx(0.0, 1.0) : cplx(1.0, 0.0);
  cplx total(0.0, 0.0);
  for (const ExpProduct& p : entry.products) {
    cplx v = p.coeff;
    for (const ExpBinomial& b : p.factors) {
      const cplx arg = unit * (angles.at(b.angle) / 2.0);
      v *= b.plus * std::exp(arg) + b.minus * std::exp(-arg);
    }
    total += v;
  }
  for (const ExpTerm& t : entry.terms) {
    double lin = 0.0;
    for (std::size_t i = 0; i < t.signs.size(); ++i)
      lin += static_cast<double>(t.signs[i]) * angles.at(i);
    total += t.coeff * std::exp(unit * (lin / 2.0));
  }
  return total;
}

namespace {

std::string format_coeff(const cplx& c) {
  std::ostringstream os;
  os.precision(12);
  if (std::abs(c.imag()) < kZeroTol)
    os << c.real();
  else if (std::abs(c.real()) < kZeroTol)
    os << c.imag() << "i";
  else
    os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
  return os.str();
}

std::string format_term(const ExpTerm& t, ExponentKind kind) {
  std::string exponent;
  for (std::size_t i = 0; i < t.signs.size(); ++i) {
    if (t.signs[i] == 0) continue;
    if (!exponent.empty()) exponent += ' ';
    exponent += t.signs[i] > 0 ? '+' : '-';
    exponent += "theta" + std::to_string(i);
  }
  if (exponent.empty()) return format_coeff(t.coeff);
  const char* unit = kind == ExponentKind::Imaginary ? "i(" : "(";
  return format_coeff(t.coeff) + " * exp(" + unit + exponent + ")/2)";
}

}  // namespace

std::string dump(const SymbolicOperator& op) {
  const long dim = 1L << op.num_qubits;
  std::ostringstream os;
  for (long r = 0; r < dim; ++r) {
    for (long c = 0; c < dim; ++c) {
      const SymbolicEntry expanded = expand_products(op.at(r, c), op.num_angles);
      os << "[" << r << "][" << c << "]: ";
      if (expanded.terms.empty()) {
        os << "0";
      } else {
        for (std::size_t t = 0; t < expanded.terms.size(); ++t) {
          if (t) os << " + ";
          os << format_term(expanded.terms[t], op.kind);
        }
      }
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace vqt::symbolic
