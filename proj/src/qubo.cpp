#include "vqt/qubo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vqt::qubo {

namespace {
constexpr double kCoeffPrune = 1e-12;
}

void Polynomial::add(Monomial mono, double coeff) {
  if (coeff == 0.0) return;
  std::sort(mono.begin(), mono.end());
  mono.erase(std::unique(mono.begin(), mono.end()), mono.end());
  auto [it, inserted] = terms_.try_emplace(std::move(mono), coeff);
  if (!inserted) {
    it->second += coeff;
    if (std::abs(it->second) < kCoeffPrune) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  for (const auto& [mono, coeff] : other.terms_) add(mono, coeff);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [mono, coeff] : terms_) coeff *= s;
  return *this;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  Polynomial out;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : other.terms_) {
      Monomial mono;
      mono.reserve(ma.size() + mb.size());
      std::set_union(ma.begin(), ma.end(), mb.begin(), mb.end(),
                     std::back_inserter(mono));
      out.add(std::move(mono), ca * cb);
    }
  }
  return out;
}

double Polynomial::evaluate(const std::vector<std::uint8_t>& x) const {
  double total = 0.0;
  for (const auto& [mono, coeff] : terms_) {
    bool on = true;
    for (int v : mono) {
      if (v >= static_cast<int>(x.size()) || !x[v]) {
        on = false;
        break;
      }
    }
    if (on) total += coeff;
  }
  return total;
}

int Polynomial::degree() const {
  std::size_t deg = 0;
  for (const auto& [mono, coeff] : terms_) deg = std::max(deg, mono.size());
  return static_cast<int>(deg);
}

double Polynomial::abs_coeff_sum() const {
  double total = 0.0;
  for (const auto& [mono, coeff] : terms_)
    if (!mono.empty()) total += std::abs(coeff);
  return total;
}

std::size_t RecordTerm::term_count() const {
  std::size_t n = 0;
  for (const Polynomial& p : residuals) n += p.term_count();
  return n;
}

double QuboModel::energy(const std::vector<std::uint8_t>& x) const {
  if (static_cast<int>(x.size()) != n_vars)
    throw std::invalid_argument("assignment length mismatch");
  double e = offset;
  for (int i = 0; i < n_vars; ++i)
    if (x[i]) e += linear[i];
  for (const auto& [pair, coeff] : quadratic)
    if (x[pair.first] && x[pair.second]) e += coeff;
  return e;
}

AngleGrid make_grid(const std::vector<std::pair<double, double>>& ranges,
                    int partitions, int points,
                    const std::vector<std::vector<double>>& offsets, int level) {
  if (ranges.empty()) throw std::invalid_argument("no angle ranges");
  if (partitions < 1) throw std::invalid_argument("partitions must be >= 1");
  if (points < 1) throw std::invalid_argument("points must be >= 1");
  if (offsets.size() != ranges.size())
    throw std::invalid_argument("one offset vector per angle required");

  AngleGrid g;
  g.ranges = ranges;
  g.partitions = partitions;
  g.points = points;
  g.level = level;
  g.offsets = offsets;
  g.values.resize(ranges.size());
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const auto [lower, upper] = ranges[i];
    if (!(upper > lower)) throw std::invalid_argument("degenerate angle range");
    if (static_cast<int>(offsets[i].size()) != points)
      throw std::invalid_argument("offset vector length must equal points");
    const double width = (upper - lower) / partitions;
    g.values[i].resize(partitions);
    for (int p = 0; p < partitions; ++p) {
      g.values[i][p].resize(points);
      for (int k = 0; k < points; ++k) {
        const double off = offsets[i][k];
        if (!(off > 0.0 && off < 1.0))
          throw std::invalid_argument("offsets must lie strictly inside (0,1)");
        g.values[i][p][k] = lower + (p + off) * width;
      }
    }
  }
  return g;
}

std::vector<std::vector<double>> even_offsets(int num_angles, int points) {
  std::vector<double> row(points);
  for (int k = 0; k < points; ++k) row[k] = (k + 0.5) / points;
  return std::vector<std::vector<double>>(num_angles, row);
}

namespace {

RecordTerm build_one_record(const symbolic::SymbolicOperator& op,
                            const sv::EncodedDataset& data, const AngleGrid& grid,
                            const std::vector<int>& point_index, int record) {
  const long dim = 1L << op.num_qubits;
  RecordTerm rt;
  rt.record = record;
  rt.target.resize(dim);
  rt.input.resize(dim);
  for (long j = 0; j < dim; ++j) {
    rt.target[j] = data.targets[record].amps[j].real();
    rt.input[j] = data.inputs[record].amps[j].real();
  }

  rt.residuals.resize(dim);
  for (long row = 0; row < dim; ++row) {
    Polynomial& res = rt.residuals[row];
    res.add_constant(rt.target[row]);
    for (long col = 0; col < dim; ++col) {
      const double u = rt.input[col];
      if (u == 0.0) continue;
      const symbolic::SymbolicEntry& entry = op.at(row, col);
      if (entry.is_zero()) continue;
      for (const symbolic::ExpTerm& term : entry.terms) {
        // coeff * prod_i sum_p C_{i,p} exp(s_i v[i][p][k_i] / 2)
        Polynomial factor;
        factor.add_constant(-u * term.coeff.real());
        for (std::size_t i = 0; i < term.signs.size(); ++i) {
          if (term.signs[i] == 0) continue;
          Polynomial selector;
          for (int p = 0; p < grid.partitions; ++p) {
            const double v = grid.values[i][p][point_index[i]];
            selector.add({var_index(static_cast<int>(i), p, grid.partitions)},
                         std::exp(static_cast<double>(term.signs[i]) * v / 2.0));
          }
          factor = factor * selector;
        }
        res += factor;
      }
    }
  }
  return rt;
}

std::vector<RecordTerm> build_records(const symbolic::SymbolicOperator& op,
                                      const sv::EncodedDataset& data,
                                      const AngleGrid& grid,
                                      const std::vector<int>& point_index,
                                      bool parallel) {
  if (op.kind != symbolic::ExponentKind::Real)
    throw std::invalid_argument("record terms require the hyperbolic surrogate");
  for (const symbolic::SymbolicEntry& e : op.entries)
    if (!e.products.empty())
      throw std::invalid_argument("record terms require an expanded operator");
  if (static_cast<int>(grid.ranges.size()) != op.num_angles)
    throw std::invalid_argument("grid/operator angle count mismatch");
  if (static_cast<int>(point_index.size()) != op.num_angles)
    throw std::invalid_argument("one point index per angle required");
  for (int k : point_index)
    if (k < 0 || k >= grid.points) throw std::invalid_argument("point index out of range");
  if (data.num_qubits != op.num_qubits)
    throw std::invalid_argument("dataset/operator qubit count mismatch");
  if (data.inputs.empty()) throw std::invalid_argument("empty dataset");

  const long n = static_cast<long>(data.inputs.size());
  std::vector<RecordTerm> out(n);
#pragma omp parallel for schedule(static) if (parallel)
  for (long r = 0; r < n; ++r)
    out[r] = build_one_record(op, data, grid, point_index, static_cast<int>(r));
  return out;
}

}  // namespace

std::vector<RecordTerm> build_record_terms(const symbolic::SymbolicOperator& op,
                                           const sv::EncodedDataset& data,
                                           const AngleGrid& grid,
                                           const std::vector<int>& point_index) {
  return build_records(op, data, grid, point_index, true);
}

std::vector<RecordTerm> build_record_terms_serial(const symbolic::SymbolicOperator& op,
                                                  const sv::EncodedDataset& data,
                                                  const AngleGrid& grid,
                                                  const std::vector<int>& point_index) {
  return build_records(op, data, grid, point_index, false);
}

QuadratizeResult quadratize(const Polynomial& poly, int first_aux) {
  QuadratizeResult result;
  result.quadratic = poly;
  int next_aux = first_aux;

  while (result.quadratic.degree() > 2) {
    // Most frequent variable pair among monomials of degree >= 3.
    std::map<std::pair<int, int>, int> freq;
    for (const auto& [mono, coeff] : result.quadratic.terms()) {
      if (mono.size() < 3) continue;
      for (std::size_t i = 0; i < mono.size(); ++i)
        for (std::size_t j = i + 1; j < mono.size(); ++j)
          ++freq[{mono[i], mono[j]}];
    }
    std::pair<int, int> best{-1, -1};
    int best_count = 0;
    for (const auto& [pair, count] : freq) {
      if (count > best_count) {
        best = pair;
        best_count = count;
      }
    }

    const int aux = next_aux++;
    result.aux_pairs.push_back(best);

    Polynomial reduced;
    double affected_abs = 0.0;
    for (const auto& [mono, coeff] : result.quadratic.terms()) {
      const bool hit = mono.size() >= 3 &&
                       std::binary_search(mono.begin(), mono.end(), best.first) &&
                       std::binary_search(mono.begin(), mono.end(), best.second);
      if (!hit) {
        reduced.add(mono, coeff);
        continue;
      }
      affected_abs += std::abs(coeff);
      Polynomial::Monomial repl;
      for (int v : mono)
        if (v != best.first && v != best.second) repl.push_back(v);
      repl.push_back(aux);
      reduced.add(std::move(repl), coeff);
    }

    // Exactness penalty: zero when y = x_i x_j, at least P otherwise.
    const double penalty = 2.0 * affected_abs;
    reduced.add({best.first, best.second}, penalty);
    reduced.add({best.first, aux}, -2.0 * penalty);
    reduced.add({best.second, aux}, -2.0 * penalty);
    reduced.add({aux}, 3.0 * penalty);
    result.quadratic = std::move(reduced);
  }
  return result;
}

QuboModel assemble(const std::vector<RecordTerm>& terms, int num_angles,
                   int partitions, double lambda) {
  if (terms.empty()) throw std::invalid_argument("no record terms");
  const double inv_r = 1.0 / static_cast<double>(terms.size());

  Polynomial loss;
  for (const RecordTerm& rt : terms) {
    Polynomial record_loss;
    for (const Polynomial& res : rt.residuals) record_loss += res * res;
    record_loss *= inv_r;
    loss += record_loss;
  }

  if (lambda <= 0.0) lambda = 2.0 * loss.abs_coeff_sum();

  const int n_primary = num_angles * partitions;
  QuadratizeResult reduced = quadratize(loss, n_primary);

  // lambda * (sum_p C_{i,p} - 1)^2 = lambda * (1 - sum_p C + 2 sum_{p<p'} C C')
  for (int i = 0; i < num_angles; ++i) {
    reduced.quadratic.add_constant(lambda);
    for (int p = 0; p < partitions; ++p) {
      reduced.quadratic.add({var_index(i, p, partitions)}, -lambda);
      for (int p2 = p + 1; p2 < partitions; ++p2)
        reduced.quadratic.add(
            {var_index(i, p, partitions), var_index(i, p2, partitions)}, 2.0 * lambda);
    }
  }

  QuboModel model;
  model.n_primary = n_primary;
  model.n_vars = n_primary + static_cast<int>(reduced.aux_pairs.size());
  model.penalty_weight = lambda;
  model.aux_pairs = std::move(reduced.aux_pairs);
  model.linear.assign(model.n_vars, 0.0);
  for (const auto& [mono, coeff] : reduced.quadratic.terms()) {
    if (mono.empty())
      model.offset += coeff;
    else if (mono.size() == 1)
      model.linear[mono[0]] += coeff;
    else if (mono.size() == 2)
      model.quadratic[{mono[0], mono[1]}] += coeff;
    else
      throw std::logic_error("quadratization left a high-degree monomial");
  }
  return model;
}

std::string format_qubo(const QuboModel& model) {
  std::ostringstream os;
  os.precision(17);
  os << model.n_vars << " " << model.offset << "\n";
  for (int i = 0; i < model.n_vars; ++i)
    if (model.linear[i] != 0.0) os << i << " " << i << " " << model.linear[i] << "\n";
  for (const auto& [pair, coeff] : model.quadratic)
    if (coeff != 0.0) os << pair.first << " " << pair.second << " " << coeff << "\n";
  return os.str();
}

void write_qubo(const QuboModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << format_qubo(model);
}

}  // namespace vqt::qubo
