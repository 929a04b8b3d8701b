#include "vqt/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "vqt/rng.hpp"

namespace vqt::data {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

bool is_missing(const std::string& v) { return v.empty() || v == "?" || v == "NA"; }

bool parse_double(const std::string& v, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(v, &used);
    return used == v.size();
  } catch (...) {
    return false;
  }
}

void shuffle_indices(std::vector<int>& idx, std::mt19937_64& eng) {
  for (std::size_t i = idx.size(); i > 1; --i)
    std::swap(idx[i - 1], idx[rng::uniform_index(eng, i)]);
}

LabeledDataset take_rows(const LabeledDataset& ds, const std::vector<int>& keep) {
  LabeledDataset out;
  out.feature_names = ds.feature_names;
  out.provenance = ds.provenance;
  out.features.resize(static_cast<long>(keep.size()), ds.cols());
  out.labels.reserve(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out.features.row(static_cast<long>(i)) = ds.features.row(keep[i]);
    out.labels.push_back(ds.labels[keep[i]]);
  }
  return out;
}

std::vector<int> class_rows(const LabeledDataset& ds, int label) {
  std::vector<int> idx;
  for (long i = 0; i < ds.rows(); ++i)
    if (ds.labels[i] == label) idx.push_back(static_cast<int>(i));
  return idx;
}

}  // namespace

LabeledDataset load_csv(const std::string& path, const std::string& label_column,
                        const std::vector<std::string>& positive_labels) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty CSV file");
  const std::vector<std::string> header = split_line(line);
  int label_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == label_column) label_col = static_cast<int>(i);
  if (label_col < 0)
    throw std::invalid_argument("label column '" + label_column + "' not found");

  // Collect rows with a parseable label.
  std::vector<std::vector<std::string>> rows;
  std::vector<int> labels;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size()) continue;  // malformed row
    const std::string& lab = cells[label_col];
    if (is_missing(lab)) continue;
    const bool positive = std::find(positive_labels.begin(), positive_labels.end(),
                                    lab) != positive_labels.end();
    labels.push_back(positive ? 1 : 0);
    rows.push_back(std::move(cells));
  }

  // A feature column survives when all its non-missing values are numeric.
  std::vector<int> numeric_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (static_cast<int>(c) == label_col) continue;
    bool numeric = true;
    double tmp = 0.0;
    for (const auto& r : rows)
      if (!is_missing(r[c]) && !parse_double(r[c], tmp)) {
        numeric = false;
        break;
      }
    if (numeric) numeric_cols.push_back(static_cast<int>(c));
  }
  if (numeric_cols.empty())
    throw std::invalid_argument("no numeric feature columns after filtering");

  // Drop rows still missing a value in a retained column.
  std::vector<int> keep;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    bool complete = true;
    for (int c : numeric_cols)
      if (is_missing(rows[r][c])) {
        complete = false;
        break;
      }
    if (complete) keep.push_back(static_cast<int>(r));
  }
  if (keep.empty()) throw std::invalid_argument("no complete rows after filtering");

  LabeledDataset ds;
  ds.features.resize(static_cast<long>(keep.size()),
                     static_cast<long>(numeric_cols.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    ds.labels.push_back(labels[keep[i]]);
    for (std::size_t c = 0; c < numeric_cols.size(); ++c) {
      double v = 0.0;
      parse_double(rows[keep[i]][numeric_cols[c]], v);
      ds.features(static_cast<long>(i), static_cast<long>(c)) = v;
    }
  }
  for (int c : numeric_cols) ds.feature_names.push_back(header[c]);
  ds.provenance.source = path;
  ds.provenance.steps.push_back("load_csv(label=" + label_column + ")");
  return ds;
}

PcaModel fit_pca(const LabeledDataset& fit, int k) {
  const long n = fit.rows();
  const long m = fit.cols();
  if (n < 2) throw std::invalid_argument("need at least two rows to fit PCA");
  if (k < 1 || k > m) throw std::invalid_argument("component count out of range");

  PcaModel model;
  model.mean = fit.features.colwise().mean();
  Eigen::MatrixXd centered = fit.features.rowwise() - model.mean.transpose();
  model.stddev = (centered.array().square().colwise().sum() / (n - 1)).sqrt();
  for (long c = 0; c < m; ++c)
    if (model.stddev[c] < 1e-12) model.stddev[c] = 1.0;  // constant column
  centered.array().rowwise() /= model.stddev.transpose().array();

  const Eigen::MatrixXd cov = centered.transpose() * centered / double(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("covariance eigendecomposition failed");

  // Eigen orders eigenvalues ascending; take the top k, descending.
  model.components.resize(m, k);
  model.eigenvalues.resize(k);
  for (int j = 0; j < k; ++j) {
    const long src = m - 1 - j;
    Eigen::VectorXd axis = eig.eigenvectors().col(src);
    long lead = 0;
    axis.cwiseAbs().maxCoeff(&lead);
    if (axis[lead] < 0.0) axis = -axis;  // deterministic sign
    model.components.col(j) = axis;
    model.eigenvalues[j] = eig.eigenvalues()[src];
  }

  const Eigen::MatrixXd projected = centered * model.components;
  model.out_min = projected.colwise().minCoeff();
  model.out_max = projected.colwise().maxCoeff();
  return model;
}

LabeledDataset apply_pca(const PcaModel& model, const LabeledDataset& ds) {
  if (ds.cols() != model.mean.size())
    throw std::invalid_argument("dataset width does not match the fitted model");
  Eigen::MatrixXd centered = ds.features.rowwise() - model.mean.transpose();
  centered.array().rowwise() /= model.stddev.transpose().array();
  Eigen::MatrixXd projected = centered * model.components;

  const int k = static_cast<int>(model.components.cols());
  for (int j = 0; j < k; ++j) {
    const double span = model.out_max[j] - model.out_min[j];
    for (long i = 0; i < projected.rows(); ++i) {
      double v = span > 1e-12 ? (projected(i, j) - model.out_min[j]) / span : 0.5;
      projected(i, j) = std::clamp(v, 0.0, 1.0);
    }
  }

  LabeledDataset out;
  out.features = std::move(projected);
  out.labels = ds.labels;
  out.provenance = ds.provenance;
  out.provenance.steps.push_back("standardize+pca(k=" + std::to_string(k) +
                                 ")+minmax[0,1]");
  for (int j = 0; j < k; ++j) out.feature_names.push_back("pc" + std::to_string(j));
  return out;
}

LabeledDataset pca_reduce(const LabeledDataset& ds, int k) {
  return apply_pca(fit_pca(ds, k), ds);
}

SplitBundle pca_reduce(const SplitBundle& bundle, int k) {
  const PcaModel model = fit_pca(bundle.train, k);
  return SplitBundle{apply_pca(model, bundle.train), apply_pca(model, bundle.test),
                     apply_pca(model, bundle.validation)};
}

LabeledDataset balance(const LabeledDataset& ds, BalanceMode mode, std::uint64_t seed) {
  const std::vector<int> zeros = class_rows(ds, 0);
  const std::vector<int> ones = class_rows(ds, 1);
  if (zeros.empty() || ones.empty())
    throw std::invalid_argument("balance requires both classes");
  if (zeros.size() == ones.size()) return ds;

  const std::vector<int>& minority = zeros.size() < ones.size() ? zeros : ones;
  const std::vector<int>& majority = zeros.size() < ones.size() ? ones : zeros;
  const int minority_label = zeros.size() < ones.size() ? 0 : 1;
  std::mt19937_64 eng = rng::make_engine(seed, 0xba1ULL);

  if (mode == BalanceMode::Undersample) {
    std::vector<int> pick(majority.begin(), majority.end());
    shuffle_indices(pick, eng);
    pick.resize(minority.size());
    std::vector<int> keep(minority.begin(), minority.end());
    keep.insert(keep.end(), pick.begin(), pick.end());
    std::sort(keep.begin(), keep.end());  // original row order
    LabeledDataset out = take_rows(ds, keep);
    out.provenance.steps.push_back("undersample(seed=" + std::to_string(seed) + ")");
    return out;
  }

  // SMOTE-style oversampling of the minority class.
  const int n_min = static_cast<int>(minority.size());
  const int n_new = static_cast<int>(majority.size()) - n_min;
  const int k_neighbors = std::min(5, n_min - 1);

  // Nearest same-class neighbors by Euclidean distance, ties by index.
  std::vector<std::vector<int>> neighbors(n_min);
  for (int i = 0; i < n_min; ++i) {
    std::vector<std::pair<double, int>> dist;
    for (int j = 0; j < n_min; ++j) {
      if (j == i) continue;
      const double d2 =
          (ds.features.row(minority[i]) - ds.features.row(minority[j])).squaredNorm();
      dist.push_back({d2, j});
    }
    std::sort(dist.begin(), dist.end());
    for (int j = 0; j < k_neighbors; ++j) neighbors[i].push_back(dist[j].second);
  }

  LabeledDataset out;
  out.feature_names = ds.feature_names;
  out.provenance = ds.provenance;
  out.features.resize(ds.rows() + n_new, ds.cols());
  out.features.topRows(ds.rows()) = ds.features;
  out.labels = ds.labels;
  for (int s = 0; s < n_new; ++s) {
    const int a = static_cast<int>(rng::uniform_index(eng, n_min));
    Eigen::RowVectorXd row = ds.features.row(minority[a]);
    if (k_neighbors > 0) {
      const int b = neighbors[a][rng::uniform_index(eng, k_neighbors)];
      const double u = rng::uniform01(eng);
      row += u * (ds.features.row(minority[b]) - row);
    }
    out.features.row(ds.rows() + s) = row;
    out.labels.push_back(minority_label);
  }
  out.provenance.steps.push_back("oversample(seed=" + std::to_string(seed) + ")");
  return out;
}

SplitBundle split(const LabeledDataset& ds, std::uint64_t seed) {
  if (ds.rows() < 5) throw std::invalid_argument("need at least five rows to split");

  std::vector<int> train, test, validation;
  for (int label = 0; label <= 1; ++label) {
    std::vector<int> idx = class_rows(ds, label);
    if (idx.empty()) continue;
    std::mt19937_64 eng = rng::make_engine(seed, 0x5b17ULL, static_cast<std::uint64_t>(label));
    shuffle_indices(idx, eng);
    const int n = static_cast<int>(idx.size());
    const int n_val = static_cast<int>(std::lround(0.2 * n));
    const int n_test = static_cast<int>(std::lround(0.2 * (n - n_val)));
    for (int i = 0; i < n; ++i) {
      if (i < n_val)
        validation.push_back(idx[i]);
      else if (i < n_val + n_test)
        test.push_back(idx[i]);
      else
        train.push_back(idx[i]);
    }
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  std::sort(validation.begin(), validation.end());

  SplitBundle bundle{take_rows(ds, train), take_rows(ds, test),
                     take_rows(ds, validation)};
  const std::string step = "split(seed=" + std::to_string(seed) + ")";
  bundle.train.provenance.steps.push_back(step + "[train]");
  bundle.test.provenance.steps.push_back(step + "[test]");
  bundle.validation.provenance.steps.push_back(step + "[validation]");
  return bundle;
}

LabeledDataset subsample(const LabeledDataset& ds, int size, std::uint64_t seed) {
  if (size <= 0) throw std::invalid_argument("subsample size must be positive");
  if (size >= ds.rows()) return ds;

  // Proportional per-class quotas with largest-remainder rounding.
  const std::vector<int> zeros = class_rows(ds, 0);
  const std::vector<int> ones = class_rows(ds, 1);
  const double frac = static_cast<double>(size) / static_cast<double>(ds.rows());
  int quota0 = static_cast<int>(std::floor(frac * zeros.size()));
  int quota1 = static_cast<int>(std::floor(frac * ones.size()));
  const double rem0 = frac * zeros.size() - quota0;
  const double rem1 = frac * ones.size() - quota1;
  while (quota0 + quota1 < size) {
    if (rem0 >= rem1 && quota0 < static_cast<int>(zeros.size()))
      ++quota0;
    else if (quota1 < static_cast<int>(ones.size()))
      ++quota1;
    else
      ++quota0;
  }

  std::vector<int> keep;
  int label = 0;
  for (const std::vector<int>* cls : {&zeros, &ones}) {
    std::vector<int> idx = *cls;
    std::mt19937_64 eng =
        rng::make_engine(seed, 0x5ab5ULL, static_cast<std::uint64_t>(label));
    shuffle_indices(idx, eng);
    idx.resize(std::min<std::size_t>(idx.size(), label == 0 ? quota0 : quota1));
    keep.insert(keep.end(), idx.begin(), idx.end());
    ++label;
  }
  std::sort(keep.begin(), keep.end());
  LabeledDataset out = take_rows(ds, keep);
  out.provenance.steps.push_back("subsample(" + std::to_string(size) +
                                 ",seed=" + std::to_string(seed) + ")");
  return out;
}

std::vector<std::vector<double>> feature_rows(const LabeledDataset& ds) {
  std::vector<std::vector<double>> rows(ds.rows());
  for (long i = 0; i < ds.rows(); ++i) {
    rows[i].resize(ds.cols());
    for (long c = 0; c < ds.cols(); ++c) rows[i][c] = ds.features(i, c);
  }
  return rows;
}

}  // namespace vqt::data
