#pragma once

// Dataset loading and preprocessing for binary classification tasks.
//
// CSV loading keeps only numeric feature columns (a column qualifies when
// every non-missing value parses as a number), binarizes the label column
// against a set of positive class strings, and drops rows that still have
// missing values afterwards.  The PCA path standardizes with training
// statistics, projects onto the top-k principal components and min-max
// rescales each component to [0,1]; fitting always happens on the
// training portion only.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vqt::data {

struct Provenance {
  std::string source;
  std::vector<std::string> steps;
};

struct LabeledDataset {
  Eigen::MatrixXd features;  // rows x columns
  std::vector<int> labels;   // 0/1 per row
  std::vector<std::string> feature_names;
  Provenance provenance;

  long rows() const { return features.rows(); }
  long cols() const { return features.cols(); }
};

struct SplitBundle {
  LabeledDataset train;
  LabeledDataset test;
  LabeledDataset validation;
};

// Throws std::runtime_error on unreadable files and std::invalid_argument
// when the label column is missing or no numeric features / rows survive.
LabeledDataset load_csv(const std::string& path, const std::string& label_column,
                        const std::vector<std::string>& positive_labels);

struct PcaModel {
  Eigen::VectorXd mean;          // standardization, fit on training rows
  Eigen::VectorXd stddev;
  Eigen::MatrixXd components;    // columns are principal axes, descending
  Eigen::VectorXd eigenvalues;   // top-k covariance eigenvalues, descending
  Eigen::VectorXd out_min;       // min-max rescale of the projected outputs
  Eigen::VectorXd out_max;
};

// Fits standardization + PCA + output min-max on `fit` (1 <= k <= columns).
PcaModel fit_pca(const LabeledDataset& fit, int k);

// Applies a fitted model; projected components are clamped into [0,1].
LabeledDataset apply_pca(const PcaModel& model, const LabeledDataset& ds);

// Fit and apply on the same dataset.
LabeledDataset pca_reduce(const LabeledDataset& ds, int k);

// Fit on bundle.train only, apply to all three splits (no leakage).
SplitBundle pca_reduce(const SplitBundle& bundle, int k);

enum class BalanceMode { Oversample, Undersample };

// Equalizes class counts: Oversample grows the minority with SMOTE-style
// synthetic rows (convex combinations x_a + u * (x_b - x_a) of a minority
// row and one of its five nearest same-class neighbors); Undersample
// keeps a random majority subset.  Balanced input is returned unchanged.
// Throws std::invalid_argument when only one class is present.
LabeledDataset balance(const LabeledDataset& ds, BalanceMode mode, std::uint64_t seed);

// Stratified 64/16/20 train/test/validation split: 20% of each class goes
// to validation, then 20% of the remainder to test.  Requires >= 5 rows.
SplitBundle split(const LabeledDataset& ds, std::uint64_t seed);

// Stratified random subset of about `size` rows (proportional per class,
// largest-remainder rounding).  size >= rows returns a copy.
LabeledDataset subsample(const LabeledDataset& ds, int size, std::uint64_t seed);

// Feature matrix as per-row vectors, e.g. for amplitude encoding.
std::vector<std::vector<double>> feature_rows(const LabeledDataset& ds);

}  // namespace vqt::data
