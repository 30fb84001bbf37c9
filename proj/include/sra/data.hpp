#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace sra {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  const std::vector<double>& values() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

using Labels = std::vector<int>;

/// Feature matrix with binary labels. Validated on construction; immutable.
class Dataset {
 public:
  /// Throws InputError if any invariant fails: n >= 1, d >= 1, finite
  /// features, labels in {0,1}, d distinct feature names.
  Dataset(Matrix features, Labels labels, std::vector<std::string> feature_names);

  std::size_t size() const { return features_.rows(); }
  std::size_t dim() const { return features_.cols(); }
  const Matrix& features() const { return features_; }
  const Labels& labels() const { return labels_; }
  const std::vector<std::string>& feature_names() const { return names_; }

  std::size_t count_label(int label) const;
  bool has_both_classes() const { return count_label(0) > 0 && count_label(1) > 0; }

  /// Rows in the given order (duplicates allowed).
  Dataset subset(std::span<const std::size_t> rows) const;
  /// Same features and names, new labels.
  Dataset with_labels(Labels labels) const;
  /// Same labels and names, new features of the same shape.
  Dataset with_features(Matrix features) const;

  bool operator==(const Dataset&) const = default;

 private:
  Matrix features_;
  Labels labels_;
  std::vector<std::string> names_;
};

struct SplitPair {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> train_rows;  // source row indices, ascending
  std::vector<std::size_t> test_rows;
  std::uint64_t seed;
  double ratio;
};

struct StandardizationStats {
  std::vector<double> means;
  std::vector<double> stddevs;  // all > 0

  /// (x - mean) / stddev, column-wise.
  Matrix apply(const Matrix& x) const;
  void apply_row(std::span<const double> in, std::span<double> out) const;
};

struct Standardized {
  Dataset train;
  Dataset test;
  StandardizationStats stats;
};

/// Reads a headered, comma-separated file. `label_column` is removed from
/// the features; the remaining columns keep header order.
Dataset load_csv(const std::filesystem::path& path, const std::string& label_column);
Dataset parse_csv(const std::string& text, const std::string& label_column,
                  const std::string& source = "<memory>");

/// Writes features then the label column, values with 17 significant digits.
void write_csv(const Dataset& ds, const std::filesystem::path& path,
               const std::string& label_column = "label");
std::string to_csv(const Dataset& ds, const std::string& label_column = "label");

/// Stratified split. Each class's row indices are shuffled with a generator
/// seeded from `seed` and the first ceil(ratio * n_class) go to train.
SplitPair split(const Dataset& ds, double ratio, std::uint64_t seed);

/// Column statistics from `train` (population stddev), applied to both sets.
StandardizationStats fit_standardization(const Matrix& train);
Standardized standardize(const Dataset& train, const Dataset& test);

/// Each label independently inverted with probability p.
Dataset flip_labels(const Dataset& ds, double p, std::uint64_t seed);

/// Balanced two-class Gaussian mixture. Class means sit at -/+ separation/2
/// along the unit diagonal; each class gets its own random rotation and
/// axis scaling so the optimal boundary is not linear.
Dataset gen_gaussian_mixture(std::size_t n, std::size_t d, double separation,
                             std::uint64_t seed);

}  // namespace sra
