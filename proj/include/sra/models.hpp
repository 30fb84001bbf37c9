#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sra/data.hpp"

namespace sra {

enum class ModelKind {
  LogisticRegression,
  RandomForest,
  GaussianNB,
  BernoulliNB,
  LinearSVM,
  DecisionTree,
  LDA,
  AdaBoost,
  Bagging,
  GBM,
  MLP,
  NewtonBoostedTrees,
};

inline constexpr std::size_t kModelKindCount = 12;

std::string_view kind_name(ModelKind kind);
/// Throws ConfigError listing the valid names.
ModelKind parse_kind(std::string_view name);
const std::vector<ModelKind>& all_kinds();

using Hyperparameters = std::map<std::string, double>;

struct ModelSpec {
  ModelKind kind;
  Hyperparameters params;
  std::string name;

  /// Spec with every hyperparameter at its default and name = kind name.
  static ModelSpec defaults(ModelKind kind);
  /// Returns a copy with `key` overridden. Throws ConfigError for keys the
  /// kind does not define.
  ModelSpec with(const std::string& key, double value) const;

  double param(const std::string& key) const;
  /// Throws ConfigError on unknown keys or out-of-range values.
  void validate() const;
};

/// "all" or a comma-separated list of kind names, each with default
/// hyperparameters. Throws ConfigError on unknown or repeated names.
std::vector<ModelSpec> parse_pool(std::string_view selection);
std::vector<ModelSpec> default_pool();

using ScoreVector = std::vector<double>;

namespace detail {
class Scorer {
 public:
  virtual ~Scorer() = default;
  /// Real-valued score, larger means more likely label 1.
  virtual double score_row(std::span<const double> x) const = 0;
};
}  // namespace detail

/// An immutable fitted model. Copies share the fitted parameters.
class TrainedModel {
 public:
  TrainedModel(ModelSpec spec, std::size_t dim, std::shared_ptr<const detail::Scorer> scorer,
               std::optional<StandardizationStats> preprocessing);

  const ModelSpec& spec() const { return spec_; }
  std::size_t dim() const { return dim_; }
  const std::optional<StandardizationStats>& preprocessing() const { return preprocessing_; }

  /// One finite score per row. Throws ConfigError on dimension mismatch.
  ScoreVector score(const Matrix& features) const;

 private:
  ModelSpec spec_;
  std::size_t dim_;
  std::shared_ptr<const detail::Scorer> scorer_;
  std::optional<StandardizationStats> preprocessing_;
};

/// Fits `spec` on `train_set`, deterministic in (spec, train_set, seed).
/// Throws DegenerateDataError for single-class training data and
/// NumericalError if the loss diverges.
TrainedModel train(const ModelSpec& spec, const Dataset& train_set, std::uint64_t seed);

inline ScoreVector score(const TrainedModel& model, const Matrix& features) {
  return model.score(features);
}

/// Row indices of a bootstrap resample of size n. Ensembles draw member t's
/// sample from Rng(derive_seed(seed, kBootstrapTag, t)) and grow it with
/// derive_seed(seed, kMemberTag, t).
std::vector<std::size_t> bootstrap_rows(std::size_t n, std::uint64_t seed);
inline constexpr std::string_view kBootstrapTag = "bootstrap";
inline constexpr std::string_view kMemberTag = "member";

}  // namespace sra
