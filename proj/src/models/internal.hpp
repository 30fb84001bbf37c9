#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>

#include "sra/data.hpp"
#include "sra/error.hpp"
#include "sra/models.hpp"

namespace sra::detail {

using ScorerPtr = std::shared_ptr<const Scorer>;

// Each trainer receives features already preprocessed as its kind requires.
ScorerPtr fit_logistic_regression(const ModelSpec& spec, const Matrix& x, const Labels& y);
ScorerPtr fit_linear_svm(const ModelSpec& spec, const Matrix& x, const Labels& y,
                         std::uint64_t seed);
ScorerPtr fit_lda(const ModelSpec& spec, const Matrix& x, const Labels& y);
ScorerPtr fit_gaussian_nb(const ModelSpec& spec, const Matrix& x, const Labels& y);
ScorerPtr fit_bernoulli_nb(const ModelSpec& spec, const Matrix& x, const Labels& y);
ScorerPtr fit_decision_tree(const ModelSpec& spec, const Matrix& x, const Labels& y,
                            std::uint64_t seed);
ScorerPtr fit_random_forest(const ModelSpec& spec, const Dataset& ds, std::uint64_t seed);
ScorerPtr fit_bagging(const ModelSpec& spec, const Dataset& ds, std::uint64_t seed);
ScorerPtr fit_adaboost(const ModelSpec& spec, const Matrix& x, const Labels& y);
ScorerPtr fit_gbm(const ModelSpec& spec, const Matrix& x, const Labels& y);
ScorerPtr fit_newton_boosted(const ModelSpec& spec, const Matrix& x, const Labels& y);
ScorerPtr fit_mlp(const ModelSpec& spec, const Matrix& x, const Labels& y, std::uint64_t seed);

inline std::size_t count_param(const ModelSpec& spec, const std::string& key) {
  return static_cast<std::size_t>(spec.param(key));
}

inline void check_finite(double loss, const ModelSpec& spec, std::size_t iteration) {
  if (!std::isfinite(loss)) {
    throw NumericalError(spec.name + " (" + std::string(kind_name(spec.kind)) +
                         "): non-finite loss at iteration " + std::to_string(iteration));
  }
}

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
inline double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

}  // namespace sra::detail
