#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "internal.hpp"

namespace sra::detail {

namespace {

class GaussianNBScorer final : public Scorer {
 public:
  struct ClassModel {
    double log_prior = 0.0;
    std::vector<double> mean, var;
  };

  GaussianNBScorer(ClassModel c0, ClassModel c1) : cls_{std::move(c0), std::move(c1)} {}

  double score_row(std::span<const double> x) const override {
    return log_joint(cls_[1], x) - log_joint(cls_[0], x);
  }

 private:
  static double log_joint(const ClassModel& c, std::span<const double> x) {
    double s = c.log_prior;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double diff = x[j] - c.mean[j];
      s -= 0.5 * (std::log(2.0 * std::numbers::pi * c.var[j]) + diff * diff / c.var[j]);
    }
    return s;
  }

  ClassModel cls_[2];
};

class BernoulliNBScorer final : public Scorer {
 public:
  BernoulliNBScorer(std::vector<double> thresholds, std::vector<double> w_on,
                    std::vector<double> w_off, double bias)
      : thresholds_(std::move(thresholds)), w_on_(std::move(w_on)), w_off_(std::move(w_off)),
        bias_(bias) {}

  double score_row(std::span<const double> x) const override {
    double s = bias_;
    for (std::size_t j = 0; j < x.size(); ++j) s += x[j] > thresholds_[j] ? w_on_[j] : w_off_[j];
    return s;
  }

 private:
  std::vector<double> thresholds_;
  std::vector<double> w_on_, w_off_;  // per-feature log-likelihood ratios
  double bias_;
};

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return lo + (hi - lo) / 2.0;
}

}  // namespace

ScorerPtr fit_gaussian_nb(const ModelSpec& spec, const Matrix& x, const Labels& y) {
  const std::size_t n = x.rows(), d = x.cols();
  GaussianNBScorer::ClassModel cls[2];
  double count[2] = {0.0, 0.0};
  for (auto& c : cls) {
    c.mean.assign(d, 0.0);
    c.var.assign(d, 0.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    count[y[i]] += 1.0;
    for (std::size_t j = 0; j < d; ++j) cls[y[i]].mean[j] += x(i, j);
  }
  for (int c = 0; c < 2; ++c)
    for (auto& m : cls[c].mean) m /= count[c];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = x(i, j) - cls[y[i]].mean[j];
      cls[y[i]].var[j] += diff * diff;
    }
  }

  // Smoothing: a fraction of the largest per-feature variance over all rows.
  double max_var = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x(i, j);
    mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) ss += (x(i, j) - mean) * (x(i, j) - mean);
    max_var = std::max(max_var, ss / static_cast<double>(n));
  }
  double eps = spec.param("var_smoothing") * max_var;
  if (!(eps > 0.0)) eps = spec.param("var_smoothing");

  for (int c = 0; c < 2; ++c) {
    cls[c].log_prior = std::log(count[c] / static_cast<double>(n));
    for (auto& v : cls[c].var) v = v / count[c] + eps;
  }
  return std::make_shared<GaussianNBScorer>(std::move(cls[0]), std::move(cls[1]));
}

ScorerPtr fit_bernoulli_nb(const ModelSpec& spec, const Matrix& x, const Labels& y) {
  const double alpha = spec.param("alpha");
  const std::size_t n = x.rows(), d = x.cols();
  std::vector<double> thresholds(d);
  std::vector<double> column(n);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) column[i] = x(i, j);
    thresholds[j] = median(column);
  }

  double count[2] = {0.0, 0.0};
  std::vector<double> on[2] = {std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    count[y[i]] += 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      if (x(i, j) > thresholds[j]) on[y[i]][j] += 1.0;
    }
  }

  std::vector<double> w_on(d), w_off(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double p1 = (on[1][j] + alpha) / (count[1] + 2.0 * alpha);
    const double p0 = (on[0][j] + alpha) / (count[0] + 2.0 * alpha);
    w_on[j] = std::log(p1) - std::log(p0);
    w_off[j] = std::log1p(-p1) - std::log1p(-p0);
  }
  const double bias = std::log(count[1]) - std::log(count[0]);
  return std::make_shared<BernoulliNBScorer>(std::move(thresholds), std::move(w_on),
                                             std::move(w_off), bias);
}

}  // namespace sra::detail
