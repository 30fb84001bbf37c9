#include <cmath>
#include <numeric>
#include <vector>

#include "internal.hpp"
#include "sra/random.hpp"

namespace sra::detail {

namespace {

class LinearScorer final : public Scorer {
 public:
  LinearScorer(std::vector<double> w, double bias) : w_(std::move(w)), bias_(bias) {}

  double score_row(std::span<const double> x) const override {
    double z = bias_;
    for (std::size_t j = 0; j < w_.size(); ++j) z += w_[j] * x[j];
    return z;
  }

 private:
  std::vector<double> w_;
  double bias_;
};

}  // namespace

ScorerPtr fit_logistic_regression(const ModelSpec& spec, const Matrix& x, const Labels& y) {
  const double l2 = spec.param("l2");
  const double lr = spec.param("learning_rate");
  const std::size_t epochs = count_param(spec, "epochs");
  const std::size_t n = x.rows(), d = x.cols();
  const double inv_n = 1.0 / static_cast<double>(n);

  std::vector<double> w(d, 0.0), grad(d);
  double bias = 0.0;
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0, loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      auto row = x.row(i);
      double z = bias;
      for (std::size_t j = 0; j < d; ++j) z += w[j] * row[j];
      // Cross-entropy as softplus(z) - y z.
      loss += softplus(z) - (y[i] ? z : 0.0);
      const double err = sigmoid(z) - static_cast<double>(y[i]);
      for (std::size_t j = 0; j < d; ++j) grad[j] += err * row[j];
      grad_b += err;
    }
    double reg = 0.0;
    for (double v : w) reg += v * v;
    check_finite(loss * inv_n + 0.5 * l2 * reg, spec, epoch);
    for (std::size_t j = 0; j < d; ++j) w[j] -= lr * (grad[j] * inv_n + l2 * w[j]);
    bias -= lr * grad_b * inv_n;
  }
  return std::make_shared<LinearScorer>(std::move(w), bias);
}

// Pegasos: primal sub-gradient descent on the regularized hinge loss with
// step 1/(lambda t). The bias rides along as a constant feature.
ScorerPtr fit_linear_svm(const ModelSpec& spec, const Matrix& x, const Labels& y,
                         std::uint64_t seed) {
  const double lambda = spec.param("l2");
  const std::size_t epochs = count_param(spec, "epochs");
  const std::size_t n = x.rows(), d = x.cols();

  std::vector<double> w(d + 1, 0.0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  std::size_t t = 0;
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(order);
    for (auto i : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      auto row = x.row(i);
      const double target = y[i] ? 1.0 : -1.0;
      double margin = w[d];
      for (std::size_t j = 0; j < d; ++j) margin += w[j] * row[j];
      margin *= target;
      const double shrink = 1.0 - eta * lambda;
      for (auto& v : w) v *= shrink;
      if (margin < 1.0) {
        for (std::size_t j = 0; j < d; ++j) w[j] += eta * target * row[j];
        w[d] += eta * target;
      }
    }
    double hinge = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double m = w[d];
      for (std::size_t j = 0; j < d; ++j) m += w[j] * x(i, j);
      hinge += std::max(0.0, 1.0 - (y[i] ? m : -m));
    }
    check_finite(hinge, spec, epoch);
  }
  const double bias = w[d];
  w.pop_back();
  return std::make_shared<LinearScorer>(std::move(w), bias);
}

ScorerPtr fit_lda(const ModelSpec& spec, const Matrix& x, const Labels& y) {
  const double ridge = spec.param("ridge");
  const std::size_t n = x.rows(), d = x.cols();
  std::vector<double> mean[2] = {std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  double count[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const int c = y[i];
    count[c] += 1.0;
    for (std::size_t j = 0; j < d; ++j) mean[c][j] += x(i, j);
  }
  for (int c = 0; c < 2; ++c)
    for (auto& v : mean[c]) v /= count[c];

  // Pooled within-class covariance (divisor n - 2) plus a diagonal ridge.
  Matrix cov(d, d);
  std::vector<double> centered(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) centered[j] = x(i, j) - mean[y[i]][j];
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c <= r; ++c) cov(r, c) += centered[r] * centered[c];
  }
  const double denom = std::max(1.0, static_cast<double>(n) - 2.0);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c <= r; ++c) {
      cov(r, c) /= denom;
      cov(c, r) = cov(r, c);
    }
    cov(r, r) += ridge;
  }

  // Cholesky factor L (lower), then solve L L^T w = mu1 - mu0.
  Matrix l(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    double s = cov(j, j);
    for (std::size_t k = 0; k < j; ++k) s -= l(j, k) * l(j, k);
    if (!(s > 0.0)) {
      throw NumericalError(spec.name + " (LDA): pooled covariance is not positive definite");
    }
    l(j, j) = std::sqrt(s);
    for (std::size_t i = j + 1; i < d; ++i) {
      double t = cov(i, j);
      for (std::size_t k = 0; k < j; ++k) t -= l(i, k) * l(j, k);
      l(i, j) = t / l(j, j);
    }
  }
  std::vector<double> w(d);
  for (std::size_t i = 0; i < d; ++i) {
    double t = mean[1][i] - mean[0][i];
    for (std::size_t k = 0; k < i; ++k) t -= l(i, k) * w[k];
    w[i] = t / l(i, i);
  }
  for (std::size_t i = d; i-- > 0;) {
    double t = w[i];
    for (std::size_t k = i + 1; k < d; ++k) t -= l(k, i) * w[k];
    w[i] = t / l(i, i);
  }

  double bias = std::log(count[1] / count[0]);
  for (std::size_t j = 0; j < d; ++j) bias -= 0.5 * w[j] * (mean[0][j] + mean[1][j]);
  for (double v : w) check_finite(v, spec, 0);
  return std::make_shared<LinearScorer>(std::move(w), bias);
}

}  // namespace sra::detail
