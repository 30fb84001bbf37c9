#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "internal.hpp"
#include "sra/random.hpp"

namespace sra::detail {

namespace {

struct MlpWeights {
  std::size_t in = 0, hidden = 0;
  std::vector<double> w1;  // hidden x in, row-major
  std::vector<double> b1;
  std::vector<double> w2;
  double b2 = 0.0;
};

class MlpScorer final : public Scorer {
 public:
  MlpScorer(MlpWeights w, double clamp) : w_(std::move(w)), clamp_(clamp) {}

  // Output logit; the sigmoid is monotone so AUROC is unaffected.
  double score_row(std::span<const double> x) const override {
    double z = w_.b2;
    for (std::size_t h = 0; h < w_.hidden; ++h) {
      double a = w_.b1[h];
      for (std::size_t j = 0; j < w_.in; ++j) {
        a += w_.w1[h * w_.in + j] * std::clamp(x[j], -clamp_, clamp_);
      }
      if (a > 0.0) z += w_.w2[h] * a;
    }
    return z;
  }

 private:
  MlpWeights w_;
  double clamp_;
};

}  // namespace

// One hidden ReLU layer, sigmoid output, mean cross-entropy per mini-batch,
// plain SGD. Weights start uniform in +/- sqrt(6 / fan_in), biases at zero.
ScorerPtr fit_mlp(const ModelSpec& spec, const Matrix& x, const Labels& y, std::uint64_t seed) {
  const std::size_t hidden = count_param(spec, "hidden");
  const double lr = spec.param("learning_rate");
  const std::size_t epochs = count_param(spec, "epochs");
  const std::size_t batch = count_param(spec, "batch_size");
  const double clamp = spec.param("input_clamp");
  const std::size_t n = x.rows(), d = x.cols();

  Rng rng(seed);
  MlpWeights w;
  w.in = d;
  w.hidden = hidden;
  w.w1.resize(hidden * d);
  w.b1.assign(hidden, 0.0);
  w.w2.resize(hidden);
  const double lim1 = std::sqrt(6.0 / static_cast<double>(d));
  const double lim2 = std::sqrt(6.0 / static_cast<double>(hidden));
  for (auto& v : w.w1) v = rng.uniform(-lim1, lim1);
  for (auto& v : w.w2) v = rng.uniform(-lim2, lim2);

  Matrix xc(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) xc(i, j) = std::clamp(x(i, j), -clamp, clamp);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> act(hidden), g_w1(hidden * d), g_b1(hidden), g_w2(hidden);
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(order);
    double loss = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t end = std::min(n, start + batch);
      std::fill(g_w1.begin(), g_w1.end(), 0.0);
      std::fill(g_b1.begin(), g_b1.end(), 0.0);
      std::fill(g_w2.begin(), g_w2.end(), 0.0);
      double g_b2 = 0.0;
      for (std::size_t t = start; t < end; ++t) {
        const auto i = order[t];
        auto row = xc.row(i);
        double z = w.b2;
        for (std::size_t h = 0; h < hidden; ++h) {
          double a = w.b1[h];
          for (std::size_t j = 0; j < d; ++j) a += w.w1[h * d + j] * row[j];
          act[h] = a > 0.0 ? a : 0.0;
          z += w.w2[h] * act[h];
        }
        loss += softplus(z) - (y[i] ? z : 0.0);
        const double dz = sigmoid(z) - static_cast<double>(y[i]);
        g_b2 += dz;
        for (std::size_t h = 0; h < hidden; ++h) {
          g_w2[h] += dz * act[h];
          if (act[h] > 0.0) {
            const double da = dz * w.w2[h];
            g_b1[h] += da;
            for (std::size_t j = 0; j < d; ++j) g_w1[h * d + j] += da * row[j];
          }
        }
      }
      const double step = lr / static_cast<double>(end - start);
      for (std::size_t k = 0; k < g_w1.size(); ++k) w.w1[k] -= step * g_w1[k];
      for (std::size_t h = 0; h < hidden; ++h) {
        w.b1[h] -= step * g_b1[h];
        w.w2[h] -= step * g_w2[h];
      }
      w.b2 -= step * g_b2;
    }
    check_finite(loss, spec, epoch);
  }
  return std::make_shared<MlpScorer>(std::move(w), clamp);
}

}  // namespace sra::detail
