#include <cmath>
#include <vector>

#include "internal.hpp"
#include "sra/random.hpp"
#include "tree.hpp"

namespace sra::detail {

namespace {

// Weighted sum of tree outputs plus a constant.
class TreeEnsembleScorer final : public Scorer {
 public:
  TreeEnsembleScorer(std::vector<Tree> trees, std::vector<double> weights, double base)
      : trees_(std::move(trees)), weights_(std::move(weights)), base_(base) {}

  double score_row(std::span<const double> x) const override {
    double s = base_;
    for (std::size_t t = 0; t < trees_.size(); ++t) s += weights_[t] * trees_[t].predict(x);
    return s;
  }

 private:
  std::vector<Tree> trees_;
  std::vector<double> weights_;
  double base_;
};

// Leaf outputs mapped to +/-1 before weighting.
class VoteScorer final : public Scorer {
 public:
  VoteScorer(std::vector<Tree> stumps, std::vector<double> alphas)
      : stumps_(std::move(stumps)), alphas_(std::move(alphas)) {}

  double score_row(std::span<const double> x) const override {
    double s = 0.0;
    for (std::size_t t = 0; t < stumps_.size(); ++t) s += alphas_[t] * vote(stumps_[t].predict(x));
    return s;
  }

  static double vote(double positive_fraction) { return positive_fraction > 0.5 ? 1.0 : -1.0; }

 private:
  std::vector<Tree> stumps_;
  std::vector<double> alphas_;
};

TreeOptions gini_options(const ModelSpec& spec, std::size_t max_features) {
  TreeOptions opt;
  opt.criterion = Criterion::Gini;
  opt.max_depth = static_cast<int>(spec.param("max_depth"));
  opt.min_leaf = count_param(spec, "min_leaf");
  opt.max_features = max_features;
  return opt;
}

Tree grow_classification_tree(const Matrix& x, const Labels& y, const TreeOptions& opt,
                              std::uint64_t seed) {
  std::vector<double> a(y.size()), b(y.size(), 1.0);
  for (std::size_t i = 0; i < y.size(); ++i) a[i] = static_cast<double>(y[i]);
  Rng rng(seed);
  return grow_tree(x, a, b, opt, rng);
}

// Bootstrap resampling shared by RandomForest and Bagging.
ScorerPtr fit_bootstrap_ensemble(const ModelSpec& spec, const Dataset& ds, std::uint64_t seed,
                                 std::size_t max_features) {
  const std::size_t members = count_param(spec, "trees");
  const TreeOptions opt = gini_options(spec, max_features);
  std::vector<Tree> trees;
  trees.reserve(members);
  for (std::size_t t = 0; t < members; ++t) {
    const auto rows = bootstrap_rows(ds.size(), derive_seed(seed, kBootstrapTag, t));
    const Dataset sample = ds.subset(rows);
    trees.push_back(grow_classification_tree(sample.features(), sample.labels(), opt,
                                             derive_seed(seed, kMemberTag, t)));
  }
  std::vector<double> weights(members, 1.0 / static_cast<double>(members));
  return std::make_shared<TreeEnsembleScorer>(std::move(trees), std::move(weights), 0.0);
}

double prior_log_odds(const Labels& y) {
  double pos = 0.0;
  for (int v : y) pos += v;
  const double n = static_cast<double>(y.size());
  return std::log(pos / (n - pos));
}

}  // namespace

ScorerPtr fit_decision_tree(const ModelSpec& spec, const Matrix& x, const Labels& y,
                            std::uint64_t seed) {
  std::vector<Tree> trees{grow_classification_tree(
      x, y, gini_options(spec, count_param(spec, "max_features")), seed)};
  return std::make_shared<TreeEnsembleScorer>(std::move(trees), std::vector<double>{1.0}, 0.0);
}

ScorerPtr fit_random_forest(const ModelSpec& spec, const Dataset& ds, std::uint64_t seed) {
  std::size_t max_features = count_param(spec, "max_features");
  if (max_features == 0) {
    max_features = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(ds.dim()))));
  }
  return fit_bootstrap_ensemble(spec, ds, seed, max_features);
}

ScorerPtr fit_bagging(const ModelSpec& spec, const Dataset& ds, std::uint64_t seed) {
  return fit_bootstrap_ensemble(spec, ds, seed, 0);
}

// Discrete SAMME with two classes: alpha = log((1 - err) / err).
ScorerPtr fit_adaboost(const ModelSpec& spec, const Matrix& x, const Labels& y) {
  const std::size_t rounds = count_param(spec, "estimators");
  const std::size_t n = x.rows();
  TreeOptions opt;
  opt.criterion = Criterion::Gini;
  opt.max_depth = static_cast<int>(spec.param("max_depth"));
  opt.min_leaf = 1;

  std::vector<double> w(n, 1.0 / static_cast<double>(n)), a(n);
  std::vector<Tree> stumps;
  std::vector<double> alphas;
  std::vector<bool> miss(n);
  Rng unused(0);
  for (std::size_t round = 0; round < rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) a[i] = w[i] * y[i];
    Tree stump = grow_tree(x, a, w, opt, unused);

    double err = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool predicted = VoteScorer::vote(stump.predict(x.row(i))) > 0.0;
      miss[i] = predicted != (y[i] == 1);
      total += w[i];
      if (miss[i]) err += w[i];
    }
    err /= total;
    check_finite(err, spec, round);
    if (err >= 0.5) break;  // no better than chance under the current weights

    // A perfect learner gets a large finite weight and ends boosting.
    constexpr double kMinErr = 1e-10;
    const double alpha = std::log((1.0 - std::max(err, kMinErr)) / std::max(err, kMinErr));
    stumps.push_back(std::move(stump));
    alphas.push_back(alpha);
    if (err <= kMinErr) break;

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (miss[i]) w[i] *= std::exp(alpha);
      sum += w[i];
    }
    for (auto& v : w) v /= sum;
  }
  return std::make_shared<VoteScorer>(std::move(stumps), std::move(alphas));
}

// Friedman gradient boosting on the logistic loss: each tree fits the
// residuals y - p by least squares, and its leaf means are added with
// shrinkage.
ScorerPtr fit_gbm(const ModelSpec& spec, const Matrix& x, const Labels& y) {
  const std::size_t rounds = count_param(spec, "estimators");
  const double shrinkage = spec.param("learning_rate");
  const std::size_t n = x.rows();
  TreeOptions opt;
  opt.criterion = Criterion::SquaredError;
  opt.max_depth = static_cast<int>(spec.param("max_depth"));
  opt.min_leaf = count_param(spec, "min_leaf");

  const double base = prior_log_odds(y);
  std::vector<double> f(n, base), residual(n), ones(n, 1.0);
  std::vector<Tree> trees;
  Rng unused(0);
  for (std::size_t round = 0; round < rounds; ++round) {
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      residual[i] = static_cast<double>(y[i]) - sigmoid(f[i]);
      loss += softplus(f[i]) - (y[i] ? f[i] : 0.0);
    }
    check_finite(loss, spec, round);
    Tree tree = grow_tree(x, residual, ones, opt, unused);
    for (std::size_t i = 0; i < n; ++i) f[i] += shrinkage * tree.predict(x.row(i));
    trees.push_back(std::move(tree));
  }
  std::vector<double> weights(trees.size(), shrinkage);
  return std::make_shared<TreeEnsembleScorer>(std::move(trees), std::move(weights), base);
}

// Second-order boosting: gradients g = p - y and hessians h = p(1 - p)
// drive both the split gain and the leaf weights -G/(H + lambda).
ScorerPtr fit_newton_boosted(const ModelSpec& spec, const Matrix& x, const Labels& y) {
  const std::size_t rounds = count_param(spec, "estimators");
  const double shrinkage = spec.param("learning_rate");
  const std::size_t n = x.rows();
  TreeOptions opt;
  opt.criterion = Criterion::Newton;
  opt.max_depth = static_cast<int>(spec.param("max_depth"));
  opt.min_leaf = 1;
  opt.lambda = spec.param("lambda");
  opt.min_child_hessian = spec.param("min_child_weight");

  std::vector<double> f(n, 0.0), g(n), h(n);
  std::vector<Tree> trees;
  Rng unused(0);
  for (std::size_t round = 0; round < rounds; ++round) {
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(f[i]);
      g[i] = p - static_cast<double>(y[i]);
      h[i] = p * (1.0 - p);
      loss += softplus(f[i]) - (y[i] ? f[i] : 0.0);
    }
    check_finite(loss, spec, round);
    Tree tree = grow_tree(x, g, h, opt, unused);
    for (std::size_t i = 0; i < n; ++i) f[i] += shrinkage * tree.predict(x.row(i));
    trees.push_back(std::move(tree));
  }
  std::vector<double> weights(trees.size(), shrinkage);
  return std::make_shared<TreeEnsembleScorer>(std::move(trees), std::move(weights), 0.0);
}

}  // namespace sra::detail
