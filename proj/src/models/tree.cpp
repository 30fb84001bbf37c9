#include "tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

namespace sra::detail {

double Tree::predict(std::span<const double> x) const {
  std::size_t i = 0;
  while (nodes_[i].feature >= 0) {
    const auto& n = nodes_[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                                       : n.right);
  }
  return nodes_[i].value;
}

int Tree::depth() const {
  std::vector<int> d(nodes_.size(), 0);
  int best = 0;
  // Children are always stored after their parent.
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (nodes_[i].feature >= 0) {
      d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
    }
  }
  return best;
}

namespace {

class Grower {
 public:
  Grower(const Matrix& x, std::span<const double> a, std::span<const double> b,
         const TreeOptions& opt, Rng& rng)
      : x_(x), a_(a), b_(b), opt_(opt), rng_(rng) {}

  std::vector<TreeNode> run() {
    std::vector<std::size_t> rows(x_.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    grow(rows, 0);
    return std::move(nodes_);
  }

 private:
  double quality(double a, double b) const {
    switch (opt_.criterion) {
      case Criterion::Gini:
        return b > 0.0 ? -2.0 * a * (b - a) / b : 0.0;
      case Criterion::SquaredError:
        return b > 0.0 ? a * a / b : 0.0;
      case Criterion::Newton:
        return a * a / (b + opt_.lambda);
    }
    return 0.0;
  }

  double leaf_value(double a, double b) const {
    switch (opt_.criterion) {
      case Criterion::Gini:
      case Criterion::SquaredError:
        return b > 0.0 ? a / b : 0.0;
      case Criterion::Newton:
        return -a / (b + opt_.lambda);
    }
    return 0.0;
  }

  std::vector<std::size_t> candidate_features() {
    const std::size_t d = x_.cols();
    std::vector<std::size_t> f(d);
    std::iota(f.begin(), f.end(), std::size_t{0});
    if (opt_.max_features == 0 || opt_.max_features >= d) return f;
    // Partial Fisher-Yates, then ascending order for the tie-break rule.
    for (std::size_t i = 0; i < opt_.max_features; ++i) {
      const auto j = i + static_cast<std::size_t>(rng_.below(d - i));
      std::swap(f[i], f[j]);
    }
    f.resize(opt_.max_features);
    std::sort(f.begin(), f.end());
    return f;
  }

  int grow(std::vector<std::size_t>& rows, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();

    double sa = 0.0, sb = 0.0;
    for (auto r : rows) {
      sa += a_[r];
      sb += b_[r];
    }
    nodes_[static_cast<std::size_t>(id)].value = leaf_value(sa, sb);

    const bool pure = opt_.criterion == Criterion::Gini && (sa <= 0.0 || sa >= sb);
    if (depth >= opt_.max_depth || rows.size() < 2 * opt_.min_leaf || rows.size() < 2 || pure) {
      return id;
    }

    const double parent_q = quality(sa, sb);
    double best_gain = -std::numeric_limits<double>::infinity();
    int best_feature = -1;
    double best_threshold = 0.0;

    std::vector<std::pair<double, std::size_t>> sorted(rows.size());
    for (auto f : candidate_features()) {
      for (std::size_t i = 0; i < rows.size(); ++i) sorted[i] = {x_(rows[i], f), rows[i]};
      std::sort(sorted.begin(), sorted.end());
      double la = 0.0, lb = 0.0;
      for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        la += a_[sorted[i].second];
        lb += b_[sorted[i].second];
        const double v = sorted[i].first, next = sorted[i + 1].first;
        if (v == next) continue;
        const std::size_t n_left = i + 1, n_right = sorted.size() - n_left;
        if (n_left < opt_.min_leaf || n_right < opt_.min_leaf) continue;
        if (opt_.criterion == Criterion::Newton &&
            (lb < opt_.min_child_hessian || sb - lb < opt_.min_child_hessian)) {
          continue;
        }
        const double gain = quality(la, lb) + quality(sa - la, sb - lb) - parent_q;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          double thr = v + (next - v) / 2.0;
          if (!(thr < next)) thr = v;
          best_threshold = thr;
        }
      }
    }

    if (best_feature < 0) return id;
    // Gini splits are taken even at zero gain so that depth can resolve
    // interactions (XOR) invisible to a single split.
    if (opt_.criterion != Criterion::Gini && !(best_gain > 0.0)) return id;

    std::vector<std::size_t> left, right;
    for (auto r : rows) {
      (x_(r, static_cast<std::size_t>(best_feature)) <= best_threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    auto& node = nodes_[static_cast<std::size_t>(id)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  const Matrix& x_;
  std::span<const double> a_, b_;
  const TreeOptions& opt_;
  Rng& rng_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

Tree grow_tree(const Matrix& x, std::span<const double> a, std::span<const double> b,
               const TreeOptions& options, Rng& rng) {
  return Tree(Grower(x, a, b, options, rng).run());
}

}  // namespace sra::detail
