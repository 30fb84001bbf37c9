#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sra/data.hpp"
#include "sra/random.hpp"

namespace sra::detail {

// Split quality for a node with per-sample statistics summed into (a, b).
// Gain of a split is q(left) + q(right) - q(parent).
//   Gini:         a = sum w*y, b = sum w;  q = -2a(b-a)/b, leaf = a/b
//   SquaredError: a = sum r,   b = count;  q = a^2/b,      leaf = a/b
//   Newton:       a = sum g,   b = sum h;  q = a^2/(b+l),  leaf = -a/(b+l)
enum class Criterion { Gini, SquaredError, Newton };

struct TreeOptions {
  Criterion criterion = Criterion::Gini;
  int max_depth = 8;
  std::size_t min_leaf = 5;
  std::size_t max_features = 0;  // 0: every feature at every split
  double lambda = 1.0;           // Newton only
  double min_child_hessian = 0.0;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

class Tree {
 public:
  Tree() = default;
  explicit Tree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  double predict(std::span<const double> x) const;
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  int depth() const;

 private:
  std::vector<TreeNode> nodes_;
};

// Grows a binary tree over every row of `x`. Rows go left when
// x[feature] <= threshold. Among equal-gain candidates the lowest feature
// index wins, then the lowest threshold. `rng` is only consulted when
// max_features is below the dimension.
Tree grow_tree(const Matrix& x, std::span<const double> a, std::span<const double> b,
               const TreeOptions& options, Rng& rng);

}  // namespace sra::detail
