#include "sra/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "sra/error.hpp"

namespace sra {

void PerformanceVector::validate() const {
  if (names.size() != values.size()) {
    throw ConfigError("performance vector has " + std::to_string(names.size()) + " names and " +
                      std::to_string(values.size()) + " values");
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!seen.insert(names[i]).second) {
      throw ConfigError("duplicate algorithm name '" + names[i] + "'");
    }
    if (!std::isfinite(values[i])) {
      throw ConfigError("non-finite performance for '" + names[i] + "'");
    }
  }
}

double auroc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw ConfigError("auroc: " + std::to_string(scores.size()) + " scores for " +
                      std::to_string(labels.size()) + " labels");
  }
  const std::size_t n = scores.size();
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw ConfigError("auroc: labels must be 0 or 1");
    if (!std::isfinite(scores[i])) throw NumericalError("auroc: non-finite score");
    n_pos += static_cast<std::size_t>(labels[i]);
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw DegenerateDataError("AUROC is undefined: label vector contains a single class");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Ranks are 1-based; a run of equal scores at positions [i, j) shares
  // the midrank (i + 1 + j) / 2.
  double pos_rank_sum = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) {
      if (labels[order[t]] == 1) pos_rank_sum += midrank;
    }
    i = j;
  }
  const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

namespace {

void check_aligned(const PerformanceVector& r, const PerformanceVector& s) {
  r.validate();
  s.validate();
  if (r.names != s.names) {
    throw ConfigError("real and synthetic performance vectors name different algorithms");
  }
  if (r.size() < 2) throw ConfigError("ranking agreement needs at least 2 algorithms");
}

}  // namespace

ConcordanceReport sra(const PerformanceVector& real, const PerformanceVector& synthetic,
                      double tie_epsilon) {
  check_aligned(real, synthetic);
  if (!(tie_epsilon >= 0.0)) throw ConfigError("tie epsilon must be >= 0");
  ConcordanceReport rep;
  const std::size_t k = real.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double dr = real.values[i] - real.values[j];
      const double ds = synthetic.values[i] - synthetic.values[j];
      if (std::abs(dr) <= tie_epsilon || std::abs(ds) <= tie_epsilon) {
        ++rep.tied_pairs;
      } else if (dr * ds > 0.0) {
        ++rep.concordant_pairs;
      } else {
        rep.discordant.push_back({real.names[i], real.names[j], real.values[i],
                                  real.values[j], synthetic.values[i], synthetic.values[j]});
      }
    }
  }
  // Each concordant unordered pair is two concordant ordered pairs.
  rep.sra = static_cast<double>(2 * rep.concordant_pairs) / static_cast<double>(k * (k - 1));
  return rep;
}

double tstr(const PerformanceVector& synthetic_trained_real_tested) {
  synthetic_trained_real_tested.validate();
  const auto& v = synthetic_trained_real_tested.values;
  if (v.empty()) throw ConfigError("tstr: empty performance vector");
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double kendall_tau(const PerformanceVector& real, const PerformanceVector& synthetic) {
  check_aligned(real, synthetic);
  const std::size_t k = real.size();
  long long score = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double dr = real.values[i] - real.values[j];
      const double ds = synthetic.values[i] - synthetic.values[j];
      if (dr == 0.0 || ds == 0.0) throw ConfigError("kendall_tau: tied values present");
      score += (dr > 0.0) == (ds > 0.0) ? 1 : -1;
    }
  }
  return static_cast<double>(score) / (static_cast<double>(k * (k - 1)) / 2.0);
}

}  // namespace sra
