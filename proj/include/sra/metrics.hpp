#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sra/data.hpp"

namespace sra {

/// One performance value per algorithm, in pool order.
struct PerformanceVector {
  std::vector<std::string> names;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  /// Throws ConfigError on length mismatch, duplicate names or non-finite values.
  void validate() const;
};

struct DiscordantPair {
  std::string name_i, name_j;
  double r_i, r_j, s_i, s_j;

  bool operator==(const DiscordantPair&) const = default;
};

struct ConcordanceReport {
  double sra = 0.0;
  std::size_t concordant_pairs = 0;
  std::size_t tied_pairs = 0;
  std::vector<DiscordantPair> discordant;

  bool operator==(const ConcordanceReport&) const = default;
};

/// Area under the ROC curve by the Mann-Whitney rank sum, with midranks
/// for tied scores. Throws DegenerateDataError if only one class is present.
double auroc(std::span<const double> scores, std::span<const int> labels);

/// Synthetic ranking agreement: the fraction of ordered pairs (i, j), i != j,
/// with (R_i - R_j)(S_i - S_j) > 0. A pair whose R or S difference has
/// magnitude <= tie_epsilon is tied and contributes zero.
ConcordanceReport sra(const PerformanceVector& real, const PerformanceVector& synthetic,
                      double tie_epsilon = 0.0);

/// Mean of the values. Throws ConfigError when empty.
double tstr(const PerformanceVector& synthetic_trained_real_tested);

/// (concordant - discordant) / (k(k-1)/2). Only defined without ties;
/// throws ConfigError otherwise.
double kendall_tau(const PerformanceVector& real, const PerformanceVector& synthetic);

}  // namespace sra
