#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sra/data.hpp"
#include "sra/metrics.hpp"
#include "sra/models.hpp"

namespace sra {

struct EvalConfig {
  double split_ratio = 0.8;
  std::uint64_t master_seed = 0;
  std::vector<ModelSpec> model_pool = default_pool();
  double tie_epsilon = 0.0;
  // Upper bound on concurrent training tasks. Never changes results.
  std::size_t workers = 1;

  /// Throws ConfigError: pool needs >= 2 uniquely named valid specs,
  /// split_ratio in (0,1), tie_epsilon >= 0.
  void validate() const;
};

/// Seeds every run derives from master_seed. Real and synthetic data share
/// the split seed and each model's training seed, so identical inputs give
/// identical models on both sides.
struct DerivedSeeds {
  std::uint64_t split;
  std::vector<std::uint64_t> model;  // pool order

  static DerivedSeeds from(const EvalConfig& cfg);
};

struct AlgorithmResult {
  std::string name;
  double real;       // R_i: trained on D1, tested on D2
  double synthetic;  // S_i: trained on DG1, tested on DG2
  double tstr;       // trained on DG1, tested on D2

  bool operator==(const AlgorithmResult&) const = default;
};

struct RankingReport {
  std::vector<AlgorithmResult> per_algorithm;
  double sra = 0.0;
  double tstr = 0.0;
  double trtr = 0.0;
  ConcordanceReport concordance;
  EvalConfig config;
  DerivedSeeds seeds;

  PerformanceVector real_vector() const;
  PerformanceVector synthetic_vector() const;
  PerformanceVector tstr_vector() const;
};

/// Recomputes sra, tstr, trtr and the concordance from per_algorithm and
/// throws Error if any stored aggregate differs.
void verify_consistency(const RankingReport& report);

RankingReport evaluate(const Dataset& real, const Dataset& synthetic, const EvalConfig& cfg);

struct SweepPoint {
  double p;
  std::size_t repetitions;
  double sra_mean, sra_std;
  double tstr_mean, tstr_std;
  double trtr_mean;
  std::vector<double> sra_values;  // one per repetition
  std::vector<double> tstr_values;
};

struct SweepResult {
  std::vector<double> p_grid;
  std::vector<SweepPoint> per_p;
};

const std::vector<double>& default_p_grid();

/// Flip seed for one sweep cell. Keyed by the value of p rather than its
/// position so that editing the grid leaves other points unchanged.
std::uint64_t flip_seed(std::uint64_t master, double p, std::size_t repetition);

/// Label-flip sweep: for each p and repetition, synthetic = flip_labels(real)
/// and the pair is evaluated. Standard deviations use the n-1 divisor and
/// are 0 for a single repetition.
SweepResult noise_sweep(const Dataset& real, const std::vector<double>& p_grid,
                        std::size_t repetitions, const EvalConfig& cfg);

struct SelectionRun {
  std::vector<std::string> sequence;  // initial champion, then challengers
  std::string champion_synthetic;
  std::string champion_real;
};

struct SelectionReport {
  std::size_t runs = 0;
  std::size_t steps_per_run = 0;
  double final_choice_agreement = 0.0;
  std::vector<SelectionRun> trace;
};

/// Champion/challenger walk over fixed performance vectors. Each run draws
/// an initial champion and `steps` challengers uniformly from the pool;
/// a challenger takes over only when strictly better. One walk is guided by
/// S, the other by R, over the same sequence.
SelectionReport simulate_selection(const PerformanceVector& real,
                                   const PerformanceVector& synthetic, std::uint64_t seed,
                                   std::size_t steps, std::size_t runs);

/// Computes R and S with evaluate(), then runs the walk.
SelectionReport simulate_selection(const Dataset& real, const Dataset& synthetic,
                                   const EvalConfig& cfg, std::size_t steps, std::size_t runs);

}  // namespace sra
