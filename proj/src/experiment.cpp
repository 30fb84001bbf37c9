#include "sra/experiment.hpp"

#include <bit>
#include <cmath>
#include <set>

#include "parallel.hpp"
#include "sra/error.hpp"
#include "sra/random.hpp"

namespace sra {

void EvalConfig::validate() const {
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
    throw ConfigError("split ratio must be in (0,1)");
  }
  if (!(tie_epsilon >= 0.0)) throw ConfigError("tie epsilon must be >= 0");
  if (model_pool.size() < 2) throw ConfigError("pool must contain ≥ 2 models");
  std::set<std::string> names;
  for (const auto& spec : model_pool) {
    spec.validate();
    if (!names.insert(spec.name).second) {
      throw ConfigError("duplicate model name '" + spec.name + "' in pool");
    }
  }
}

DerivedSeeds DerivedSeeds::from(const EvalConfig& cfg) {
  DerivedSeeds s{derive_seed(cfg.master_seed, "split"), {}};
  for (const auto& spec : cfg.model_pool) {
    s.model.push_back(derive_seed(cfg.master_seed, "model/" + spec.name));
  }
  return s;
}

PerformanceVector RankingReport::real_vector() const {
  PerformanceVector v;
  for (const auto& a : per_algorithm) {
    v.names.push_back(a.name);
    v.values.push_back(a.real);
  }
  return v;
}

PerformanceVector RankingReport::synthetic_vector() const {
  PerformanceVector v;
  for (const auto& a : per_algorithm) {
    v.names.push_back(a.name);
    v.values.push_back(a.synthetic);
  }
  return v;
}

PerformanceVector RankingReport::tstr_vector() const {
  PerformanceVector v;
  for (const auto& a : per_algorithm) {
    v.names.push_back(a.name);
    v.values.push_back(a.tstr);
  }
  return v;
}

void verify_consistency(const RankingReport& report) {
  const auto conc = sra::sra(report.real_vector(), report.synthetic_vector(),
                             report.config.tie_epsilon);
  if (conc.sra != report.sra) throw Error("report sra does not match its per-algorithm values");
  if (!(conc == report.concordance)) {
    throw Error("report concordance does not match its per-algorithm values");
  }
  if (sra::tstr(report.tstr_vector()) != report.tstr) {
    throw Error("report tstr does not match its per-algorithm values");
  }
  if (sra::tstr(report.real_vector()) != report.trtr) {
    throw Error("report trtr does not match its per-algorithm values");
  }
}

namespace {

SplitPair split_named(const Dataset& ds, const EvalConfig& cfg, std::uint64_t seed,
                      const char* which) {
  try {
    return split(ds, cfg.split_ratio, seed);
  } catch (const DegenerateDataError& e) {
    throw DegenerateDataError(std::string(which) + " dataset: " + e.what());
  }
}

double test_auroc(const TrainedModel& model, const Dataset& test, const char* which) {
  try {
    const auto scores = model.score(test.features());
    return auroc(scores, test.labels());
  } catch (const DegenerateDataError& e) {
    throw DegenerateDataError(std::string(which) + " test set: " + e.what());
  }
}

// Trains the pool on D1 and scores it on D2. Computed once per sweep.
struct RealSide {
  SplitPair split;
  std::vector<double> performance;
};

RealSide evaluate_real(const Dataset& real, const EvalConfig& cfg, const DerivedSeeds& seeds) {
  RealSide side{split_named(real, cfg, seeds.split, "real"), {}};
  const std::size_t k = cfg.model_pool.size();
  side.performance.resize(k);
  detail::parallel_for(k, cfg.workers, [&](std::size_t i) {
    const auto model = train(cfg.model_pool[i], side.split.train, seeds.model[i]);
    side.performance[i] = test_auroc(model, side.split.test, "real");
  });
  return side;
}

RankingReport evaluate_synthetic(const RealSide& real_side, const Dataset& synthetic,
                                 const EvalConfig& cfg, const DerivedSeeds& seeds,
                                 std::size_t workers) {
  if (synthetic.dim() != real_side.split.train.dim()) {
    throw ConfigError("real data has " + std::to_string(real_side.split.train.dim()) +
                      " features but synthetic data has " + std::to_string(synthetic.dim()));
  }
  const SplitPair syn = split_named(synthetic, cfg, seeds.split, "synthetic");
  const std::size_t k = cfg.model_pool.size();
  std::vector<double> s(k), t(k);
  detail::parallel_for(k, workers, [&](std::size_t i) {
    const auto model = train(cfg.model_pool[i], syn.train, seeds.model[i]);
    s[i] = test_auroc(model, syn.test, "synthetic");
    t[i] = test_auroc(model, real_side.split.test, "real");
  });

  RankingReport rep;
  for (std::size_t i = 0; i < k; ++i) {
    rep.per_algorithm.push_back({cfg.model_pool[i].name, real_side.performance[i], s[i], t[i]});
  }
  rep.concordance = sra::sra(rep.real_vector(), rep.synthetic_vector(), cfg.tie_epsilon);
  rep.sra = rep.concordance.sra;
  rep.tstr = sra::tstr(rep.tstr_vector());
  rep.trtr = sra::tstr(rep.real_vector());
  rep.config = cfg;
  rep.seeds = seeds;
  return rep;
}

void check_dims(const Dataset& real, const Dataset& synthetic) {
  if (real.dim() != synthetic.dim()) {
    throw ConfigError("real data has " + std::to_string(real.dim()) +
                      " features but synthetic data has " + std::to_string(synthetic.dim()));
  }
}

}  // namespace

RankingReport evaluate(const Dataset& real, const Dataset& synthetic, const EvalConfig& cfg) {
  cfg.validate();
  check_dims(real, synthetic);
  const auto seeds = DerivedSeeds::from(cfg);
  const RealSide side = evaluate_real(real, cfg, seeds);
  return evaluate_synthetic(side, synthetic, cfg, seeds, cfg.workers);
}

const std::vector<double>& default_p_grid() {
  static const std::vector<double> grid = {0.0, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
  return grid;
}

std::uint64_t flip_seed(std::uint64_t master, double p, std::size_t repetition) {
  const std::uint64_t p_bits = std::bit_cast<std::uint64_t>(p == 0.0 ? 0.0 : p);
  return derive_seed(derive_seed(master, "flip", p_bits), "repetition", repetition);
}

namespace {

void mean_std(const std::vector<double>& v, double& mean, double& sd) {
  double sum = 0.0;
  for (double x : v) sum += x;
  mean = sum / static_cast<double>(v.size());
  if (v.size() < 2) {
    sd = 0.0;
    return;
  }
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

SweepResult noise_sweep(const Dataset& real, const std::vector<double>& p_grid,
                        std::size_t repetitions, const EvalConfig& cfg) {
  cfg.validate();
  if (p_grid.empty()) throw ConfigError("p grid must not be empty");
  if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
  for (double p : p_grid) {
    if (!(p >= 0.0 && p < 0.5)) {
      throw ConfigError("flip probability " + std::to_string(p) + " is outside [0, 0.5)");
    }
  }

  const auto seeds = DerivedSeeds::from(cfg);
  const RealSide side = evaluate_real(real, cfg, seeds);
  double trtr = 0.0;
  for (double v : side.performance) trtr += v;
  trtr /= static_cast<double>(side.performance.size());

  const std::size_t cells = p_grid.size() * repetitions;
  std::vector<double> sra_cell(cells), tstr_cell(cells);
  detail::parallel_for(cells, cfg.workers, [&](std::size_t c) {
    const std::size_t pi = c / repetitions, r = c % repetitions;
    const Dataset noisy = flip_labels(real, p_grid[pi], flip_seed(cfg.master_seed, p_grid[pi], r));
    const auto rep = evaluate_synthetic(side, noisy, cfg, seeds, 1);
    sra_cell[c] = rep.sra;
    tstr_cell[c] = rep.tstr;
  });

  SweepResult out;
  out.p_grid = p_grid;
  for (std::size_t pi = 0; pi < p_grid.size(); ++pi) {
    SweepPoint pt{};
    pt.p = p_grid[pi];
    pt.repetitions = repetitions;
    pt.trtr_mean = trtr;
    pt.sra_values.assign(sra_cell.begin() + static_cast<std::ptrdiff_t>(pi * repetitions),
                         sra_cell.begin() + static_cast<std::ptrdiff_t>((pi + 1) * repetitions));
    pt.tstr_values.assign(tstr_cell.begin() + static_cast<std::ptrdiff_t>(pi * repetitions),
                          tstr_cell.begin() + static_cast<std::ptrdiff_t>((pi + 1) * repetitions));
    mean_std(pt.sra_values, pt.sra_mean, pt.sra_std);
    mean_std(pt.tstr_values, pt.tstr_mean, pt.tstr_std);
    out.per_p.push_back(std::move(pt));
  }
  return out;
}

SelectionReport simulate_selection(const PerformanceVector& real,
                                   const PerformanceVector& synthetic, std::uint64_t seed,
                                   std::size_t steps, std::size_t runs) {
  real.validate();
  synthetic.validate();
  if (real.names != synthetic.names) {
    throw ConfigError("real and synthetic performance vectors name different algorithms");
  }
  const std::size_t k = real.size();
  if (k < 2) throw ConfigError("pool must contain ≥ 2 models");
  if (steps < 1) throw ConfigError("steps must be >= 1");
  if (runs < 1) throw ConfigError("runs must be >= 1");

  SelectionReport rep;
  rep.runs = runs;
  rep.steps_per_run = steps;
  std::size_t agree = 0;
  for (std::size_t run = 0; run < runs; ++run) {
    Rng rng(derive_seed(seed, "selection", run));
    std::size_t champ_s = static_cast<std::size_t>(rng.below(k));
    std::size_t champ_r = champ_s;
    SelectionRun trace;
    trace.sequence.push_back(real.names[champ_s]);
    for (std::size_t step = 0; step < steps; ++step) {
      const auto challenger = static_cast<std::size_t>(rng.below(k));
      trace.sequence.push_back(real.names[challenger]);
      if (synthetic.values[challenger] > synthetic.values[champ_s]) champ_s = challenger;
      if (real.values[challenger] > real.values[champ_r]) champ_r = challenger;
    }
    trace.champion_synthetic = real.names[champ_s];
    trace.champion_real = real.names[champ_r];
    agree += champ_s == champ_r ? 1 : 0;
    rep.trace.push_back(std::move(trace));
  }
  rep.final_choice_agreement = static_cast<double>(agree) / static_cast<double>(runs);
  return rep;
}

SelectionReport simulate_selection(const Dataset& real, const Dataset& synthetic,
                                   const EvalConfig& cfg, std::size_t steps, std::size_t runs) {
  if (steps < 1) throw ConfigError("steps must be >= 1");
  if (runs < 1) throw ConfigError("runs must be >= 1");
  const auto rep = evaluate(real, synthetic, cfg);
  return simulate_selection(rep.real_vector(), rep.synthetic_vector(), cfg.master_seed, steps,
                            runs);
}

}  // namespace sra
