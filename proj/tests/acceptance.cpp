// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "sra/cli.hpp"
#include "sra/data.hpp"
#include "sra/error.hpp"
#include "sra/experiment.hpp"
#include "sra/metrics.hpp"
#include "sra/models.hpp"
#include "sra/random.hpp"
#include "sra/report.hpp"
#include "test_util.hpp"

#ifndef SRA_SCHEMA_DIR
#error "SRA_SCHEMA_DIR must point at the schemas directory"
#endif

using namespace sra;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

PerformanceVector perf(std::vector<double> values) {
  PerformanceVector v;
  for (std::size_t i = 0; i < values.size(); ++i) v.names.push_back("m" + std::to_string(i));
  v.values = std::move(values);
  return v;
}

std::vector<double> distinct_values(Rng& rng, std::size_t k) {
  std::vector<double> v;
  while (v.size() < k) {
    const double x = rng.uniform();
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
  }
  return v;
}

std::string dump(const RankingReport& r) { return report_json(r, RunManifest{}).dump(); }

Outcome ac1_sra_oracle() {
  Outcome o;
  const auto t0 = Clock::now();
  Rng rng(derive_seed(2024, "ac1"));
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = 2 + rng.below(7);
    const auto r = distinct_values(rng, k), s = distinct_values(rng, k);
    const double got = sra::sra(perf(r), perf(s)).sra;
    const std::size_t pairs = k * (k - 1) / 2;
    const auto sra_num = oracle::exact_numerator(got, pairs);
    const auto tau_num = oracle::exact_numerator(kendall_tau(perf(r), perf(s)), pairs);
    const bool ok = got == oracle::sra_ordered_pairs(r, s) && sra_num && tau_num &&
                    2 * *sra_num == *tau_num + static_cast<long long>(pairs);
    if (!ok) ++mismatches;
  }
  const double elapsed = seconds_since(t0);
  o.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
  o.require(elapsed < 5.0, fmt("runtime %.2fs >= 5s", elapsed));
  if (o.pass) o.detail = fmt("1000 instances exact, %.3fs", elapsed);
  return o;
}

Outcome ac2_sra_hand_cases() {
  Outcome o;
  o.require(sra::sra(perf({0.7, 0.8, 0.9}), perf({0.7, 0.8, 0.9})).sra == 1.0, "identity");
  o.require(sra::sra(perf({0.7, 0.8, 0.9}), perf({0.9, 0.8, 0.7})).sra == 0.0, "reversal");
  o.require(sra::sra(perf({0.9, 0.8, 0.7}), perf({0.85, 0.70, 0.75})).sra == 2.0 / 3.0,
            "worked example");
  const auto tied = sra::sra(perf({0.8, 0.7}), perf({0.75, 0.75}));
  o.require(tied.sra == 0.0 && tied.tied_pairs == 1, "tied pair");
  if (o.pass) o.detail = "identity 1, reversal 0, worked example 2/3, tie 0";
  return o;
}

Outcome ac3_auroc_oracle() {
  Outcome o;
  Rng rng(derive_seed(2024, "ac3"));
  double worst = 0.0, worst_complement = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.below(199);
    std::vector<int> y(n);
    std::vector<double> s(n);
    const std::size_t levels = 1 + rng.below(n);  // few levels inject ties
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = rng.uniform() < 0.4 ? 1 : 0;
      s[i] = static_cast<double>(rng.below(levels)) / static_cast<double>(levels);
    }
    y[0] = 1;
    y[1] = 0;
    std::vector<int> inv(n);
    for (std::size_t i = 0; i < n; ++i) inv[i] = 1 - y[i];
    const double a = auroc(s, y);
    worst = std::max(worst, std::abs(a - oracle::auroc_pairs(s, y)));
    worst_complement = std::max(worst_complement, std::abs(a + auroc(s, inv) - 1.0));
  }
  o.require(worst <= 1e-12, fmt("max oracle error %.3g", worst));
  o.require(worst_complement <= 1e-12, fmt("max complement error %.3g", worst_complement));
  if (o.pass)
    o.detail = fmt("500 instances, max error %.3g, complement %.3g", worst, worst_complement);
  return o;
}

struct IdentityRun {
  Dataset data = gen_gaussian_mixture(2000, 5, 3.0, 0);
  RankingReport report;
};

Outcome ac4_identity(IdentityRun& run) {
  Outcome o;
  EvalConfig cfg;
  cfg.master_seed = 0;
  cfg.workers = 1;
  const auto t0 = Clock::now();
  run.report = evaluate(run.data, run.data, cfg);
  const double elapsed = seconds_since(t0);
  const auto& r = run.report;
  o.require(r.per_algorithm.size() == kModelKindCount, "pool is not all 12 kinds");
  for (const auto& a : r.per_algorithm)
    o.require(a.real == a.synthetic, a.name + " S != R");
  o.require(r.sra == 1.0, fmt("sra %.17g", r.sra) + " (tied pairs: " +
                              std::to_string(r.concordance.tied_pairs) + ")");
  o.require(r.tstr == r.trtr, "tstr != trtr");
  o.require(dump(evaluate(run.data, run.data, cfg)) == dump(r), "second run differs");
  cfg.workers = 8;
  o.require(dump(evaluate(run.data, run.data, cfg)) == dump(r), "workers 8 differs");
  o.require(elapsed < 120.0, fmt("runtime %.1fs >= 120s", elapsed));
  if (o.pass) o.detail = fmt("sra 1, tstr = trtr = %.6f, %.2fs per run", r.tstr, elapsed);
  return o;
}

Outcome ac5_noise_sweep(const IdentityRun& run) {
  Outcome o;
  EvalConfig cfg;
  cfg.master_seed = 0;
  cfg.workers = std::max(1u, std::thread::hardware_concurrency());
  const auto t0 = Clock::now();
  const auto sweep = noise_sweep(run.data, default_p_grid(), 10, cfg);
  const double elapsed = seconds_since(t0);
  const auto& first = sweep.per_p.front();
  const auto& last = sweep.per_p.back();
  o.require(first.p == 0.0 && last.p == 0.3, "unexpected grid endpoints");
  const double se = std::sqrt(first.tstr_std * first.tstr_std / 10.0 +
                              last.tstr_std * last.tstr_std / 10.0);
  const double drop = first.tstr_mean - last.tstr_mean;
  o.require(drop > 2.0 * se, fmt("(a) tstr drop %.4g <= 2 SE %.4g", drop, 2.0 * se));
  o.require(first.sra_mean == 1.0, fmt("(b) sra_mean(0) = %.17g", first.sra_mean));
  o.require(last.sra_mean > 0.5, fmt("(c) sra_mean(0.3) = %.4g", last.sra_mean));
  o.require(elapsed < 1800.0, fmt("runtime %.0fs >= 1800s", elapsed));
  std::ostringstream curve;
  for (const auto& pt : sweep.per_p)
    curve << " p=" << pt.p << ":" << fmt("%.3f/%.4f", pt.sra_mean, pt.tstr_mean);
  o.detail += (o.detail.empty() ? "" : "; ") +
              fmt("tstr drop %.4f = %.1f SE, %.0fs;", drop, drop / se, elapsed) + curve.str();
  return o;
}

Outcome ac6_sanity_floor() {
  Outcome o;
  const auto ds = gen_gaussian_mixture(2000, 5, 4.0, 2024);
  const auto s = split(ds, 0.8, 123);
  double lowest = 1.0;
  std::string lowest_name;
  for (const auto& spec : default_pool()) {
    const auto model = train(spec, s.train, derive_seed(1, "model/" + spec.name));
    const double a = auroc(score(model, s.test.features()), s.test.labels());
    o.require(a > 0.6, spec.name + fmt(" AUROC %.4f", a));
    if (a < lowest) {
      lowest = a;
      lowest_name = spec.name;
    }
  }
  if (o.pass) o.detail = "lowest " + lowest_name + fmt(" %.4f", lowest);
  return o;
}

struct CliResult {
  int code;
  std::string out, err;
};

CliResult cli_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

Outcome ac7_cli_contract() {
  Outcome o;
  testing::TempDir tmp;
  const auto real = tmp.file("real.csv").string();
  const auto noisy = tmp.file("noisy.csv").string();
  const auto gen = cli_run({"gen", "--out", real, "--n", "400", "--d", "3", "--seed", "1",
                            "--separation", "1.5", "--flip", "0.2", "--synthetic-out", noisy});
  o.require(gen.code == 0, "gen exit " + std::to_string(gen.code));
  o.require(load_csv(real, "label") == gen_gaussian_mixture(400, 3, 1.5, 1),
            "gen -> load_csv not lossless");

  const std::string models = "LogisticRegression,GaussianNB,LDA,DecisionTree";
  const auto ok = cli_run({"evaluate", "--real", real, "--synthetic", noisy, "--models", models});
  o.require(ok.code == 0, "evaluate exit " + std::to_string(ok.code));
  const auto usage =
      cli_run({"evaluate", "--real", real, "--synthetic", noisy, "--models", "LDA"});
  o.require(usage.code == 2, "pool of one exit " + std::to_string(usage.code));
  const auto one = tmp.write("one.csv", "x0,x1,x2,label\n1,2,3,1\n4,5,6,1\n7,8,9,1\n0,1,0,1\n");
  const auto degenerate =
      cli_run({"evaluate", "--real", real, "--synthetic", one.string(), "--models", models});
  o.require(degenerate.code == 3, "degenerate exit " + std::to_string(degenerate.code));

  if (ok.code == 0) {
    const auto doc = nlohmann::json::parse(ok.out);
    const auto back = report_from_json(doc);
    verify_consistency(back);
    for (std::size_t i = 0; i < back.per_algorithm.size(); ++i) {
      const auto& a = back.per_algorithm[i];
      const auto& j = doc["algorithms"][i];
      o.require(a.real == j["R"].get<double>() && a.synthetic == j["S"].get<double>() &&
                    a.tstr == j["tstr"].get<double>(),
                "values changed in round trip");
    }
    o.require(back.sra == doc["sra"].get<double>(), "sra changed in round trip");

    auto extra = doc;
    extra["unexpected"] = 1;
    bool rejected = false;
    try {
      report_from_json(extra);
    } catch (const InputError&) {
      rejected = true;
    }
    o.require(rejected, "unknown key accepted");

    std::ifstream in(std::string(SRA_SCHEMA_DIR) + "/ranking_report.schema.json");
    const auto schema = nlohmann::json::parse(in);
    o.require(schema["additionalProperties"] == false, "schema allows extra keys");
    for (const auto& key : schema["required"])
      o.require(doc.contains(key.get<std::string>()), "report lacks " + key.get<std::string>());
    for (const auto& [key, _] : doc.items())
      o.require(schema["properties"].contains(key), "schema lacks " + key);
  }
  if (o.pass) o.detail = "exit codes 0/2/3, strict JSON round trip, lossless gen -> load";
  return o;
}

Outcome ac8_selection(const IdentityRun& run) {
  Outcome o;
  const auto& r = run.report;
  const auto a = simulate_selection(r.real_vector(), r.synthetic_vector(), 11, 20, 200);
  const auto b = simulate_selection(r.real_vector(), r.synthetic_vector(), 11, 20, 200);
  o.require(a.final_choice_agreement == 1.0,
            fmt("identity agreement %.4f", a.final_choice_agreement));
  o.require(selection_json(a, RunManifest{}, EvalConfig{}).dump() ==
                selection_json(b, RunManifest{}, EvalConfig{}).dump(),
            "reruns differ");

  Rng rng(5);
  auto noisy = r.synthetic_vector();
  for (double& v : noisy.values) v = rng.uniform();
  const auto c = simulate_selection(r.real_vector(), noisy, 11, 20, 200);
  const auto d = simulate_selection(r.real_vector(), noisy, 11, 20, 200);
  o.require(c.final_choice_agreement == d.final_choice_agreement &&
                selection_json(c, RunManifest{}, EvalConfig{}).dump() ==
                    selection_json(d, RunManifest{}, EvalConfig{}).dump(),
            "random-S reruns differ");
  if (o.pass)
    o.detail = fmt("identity agreement 1, 200 runs; random S agreement %.3f, deterministic",
                   c.final_choice_agreement);
  return o;
}

}  // namespace

int main() {
  IdentityRun identity;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 sra oracle equivalence", ac1_sra_oracle},
      {"AC2 sra hand cases", ac2_sra_hand_cases},
      {"AC3 auroc oracle equivalence", ac3_auroc_oracle},
      {"AC4 identity pipeline", [&] { return ac4_identity(identity); }},
      {"AC5 noise sweep", [&] { return ac5_noise_sweep(identity); }},
      {"AC6 model pool sanity floor", ac6_sanity_floor},
      {"AC7 cli contract", ac7_cli_contract},
      {"AC8 selection simulation", [&] { return ac8_selection(identity); }},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
