#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sra/data.hpp"
#include "sra/error.hpp"
#include "sra/metrics.hpp"
#include "sra/models.hpp"
#include "sra/random.hpp"

using namespace sra;

namespace {

double train_auroc(const ModelSpec& spec, const Dataset& ds, std::uint64_t seed = 1) {
  const auto model = train(spec, ds, seed);
  return auroc(score(model, ds.features()), ds.labels());
}

double held_out_auroc(const ModelSpec& spec, const Dataset& ds, std::uint64_t seed = 1) {
  const auto s = split(ds, 0.8, 123);
  const auto model = train(spec, s.train, seed);
  return auroc(score(model, s.test.features()), s.test.labels());
}

// 20 points, classes separated by a margin of at least 1 along x0 + x1.
Dataset separable_2d() {
  Rng rng(4);
  Matrix x(20, 2);
  Labels y(20);
  for (std::size_t i = 0; i < 20; ++i) {
    const int c = static_cast<int>(i % 2);
    const double t = rng.uniform(-3.0, 3.0);
    const double offset = c ? rng.uniform(1.0, 3.0) : -rng.uniform(1.0, 3.0);
    x(i, 0) = t + offset;
    x(i, 1) = -t + offset;
    y[i] = c;
  }
  return Dataset(std::move(x), std::move(y), {"a", "b"});
}

Dataset xor4() {
  return Dataset(Matrix(4, 2, {0, 0, 0, 1, 1, 0, 1, 1}), {0, 1, 1, 0}, {"a", "b"});
}

}  // namespace

TEST_CASE("kind names and pool parsing") {
  CHECK(all_kinds().size() == kModelKindCount);
  for (auto k : all_kinds()) CHECK(parse_kind(kind_name(k)) == k);
  CHECK(parse_pool("all").size() == 12);
  const auto pool = parse_pool("LDA, GBM");
  REQUIRE(pool.size() == 2);
  CHECK(pool[0].kind == ModelKind::LDA);
  CHECK(pool[1].name == "GBM");
  CHECK_THROWS_WITH_AS(parse_pool("LDA,XGBoost"), doctest::Contains("valid names: "), ConfigError);
  CHECK_THROWS_WITH_AS(parse_pool("LDA,XGBoost"), doctest::Contains("NewtonBoostedTrees"),
                       ConfigError);
  CHECK_THROWS_AS(parse_pool("LDA,LDA"), ConfigError);
  CHECK_THROWS_AS(parse_pool("LDA,,GBM"), ConfigError);
}

TEST_CASE("hyperparameter validation") {
  const auto rf = ModelSpec::defaults(ModelKind::RandomForest);
  CHECK(rf.param("trees") == 100);
  CHECK(rf.param("max_depth") == 8);
  CHECK_THROWS_AS(rf.with("learning_rate", 0.1), ConfigError);
  CHECK_THROWS_AS(rf.with("trees", 0).validate(), ConfigError);
  CHECK_THROWS_AS(rf.with("trees", 2.5).validate(), ConfigError);
  CHECK_THROWS_AS(rf.with("max_depth", 0).validate(), ConfigError);
  CHECK_THROWS_AS(ModelSpec::defaults(ModelKind::MLP).with("learning_rate", 0).validate(),
                  ConfigError);
  CHECK_NOTHROW(rf.with("max_features", 0).validate());
  auto odd = rf;
  odd.params["bogus"] = 1;
  CHECK_THROWS_AS(odd.validate(), ConfigError);
}

TEST_CASE("training errors") {
  const Dataset one_class(Matrix(4, 1, {1, 2, 3, 4}), {1, 1, 1, 1}, {"a"});
  for (auto k : all_kinds()) {
    CHECK_THROWS_AS(train(ModelSpec::defaults(k), one_class, 1), DegenerateDataError);
  }
  const auto diverging =
      ModelSpec::defaults(ModelKind::LogisticRegression).with("learning_rate", 1e308);
  CHECK_THROWS_WITH_AS(train(diverging, separable_2d(), 1), doctest::Contains("iteration"),
                       NumericalError);
}

TEST_CASE("score rejects a dimension mismatch") {
  const auto model = train(ModelSpec::defaults(ModelKind::LDA), separable_2d(), 1);
  CHECK(model.dim() == 2);
  CHECK_THROWS_AS(model.score(Matrix(3, 5)), ConfigError);
}

TEST_CASE("GaussianNB separates distinct class means") {
  const Dataset ds(Matrix(6, 1, {-1, -1, -1, 1, 1, 1}), {0, 0, 0, 1, 1, 1}, {"x"});
  const auto model = train(ModelSpec::defaults(ModelKind::GaussianNB), ds, 1);
  const auto s = model.score(Matrix(2, 1, {1.0, -1.0}));
  CHECK(s[0] > s[1]);
}

TEST_CASE("LogisticRegression on separable data ranks every positive first") {
  const auto ds = separable_2d();
  const auto model = train(ModelSpec::defaults(ModelKind::LogisticRegression), ds, 1);
  const auto s = model.score(ds.features());
  CHECK(auroc(s, ds.labels()) == 1.0);
  double min_pos = 1e300, max_neg = -1e300;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.labels()[i]) min_pos = std::min(min_pos, s[i]);
    else max_neg = std::max(max_neg, s[i]);
  }
  CHECK(min_pos > max_neg);
  CHECK(model.preprocessing().has_value());
  CHECK(s == model.score(ds.features()));
}

TEST_CASE("DecisionTree depth on XOR agrees with exhaustive search") {
  const auto ds = xor4();
  oracle::TreeEnumerator brute({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {0, 1, 1, 0});
  const double best_stump = brute.best_auroc(1);
  const double best_depth2 = brute.best_auroc(2);
  CHECK(best_stump <= 0.75);
  CHECK(best_depth2 == 1.0);

  const auto tree = ModelSpec::defaults(ModelKind::DecisionTree).with("min_leaf", 1);
  const double stump = train_auroc(tree.with("max_depth", 1), ds);
  const double two = train_auroc(tree.with("max_depth", 2), ds);
  CHECK(stump <= 0.75);
  CHECK(stump <= best_stump);
  CHECK(two == 1.0);
}

TEST_CASE("MLP scores stay finite for extreme inputs") {
  const auto ds = gen_gaussian_mixture(400, 3, 2.0, 3);
  const auto model = train(ModelSpec::defaults(ModelKind::MLP), ds, 9);
  Matrix extreme(6, 3);
  const double values[] = {1e6, -1e6, 1e300, -1e300, 0.0, 1e6};
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 3; ++j) extreme(i, j) = values[(i + j) % 6];
  for (double v : model.score(extreme)) CHECK(std::isfinite(v));
}

TEST_CASE("LogisticRegression AUROC on the demo mixture") {
  SUBCASE("well separated") {
    const auto ds = gen_gaussian_mixture(2000, 2, 6.0, 21);
    CHECK(held_out_auroc(ModelSpec::defaults(ModelKind::LogisticRegression), ds) >= 0.95);
  }
  SUBCASE("no separation") {
    const auto ds = gen_gaussian_mixture(5000, 2, 0.0, 21);
    const double a = held_out_auroc(ModelSpec::defaults(ModelKind::LogisticRegression), ds);
    CHECK(std::abs(a - 0.5) <= 0.05);
  }
}

TEST_CASE("every kind clears the sanity floor on separable demo data") {
  const auto ds = gen_gaussian_mixture(2000, 5, 4.0, 2024);
  for (const auto& spec : default_pool()) {
    CAPTURE(spec.name);
    CHECK(held_out_auroc(spec, ds) > 0.6);
  }
}

TEST_CASE("training and scoring are bitwise deterministic") {
  const auto ds = gen_gaussian_mixture(300, 4, 2.0, 5);
  for (const auto& spec : default_pool()) {
    CAPTURE(spec.name);
    const auto a = train(spec, ds, 77).score(ds.features());
    const auto b = train(spec, ds, 77).score(ds.features());
    CHECK(a == b);
  }
}

TEST_CASE("label inversion mirrors AUROC for the symmetric kinds") {
  const auto ds = gen_gaussian_mixture(600, 4, 1.5, 8);
  const auto s = split(ds, 0.8, 1);
  Labels inverted = s.train.labels();
  for (int& v : inverted) v = 1 - v;
  const Dataset flipped = s.train.with_labels(inverted);
  for (auto kind : {ModelKind::LogisticRegression, ModelKind::LDA, ModelKind::GaussianNB,
                    ModelKind::LinearSVM}) {
    const auto spec = ModelSpec::defaults(kind);
    CAPTURE(spec.name);
    const double a = auroc(train(spec, s.train, 3).score(s.test.features()), s.test.labels());
    const double b = auroc(train(spec, flipped, 3).score(s.test.features()), s.test.labels());
    CHECK(std::abs(a + b - 1.0) <= 1e-9);
  }
}

TEST_CASE("one-member bootstrap ensembles equal a tree on the bootstrap sample") {
  const auto ds = gen_gaussian_mixture(50, 4, 1.0, 13);
  const std::uint64_t seed = 4242;
  const auto rows = bootstrap_rows(ds.size(), derive_seed(seed, kBootstrapTag, 0));
  const Dataset sample = ds.subset(rows);
  const std::uint64_t member_seed = derive_seed(seed, kMemberTag, 0);
  const auto tree = ModelSpec::defaults(ModelKind::DecisionTree);

  SUBCASE("Bagging") {
    const auto bag = ModelSpec::defaults(ModelKind::Bagging).with("trees", 1);
    CHECK(train(bag, ds, seed).score(ds.features()) ==
          train(tree, sample, member_seed).score(ds.features()));
  }
  SUBCASE("RandomForest") {
    const auto rf = ModelSpec::defaults(ModelKind::RandomForest).with("trees", 1);
    // ceil(sqrt(4)) = 2 candidate features per split.
    CHECK(train(rf, ds, seed).score(ds.features()) ==
          train(tree.with("max_features", 2), sample, member_seed).score(ds.features()));
  }
  SUBCASE("bootstrap draws with replacement") {
    CHECK(rows.size() == ds.size());
    std::set<std::size_t> distinct(rows.begin(), rows.end());
    CHECK(distinct.size() < rows.size());
    for (auto r : rows) CHECK(r < ds.size());
  }
}

TEST_CASE("boosting reduces training error over rounds") {
  const auto ds = gen_gaussian_mixture(400, 3, 1.5, 17);
  for (auto kind : {ModelKind::GBM, ModelKind::NewtonBoostedTrees, ModelKind::AdaBoost}) {
    const auto spec = ModelSpec::defaults(kind);
    CAPTURE(spec.name);
    const double few = train_auroc(spec.with("estimators", 2), ds);
    const double many = train_auroc(spec, ds);
    CHECK(many > few);
  }
}
