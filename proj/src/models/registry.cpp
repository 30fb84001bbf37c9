#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <set>

#include "internal.hpp"
#include "sra/random.hpp"

namespace sra {

namespace {

enum class Domain { Count, NonNegCount, Positive, NonNegative };

struct ParamDef {
  const char* key;
  double value;
  Domain domain;
};

struct KindInfo {
  ModelKind kind;
  const char* name;
  bool standardize;
  std::vector<ParamDef> params;
};

const std::vector<KindInfo>& kind_table() {
  using D = Domain;
  static const std::vector<KindInfo> table = {
      {ModelKind::LogisticRegression, "LogisticRegression", true,
       {{"l2", 1e-4, D::NonNegative}, {"learning_rate", 0.1, D::Positive},
        {"epochs", 500, D::Count}}},
      // max_features 0 means ceil(sqrt(d)).
      {ModelKind::RandomForest, "RandomForest", false,
       {{"trees", 100, D::Count}, {"max_depth", 8, D::Count}, {"min_leaf", 5, D::Count},
        {"max_features", 0, D::NonNegCount}}},
      {ModelKind::GaussianNB, "GaussianNB", false, {{"var_smoothing", 1e-9, D::Positive}}},
      {ModelKind::BernoulliNB, "BernoulliNB", false, {{"alpha", 1.0, D::Positive}}},
      {ModelKind::LinearSVM, "LinearSVM", true,
       {{"l2", 1e-4, D::Positive}, {"epochs", 20, D::Count}}},
      // max_features 0 means every feature.
      {ModelKind::DecisionTree, "DecisionTree", false,
       {{"max_depth", 8, D::Count}, {"min_leaf", 5, D::Count},
        {"max_features", 0, D::NonNegCount}}},
      {ModelKind::LDA, "LDA", true, {{"ridge", 1e-6, D::NonNegative}}},
      {ModelKind::AdaBoost, "AdaBoost", false,
       {{"estimators", 50, D::Count}, {"max_depth", 1, D::Count}}},
      {ModelKind::Bagging, "Bagging", false,
       {{"trees", 50, D::Count}, {"max_depth", 8, D::Count}, {"min_leaf", 5, D::Count}}},
      {ModelKind::GBM, "GBM", false,
       {{"estimators", 100, D::Count}, {"max_depth", 3, D::Count},
        {"learning_rate", 0.1, D::Positive}, {"min_leaf", 1, D::Count}}},
      {ModelKind::MLP, "MLP", true,
       {{"hidden", 32, D::Count}, {"learning_rate", 0.01, D::Positive},
        {"epochs", 200, D::Count}, {"batch_size", 32, D::Count},
        {"input_clamp", 10.0, D::Positive}}},
      {ModelKind::NewtonBoostedTrees, "NewtonBoostedTrees", false,
       {{"estimators", 100, D::Count}, {"max_depth", 3, D::Count},
        {"learning_rate", 0.1, D::Positive}, {"lambda", 1.0, D::NonNegative},
        {"min_child_weight", 1.0, D::NonNegative}}},
  };
  return table;
}

const KindInfo& info(ModelKind kind) {
  for (const auto& k : kind_table()) {
    if (k.kind == kind) return k;
  }
  throw ConfigError("unknown model kind");
}

std::string valid_names() {
  std::string out;
  for (const auto& k : kind_table()) {
    if (!out.empty()) out += ", ";
    out += k.name;
  }
  return out;
}

}  // namespace

std::string_view kind_name(ModelKind kind) { return info(kind).name; }

ModelKind parse_kind(std::string_view name) {
  for (const auto& k : kind_table()) {
    if (name == k.name) return k.kind;
  }
  throw ConfigError("unknown model '" + std::string(name) + "'; valid names: " + valid_names());
}

const std::vector<ModelKind>& all_kinds() {
  static const std::vector<ModelKind> kinds = [] {
    std::vector<ModelKind> v;
    for (const auto& k : kind_table()) v.push_back(k.kind);
    return v;
  }();
  return kinds;
}

ModelSpec ModelSpec::defaults(ModelKind kind) {
  const auto& k = info(kind);
  ModelSpec spec{kind, {}, k.name};
  for (const auto& p : k.params) spec.params[p.key] = p.value;
  return spec;
}

ModelSpec ModelSpec::with(const std::string& key, double value) const {
  ModelSpec copy = *this;
  if (!copy.params.contains(key)) {
    throw ConfigError(name + ": unknown hyperparameter '" + key + "'");
  }
  copy.params[key] = value;
  return copy;
}

double ModelSpec::param(const std::string& key) const {
  auto it = params.find(key);
  if (it != params.end()) return it->second;
  for (const auto& p : info(kind).params) {
    if (key == p.key) return p.value;
  }
  throw ConfigError(name + ": unknown hyperparameter '" + key + "'");
}

void ModelSpec::validate() const {
  const auto& k = info(kind);
  if (name.empty()) throw ConfigError("model name must not be empty");
  for (const auto& [key, value] : params) {
    auto def = std::find_if(k.params.begin(), k.params.end(),
                            [&](const ParamDef& p) { return key == p.key; });
    if (def == k.params.end()) {
      throw ConfigError(name + ": unknown hyperparameter '" + key + "' for " + k.name);
    }
    bool ok = std::isfinite(value);
    switch (def->domain) {
      case Domain::Count:
        ok = ok && value >= 1.0 && value == std::floor(value);
        break;
      case Domain::NonNegCount:
        ok = ok && value >= 0.0 && value == std::floor(value);
        break;
      case Domain::Positive:
        ok = ok && value > 0.0;
        break;
      case Domain::NonNegative:
        ok = ok && value >= 0.0;
        break;
    }
    if (!ok) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", value);
      throw ConfigError(name + ": invalid value " + buf + " for hyperparameter '" + key + "'");
    }
  }
}

std::vector<ModelSpec> default_pool() {
  std::vector<ModelSpec> pool;
  for (auto kind : all_kinds()) pool.push_back(ModelSpec::defaults(kind));
  return pool;
}

std::vector<ModelSpec> parse_pool(std::string_view selection) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  if (trim(selection) == "all") return default_pool();
  std::vector<ModelSpec> pool;
  std::set<std::string> seen;
  std::size_t start = 0;
  while (start <= selection.size()) {
    auto pos = selection.find(',', start);
    if (pos == std::string_view::npos) pos = selection.size();
    const auto item = trim(selection.substr(start, pos - start));
    if (item.empty()) throw ConfigError("empty entry in model list '" + std::string(selection) + "'");
    const ModelKind kind = parse_kind(item);
    if (!seen.insert(std::string(item)).second) {
      throw ConfigError("model '" + std::string(item) + "' listed more than once");
    }
    pool.push_back(ModelSpec::defaults(kind));
    start = pos + 1;
  }
  return pool;
}

// ---------------------------------------------------------------------------

TrainedModel::TrainedModel(ModelSpec spec, std::size_t dim,
                           std::shared_ptr<const detail::Scorer> scorer,
                           std::optional<StandardizationStats> preprocessing)
    : spec_(std::move(spec)), dim_(dim), scorer_(std::move(scorer)),
      preprocessing_(std::move(preprocessing)) {}

ScoreVector TrainedModel::score(const Matrix& features) const {
  if (features.cols() != dim_) {
    throw ConfigError(spec_.name + ": model trained on " + std::to_string(dim_) +
                      " features cannot score " + std::to_string(features.cols()));
  }
  ScoreVector out(features.rows());
  std::vector<double> buf(dim_);
  for (std::size_t i = 0; i < features.rows(); ++i) {
    auto row = features.row(i);
    if (preprocessing_) {
      preprocessing_->apply_row(row, buf);
      out[i] = scorer_->score_row(buf);
    } else {
      out[i] = scorer_->score_row(row);
    }
    if (!std::isfinite(out[i])) {
      throw NumericalError(spec_.name + ": non-finite score at row " + std::to_string(i));
    }
  }
  return out;
}

std::vector<std::size_t> bootstrap_rows(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> rows(n);
  for (auto& r : rows) r = static_cast<std::size_t>(rng.below(n));
  return rows;
}

TrainedModel train(const ModelSpec& spec, const Dataset& train_set, std::uint64_t seed) {
  spec.validate();
  if (!train_set.has_both_classes()) {
    throw DegenerateDataError(spec.name + ": training set contains a single class");
  }
  const auto& k = info(spec.kind);
  std::optional<StandardizationStats> stats;
  Matrix scaled;
  if (k.standardize) {
    stats = fit_standardization(train_set.features());
    scaled = stats->apply(train_set.features());
  }
  const Matrix& x = k.standardize ? scaled : train_set.features();
  const Labels& y = train_set.labels();

  using namespace detail;
  ScorerPtr scorer;
  switch (spec.kind) {
    case ModelKind::LogisticRegression: scorer = fit_logistic_regression(spec, x, y); break;
    case ModelKind::RandomForest: scorer = fit_random_forest(spec, train_set, seed); break;
    case ModelKind::GaussianNB: scorer = fit_gaussian_nb(spec, x, y); break;
    case ModelKind::BernoulliNB: scorer = fit_bernoulli_nb(spec, x, y); break;
    case ModelKind::LinearSVM: scorer = fit_linear_svm(spec, x, y, seed); break;
    case ModelKind::DecisionTree: scorer = fit_decision_tree(spec, x, y, seed); break;
    case ModelKind::LDA: scorer = fit_lda(spec, x, y); break;
    case ModelKind::AdaBoost: scorer = fit_adaboost(spec, x, y); break;
    case ModelKind::Bagging: scorer = fit_bagging(spec, train_set, seed); break;
    case ModelKind::GBM: scorer = fit_gbm(spec, x, y); break;
    case ModelKind::MLP: scorer = fit_mlp(spec, x, y, seed); break;
    case ModelKind::NewtonBoostedTrees: scorer = fit_newton_boosted(spec, x, y); break;
  }
  return TrainedModel(spec, train_set.dim(), std::move(scorer), std::move(stats));
}

}  // namespace sra
