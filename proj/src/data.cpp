#include "sra/data.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "sra/error.hpp"
#include "sra/random.hpp"

namespace sra {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw InputError("matrix data size " + std::to_string(data_.size()) +
                     " does not match " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
}

Dataset::Dataset(Matrix features, Labels labels, std::vector<std::string> feature_names)
    : features_(std::move(features)), labels_(std::move(labels)), names_(std::move(feature_names)) {
  if (features_.rows() == 0) throw InputError("dataset has no rows");
  if (features_.cols() == 0) throw InputError("dataset has no feature columns");
  if (labels_.size() != features_.rows()) {
    throw InputError("dataset has " + std::to_string(features_.rows()) + " rows but " +
                     std::to_string(labels_.size()) + " labels");
  }
  if (names_.size() != features_.cols()) {
    throw InputError("dataset has " + std::to_string(features_.cols()) + " columns but " +
                     std::to_string(names_.size()) + " feature names");
  }
  std::set<std::string> seen;
  for (const auto& name : names_) {
    if (!seen.insert(name).second) throw InputError("duplicate feature name '" + name + "'");
  }
  for (std::size_t i = 0; i < features_.rows(); ++i) {
    if (labels_[i] != 0 && labels_[i] != 1) {
      throw InputError("label at row " + std::to_string(i) + " is not 0 or 1");
    }
    for (double v : features_.row(i)) {
      if (!std::isfinite(v)) {
        throw InputError("non-finite feature value at row " + std::to_string(i));
      }
    }
  }
}

std::size_t Dataset::count_label(int label) const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), label));
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Matrix m(rows.size(), dim());
  Labels y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto src = features_.row(rows[i]);
    std::copy(src.begin(), src.end(), m.row(i).begin());
    y[i] = labels_[rows[i]];
  }
  return Dataset(std::move(m), std::move(y), names_);
}

Dataset Dataset::with_labels(Labels labels) const {
  return Dataset(features_, std::move(labels), names_);
}

Dataset Dataset::with_features(Matrix features) const {
  return Dataset(std::move(features), labels_, names_);
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Dataset parse_csv(const std::string& text, const std::string& label_column,
                  const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;

  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    for (auto f : split_fields(line)) header.emplace_back(f);
    break;
  }
  if (header.empty()) throw InputError(source + ": missing header row");

  std::size_t label_idx = header.size();
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j].find('"') != std::string::npos) {
      throw InputError(source + ": quoted fields are not supported (header column " +
                       std::to_string(j + 1) + ")");
    }
    if (header[j] == label_column) {
      if (label_idx != header.size()) {
        throw InputError(source + ": duplicate label column '" + label_column + "'");
      }
      label_idx = j;
    }
  }
  if (label_idx == header.size()) {
    throw InputError(source + ": missing label column '" + label_column + "'");
  }
  if (header.size() < 2) throw InputError(source + ": no feature columns besides the label");

  std::vector<std::string> names;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j != label_idx) names.push_back(header[j]);
  }

  std::vector<double> values;
  Labels labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw InputError(source + ": line " + std::to_string(line_no) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(header.size()));
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (j == label_idx) {
        if (fields[j] == "0") {
          labels.push_back(0);
        } else if (fields[j] == "1") {
          labels.push_back(1);
        } else {
          throw InputError(source + ": line " + std::to_string(line_no) + ", column '" +
                           header[j] + "': label '" + std::string(fields[j]) +
                           "' is not 0 or 1");
        }
        continue;
      }
      double v;
      if (!parse_double(fields[j], v)) {
        throw InputError(source + ": line " + std::to_string(line_no) + ", column '" +
                         header[j] + "': cannot parse '" + std::string(fields[j]) +
                         "' as a finite number");
      }
      values.push_back(v);
    }
  }
  if (labels.empty()) throw InputError(source + ": no data rows after the header");

  const std::size_t n = labels.size(), d = names.size();
  return Dataset(Matrix(n, d, std::move(values)), std::move(labels),
                 std::move(names));
}

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), label_column, path.string());
}

std::string to_csv(const Dataset& ds, const std::string& label_column) {
  std::string out;
  for (const auto& name : ds.feature_names()) {
    out += name;
    out += ',';
  }
  out += label_column;
  out += '\n';
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (double v : ds.features().row(i)) {
      out += format_double(v);
      out += ',';
    }
    out += ds.labels()[i] ? '1' : '0';
    out += '\n';
  }
  return out;
}

void write_csv(const Dataset& ds, const std::filesystem::path& path,
               const std::string& label_column) {
  for (const auto& name : ds.feature_names()) {
    if (name == label_column) {
      throw ConfigError("feature name '" + name + "' collides with the label column");
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << to_csv(ds, label_column);
  if (!out) throw InputError("write failed for '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// Splitting and preprocessing

SplitPair split(const Dataset& ds, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw ConfigError("split ratio must be in (0,1), got " + format_double(ratio));
  }
  std::vector<std::size_t> train_rows, test_rows;
  Rng rng(seed);
  for (int c = 0; c < 2; ++c) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (ds.labels()[i] == c) rows.push_back(i);
    }
    if (rows.size() < 2) {
      throw DegenerateDataError("class " + std::to_string(c) + " has " +
                                std::to_string(rows.size()) +
                                " example(s); splitting needs at least 2 per class");
    }
    rng.shuffle(rows);
    // The small offset keeps products like 0.7 * 10 from rounding up past 7.
    const auto n_train = static_cast<std::size_t>(
        std::ceil(ratio * static_cast<double>(rows.size()) - 1e-9));
    if (n_train == 0 || n_train >= rows.size()) {
      throw DegenerateDataError("split ratio " + format_double(ratio) + " leaves class " +
                                std::to_string(c) + " (" + std::to_string(rows.size()) +
                                " examples) absent from one half");
    }
    train_rows.insert(train_rows.end(), rows.begin(), rows.begin() + n_train);
    test_rows.insert(test_rows.end(), rows.begin() + n_train, rows.end());
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  Dataset train = ds.subset(train_rows);
  Dataset test = ds.subset(test_rows);
  return SplitPair{std::move(train), std::move(test), std::move(train_rows),
                   std::move(test_rows), seed, ratio};
}

StandardizationStats fit_standardization(const Matrix& train) {
  const std::size_t n = train.rows(), d = train.cols();
  StandardizationStats stats{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
  for (std::size_t j = 0; j < d; ++j) {
    bool constant = true;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += train(i, j);
      constant = constant && train(i, j) == train(0, j);
    }
    if (constant) {
      stats.means[j] = train(0, j);
      continue;
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = train(i, j) - mean;
      ss += c * c;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n));
    stats.means[j] = mean;
    // Columns constant up to rounding are treated as constant.
    stats.stddevs[j] = sd > 1e-12 * std::max(1.0, std::abs(mean)) ? sd : 1.0;
  }
  return stats;
}

void StandardizationStats::apply_row(std::span<const double> in, std::span<double> out) const {
  for (std::size_t j = 0; j < in.size(); ++j) out[j] = (in[j] - means[j]) / stddevs[j];
}

Matrix StandardizationStats::apply(const Matrix& x) const {
  if (x.cols() != means.size()) {
    throw ConfigError("standardization expects " + std::to_string(means.size()) +
                      " columns, got " + std::to_string(x.cols()));
  }
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) apply_row(x.row(i), out.row(i));
  return out;
}

Standardized standardize(const Dataset& train, const Dataset& test) {
  if (train.dim() != test.dim()) {
    throw ConfigError("train has " + std::to_string(train.dim()) + " features, test has " +
                      std::to_string(test.dim()));
  }
  auto stats = fit_standardization(train.features());
  Dataset tr = train.with_features(stats.apply(train.features()));
  Dataset te = test.with_features(stats.apply(test.features()));
  return Standardized{std::move(tr), std::move(te), std::move(stats)};
}

// ---------------------------------------------------------------------------
// Generators

Dataset flip_labels(const Dataset& ds, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError("flip probability must be in [0,1], got " + format_double(p));
  }
  Rng rng(seed);
  Labels y = ds.labels();
  for (int& label : y) {
    if (rng.uniform() < p) label = 1 - label;
  }
  return ds.with_labels(std::move(y));
}

namespace {

// Random orthogonal matrix from Gram-Schmidt on Gaussian columns.
Matrix random_rotation(std::size_t d, Rng& rng) {
  Matrix q(d, d);
  for (std::size_t c = 0; c < d; ++c) {
    while (true) {
      std::vector<double> v(d);
      for (auto& x : v) x = rng.normal();
      for (std::size_t prev = 0; prev < c; ++prev) {
        double dot = 0.0;
        for (std::size_t r = 0; r < d; ++r) dot += v[r] * q(r, prev);
        for (std::size_t r = 0; r < d; ++r) v[r] -= dot * q(r, prev);
      }
      double norm = 0.0;
      for (double x : v) norm += x * x;
      norm = std::sqrt(norm);
      if (norm < 1e-8) continue;
      for (std::size_t r = 0; r < d; ++r) q(r, c) = v[r] / norm;
      break;
    }
  }
  return q;
}

}  // namespace

Dataset gen_gaussian_mixture(std::size_t n, std::size_t d, double separation,
                             std::uint64_t seed) {
  if (n < 4) throw ConfigError("gaussian mixture needs n >= 4, got " + std::to_string(n));
  if (d < 1) throw ConfigError("gaussian mixture needs d >= 1");
  if (!(separation >= 0.0) || !std::isfinite(separation)) {
    throw ConfigError("separation must be a finite value >= 0");
  }

  // Per-class mixing A_c = Q_c * diag(s_c), with mean(s_c^2) = 1.
  Matrix mixing[2];
  Rng shape_rng(derive_seed(seed, "mixture-shape"));
  for (auto& a : mixing) {
    Matrix q = random_rotation(d, shape_rng);
    std::vector<double> s(d);
    double ms = 0.0;
    for (auto& x : s) {
      x = shape_rng.uniform(0.4, 1.6);
      ms += x * x;
    }
    const double norm = std::sqrt(ms / static_cast<double>(d));
    a = Matrix(d, d);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) a(r, c) = q(r, c) * s[c] / norm;
  }

  const double offset = separation / 2.0 / std::sqrt(static_cast<double>(d));
  Rng rng(derive_seed(seed, "mixture-samples"));
  Matrix x(n, d);
  Labels y(n);
  std::vector<double> z(d);
  for (std::size_t i = 0; i < n; ++i) {
    const int c = static_cast<int>(i % 2);
    y[i] = c;
    for (auto& v : z) v = rng.normal();
    for (std::size_t r = 0; r < d; ++r) {
      double acc = c ? offset : -offset;
      for (std::size_t k = 0; k < d; ++k) acc += mixing[c](r, k) * z[k];
      x(i, r) = acc;
    }
  }
  std::vector<std::string> names;
  for (std::size_t j = 0; j < d; ++j) names.push_back("x" + std::to_string(j));
  return Dataset(std::move(x), std::move(y), std::move(names));
}

}  // namespace sra
