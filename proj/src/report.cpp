#include "sra/report.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "sra/error.hpp"

namespace sra {

using nlohmann::json;
using nlohmann::ordered_json;

std::string sha256_hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw Error("sha256 computation failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

ordered_json manifest_json(const RunManifest& manifest, const EvalConfig& cfg) {
  ordered_json m;
  m["command"] = manifest.command;
  m["tool_version"] = manifest.tool_version;
  m["master_seed"] = manifest.master_seed;
  ordered_json flags = ordered_json::object();
  for (const auto& [k, v] : manifest.flags) flags[k] = v;
  m["flags"] = flags;
  ordered_json inputs = ordered_json::array();
  for (const auto& in : manifest.inputs) {
    inputs.push_back({{"role", in.role}, {"path", in.path}, {"sha256", in.sha256}});
  }
  m["inputs"] = inputs;

  ordered_json models = ordered_json::array();
  const auto seeds = DerivedSeeds::from(cfg);
  for (std::size_t i = 0; i < cfg.model_pool.size(); ++i) {
    const auto& spec = cfg.model_pool[i];
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : spec.params) params[k] = v;
    models.push_back({{"name", spec.name},
                      {"kind", std::string(kind_name(spec.kind))},
                      {"params", params},
                      {"seed", seeds.model[i]}});
  }
  m["config"] = {{"split_ratio", cfg.split_ratio},
                 {"tie_epsilon", cfg.tie_epsilon},
                 {"split_seed", seeds.split},
                 {"models", models}};
  return m;
}

ordered_json report_json(const RankingReport& report, const RunManifest& manifest) {
  ordered_json doc;
  doc["manifest"] = manifest_json(manifest, report.config);
  ordered_json algs = ordered_json::array();
  for (const auto& a : report.per_algorithm) {
    algs.push_back({{"name", a.name}, {"R", a.real}, {"S", a.synthetic}, {"tstr", a.tstr}});
  }
  doc["algorithms"] = algs;
  doc["sra"] = report.sra;
  doc["tstr"] = report.tstr;
  doc["trtr"] = report.trtr;
  ordered_json disc = ordered_json::array();
  for (const auto& d : report.concordance.discordant) {
    disc.push_back({d.name_i, d.name_j, d.r_i, d.r_j, d.s_i, d.s_j});
  }
  doc["concordance"] = {{"concordant", report.concordance.concordant_pairs},
                        {"tied", report.concordance.tied_pairs},
                        {"discordant", disc}};
  return doc;
}

namespace {

void expect_keys(const json& obj, std::initializer_list<const char*> keys, const char* where) {
  if (!obj.is_object()) throw InputError(std::string(where) + " must be an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& k : allowed) {
    if (!obj.contains(k)) throw InputError(std::string(where) + ": missing key '" + k + "'");
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.contains(it.key())) {
      throw InputError(std::string(where) + ": unexpected key '" + it.key() + "'");
    }
  }
}

}  // namespace

RankingReport report_from_json(const json& doc) {
  try {
    expect_keys(doc, {"manifest", "algorithms", "sra", "tstr", "trtr", "concordance"}, "report");
    RankingReport rep;
    rep.config.tie_epsilon = doc.at("manifest").at("config").at("tie_epsilon").get<double>();
    rep.config.split_ratio = doc.at("manifest").at("config").at("split_ratio").get<double>();
    rep.config.master_seed = doc.at("manifest").at("master_seed").get<std::uint64_t>();
    for (const auto& a : doc.at("algorithms")) {
      expect_keys(a, {"name", "R", "S", "tstr"}, "algorithm");
      rep.per_algorithm.push_back({a.at("name").get<std::string>(), a.at("R").get<double>(),
                                   a.at("S").get<double>(), a.at("tstr").get<double>()});
    }
    rep.sra = doc.at("sra").get<double>();
    rep.tstr = doc.at("tstr").get<double>();
    rep.trtr = doc.at("trtr").get<double>();
    const auto& c = doc.at("concordance");
    expect_keys(c, {"concordant", "tied", "discordant"}, "concordance");
    rep.concordance.sra = rep.sra;
    rep.concordance.concordant_pairs = c.at("concordant").get<std::size_t>();
    rep.concordance.tied_pairs = c.at("tied").get<std::size_t>();
    for (const auto& d : c.at("discordant")) {
      if (!d.is_array() || d.size() != 6) throw InputError("discordant entry must have 6 items");
      rep.concordance.discordant.push_back({d[0].get<std::string>(), d[1].get<std::string>(),
                                            d[2].get<double>(), d[3].get<double>(),
                                            d[4].get<double>(), d[5].get<double>()});
    }
    return rep;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
}

ordered_json sweep_json(const SweepResult& sweep, const RunManifest& manifest,
                        const EvalConfig& cfg) {
  ordered_json doc;
  doc["manifest"] = manifest_json(manifest, cfg);
  ordered_json rows = ordered_json::array();
  for (const auto& pt : sweep.per_p) {
    rows.push_back({{"p", pt.p},
                    {"reps", pt.repetitions},
                    {"sra_mean", pt.sra_mean},
                    {"sra_std", pt.sra_std},
                    {"tstr_mean", pt.tstr_mean},
                    {"tstr_std", pt.tstr_std},
                    {"trtr_mean", pt.trtr_mean}});
  }
  doc["rows"] = rows;
  return doc;
}

std::string sweep_csv(const SweepResult& sweep, const RunManifest& manifest,
                      const EvalConfig& cfg) {
  std::string out = "# manifest: " + manifest_json(manifest, cfg).dump() + "\n";
  out += kSweepCsvHeader;
  out += '\n';
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& pt : sweep.per_p) {
    out += num(pt.p) + ',' + std::to_string(pt.repetitions) + ',' + num(pt.sra_mean) + ',' +
           num(pt.sra_std) + ',' + num(pt.tstr_mean) + ',' + num(pt.tstr_std) + ',' +
           num(pt.trtr_mean) + '\n';
  }
  return out;
}

ordered_json selection_json(const SelectionReport& sel, const RunManifest& manifest,
                            const EvalConfig& cfg) {
  ordered_json doc;
  doc["manifest"] = manifest_json(manifest, cfg);
  doc["runs"] = sel.runs;
  doc["steps_per_run"] = sel.steps_per_run;
  doc["final_choice_agreement"] = sel.final_choice_agreement;
  ordered_json trace = ordered_json::array();
  for (const auto& run : sel.trace) {
    trace.push_back({{"sequence", run.sequence},
                     {"champion_synthetic", run.champion_synthetic},
                     {"champion_real", run.champion_real}});
  }
  doc["trace"] = trace;
  return doc;
}

}  // namespace sra
