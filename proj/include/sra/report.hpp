#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "sra/experiment.hpp"

namespace sra {

inline constexpr const char* kToolVersion = "1.0.0";

struct InputDigest {
  std::string role;  // "real" or "synthetic"
  std::string path;
  std::string sha256;
};

/// Everything needed to re-run the command that produced a report.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> flags;  // resolved, including defaults
  std::uint64_t master_seed = 0;
  std::string tool_version = kToolVersion;
  std::vector<InputDigest> inputs;
};

/// Hex SHA-256 of a file's bytes. Throws InputError if unreadable.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(const std::string& bytes);

nlohmann::ordered_json manifest_json(const RunManifest& manifest, const EvalConfig& cfg);

/// {"manifest", "algorithms", "sra", "tstr", "trtr", "concordance"}.
nlohmann::ordered_json report_json(const RankingReport& report, const RunManifest& manifest);

/// Inverse of report_json for the ranking fields, with tie_epsilon read
/// back from the manifest. Throws InputError on missing or unexpected keys.
RankingReport report_from_json(const nlohmann::json& doc);

nlohmann::ordered_json sweep_json(const SweepResult& sweep, const RunManifest& manifest,
                                  const EvalConfig& cfg);
/// First line "# manifest: {...}", then the header
/// p,reps,sra_mean,sra_std,tstr_mean,tstr_std,trtr_mean and one row per p.
std::string sweep_csv(const SweepResult& sweep, const RunManifest& manifest,
                      const EvalConfig& cfg);
inline constexpr const char* kSweepCsvHeader =
    "p,reps,sra_mean,sra_std,tstr_mean,tstr_std,trtr_mean";

nlohmann::ordered_json selection_json(const SelectionReport& sel, const RunManifest& manifest,
                                      const EvalConfig& cfg);

}  // namespace sra
