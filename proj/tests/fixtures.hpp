#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace fixtures {

/// The 20-task simulated suite (three environments, 400x300 renders).
nlohmann::json suite_json();

/// tests/fixtures in the source tree.
std::filesystem::path source_dir();

/// Fresh, empty scratch directory.
std::filesystem::path scratch_dir(const std::string& name);

struct Exported {
  std::filesystem::path dir;
  std::filesystem::path suite;      // suite.json
  std::filesystem::path grounding;  // grounding.jsonl
  std::filesystem::path offline;    // offline.jsonl
};

/// Writes the suite and runs the export subcommand over it.
Exported export_suite(const std::string& name);

/// Interpreter script over the offline records that gets every non-CLICK
/// step right and every other CLICK step wrong: SCROLL "3" aimed at a
/// different element on the same screen.
nlohmann::json flawed_script(const std::filesystem::path& offline_jsonl);

/// Randomized offline cases: {"record": OfflineStepRecord JSON, "pred":
/// {"point": [x, y] | null, "operation", "value" | null}}. Coordinates sit
/// on a 0.05 grid so boundary hits are common.
std::vector<nlohmann::json> random_offline_cases(std::uint64_t seed, int n);

/// Randomized OmniRecord JSON objects.
std::vector<nlohmann::json> random_omni_records(std::uint64_t seed, int n);

}  // namespace fixtures
