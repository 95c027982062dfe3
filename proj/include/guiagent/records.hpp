#pragma once

// JSONL benchmark record loaders and observation loading from disk.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "guiagent/metrics.hpp"
#include "guiagent/sim_env.hpp"

namespace guiagent {

/// Malformed record input; the message names file and line.
class RecordError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

GroundingRecord grounding_record_from_json(const nlohmann::json& j);
OfflineStepRecord offline_record_from_json(const nlohmann::json& j);
OmniRecord omni_record_from_json(const nlohmann::json& j);
nlohmann::json grounding_record_to_json(const GroundingRecord& r);
nlohmann::json offline_record_to_json(const OfflineStepRecord& r);
nlohmann::json omni_record_to_json(const OmniRecord& r);

/// One JSON object per non-blank line. Throws std::runtime_error if the file
/// cannot be read and RecordError on malformed lines.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

/// Relative image paths are resolved against the JSONL file's directory.
std::vector<GroundingRecord> load_grounding_records(const std::filesystem::path& path);
std::vector<OfflineStepRecord> load_offline_records(const std::filesystem::path& path);
std::vector<OmniRecord> load_omni_records(const std::filesystem::path& path);

/// "shot.png" -> "shot.screen.json"
std::filesystem::path screen_sidecar_path(const std::filesystem::path& image);

/// Reads and decodes a PNG (ImageError on failure) and attaches the screen
/// model from the sidecar file when one exists.
sim::Observation load_observation(const std::filesystem::path& image);

}  // namespace guiagent
