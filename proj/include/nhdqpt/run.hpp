#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "nhdqpt/config.hpp"

namespace nhdqpt {

inline constexpr const char* kToolName = "nhdqpt";
inline constexpr const char* kToolVersion = "1.0.0";

struct OutputFile {
  std::string name;  ///< relative to the output directory
  std::string sha256;
  std::size_t bytes = 0;
};

struct RunManifest {
  Task task = Task::report;
  nlohmann::ordered_json config;
  double wall_clock_seconds = 0.0;
  std::vector<OutputFile> outputs;
  nlohmann::ordered_json summary;
};

nlohmann::ordered_json to_json(const RunManifest& manifest);

/// Executes the configured task, writes its CSV/JSON files and
/// manifest.json into config.output_dir. Library errors propagate.
RunManifest run(const RunConfig& config);

/// Recomputes the checksums listed in <dir>/manifest.json. Returns the names
/// of missing or mismatching files (empty when everything matches).
std::vector<std::string> verify_manifest(const std::filesystem::path& dir);

}  // namespace nhdqpt
