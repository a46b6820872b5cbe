#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace topictrend::pipeline {

inline constexpr const char* kToolVersion = "0.1.0";

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

struct RunRecord {
  std::string command;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::vector<std::filesystem::path> inputs;   // hashed when the record is appended
  std::vector<std::filesystem::path> outputs;  // stored relative to the manifest directory
  std::map<std::string, double> timings;       // seconds per stage
  std::vector<std::string> warnings;
  std::string started_at;
};

// Current UTC time as ISO 8601.
std::string utc_timestamp();

// Appends `run` to <dir>/manifest.json, creating it if needed. Existing
// runs are never modified. Input directories hash every file below them.
void append_manifest(const std::filesystem::path& dir, const RunRecord& run);

// Exclusive lock on an output directory for the lifetime of the object.
// Throws OutputLocked if another command holds it.
class OutputLock {
 public:
  explicit OutputLock(const std::filesystem::path& dir);
  ~OutputLock();
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  std::filesystem::path path_;
};

}  // namespace topictrend::pipeline
