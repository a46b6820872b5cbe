#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace topictrend::pipeline {

// A table whose cells are JSON scalars. CSV output renders doubles in
// shortest round-trip form; the JSON sidecar keeps the typed values.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;

  void add(std::vector<nlohmann::json> row);
};

std::string to_csv(const Table& table);
nlohmann::json to_records(const Table& table);

// Writes the whole file to `path` via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Writes <dir>/<name>.csv and <dir>/<name>.json; the sidecar carries
// `meta`, the column names and the rows as records. Returns both paths.
std::vector<std::filesystem::path> write_table(const std::filesystem::path& dir, const std::string& name,
                                               const Table& table, const nlohmann::json& meta = nlohmann::json::object());

// Parses RFC 4180 CSV text: the first row is the header. Throws ParseError.
Table parse_csv(const std::string& text);
Table read_csv(const std::filesystem::path& path);

}  // namespace topictrend::pipeline
