#include "topictrend/pipeline/csv.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "topictrend/error.hpp"
#include "topictrend/model/fitted_model.hpp"

namespace topictrend::pipeline {

namespace {

std::string cell_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return v.dump();
  if (v.is_number_float()) return model::format_double(v.get<double>());
  return v.dump();
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void Table::add(std::vector<nlohmann::json> row) {
  if (row.size() != columns.size()) throw numerical_error("DimensionMismatch", "row width differs from header");
  rows.push_back(std::move(row));
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + quote(table.columns[i]);
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + quote(cell_text(row[i]));
    out += '\n';
  }
  return out;
}

nlohmann::json to_records(const Table& table) {
  auto records = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      // NaN is not representable in JSON.
      r[table.columns[i]] = row[i].is_number_float() && !std::isfinite(row[i].get<double>()) ? nullptr : row[i];
    }
    records.push_back(std::move(r));
  }
  return records;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw data_error("WriteError", "cannot write " + tmp.string());
    out << content;
    if (!out) throw data_error("WriteError", "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<std::filesystem::path> write_table(const std::filesystem::path& dir, const std::string& name,
                                               const Table& table, const nlohmann::json& meta) {
  const auto csv = dir / (name + ".csv");
  const auto json = dir / (name + ".json");
  write_file_atomic(csv, to_csv(table));
  nlohmann::json sidecar;
  sidecar["table"] = name;
  sidecar["meta"] = meta;
  sidecar["columns"] = table.columns;
  sidecar["rows"] = to_records(table);
  write_file_atomic(json, sidecar.dump(2) + "\n");
  return {csv, json};
}

Table parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false, any = false;
  std::size_t line = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
      }
      field.clear();
      record.clear();
      any = false;
      ++line;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw data_error("ParseError", "line " + std::to_string(line) + ": unterminated quoted field");
  if (any || !field.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  if (records.empty()) throw data_error("ParseError", "CSV has no header");
  Table t;
  t.columns = records.front();
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != t.columns.size()) {
      throw data_error("ParseError", "row " + std::to_string(r + 1) + ": expected " + std::to_string(t.columns.size()) +
                                         " fields, got " + std::to_string(records[r].size()));
    }
    std::vector<nlohmann::json> row(records[r].begin(), records[r].end());
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("FileNotFound", "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

}  // namespace topictrend::pipeline
