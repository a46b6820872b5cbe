#include "topictrend/ingest/documents.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "topictrend/error.hpp"
#include "topictrend/ingest/utf8.hpp"

namespace topictrend::ingest {

Language parse_language(std::string_view name) {
  const std::string lower = utf8::to_lower(name);
  if (lower == "spanish" || lower == "es" || lower == "español") return Language::kSpanish;
  if (lower == "english" || lower == "en") return Language::kEnglish;
  if (lower == "portuguese" || lower == "pt" || lower == "português") return Language::kPortuguese;
  return Language::kUnknown;
}

std::string_view to_string(Language lang) {
  switch (lang) {
    case Language::kSpanish: return "spanish";
    case Language::kEnglish: return "english";
    case Language::kPortuguese: return "portuguese";
    case Language::kUnknown: break;
  }
  return "unknown";
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("ParseError", "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string scalar_to_string(const nlohmann::json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_array()) {
    std::string joined;
    for (const auto& item : value) {
      if (!joined.empty()) joined += "; ";
      joined += scalar_to_string(item);
    }
    return joined;
  }
  return value.dump();
}

}  // namespace

std::vector<RawDocument> load_document_directory(const std::filesystem::path& dir, YearRange range) {
  if (!std::filesystem::is_directory(dir)) {
    throw data_error("ParseError", "corpus directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".txt" || ext == ".html" || ext == ".htm") files.push_back(entry.path());
  }
  if (files.empty()) throw data_error("EmptyCorpus", "no .txt or .html documents in " + dir.string());
  std::sort(files.begin(), files.end());

  const auto meta_path = dir / "metadata.json";
  nlohmann::json metadata;
  try {
    metadata = nlohmann::json::parse(read_file(meta_path));
  } catch (const nlohmann::json::exception& e) {
    throw data_error("ParseError", meta_path.string() + ": " + e.what());
  }
  if (!metadata.is_object()) throw data_error("ParseError", meta_path.string() + ": expected an object");

  std::vector<RawDocument> docs;
  std::set<std::string> seen;
  for (const auto& file : files) {
    RawDocument doc;
    doc.id = file.stem().string();
    if (!seen.insert(doc.id).second) {
      throw data_error("ParseError", "duplicate document id '" + doc.id + "' in " + dir.string());
    }
    const auto it = metadata.find(doc.id);
    if (it == metadata.end() || !it->is_object()) {
      throw data_error("ParseError", "no metadata entry for document '" + doc.id + "'");
    }
    const auto year = it->find("year");
    if (year == it->end() || !year->is_number_integer()) {
      throw data_error("ParseError", "metadata for '" + doc.id + "' lacks an integer year");
    }
    doc.year = year->get<int>();
    if (doc.year < range.first || doc.year > range.last) {
      throw data_error("ParseError", "year " + std::to_string(doc.year) + " of '" + doc.id +
                                         "' outside corpus range");
    }
    if (const auto lang = it->find("language"); lang != it->end() && lang->is_string()) {
      doc.language = parse_language(lang->get<std::string>());
    }
    for (const auto& [key, value] : it->items()) {
      if (key != "year" && key != "language") doc.metadata[key] = scalar_to_string(value);
    }
    const auto ext = file.extension().string();
    doc.source_kind = ext == ".txt" ? SourceKind::kPlain : SourceKind::kMarkup;
    doc.text = read_file(file);
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace topictrend::ingest
