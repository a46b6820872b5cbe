#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "topictrend/ingest/tokenize.hpp"

namespace topictrend::ingest {

enum class Language { kSpanish, kEnglish, kPortuguese, kUnknown };
enum class SourceKind { kMarkup, kPlain };

Language parse_language(std::string_view name);
std::string_view to_string(Language lang);

struct RawDocument {
  std::string id;
  int year = 0;
  Language language = Language::kUnknown;
  SourceKind source_kind = SourceKind::kPlain;
  std::string text;
  std::map<std::string, std::string> metadata;
};

struct CleanDocument {
  std::string id;
  int year = 0;
  TokenList tokens;
  std::size_t corrected_count = 0;
};

struct YearRange {
  int first = 1900;
  int last = 2100;
};

// Reads every *.txt / *.html / *.htm file in `dir` together with the
// sidecar `metadata.json` (object keyed by document id, the file stem).
// Documents are returned sorted by id.
//
// Throws EmptyCorpus when no document files exist and ParseError for
// missing/invalid metadata, duplicate ids or years outside `range`.
std::vector<RawDocument> load_document_directory(const std::filesystem::path& dir,
                                                 YearRange range = {});

}  // namespace topictrend::ingest
