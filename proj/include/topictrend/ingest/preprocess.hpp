#pragma once

#include <string>
#include <vector>

#include "topictrend/ingest/dictionary.hpp"
#include "topictrend/ingest/documents.hpp"
#include "topictrend/ingest/spell.hpp"
#include "topictrend/ingest/tokenize.hpp"

namespace topictrend::ingest {

// Drops tokens in the effective stopword list (protected words never are).
TokenList remove_stopwords(const TokenList& tokens, const DictionaryBundle& dicts);

// Replaces tokens by their lemma when the table has one.
TokenList lemmatize(const TokenList& tokens, const DictionaryBundle& dicts);

struct PreprocessOptions {
  std::size_t min_len = 3;
  int max_edit_distance = 2;
};

// Per-document result plus the statistics the ingest report needs.
struct PreprocessedDocument {
  CleanDocument clean;
  std::size_t word_count = 0;  // tokens after normalization, before correction
  std::vector<std::string> word_types;  // distinct such tokens, sorted
  double recognition_before = 1.0;
  double recognition_after = 1.0;
  std::vector<std::string> corrected_types;
};

// Runs tokenize -> correct -> stopwords -> lemmatize on plain text. Tokens
// shortened below `min_len` by correction or lemmatization are dropped at
// the end so the output satisfies the same length floor as the input.
PreprocessedDocument preprocess_text(const std::string& id, int year, const std::string& plain_text,
                                     const DictionaryBundle& dicts, const PreprocessOptions& options = {});

// Same as preprocess_text, stripping markup first for markup sources.
PreprocessedDocument preprocess_document(const RawDocument& doc, const DictionaryBundle& dicts,
                                         const PreprocessOptions& options = {});

// Preprocesses documents on `workers` threads. Output order matches input.
std::vector<PreprocessedDocument> preprocess_all(const std::vector<RawDocument>& docs,
                                                 const DictionaryBundle& dicts,
                                                 const PreprocessOptions& options, unsigned workers);

}  // namespace topictrend::ingest
