#include "topictrend/ingest/preprocess.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "topictrend/ingest/markup.hpp"

namespace topictrend::ingest {

TokenList remove_stopwords(const TokenList& tokens, const DictionaryBundle& dicts) {
  TokenList out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (dicts.is_protected(t) || !dicts.is_stopword(t)) out.push_back(t);
  }
  return out;
}

TokenList lemmatize(const TokenList& tokens, const DictionaryBundle& dicts) {
  TokenList out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    const std::string* lemma = dicts.lemma_of(t);
    out.push_back(lemma ? *lemma : t);
  }
  return out;
}

PreprocessedDocument preprocess_text(const std::string& id, int year, const std::string& plain_text,
                                     const DictionaryBundle& dicts, const PreprocessOptions& options) {
  PreprocessedDocument out;
  out.clean.id = id;
  out.clean.year = year;

  TokenList tokens = normalize_and_tokenize(plain_text, options.min_len);
  out.word_count = tokens.size();
  out.word_types = tokens;
  std::sort(out.word_types.begin(), out.word_types.end());
  out.word_types.erase(std::unique(out.word_types.begin(), out.word_types.end()), out.word_types.end());
  out.recognition_before = recognition_ratio(tokens, dicts);

  CorrectionResult corrected = correct_orthography(tokens, dicts, options.max_edit_distance);
  out.recognition_after = recognition_ratio(corrected.tokens, dicts);
  out.clean.corrected_count = corrected.corrected_count;
  out.corrected_types = std::move(corrected.corrected_types);

  tokens = remove_stopwords(corrected.tokens, dicts);
  tokens = lemmatize(tokens, dicts);
  out.clean.tokens = filter_short(std::move(tokens), options.min_len);
  return out;
}

PreprocessedDocument preprocess_document(const RawDocument& doc, const DictionaryBundle& dicts,
                                         const PreprocessOptions& options) {
  if (doc.source_kind == SourceKind::kMarkup) {
    return preprocess_text(doc.id, doc.year, strip_markup(doc.text), dicts, options);
  }
  return preprocess_text(doc.id, doc.year, doc.text, dicts, options);
}

std::vector<PreprocessedDocument> preprocess_all(const std::vector<RawDocument>& docs,
                                                 const DictionaryBundle& dicts,
                                                 const PreprocessOptions& options, unsigned workers) {
  std::vector<PreprocessedDocument> out(docs.size());
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(docs.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < docs.size(); i = next++) {
      try {
        out[i] = preprocess_document(docs[i], dicts, options);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace topictrend::ingest
