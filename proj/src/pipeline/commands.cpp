#include "topictrend/pipeline/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_map>
#include <set>

#include "topictrend/analysis/aggregate.hpp"
#include "topictrend/analysis/assignment.hpp"
#include "topictrend/analysis/tags.hpp"
#include "topictrend/error.hpp"
#include "topictrend/ingest/corpus.hpp"
#include "topictrend/ingest/documents.hpp"
#include "topictrend/model/dtm.hpp"
#include "topictrend/model/metrics.hpp"
#include "topictrend/pipeline/csv.hpp"
#include "topictrend/pipeline/manifest.hpp"
#include "topictrend/selection/grid.hpp"
#include "topictrend/selection/ranking.hpp"
#include "topictrend/trend/ols.hpp"

namespace topictrend::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

RunRecord start_run(const std::string& command, const PipelineConfig& config, const CommandOptions& options) {
  RunRecord run;
  run.command = command;
  run.config = config.to_json();
  run.seed = config.hyper.seed;
  run.started_at = utc_timestamp();
  if (!options.config_file.empty()) run.inputs.push_back(options.config_file);
  return run;
}

void append(std::vector<fs::path>& out, const std::vector<fs::path>& more) {
  out.insert(out.end(), more.begin(), more.end());
}

fs::path resolve_corpus(const PipelineConfig& config, const CommandOptions& options) {
  const fs::path p = options.corpus.value_or(corpus_path(config.paths.output_dir));
  if (!fs::exists(p)) throw data_error("FileNotFound", "corpus archive " + p.string() + " not found; run ingest first");
  return p;
}

fs::path resolve_model(const PipelineConfig& config, const CommandOptions& options) {
  const fs::path p = options.model.value_or(model_dir(config.paths.output_dir, config.hyper.num_topics, config.hyper.seed));
  if (!fs::exists(p / "model.json")) throw data_error("FileNotFound", "model archive " + p.string() + " not found; run train first");
  return p;
}

json area_json(analysis::MainArea a) { return analysis::to_string(a); }

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

// Tags for `k` topics from the configured file, or all Other with a warning.
analysis::TagSet resolve_tags(const PipelineConfig& config, std::size_t k) {
  const auto& path = config.paths.tags_file;
  if (path.empty() || !fs::exists(path)) {
    analysis::TagSet set;
    set.tags = analysis::default_tags(k);
    set.warnings.push_back(path.empty() ? "no tags file configured; every topic is Other"
                                        : "tags file " + path.string() + " not found; every topic is Other");
    return set;
  }
  return analysis::load_tags(path, k);
}

json trend_json(const trend::TrendResult& r) {
  json band = json::array();
  for (const auto& b : r.ci_band) band.push_back({{"x", b.x}, {"fit", b.fit}, {"lower", b.lower}, {"upper", b.upper}});
  return {{"n", r.n},
          {"slope", r.slope},
          {"intercept", r.intercept},
          {"r", r.r},
          {"df", r.df},
          {"t_stat", std::isfinite(r.t_stat) ? json(r.t_stat) : json(r.t_stat > 0 ? "inf" : "-inf")},
          {"p_one_sided_less", r.p_one_sided_less},
          {"alternative", "r < 0"},
          {"residual_se", r.residual_se},
          {"t_critical", r.t_critical},
          {"confidence", 0.95},
          {"ci_band", band}};
}

// Fits the trend and writes fig6 CSV plus trend.json into `dir`.
void write_trend(const fs::path& dir, const std::vector<double>& x, const std::vector<double>& y,
                 const std::vector<std::vector<json>>& leading, const std::vector<std::string>& leading_columns,
                 const json& meta, CommandResult& result) {
  Table t;
  t.columns = leading_columns;
  for (const char* c : {"fit", "lower", "upper"}) t.columns.emplace_back(c);
  json trend;
  try {
    const auto fit = trend::ols_fit(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) {
      auto row = leading[i];
      row.insert(row.end(), {fit.ci_band[i].fit, fit.ci_band[i].lower, fit.ci_band[i].upper});
      t.add(std::move(row));
    }
    trend = trend_json(fit);
  } catch (const Error& e) {
    result.warnings.push_back(std::string("trend not fitted: ") + e.what());
    for (const auto& lead : leading) {
      auto row = lead;
      row.insert(row.end(), {nullptr, nullptr, nullptr});
      t.add(std::move(row));
    }
    trend = {{"error", e.kind()}, {"message", e.what()}};
  }
  trend["meta"] = meta;
  append(result.outputs, write_table(dir, "fig6_trend", t, meta));
  write_file_atomic(dir / "trend.json", trend.dump(2) + "\n");
  result.outputs.push_back(dir / "trend.json");
}

}  // namespace

fs::path ingest_dir(const fs::path& root) { return root / "ingest"; }
fs::path corpus_path(const fs::path& root) { return ingest_dir(root) / "corpus.json"; }
fs::path model_dir(const fs::path& root, int k, std::uint64_t seed) {
  return root / "models" / (std::to_string(k) + "-" + std::to_string(seed));
}
fs::path grid_dir(const fs::path& root) { return root / "grid"; }
fs::path assign_dir(const fs::path& root) { return root / "assign"; }
fs::path reports_dir(const fs::path& root) { return root / "reports"; }
fs::path trend_dir(const fs::path& root) { return root / "trend"; }

IngestSummary summarize_ingest(const std::vector<ingest::PreprocessedDocument>& docs,
                               const ingest::DictionaryBundle& dicts) {
  IngestSummary s;
  s.documents = docs.size();
  std::set<std::string> types, corrected;
  std::size_t clean_tokens = 0;
  double recognized_before = 0.0, recognized_after = 0.0;
  double ratio_before = 0.0, ratio_after = 0.0;
  for (const auto& d : docs) {
    s.words += d.word_count;
    types.insert(d.word_types.begin(), d.word_types.end());
    corrected.insert(d.corrected_types.begin(), d.corrected_types.end());
    s.corrected_tokens += d.clean.corrected_count;
    clean_tokens += d.clean.tokens.size();
    recognized_before += d.recognition_before * static_cast<double>(d.word_count);
    recognized_after += d.recognition_after * static_cast<double>(d.word_count);
    ratio_before += d.recognition_before;
    ratio_after += d.recognition_after;
  }
  s.unique_words = types.size();
  s.corrected_words = corrected.size();
  s.stopwords = dicts.stopwords().size();
  s.protected_words = dicts.protected_words().size();
  if (s.documents > 0) {
    const auto n = static_cast<double>(s.documents);
    s.average_length = static_cast<double>(clean_tokens) / n;
    s.mean_recognition_before = ratio_before / n;
    s.mean_recognition_after = ratio_after / n;
  }
  if (s.words > 0) {
    s.recognition_before = recognized_before / static_cast<double>(s.words);
    s.recognition_after = recognized_after / static_cast<double>(s.words);
  }
  return s;
}

CommandResult cmd_ingest(const PipelineConfig& config, const CommandOptions& options) {
  const auto& paths = config.paths;
  if (paths.corpus_dir.empty()) throw usage_error("ConfigError", "paths.corpus_dir is not set");
  if (!fs::is_directory(paths.corpus_dir)) {
    throw data_error("FileNotFound", "corpus directory " + paths.corpus_dir.string() + " does not exist");
  }
  OutputLock lock(paths.output_dir);
  Stopwatch clock;
  CommandResult result;
  result.output_dir = ingest_dir(paths.output_dir);
  RunRecord run = start_run("ingest", config, options);
  run.inputs.insert(run.inputs.end(), {paths.corpus_dir, paths.frequency_dict, paths.custom_words, paths.lemma_table,
                                       paths.stopwords, paths.protected_words, paths.confusions});

  auto raw = ingest::load_document_directory(paths.corpus_dir, {config.ingest.first_year, config.ingest.last_year});
  if (!config.ingest.languages.empty()) {
    std::set<ingest::Language> keep;
    for (const auto& l : config.ingest.languages) keep.insert(ingest::parse_language(l));
    std::erase_if(raw, [&](const ingest::RawDocument& d) { return !keep.contains(d.language); });
    if (raw.empty()) throw data_error("EmptyCorpus", "no documents in the selected languages");
  }
  run.timings["load"] = clock.lap();

  const auto sources = ingest::DictionaryBundle::read_sources(paths.frequency_dict, paths.custom_words,
                                                              paths.lemma_table, paths.stopwords,
                                                              paths.protected_words, paths.confusions);
  const ingest::DictionaryBundle dicts(sources, config.ingest.max_edit_distance);
  run.timings["dictionaries"] = clock.lap();

  ingest::PreprocessOptions popts;
  popts.min_len = config.ingest.min_len;
  popts.max_edit_distance = config.ingest.max_edit_distance;
  const auto processed = ingest::preprocess_all(raw, dicts, popts, config.workers);
  run.timings["preprocess"] = clock.lap();

  std::vector<ingest::CleanDocument> clean;
  clean.reserve(processed.size());
  for (const auto& p : processed) clean.push_back(p.clean);
  const auto corpus = ingest::build_time_slices(clean, config.ingest.bin_years, config.ingest.min_df);
  run.timings["slice"] = clock.lap();

  const auto dir = result.output_dir;
  fs::create_directories(dir);
  ingest::save_corpus(corpus, corpus_path(paths.output_dir));
  result.outputs.push_back(corpus_path(paths.output_dir));

  const auto s = summarize_ingest(processed, dicts);
  Table summary;
  summary.columns = {"field", "value"};
  summary.add({"documents", s.documents});
  summary.add({"words", s.words});
  summary.add({"unique_words", s.unique_words});
  summary.add({"corrected_words", s.corrected_words});
  summary.add({"corrected_tokens", s.corrected_tokens});
  summary.add({"average_document_length", s.average_length});
  summary.add({"stopwords", s.stopwords});
  summary.add({"protected_words", s.protected_words});
  summary.add({"recognition_before", s.recognition_before});
  summary.add({"recognition_after", s.recognition_after});
  summary.add({"mean_recognition_before", s.mean_recognition_before});
  summary.add({"mean_recognition_after", s.mean_recognition_after});
  summary.add({"slices", corpus.slices.size()});
  summary.add({"vocabulary_size", corpus.vocabulary.size()});
  summary.add({"corpus_tokens", corpus.num_tokens()});
  const json meta = {{"bin_years", config.ingest.bin_years},
                     {"min_df", config.ingest.min_df},
                     {"dropped_periods", corpus.rule.dropped_periods},
                     {"empty_documents", corpus.rule.empty_documents}};
  append(result.outputs, write_table(dir, "table1_summary", summary, meta));

  Table recognition;
  recognition.columns = {"doc_id", "year", "words", "corrected_tokens", "recognition_before", "recognition_after"};
  for (const auto& p : processed) {
    recognition.add({p.clean.id, p.clean.year, p.word_count, p.clean.corrected_count, p.recognition_before,
                     p.recognition_after});
  }
  append(result.outputs, write_table(dir, "fig3_recognition", recognition));
  for (const auto& id : corpus.rule.empty_documents) {
    result.warnings.push_back("document " + id + " has no tokens after vocabulary pruning");
  }
  run.timings["write"] = clock.lap();
  run.outputs = result.outputs;
  run.warnings = result.warnings;
  append_manifest(dir, run);
  return result;
}

CommandResult cmd_train(const PipelineConfig& config, const CommandOptions& options) {
  config.hyper.validate();
  const auto corpus_file = resolve_corpus(config, options);
  OutputLock lock(config.paths.output_dir);
  Stopwatch clock;
  CommandResult result;
  result.output_dir = model_dir(config.paths.output_dir, config.hyper.num_topics, config.hyper.seed);
  RunRecord run = start_run("train", config, options);
  run.inputs.push_back(corpus_file);

  const auto corpus = ingest::load_corpus(corpus_file);
  run.timings["load"] = clock.lap();
  auto dtm = config.dtm;
  dtm.workers = config.workers;
  auto model = model::fit_dtm(corpus, config.hyper, dtm);
  model.corpus_hash = sha256_file(corpus_file);
  run.timings["fit"] = clock.lap();
  if (!model.train_log.converged) {
    result.warnings.push_back("NonConvergence: stopped after " + std::to_string(model.train_log.iterations) +
                              " iterations without reaching the tolerance");
  }
  model::save_model(model, result.output_dir);
  for (const char* f : {"model.json", "topics.tsv", "topic_variance.tsv", "alpha.tsv", "documents.tsv"}) {
    result.outputs.push_back(result.output_dir / f);
  }
  run.timings["write"] = clock.lap();
  run.outputs = result.outputs;
  run.warnings = result.warnings;
  append_manifest(result.output_dir, run);
  return result;
}

CommandResult cmd_grid(const PipelineConfig& config, const CommandOptions& options) {
  auto grid = config.grid;
  grid.assignment_mass = config.analysis.assignment_mass;
  grid.workers = config.workers;
  grid.validate();
  const auto corpus_file = resolve_corpus(config, options);
  OutputLock lock(config.paths.output_dir);
  Stopwatch clock;
  CommandResult result;
  result.output_dir = grid_dir(config.paths.output_dir);
  RunRecord run = start_run("grid", config, options);
  run.inputs.push_back(corpus_file);

  const auto corpus = ingest::load_corpus(corpus_file);
  const auto [train, heldout] = selection::split_heldout(corpus, grid.heldout_fraction, grid.split_seed);
  const std::string train_hash = sha256_hex(ingest::corpus_to_json(train).dump());
  const std::string config_file = options.config_file.string();

  // Fitted cells are archived under grid/models/<K>-<seed> and reused when
  // the corpus split and settings match.
  selection::GridHooks hooks;
  auto cell_dir = [&](int k, std::uint64_t seed) {
    return result.output_dir / "models" / (std::to_string(k) + "-" + std::to_string(seed));
  };
  hooks.cached = [&](int k, std::uint64_t seed) -> std::optional<model::FittedModel> {
    const auto dir = cell_dir(k, seed);
    if (!fs::exists(dir / "model.json")) return std::nullopt;
    auto m = model::load_model(dir);
    auto expected = config.hyper;
    expected.num_topics = k;
    expected.seed = seed;
    auto opts = config.dtm;
    opts.workers = 1;
    if (m.corpus_hash != train_hash || !(m.hyper == expected) || !(m.options == opts)) return std::nullopt;
    return m;
  };
  hooks.fitted = [&](const model::FittedModel& m) {
    auto copy = m;
    copy.corpus_hash = train_hash;
    const auto dir = cell_dir(m.hyper.num_topics, m.hyper.seed);
    model::save_model(copy, dir);
    RunRecord cell = start_run("grid-cell", config, options);
    cell.seed = m.hyper.seed;
    cell.inputs.push_back(corpus_file);
    for (const char* f : {"model.json", "topics.tsv", "topic_variance.tsv", "alpha.tsv", "documents.tsv"}) {
      cell.outputs.push_back(dir / f);
    }
    append_manifest(dir, cell);
  };
  const auto rows = selection::run_grid(corpus, grid, config.hyper, config.dtm, hooks);
  run.timings["grid"] = clock.lap();

  const json meta = {{"coherence_variant", model::kCoherenceVariant},
                     {"coherence_top_n", grid.coherence_top_n},
                     {"heldout", {{"protocol", "stratified by slice"},
                                  {"fraction", grid.heldout_fraction},
                                  {"split_seed", grid.split_seed},
                                  {"heldout_documents", heldout.num_documents()}}},
                     {"assignment_mass", grid.assignment_mass},
                     {"training_documents", train.num_documents()}};
  Table table;
  table.columns = {"K", "seed", "coherence", "perplexity", "empty_topics", "unassigned_docs", "iterations",
                   "converged", "failed", "error"};
  for (const auto& r : rows) {
    table.add({r.K, r.seed, r.coherence, r.perplexity, r.empty_topics, r.unassigned_docs, r.iterations, r.converged,
               r.failed, r.error});
    run.timings["cell " + std::to_string(r.K) + "-" + std::to_string(r.seed)] = r.wall_time;
    if (r.failed) result.warnings.push_back("cell K=" + std::to_string(r.K) + " seed=" + std::to_string(r.seed) +
                                            " failed: " + r.error);
    else if (!r.converged) result.warnings.push_back("cell K=" + std::to_string(r.K) + " seed=" +
                                                     std::to_string(r.seed) + " did not converge");
  }
  append(result.outputs, write_table(result.output_dir, "grid", table, meta));

  const auto report = selection::rank_models(rows, config.weights);
  Table ranking;
  ranking.columns = {"rank", "K", "seed", "score", "z_coherence", "z_perplexity", "z_empty_topics",
                     "z_unassigned_docs", "coherence", "perplexity", "empty_topics", "unassigned_docs", "failed"};
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    ranking.add({i + 1, r.metrics.K, r.metrics.seed, r.score, r.z_coherence, r.z_perplexity, r.z_empty_topics,
                 r.z_unassigned_docs, r.metrics.coherence, r.metrics.perplexity, r.metrics.empty_topics,
                 r.metrics.unassigned_docs, r.metrics.failed});
  }
  const json weights = {{"coherence", report.weights.coherence},
                        {"perplexity", report.weights.perplexity},
                        {"empty_topics", report.weights.empty_topics},
                        {"unassigned_docs", report.weights.unassigned_docs}};
  append(result.outputs, write_table(result.output_dir, "ranking", ranking,
                                     {{"weights", weights}, {"note", "aid for manual review, not a selection"}}));
  run.timings["write"] = clock.lap();
  run.outputs = result.outputs;
  run.warnings = result.warnings;
  append_manifest(result.output_dir, run);
  return result;
}

CommandResult cmd_assign(const PipelineConfig& config, const CommandOptions& options) {
  const auto mdir = resolve_model(config, options);
  OutputLock lock(config.paths.output_dir);
  Stopwatch clock;
  CommandResult result;
  result.output_dir = assign_dir(config.paths.output_dir);
  RunRecord run = start_run("assign", config, options);
  run.inputs.push_back(mdir);

  const auto model = model::load_model(mdir);
  const auto assignments = analysis::assign_all(model, config.analysis.assignment_mass);
  const auto unassigned = analysis::unassigned_documents(model, assignments);
  run.timings["assign"] = clock.lap();

  std::unordered_map<std::string, int> years;
  for (const auto& d : model.documents) years.emplace(d.id, d.year);
  const json meta = {{"mass", config.analysis.assignment_mass}, {"model", mdir.string()}};
  Table docs;
  docs.columns = {"topic_id", "rank", "doc_id", "year", "proportion"};
  Table topics;
  topics.columns = {"topic_id", "documents", "mass_covered"};
  for (const auto& a : assignments) {
    for (std::size_t i = 0; i < a.docs.size(); ++i) {
      docs.add({a.topic_id, i + 1, a.docs[i].first, years.at(a.docs[i].first), a.docs[i].second});
    }
    topics.add({a.topic_id, a.docs.size(), a.mass_covered});
  }
  Table none;
  none.columns = {"doc_id", "year"};
  for (const auto& id : unassigned) none.add({id, years.at(id)});
  append(result.outputs, write_table(result.output_dir, "assignments", docs, meta));
  append(result.outputs, write_table(result.output_dir, "topic_summary", topics, meta));
  append(result.outputs, write_table(result.output_dir, "unassigned", none, meta));
  run.timings["write"] = clock.lap();
  run.outputs = result.outputs;
  append_manifest(result.output_dir, run);
  return result;
}

CommandResult cmd_report(const PipelineConfig& config, const CommandOptions& options) {
  const auto mdir = resolve_model(config, options);
  const auto corpus_file = resolve_corpus(config, options);
  OutputLock lock(config.paths.output_dir);
  Stopwatch clock;
  CommandResult result;
  const auto dir = reports_dir(config.paths.output_dir);
  result.output_dir = dir;
  RunRecord run = start_run("report", config, options);
  run.inputs.insert(run.inputs.end(), {mdir, corpus_file, config.paths.tags_file});

  const auto model = model::load_model(mdir);
  const auto corpus = ingest::load_corpus(corpus_file);
  auto tagset = resolve_tags(config, model.num_topics());
  result.warnings = tagset.warnings;
  const auto& tags = tagset.tags;
  const auto assignments = analysis::assign_all(model, config.analysis.assignment_mass);
  const auto docs = analysis::doc_table(model);
  run.timings["load"] = clock.lap();
  const json meta = {{"mass", config.analysis.assignment_mass}, {"model", mdir.string()}};

  Table fig2;
  fig2.columns = {"period", "start_year", "end_year", "documents", "average_length"};
  for (const auto& p : analysis::period_stats(corpus)) {
    fig2.add({p.label, p.start_year, p.end_year, p.documents, p.average_length});
  }
  append(result.outputs, write_table(dir, "fig2_periods", fig2, {{"length", "corpus tokens per document"}}));

  const auto counts = analysis::area_counts_by_year(assignments, tags, docs);
  Table fig4;
  fig4.columns = {"year", "area", "documents", "year_total", "ratio"};
  for (std::size_t a = 0; a < analysis::kNumAreas; ++a) {
    for (std::size_t i = 0; i < counts.years.size(); ++i) {
      fig4.add({counts.years[i], area_json(analysis::kAllAreas[a]), counts.counts[a][i], counts.docs_per_year[i],
                counts.ratios[a][i]});
    }
  }
  json totals = json::object();
  for (std::size_t a = 0; a < analysis::kNumAreas; ++a) totals[analysis::to_string(analysis::kAllAreas[a])] = counts.totals[a];
  auto fig4_meta = meta;
  fig4_meta["area_totals"] = totals;
  append(result.outputs, write_table(dir, "fig4_area_counts", fig4, fig4_meta));

  Table fig5;
  fig5.columns = {"area", "subarea", "year", "documents"};
  for (const auto& s : analysis::largest_subarea_series(assignments, tags, docs)) {
    for (std::size_t i = 0; i < s.years.size(); ++i) fig5.add({area_json(s.area), s.subarea, s.years[i], s.counts[i]});
  }
  append(result.outputs, write_table(dir, "fig5_largest_subareas", fig5, meta));

  Table table2;
  table2.columns = {"area", "rank", "word", "probability"};
  for (auto area : analysis::kAllAreas) {
    if (std::none_of(tags.begin(), tags.end(), [&](const auto& t) { return t.main_area == area; })) continue;
    const auto profile = analysis::area_word_profile(model, tags, area, config.analysis.top_n);
    for (std::size_t i = 0; i < profile.size(); ++i) {
      table2.add({area_json(area), i + 1, profile[i].word, profile[i].probability});
    }
  }
  append(result.outputs, write_table(dir, "table2_area_profiles", table2, {{"top_n", config.analysis.top_n}}));

  Table table3;
  table3.columns = {"area", "subarea", "topics", "documents"};
  for (const auto& r : analysis::subarea_table(assignments, tags)) {
    table3.add({area_json(r.area), r.subarea, r.topics, r.documents});
  }
  append(result.outputs, write_table(dir, "table3_subareas", table3, meta));

  Table table5;
  table5.columns = {"area", "topic_id", "subareas", "documents", "top_words"};
  for (const auto& r : analysis::historical_topic_table(model, assignments, tags, config.analysis.historical_per_area)) {
    table5.add({area_json(r.area), r.topic_id, join(r.subareas, "; "), r.documents, join(r.top_words, "; ")});
  }
  append(result.outputs, write_table(dir, "table5_historical_topics", table5, meta));

  int first_year = 0;
  if (!docs.empty()) {
    first_year = std::min_element(docs.begin(), docs.end(), [](const auto& a, const auto& b) {
                   return a.year < b.year;
                 })->year;
  }
  const int from_year = config.analysis.from_year.value_or(first_year);
  const auto series = analysis::historical_ratio_series(assignments, tags, docs, from_year);
  std::vector<double> x, y;
  std::vector<std::vector<json>> leading;
  for (const auto& p : series.points) {
    x.push_back(p.year);
    y.push_back(p.ratio);
    leading.push_back({p.year, p.historical, p.total, p.ratio});
  }
  auto trend_meta = meta;
  trend_meta["from_year"] = from_year;
  trend_meta["overall_ratio"] = series.overall_ratio;
  trend_meta["historical_documents"] = series.historical;
  trend_meta["documents"] = series.total;
  write_trend(dir, x, y, leading, {"year", "historical", "total", "ratio"}, trend_meta, result);
  run.timings["report"] = clock.lap();
  run.outputs = result.outputs;
  run.warnings = result.warnings;
  append_manifest(dir, run);
  return result;
}

CommandResult cmd_trend(const PipelineConfig& config, const CommandOptions& options) {
  if (!options.input) throw usage_error("MissingInput", "trend needs an input CSV with year and ratio columns");
  OutputLock lock(config.paths.output_dir);
  Stopwatch clock;
  CommandResult result;
  result.output_dir = trend_dir(config.paths.output_dir);
  RunRecord run = start_run("trend", config, options);
  run.inputs.push_back(*options.input);

  const auto table = read_csv(*options.input);
  const auto col = [&](const std::string& name) {
    auto it = std::find(table.columns.begin(), table.columns.end(), name);
    if (it == table.columns.end()) throw data_error("ParseError", options.input->string() + ": missing column " + name);
    return static_cast<std::size_t>(it - table.columns.begin());
  };
  const std::size_t yc = col("year"), rc = col("ratio");
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    double year = 0.0, ratio = 0.0;
    try {
      year = model::parse_double(table.rows[i][yc].get<std::string>());
      ratio = model::parse_double(table.rows[i][rc].get<std::string>());
    } catch (const std::exception&) {
      throw data_error("ParseError", options.input->string() + ": row " + std::to_string(i + 2) + " is not numeric");
    }
    if (config.analysis.from_year && year < *config.analysis.from_year) continue;
    points.emplace_back(year, ratio);
  }
  std::sort(points.begin(), points.end());
  std::vector<double> x, y;
  std::vector<std::vector<json>> leading;
  for (const auto& [a, b] : points) {
    x.push_back(a);
    y.push_back(b);
    leading.push_back({a, b});
  }
  trend::ols_fit(x, y);  // degenerate input is an error for this command
  json meta = {{"input", options.input->filename().string()}};
  if (config.analysis.from_year) meta["from_year"] = *config.analysis.from_year;
  write_trend(result.output_dir, x, y, leading, {"year", "ratio"}, meta, result);
  run.timings["trend"] = clock.lap();
  run.outputs = result.outputs;
  run.warnings = result.warnings;
  append_manifest(result.output_dir, run);
  return result;
}

}  // namespace topictrend::pipeline
