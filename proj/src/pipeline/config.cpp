#include "topictrend/pipeline/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "topictrend/error.hpp"

namespace topictrend::pipeline {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Drops a trailing comment that is not inside double quotes.
std::string_view strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

std::string unquote(std::string_view v) {
  v = trim(v);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return std::string(v.substr(1, v.size() - 2));
  return std::string(v);
}

Error config_error(const std::string& key, const std::string& message) {
  return usage_error("ConfigError", key + ": " + message);
}

}  // namespace

ConfigFile ConfigFile::parse(std::string_view text) {
  ConfigFile cfg;
  std::string section;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const auto line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw usage_error("ConfigError", "line " + std::to_string(line_no) + ": bad section");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw usage_error("ConfigError", "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = (section.empty() ? "" : section + ".") + std::string(trim(line.substr(0, eq)));
    if (cfg.values_.contains(key)) {
      throw usage_error("ConfigError", "line " + std::to_string(line_no) + ": duplicate key " + key + " (first on line " +
                                           std::to_string(cfg.lines_[key]) + ")");
    }
    cfg.values_[key] = std::string(trim(line.substr(eq + 1)));
    cfg.lines_[key] = line_no;
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("ConfigError", "cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<std::string> ConfigFile::string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return unquote(it->second);
}

std::optional<double> ConfigFile::number(const std::string& key) const {
  auto s = string(key);
  if (!s) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
  if (ec != std::errc{} || ptr != s->data() + s->size()) throw config_error(key, "expected a number, got '" + *s + "'");
  return v;
}

std::optional<long long> ConfigFile::integer(const std::string& key) const {
  auto s = string(key);
  if (!s) return std::nullopt;
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
  if (ec != std::errc{} || ptr != s->data() + s->size()) throw config_error(key, "expected an integer, got '" + *s + "'");
  return v;
}

std::optional<bool> ConfigFile::boolean(const std::string& key) const {
  auto s = string(key);
  if (!s) return std::nullopt;
  if (*s == "true") return true;
  if (*s == "false") return false;
  throw config_error(key, "expected true or false, got '" + *s + "'");
}

std::optional<std::vector<std::string>> ConfigFile::list(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  std::string_view v = trim(it->second);
  std::string body;
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') throw config_error(key, "unterminated array");
    body = std::string(v.substr(1, v.size() - 2));
  } else {
    body = unquote(v);  // "a, b" or a, b
  }
  std::vector<std::string> out;
  std::istringstream items(body);
  for (std::string item; std::getline(items, item, ',');) {
    if (auto x = unquote(item); !x.empty()) out.push_back(std::move(x));
  }
  return out;
}

PipelineConfig PipelineConfig::from_file(const ConfigFile& f, const std::filesystem::path& base_dir) {
  PipelineConfig c;
  auto path = [&](const std::string& key, std::filesystem::path& out) {
    if (auto s = f.string(key)) {
      std::filesystem::path p(*s);
      out = p.is_absolute() || s->empty() ? p : base_dir / p;
    }
  };
  path("paths.corpus_dir", c.paths.corpus_dir);
  path("paths.frequency_dict", c.paths.frequency_dict);
  path("paths.custom_words", c.paths.custom_words);
  path("paths.lemma_table", c.paths.lemma_table);
  path("paths.stopwords", c.paths.stopwords);
  path("paths.protected_words", c.paths.protected_words);
  path("paths.confusions", c.paths.confusions);
  path("paths.output_dir", c.paths.output_dir);
  path("paths.tags_file", c.paths.tags_file);

  auto set_int = [&](const std::string& key, auto& out) {
    if (auto v = f.integer(key)) out = static_cast<std::remove_reference_t<decltype(out)>>(*v);
  };
  auto set_num = [&](const std::string& key, double& out) {
    if (auto v = f.number(key)) out = *v;
  };
  set_int("ingest.bin_years", c.ingest.bin_years);
  set_int("ingest.min_df", c.ingest.min_df);
  if (auto v = f.list("ingest.languages")) c.ingest.languages = *v;
  set_int("ingest.max_edit_distance", c.ingest.max_edit_distance);
  set_int("ingest.min_len", c.ingest.min_len);
  set_int("ingest.first_year", c.ingest.first_year);
  set_int("ingest.last_year", c.ingest.last_year);

  set_int("model.K", c.hyper.num_topics);
  set_num("model.sigma2", c.hyper.sigma2);
  set_num("model.delta2", c.hyper.delta2);
  set_num("model.a2", c.hyper.a2);
  if (auto v = f.list("model.alpha0")) {
    c.hyper.alpha0.clear();
    for (const auto& s : *v) c.hyper.alpha0.push_back(model::parse_double(s));
  }
  set_int("model.seed", c.hyper.seed);
  set_int("model.max_iters", c.dtm.max_iters);
  set_num("model.tolerance", c.dtm.tolerance);
  set_num("model.obs_variance", c.dtm.obs_variance);
  set_num("model.initial_variance", c.dtm.initial_variance);
  set_int("model.init_lda_iters", c.dtm.init_lda_iters);
  set_num("model.init_lda_alpha", c.dtm.init_lda_alpha);
  set_num("model.init_noise", c.dtm.init_noise);
  set_int("model.estep_max_iters", c.dtm.estep_max_iters);
  set_num("model.estep_tolerance", c.dtm.estep_tolerance);
  set_int("model.mstep_max_iters", c.dtm.mstep_max_iters);

  auto integers = [&](const std::string& key, auto& out) {
    auto v = f.list(key);
    if (!v) return;
    out.clear();
    for (const auto& s : *v) {
      typename std::remove_reference_t<decltype(out)>::value_type x{};
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
      if (ec != std::errc{} || ptr != s.data() + s.size()) throw config_error(key, "expected integers, got '" + s + "'");
      out.push_back(x);
    }
  };
  integers("grid.k_values", c.grid.k_values);
  integers("grid.seeds", c.grid.seeds);
  set_num("grid.heldout_fraction", c.grid.heldout_fraction);
  set_int("grid.split_seed", c.grid.split_seed);
  set_int("grid.coherence_top_n", c.grid.coherence_top_n);
  set_num("rank.coherence", c.weights.coherence);
  set_num("rank.perplexity", c.weights.perplexity);
  set_num("rank.empty_topics", c.weights.empty_topics);
  set_num("rank.unassigned_docs", c.weights.unassigned_docs);

  set_num("analysis.assignment_mass", c.analysis.assignment_mass);
  c.grid.assignment_mass = c.analysis.assignment_mass;
  if (auto v = f.integer("analysis.from_year")) c.analysis.from_year = static_cast<int>(*v);
  set_int("analysis.top_n", c.analysis.top_n);
  set_int("analysis.historical_per_area", c.analysis.historical_per_area);
  set_int("run.workers", c.workers);

  static const std::vector<std::string> known_sections = {"paths", "ingest", "model", "grid", "rank", "analysis", "run"};
  for (const auto& [key, value] : f.raw()) {
    const auto dot = key.find('.');
    const auto section = dot == std::string::npos ? std::string{} : key.substr(0, dot);
    if (std::find(known_sections.begin(), known_sections.end(), section) == known_sections.end()) {
      throw usage_error("ConfigError", "unknown key " + key);
    }
  }
  return c;
}

nlohmann::json PipelineConfig::to_json() const {
  nlohmann::json j;
  j["paths"] = {{"corpus_dir", paths.corpus_dir.string()},     {"frequency_dict", paths.frequency_dict.string()},
                {"custom_words", paths.custom_words.string()}, {"lemma_table", paths.lemma_table.string()},
                {"stopwords", paths.stopwords.string()},       {"protected_words", paths.protected_words.string()},
                {"confusions", paths.confusions.string()},     {"output_dir", paths.output_dir.string()},
                {"tags_file", paths.tags_file.string()}};
  j["ingest"] = {{"bin_years", ingest.bin_years},   {"min_df", ingest.min_df},
                 {"languages", ingest.languages},   {"max_edit_distance", ingest.max_edit_distance},
                 {"min_len", ingest.min_len},       {"first_year", ingest.first_year},
                 {"last_year", ingest.last_year}};
  j["model"] = model::hyperparams_to_json(hyper);
  j["fit"] = model::options_to_json(dtm);
  j["grid"] = {{"k_values", grid.k_values},
               {"seeds", grid.seeds},
               {"heldout_fraction", grid.heldout_fraction},
               {"split_seed", grid.split_seed},
               {"coherence_top_n", grid.coherence_top_n}};
  j["rank"] = {{"coherence", weights.coherence},
               {"perplexity", weights.perplexity},
               {"empty_topics", weights.empty_topics},
               {"unassigned_docs", weights.unassigned_docs}};
  j["analysis"] = {{"assignment_mass", analysis.assignment_mass},
                   {"from_year", analysis.from_year ? nlohmann::json(*analysis.from_year) : nlohmann::json(nullptr)},
                   {"top_n", analysis.top_n},
                   {"historical_per_area", analysis.historical_per_area}};
  j["workers"] = workers;
  return j;
}

}  // namespace topictrend::pipeline
