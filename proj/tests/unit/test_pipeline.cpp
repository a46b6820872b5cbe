#include <doctest.h>

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "test_support.hpp"
#include "topictrend/analysis/aggregate.hpp"
#include "topictrend/analysis/assignment.hpp"
#include "topictrend/analysis/tags.hpp"
#include "topictrend/error.hpp"
#include "topictrend/ingest/corpus.hpp"
#include "topictrend/model/fitted_model.hpp"
#include "topictrend/pipeline/commands.hpp"
#include "topictrend/pipeline/config.hpp"
#include "topictrend/pipeline/csv.hpp"
#include "topictrend/pipeline/manifest.hpp"
#include "topictrend/trend/ols.hpp"

using namespace topictrend;
using namespace topictrend::pipeline;
using topictrend::testing::error_kind;
using topictrend::testing::read_text;
using topictrend::testing::TempDir;
using topictrend::testing::write_text;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json read_json(const fs::path& p) { return json::parse(read_text(p)); }

PipelineConfig fixture_config(const topictrend::testing::FixtureFiles& fx) {
  auto c = PipelineConfig::from_file(ConfigFile::load(fx.config), fx.root);
  c.dtm.max_iters = 5;
  return c;
}

}  // namespace

TEST_CASE("config file parsing") {
  const auto f = ConfigFile::parse(
      "# top comment\n"
      "[paths]\n"
      "corpus_dir = \"docs # not a comment\"\n"
      "[model]\n"
      "K = 12  # trailing\n"
      "sigma2 = 0.005\n"
      "[grid]\n"
      "k_values = [10, 20, 30]\n"
      "[ingest]\n"
      "languages = [\"es\", \"en\"]\n"
      "flag = true\n");
  CHECK(f.string("paths.corpus_dir") == "docs # not a comment");
  CHECK(f.integer("model.K") == 12);
  CHECK(f.number("model.sigma2") == 0.005);
  CHECK(f.list("grid.k_values") == std::vector<std::string>{"10", "20", "30"});
  CHECK(f.list("ingest.languages") == std::vector<std::string>{"es", "en"});
  CHECK(f.boolean("ingest.flag") == true);
  CHECK_FALSE(f.has("model.seed"));
  CHECK(error_kind([&] { f.integer("model.sigma2"); }) == "ConfigError");
  CHECK(error_kind([&] { f.boolean("model.K"); }) == "ConfigError");

  const auto c = PipelineConfig::from_file(
      ConfigFile::parse("[paths]\ncorpus_dir = \"docs\"\noutput_dir = \"/abs/out\"\n[model]\nK = 12\n"
                        "[grid]\nk_values = [10, 20]\nseeds = [3]\n[analysis]\nfrom_year = 1950\n"),
      "/base");
  CHECK(c.paths.corpus_dir == fs::path("/base/docs"));
  CHECK(c.paths.output_dir == fs::path("/abs/out"));
  CHECK(c.hyper.num_topics == 12);
  CHECK(c.grid.k_values == std::vector<int>{10, 20});
  CHECK(c.grid.seeds == std::vector<std::uint64_t>{3});
  CHECK(c.analysis.from_year == 1950);
  CHECK(c.to_json()["model"]["K"] == 12);

  CHECK(error_kind([] { ConfigFile::parse("[model]\nK = 1\nK = 2\n"); }) == "ConfigError");
  CHECK(error_kind([] { ConfigFile::parse("[model\n"); }) == "ConfigError");
  CHECK(error_kind([] { ConfigFile::parse("just text\n"); }) == "ConfigError");
  CHECK(error_kind([] { PipelineConfig::from_file(ConfigFile::parse("[nope]\nx = 1\n"), "."); }) == "ConfigError");
  CHECK(error_kind([] { PipelineConfig::from_file(ConfigFile::parse("[grid]\nk_values = [2, x]\n"), "."); }) ==
        "ConfigError");
  CHECK(error_kind([] { ConfigFile::load("/nonexistent/config.toml"); }) == "ConfigError");
}

TEST_CASE("csv round trip and json records") {
  Table t;
  t.columns = {"name", "value", "flag", "missing"};
  t.add({"plain", 1.5, true, nullptr});
  t.add({"with, comma", 0.1, false, NAN});
  t.add({"quote \"here\"\nnewline", 3, true, 2.0});
  const std::string csv = to_csv(t);
  CHECK(csv.substr(0, csv.find('\n')) == "name,value,flag,missing");
  const auto back = parse_csv(csv);
  CHECK(back.columns == t.columns);
  REQUIRE(back.rows.size() == 3);
  CHECK(back.rows[1][0] == "with, comma");
  CHECK(back.rows[1][1] == "0.1");
  CHECK(back.rows[2][0] == "quote \"here\"\nnewline");
  CHECK(back.rows[0][3] == "");

  const auto records = to_records(t);
  CHECK(records[0]["value"] == 1.5);
  CHECK(records[1]["missing"].is_null());
  CHECK(records[2]["value"] == 3);

  CHECK(error_kind([] { parse_csv("a,b\n\"open\n"); }) == "ParseError");
  CHECK(error_kind([] { parse_csv(""); }) == "ParseError");
  CHECK(error_kind([&] { t.add({"short"}); }) == "DimensionMismatch");
}

TEST_CASE("manifest appends runs and the lock is exclusive") {
  TempDir tmp;
  write_text(tmp / "in.txt", "abc");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_file(tmp / "in.txt") == sha256_hex("abc"));

  RunRecord run;
  run.command = "first";
  run.inputs = {tmp / "in.txt", tmp / "absent.txt"};
  run.outputs = {tmp / "in.txt"};
  append_manifest(tmp.path(), run);
  const auto once = read_json(tmp / "manifest.json");
  run.command = "second";
  append_manifest(tmp.path(), run);
  const auto twice = read_json(tmp / "manifest.json");
  REQUIRE(twice["runs"].size() == 2);
  CHECK(twice["runs"][0] == once["runs"][0]);
  CHECK(twice["runs"][1]["command"] == "second");
  CHECK(twice["runs"][0]["inputs"].size() == 1);
  CHECK(twice["runs"][0]["outputs"][0]["path"] == "in.txt");
  CHECK(twice["runs"][0]["tool_version"] == kToolVersion);

  {
    OutputLock lock(tmp.path());
    CHECK(error_kind([&] { OutputLock again(tmp.path()); }) == "OutputLocked");
  }
  CHECK_NOTHROW(OutputLock(tmp.path()));
}

TEST_CASE("ingest summary on a hand tally") {
  ingest::DictionarySources src;
  src.stopwords = {"el", "la", "bien"};
  src.protected_words = {"bien"};
  const ingest::DictionaryBundle dicts(src);

  // Five documents with hand-chosen statistics.
  std::vector<ingest::PreprocessedDocument> docs(5);
  const std::vector<std::size_t> words = {10, 0, 4, 6, 20};
  const std::vector<std::size_t> kept = {7, 0, 4, 3, 16};
  const std::vector<double> before = {0.5, 1.0, 1.0, 0.5, 0.75};
  const std::vector<double> after = {1.0, 1.0, 1.0, 0.5, 1.0};
  const std::vector<std::vector<std::string>> types = {{"a", "b"}, {}, {"b", "c"}, {"d"}, {"a", "e"}};
  const std::vector<std::vector<std::string>> fixed = {{"x"}, {}, {}, {"x", "y"}, {"z"}};
  const std::vector<std::size_t> corrected = {2, 0, 0, 3, 1};
  for (std::size_t i = 0; i < 5; ++i) {
    docs[i].word_count = words[i];
    docs[i].clean.tokens.assign(kept[i], "w");
    docs[i].recognition_before = before[i];
    docs[i].recognition_after = after[i];
    docs[i].word_types = types[i];
    docs[i].corrected_types = fixed[i];
    docs[i].clean.corrected_count = corrected[i];
  }
  const auto s = summarize_ingest(docs, dicts);
  CHECK(s.documents == 5);
  CHECK(s.words == 40);
  CHECK(s.unique_words == 5);
  CHECK(s.corrected_words == 3);
  CHECK(s.corrected_tokens == 6);
  CHECK(s.average_length == doctest::Approx(30.0 / 5));
  CHECK(s.protected_words == 1);
  // Weighted by words: (5 + 0 + 4 + 3 + 15) / 40 and (10 + 0 + 4 + 3 + 20) / 40.
  CHECK(s.recognition_before == doctest::Approx(27.0 / 40));
  CHECK(s.recognition_after == doctest::Approx(37.0 / 40));
  CHECK(s.mean_recognition_before == doctest::Approx(3.75 / 5));
  CHECK(s.mean_recognition_after == doctest::Approx(4.5 / 5));

  const auto empty = summarize_ingest({}, dicts);
  CHECK(empty.documents == 0);
  CHECK(empty.average_length == 0.0);
  CHECK(empty.recognition_before == 1.0);
}

TEST_CASE("commands run end to end on a fixture") {
  TempDir tmp;
  const auto fx = topictrend::testing::write_fixture(tmp.path(), 40, 5);
  auto config = fixture_config(fx);
  const auto out = config.paths.output_dir;
  CommandOptions opts;
  opts.config_file = fx.config;

  // Commands that need earlier outputs say so.
  CHECK(error_kind([&] { cmd_train(config, opts); }) == "FileNotFound");
  CHECK(error_kind([&] { cmd_report(config, opts); }) == "FileNotFound");

  const auto ingested = cmd_ingest(config, opts);
  CHECK(fs::exists(corpus_path(out)));
  const auto summary = read_json(ingest_dir(out) / "table1_summary.json");
  CHECK(summary["rows"][0]["field"] == "documents");
  CHECK(summary["rows"][0]["value"] == 40);
  const auto corpus = ingest::load_corpus(corpus_path(out));
  CHECK(corpus.num_documents() == 40);
  CHECK(corpus.slices.size() == 5);  // 1990-1999 in two-year bins
  CHECK(corpus.vocabulary.find("teoria") == std::nullopt);
  CHECK(corpus.vocabulary.find("ignorar") == std::nullopt);

  cmd_train(config, opts);
  const auto mdir = model_dir(out, 3, 7);
  const auto model = model::load_model(mdir);
  CHECK(model.num_topics() == 3);
  CHECK(model.documents.size() == 40);
  CHECK(model.corpus_hash == sha256_file(corpus_path(out)));

  // Saving again and reloading reproduces the archive byte for byte.
  model::save_model(model, tmp / "copy");
  for (const char* f : {"model.json", "topics.tsv", "topic_variance.tsv", "alpha.tsv", "documents.tsv"}) {
    CHECK(read_text(tmp / "copy" / f) == read_text(mdir / f));
  }
  CHECK(model::load_model(tmp / "copy") == model);

  cmd_assign(config, opts);
  const auto assigned = read_json(assign_dir(out) / "topic_summary.json");
  CHECK(assigned["rows"].size() == 3);

  const auto reported = cmd_report(config, opts);
  for (const char* f : {"fig2_periods.csv", "fig4_area_counts.csv", "fig5_largest_subareas.csv",
                        "table2_area_profiles.csv", "table3_subareas.csv", "table5_historical_topics.csv",
                        "fig6_trend.csv", "trend.json"}) {
    CHECK(fs::exists(reports_dir(out) / f));
  }
  CHECK(reported.warnings.empty());

  // The report adds no arithmetic of its own: its numbers are the library's.
  const auto tags = analysis::load_tags(config.paths.tags_file, 3).tags;
  const auto assignments = analysis::assign_all(model, config.analysis.assignment_mass);
  const auto docs = analysis::doc_table(model);
  const auto counts = analysis::area_counts_by_year(assignments, tags, docs);
  const auto fig4 = read_json(reports_dir(out) / "fig4_area_counts.json")["rows"];
  REQUIRE(fig4.size() == analysis::kNumAreas * counts.years.size());
  std::size_t row = 0;
  for (std::size_t a = 0; a < analysis::kNumAreas; ++a) {
    for (std::size_t i = 0; i < counts.years.size(); ++i, ++row) {
      CHECK(fig4[row]["year"] == counts.years[i]);
      CHECK(fig4[row]["documents"] == counts.counts[a][i]);
      CHECK(fig4[row]["ratio"].get<double>() == counts.ratios[a][i]);
    }
  }
  const auto series = analysis::historical_ratio_series(assignments, tags, docs, 1990);
  std::vector<double> x, y;
  for (const auto& p : series.points) {
    x.push_back(p.year);
    y.push_back(p.ratio);
  }
  const auto trend = read_json(reports_dir(out) / "trend.json");
  if (trend.contains("error")) {
    CHECK_THROWS_AS(trend::ols_fit(x, y), Error);
  } else {
    const auto fit = trend::ols_fit(x, y);
    CHECK(trend["slope"].get<double>() == fit.slope);
    CHECK(trend["p_one_sided_less"].get<double>() == fit.p_one_sided_less);
    CHECK(trend["n"] == fit.n);
  }

  // Each command appended exactly one run to its manifest.
  CHECK(read_json(ingest_dir(out) / "manifest.json")["runs"].size() == 1);
  CHECK(read_json(mdir / "manifest.json")["runs"].size() == 1);
  CHECK(read_json(reports_dir(out) / "manifest.json")["runs"].size() == 1);
  cmd_assign(config, opts);
  CHECK(read_json(assign_dir(out) / "manifest.json")["runs"].size() == 2);
  CHECK_FALSE(fs::exists(out / ".topictrend.lock"));

  // A missing tags file falls back to Other with a warning.
  config.paths.tags_file = tmp / "none.tsv";
  const auto untagged = cmd_report(config, opts);
  REQUIRE_FALSE(untagged.warnings.empty());
  CHECK(untagged.warnings[0].find("not found") != std::string::npos);
}

TEST_CASE("grid command writes one row per cell and reuses fitted cells") {
  TempDir tmp;
  const auto fx = topictrend::testing::write_fixture(tmp.path(), 30, 6);
  auto config = fixture_config(fx);
  cmd_ingest(config);
  cmd_grid(config);
  const auto grid = read_csv(grid_dir(config.paths.output_dir) / "grid.csv");
  CHECK(grid.rows.size() == 4);
  const auto ranking = read_json(grid_dir(config.paths.output_dir) / "ranking.json");
  CHECK(ranking["rows"].size() == 4);
  CHECK(ranking["rows"][0]["rank"] == 1);
  const auto first = read_text(grid_dir(config.paths.output_dir) / "grid.csv");
  const auto cell = grid_dir(config.paths.output_dir) / "models" / "2-1" / "model.json";
  const auto stamp = fs::last_write_time(cell);
  cmd_grid(config);
  CHECK(read_text(grid_dir(config.paths.output_dir) / "grid.csv") == first);
  CHECK(fs::last_write_time(cell) == stamp);
}

TEST_CASE("trend command") {
  TempDir tmp;
  PipelineConfig config;
  config.paths.output_dir = tmp / "out";
  write_text(tmp / "series.csv", "year,ratio\n2003,0.4\n2001,0.2\n2002,0.35\n2000,0.1\n1999,9\n");
  CommandOptions opts;
  opts.input = tmp / "series.csv";
  config.analysis.from_year = 2000;
  cmd_trend(config, opts);
  const auto trend = read_json(trend_dir(config.paths.output_dir) / "trend.json");
  const auto fit = trend::ols_fit({2000, 2001, 2002, 2003}, {0.1, 0.2, 0.35, 0.4});
  CHECK(trend["n"] == 4);
  CHECK(trend["slope"].get<double>() == fit.slope);
  const auto csv = read_csv(trend_dir(config.paths.output_dir) / "fig6_trend.csv");
  CHECK(csv.rows[0][0] == "2000");

  CHECK(error_kind([&] { cmd_trend(config, {}); }) == "MissingInput");
  write_text(tmp / "bad.csv", "year,share\n2000,1\n");
  opts.input = tmp / "bad.csv";
  CHECK(error_kind([&] { cmd_trend(config, opts); }) == "ParseError");
  write_text(tmp / "flat.csv", "year,ratio\n2000,1\n2000,2\n2000,3\n");
  opts.input = tmp / "flat.csv";
  CHECK(error_kind([&] { cmd_trend(config, opts); }) == "DegenerateX");
}
