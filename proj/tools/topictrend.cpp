// Command-line entry point. Parses flags, resolves the configuration and
// hands off to the pipeline library; all computation lives there.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "topictrend/error.hpp"
#include "topictrend/pipeline/commands.hpp"
#include "topictrend/pipeline/config.hpp"

namespace fs = std::filesystem;
using namespace topictrend;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

int exit_code(ErrorClass c) {
  switch (c) {
    case ErrorClass::kUsage: return kExitUsage;
    case ErrorClass::kData: return kExitData;
    case ErrorClass::kNumerical: return kExitNumerical;
  }
  return kExitUsage;
}

struct Flags {
  std::string config;
  std::string output;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  // ingest
  std::string corpus_dir;
  std::optional<int> bin_years;
  std::optional<int> min_df;
  // train / grid / assign / report
  std::optional<int> k;
  std::vector<int> k_values;
  std::vector<std::uint64_t> seeds;
  std::optional<double> heldout;
  std::optional<double> mass;
  std::optional<int> from_year;
  std::optional<int> max_iters;
  std::string tags;
  std::string corpus;
  std::string model;
  std::string input;
};

pipeline::PipelineConfig resolve(const Flags& f) {
  pipeline::PipelineConfig c;
  if (!f.config.empty()) {
    const fs::path p(f.config);
    c = pipeline::PipelineConfig::from_file(pipeline::ConfigFile::load(p), fs::absolute(p).parent_path());
  }
  if (!f.output.empty()) c.paths.output_dir = f.output;
  if (f.seed) c.hyper.seed = *f.seed;
  if (f.workers) c.workers = *f.workers;
  if (!f.corpus_dir.empty()) c.paths.corpus_dir = f.corpus_dir;
  if (f.bin_years) c.ingest.bin_years = *f.bin_years;
  if (f.min_df) c.ingest.min_df = *f.min_df;
  if (f.k) c.hyper.num_topics = *f.k;
  if (!f.k_values.empty()) c.grid.k_values = f.k_values;
  if (!f.seeds.empty()) c.grid.seeds = f.seeds;
  if (f.heldout) c.grid.heldout_fraction = *f.heldout;
  if (f.mass) c.analysis.assignment_mass = *f.mass;
  if (f.from_year) c.analysis.from_year = *f.from_year;
  if (f.max_iters) c.dtm.max_iters = *f.max_iters;
  if (!f.tags.empty()) c.paths.tags_file = f.tags;
  if (c.ingest.bin_years < 1) throw usage_error("InvalidArgument", "bin_years must be >= 1");
  if (c.ingest.min_df < 1) throw usage_error("InvalidArgument", "min_df must be >= 1");
  if (!(c.analysis.assignment_mass > 0.0 && c.analysis.assignment_mass <= 1.0)) {
    throw usage_error("InvalidArgument", "mass must be in (0, 1]");
  }
  if (c.workers < 1) throw usage_error("InvalidArgument", "workers must be >= 1");
  return c;
}

pipeline::CommandOptions command_options(const Flags& f) {
  pipeline::CommandOptions o;
  if (!f.config.empty()) o.config_file = f.config;
  if (!f.corpus.empty()) o.corpus = f.corpus;
  if (!f.model.empty()) o.model = f.model;
  if (!f.input.empty()) o.input = f.input;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic modelling of a journal archive over time: ingest, fit, select, assign, report."};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config, "TOML-style configuration file")->check(CLI::ExistingFile);
  app.add_option("--output", f.output, "Output root directory");
  app.add_option("--seed", f.seed, "Random seed");
  app.add_option("--workers", f.workers, "Worker threads");

  auto* ingest = app.add_subcommand("ingest", "Preprocess documents into a time-sliced corpus");
  ingest->add_option("--corpus-dir", f.corpus_dir, "Directory of .txt/.html documents with metadata.json");
  ingest->add_option("--bin-years", f.bin_years, "Years per time slice");
  ingest->add_option("--min-df", f.min_df, "Minimum document frequency of kept words");

  auto* train = app.add_subcommand("train", "Fit one dynamic topic model");
  train->add_option("-k,--topics", f.k, "Number of topics");
  train->add_option("--max-iters", f.max_iters, "Maximum EM iterations");
  train->add_option("--corpus", f.corpus, "Corpus archive (default: <output>/ingest/corpus.json)");

  auto* grid = app.add_subcommand("grid", "Fit a K x seed grid and report selection metrics");
  grid->add_option("--k-values", f.k_values, "Topic counts")->delimiter(',');
  grid->add_option("--seeds", f.seeds, "Seeds")->delimiter(',');
  grid->add_option("--heldout", f.heldout, "Held-out document fraction for perplexity");
  grid->add_option("--mass", f.mass, "Assignment mass");
  grid->add_option("--max-iters", f.max_iters, "Maximum EM iterations");
  grid->add_option("--corpus", f.corpus, "Corpus archive");

  auto* assign = app.add_subcommand("assign", "Assign documents to topics");
  assign->add_option("-k,--topics", f.k, "Number of topics of the default model path");
  assign->add_option("--model", f.model, "Model archive directory (default: <output>/models/<K>-<seed>)");
  assign->add_option("--mass", f.mass, "Fraction of each topic's proportion mass to cover");

  auto* report = app.add_subcommand("report", "Emit tables and plot data");
  report->add_option("-k,--topics", f.k, "Number of topics of the default model path");
  report->add_option("--model", f.model, "Model archive directory");
  report->add_option("--corpus", f.corpus, "Corpus archive");
  report->add_option("--tags", f.tags, "Topic tags file (TSV)");
  report->add_option("--mass", f.mass, "Assignment mass");
  report->add_option("--from-year", f.from_year, "First year of the trend regression");

  auto* trend = app.add_subcommand("trend", "Regress a yearly ratio series on year");
  trend->add_option("--input", f.input, "CSV with year and ratio columns")->required();
  trend->add_option("--from-year", f.from_year, "First year of the regression");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const auto config = resolve(f);
    const auto options = command_options(f);
    pipeline::CommandResult result;
    if (*ingest) result = pipeline::cmd_ingest(config, options);
    else if (*train) result = pipeline::cmd_train(config, options);
    else if (*grid) result = pipeline::cmd_grid(config, options);
    else if (*assign) result = pipeline::cmd_assign(config, options);
    else if (*report) result = pipeline::cmd_report(config, options);
    else if (*trend) result = pipeline::cmd_trend(config, options);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << result.output_dir.string() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.error_class());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
