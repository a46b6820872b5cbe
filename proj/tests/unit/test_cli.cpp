#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <string>

#include "test_support.hpp"
#include "topictrend/pipeline/csv.hpp"

using topictrend::testing::read_text;
using topictrend::testing::TempDir;
using topictrend::testing::write_text;
namespace fs = std::filesystem;

namespace {

// Runs the CLI with `args`, capturing stdout and stderr into `log`.
int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + TOPICTREND_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("cli exit codes") {
  TempDir tmp;
  const auto log = tmp / "log.txt";
  CHECK(run_cli("", log) == 1);
  CHECK(run_cli("frobnicate", log) == 1);
  CHECK(run_cli("train --no-such-flag", log) == 1);
  CHECK(run_cli("--config " + (tmp / "missing.toml").string() + " ingest", log) == 1);
  CHECK(run_cli("--help", log) == 0);
  CHECK(read_text(log).find("ingest") != std::string::npos);

  fs::create_directories(tmp / "empty");
  CHECK(run_cli("--output " + (tmp / "out").string() + " ingest --corpus-dir " + (tmp / "empty").string(), log) == 2);
  CHECK(read_text(log).find("error:") != std::string::npos);

  CHECK(run_cli("--output " + (tmp / "out").string() + " train", log) == 2);
  CHECK(run_cli("--output " + (tmp / "out").string() + " grid --k-values 1 --seeds 1", log) == 1);
  CHECK(run_cli("--output " + (tmp / "out").string() + " assign --mass 1.5", log) == 1);

  write_text(tmp / "flat.csv", "year,ratio\n2000,1\n2000,2\n2000,3\n");
  CHECK(run_cli("--output " + (tmp / "out").string() + " trend --input " + (tmp / "flat.csv").string(), log) == 3);
}

TEST_CASE("cli runs the pipeline on a fixture") {
  TempDir tmp;
  const auto fx = topictrend::testing::write_fixture(tmp.path(), 30, 9);
  const auto log = tmp / "log.txt";
  const std::string base = "--config " + fx.config.string() + " ";
  REQUIRE(run_cli(base + "ingest", log) == 0);
  CHECK(fs::exists(tmp / "out" / "ingest" / "corpus.json"));
  REQUIRE(run_cli(base + "train --max-iters 5", log) == 0);
  CHECK(fs::exists(tmp / "out" / "models" / "3-7" / "model.json"));
  REQUIRE(run_cli(base + "grid --max-iters 3", log) == 0);
  CHECK(topictrend::pipeline::read_csv(tmp / "out" / "grid" / "grid.csv").rows.size() == 4);
  REQUIRE(run_cli(base + "assign", log) == 0);
  CHECK(fs::exists(tmp / "out" / "assign" / "assignments.csv"));
  REQUIRE(run_cli(base + "report", log) == 0);
  CHECK(fs::exists(tmp / "out" / "reports" / "fig6_trend.csv"));
  CHECK(read_text(log).find("reports") != std::string::npos);

  write_text(tmp / "series.csv", "year,ratio\n2000,0.1\n2001,0.3\n2002,0.2\n2003,0.4\n");
  REQUIRE(run_cli(base + "trend --input " + (tmp / "series.csv").string(), log) == 0);
  CHECK(fs::exists(tmp / "out" / "trend" / "trend.json"));
}
