// Drives the installed CLI binary end to end: ingestion against a local mock
// API, the offline pipeline, reproducibility of report bytes, and error
// surfaces. The binary path comes from the build system.

#include "mock_server.hpp"
#include "stargaze/ingest.hpp"
#include "stargaze/rng.hpp"
#include "stargaze/time.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#ifndef STARGAZE_CLI_PATH
#error "STARGAZE_CLI_PATH must be defined by the build"
#endif

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / "sg_cli_test";
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args, const std::string& stdout_path = "/dev/null",
            const std::string& stderr_path = "/dev/null") {
  const std::string cmd = std::string(STARGAZE_CLI_PATH) + " " + args + " > " +
                          stdout_path + " 2> " + stderr_path;
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Synthetic raw-event corpus written through the library's own persistence,
// two growth families plus controlled scales.
void write_corpus(const TempDir& dir, std::vector<std::string>& files) {
  using namespace stargaze;
  SplitMix64 rng(2024);
  const Timestamp created = parse_iso8601("2013-01-01T00:00:00Z");
  const int weeks = 40;
  for (int i = 0; i < 80; ++i) {
    const int family = i % 2;
    const double scale = 60.0 + rng.uniform(0.0, 400.0);
    FetchRecord record;
    record.meta.full_name = "fam" + std::to_string(family) + "/repo" + std::to_string(i);
    record.meta.created_at = created;
    record.meta.primary_language = family == 0 ? "C" : "Go";
    record.complete = true;
    record.pages_fetched = 1;
    long long emitted = 0;
    for (int w = 0; w < weeks; ++w) {
      const double t = static_cast<double>(w + 1) / weeks;
      // Curvature keeps the families distinct after window rebasing.
      const double shape = family == 0 ? 1.0 + 0.3 * t : 1.0 + 5.0 * t * t * t;
      const long long target =
          std::llround(shape * scale * (1.0 + rng.uniform(-0.05, 0.05)));
      for (; emitted < target; ++emitted)
        record.events.push_back({record.meta.full_name,
                                 created + static_cast<Timestamp>(w) * kSecondsPerWeek +
                                     43200,
                                 "u" + std::to_string(emitted)});
    }
    record.meta.total_stars = emitted;
    const std::string path = dir.file("corpus_" + std::to_string(i) + ".events");
    ingest::persist_fetch(record, path);
    files.push_back(path);
  }
}

} // namespace

TEST_CASE("CLI fetch talks to the HTTP API and records capped histories") {
  mockapi::MockServer server;
  server.add_repo({"alpha/one", "2013-02-01T00:00:00Z", "C", 250, 0});
  server.add_repo({"beta/two", "2013-03-01T00:00:00Z", "Go", 90, 0});
  server.add_repo({"gamma/three", "2013-04-01T00:00:00Z", "Rust", 10, 0});
  server.add_repo({"delta/four", "2013-05-01T00:00:00Z", "C", 5, 0});
  server.add_repo({"epsilon/five", "2013-06-01T00:00:00Z", "C", 3, 0});
  server.add_repo({"zeta/six", "2013-07-01T00:00:00Z", "C", 1, 0});

  TempDir dir;
  setenv("STARGAZE_API_URL", server.base_url().c_str(), 1);

  SUBCASE("top-n fetch writes one event file per repository") {
    const int rc = run_cli("fetch --top 5 --out " + dir.file("events"));
    CHECK(rc == 0);
    std::size_t count = 0;
    for (const auto& entry : fs::directory_iterator(dir.file("events"))) {
      CHECK(entry.path().extension() == ".events");
      ++count;
    }
    CHECK(count == 5);
    CHECK(fs::exists(dir.file("events") + "/alpha_one.events"));
  }

  SUBCASE("fetching a missing repository fails with a machine-readable error") {
    const std::string err = dir.file("err.json");
    const int rc = run_cli("fetch missing/repo --out " + dir.file("ev2"),
                           "/dev/null", err);
    CHECK(rc != 0);
    const std::string body = slurp(err);
    CHECK(body.find("\"error\":\"not_found\"") != std::string::npos);
  }

  SUBCASE("a history over the page cap is recorded as incomplete") {
    server.add_repo({"big/capped", "2013-01-01T00:00:00Z", "C", 40100, 0});
    const int rc = run_cli("fetch big/capped --out " + dir.file("ev3"));
    CHECK(rc == 0);
    const auto record =
        stargaze::ingest::load_fetch(dir.file("ev3") + "/big_capped.events");
    CHECK_FALSE(record.complete);
    CHECK(record.pages_fetched == 400);
    CHECK(record.events.size() == 40000);
  }

  unsetenv("STARGAZE_API_URL");
}

TEST_CASE("CLI pipeline is reproducible byte for byte") {
  TempDir dir;
  std::vector<std::string> files;
  write_corpus(dir, files);
  std::string events_arg;
  for (const auto& f : files) events_arg += " " + f;

  REQUIRE(run_cli("build --events" + events_arg +
                  " --cutoff 2013-10-05T00:00:00Z --window 30 --out " +
                  dir.file("dataset.tsv") + " --exclusions " +
                  dir.file("exclusions.csv")) == 0);

  REQUIRE(run_cli("cluster --dataset " + dir.file("dataset.tsv") +
                  " --k 2 --seed 7 --restarts 3 --jobs 2 --out " +
                  dir.file("clusters.json")) == 0);

  const std::string betacv_out = dir.file("betacv_selected.txt");
  REQUIRE(run_cli("betacv --dataset " + dir.file("dataset.tsv") +
                      " --k-min 2 --k-max 6 --seed 7 --restarts 2 --jobs 2 --out " +
                      dir.file("betacv.csv"),
                  betacv_out) == 0);
  CHECK(slurp(betacv_out).find("selected_k=") != std::string::npos);

  REQUIRE(run_cli("fit --dataset " + dir.file("dataset.tsv") +
                  " --tr 10 --t 30 --out " + dir.file("generic.json")) == 0);
  REQUIRE(run_cli("fit --dataset " + dir.file("dataset.tsv") +
                  " --cluster-model " + dir.file("clusters.json") +
                  " --cluster 1 --tr 10 --t 30 --out " + dir.file("c1.json")) == 0);
  REQUIRE(run_cli("predict --model " + dir.file("generic.json") + " --dataset " +
                  dir.file("dataset.tsv") + " --out " + dir.file("preds.csv")) == 0);

  // The same evaluation twice: identical bytes, whatever the jobs count.
  const std::string eval_args =
      "eval --dataset " + dir.file("dataset.tsv") +
      " --tr 1,2,3,4,5,6,7,8,9,10,15,20,25,30 --t 30 --folds 10 --seed 42";
  REQUIRE(run_cli(eval_args + " --out " + dir.file("sweep_a.csv")) == 0);
  REQUIRE(run_cli(eval_args + " --jobs 2 --out " + dir.file("sweep_b.csv")) == 0);
  const std::string sweep_a = slurp(dir.file("sweep_a.csv"));
  const std::string sweep_b = slurp(dir.file("sweep_b.csv"));
  CHECK(sweep_a == sweep_b);
  CHECK(!sweep_a.empty());
  CHECK(sweep_a.find("config_hash") != std::string::npos);

  // Held-out predictions for the ranking step (single t_r).
  const std::string preds_args = "eval --dataset " + dir.file("dataset.tsv") +
                                 " --tr 10 --t 30 --folds 10 --seed 42 "
                                 "--predictions " + dir.file("cv_generic.csv");
  REQUIRE(run_cli(preds_args) == 0);
  const std::string preds_first = slurp(dir.file("cv_generic.csv"));
  REQUIRE(run_cli(preds_args) == 0);
  CHECK(preds_first == slurp(dir.file("cv_generic.csv")));

  // Specific models: sweep, held-out predictions and improvement summary.
  REQUIRE(run_cli("eval --dataset " + dir.file("dataset.tsv") +
                  " --cluster-model " + dir.file("clusters.json") +
                  " --tr 10 --t 30 --folds 10 --seed 42 --out " +
                  dir.file("sweep_specific.csv") + " --predictions " +
                  dir.file("cv_specific.csv") + " --improvement " +
                  dir.file("improve.csv") + " --summary " +
                  dir.file("improve_summary.csv")) == 0);

  // Rankings with injected newcomers get "---" marks.
  std::string real_csv = "repo,score\n";
  {
    std::ifstream in(dir.file("cv_generic.csv"));
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      if (header) {
        header = false;
        continue;
      }
      const auto c1 = line.find(',');
      const auto c2 = line.find(',', c1 + 1);
      const auto c3 = line.find(',', c2 + 1);
      real_csv += line.substr(0, c1) + "," + line.substr(c2 + 1, c3 - c2 - 1) + "\n";
    }
    real_csv += "newcomer/a,1000000\nnewcomer/b,999999\n";
  }
  {
    std::ofstream out(dir.file("real.csv"));
    out << real_csv;
  }
  REQUIRE(run_cli("rank --real " + dir.file("real.csv") + " --generic " +
                  dir.file("cv_generic.csv") + " --specific " +
                  dir.file("cv_specific.csv") + " --topk 8,16 --out " +
                  dir.file("table.csv") + " --rho " + dir.file("rho.csv")) == 0);
  const std::string table = slurp(dir.file("table.csv"));
  // The injected newcomers top the real ranking and carry "---" marks.
  CHECK(table.find("newcomer/a,1,---,---,---,---") != std::string::npos);
  CHECK(table.find("newcomer/b,2,---,---,---,---") != std::string::npos);
  const std::string rho = slurp(dir.file("rho.csv"));
  CHECK(rho.find("generic,all,") != std::string::npos);
  CHECK(rho.find("specific,top-8,") != std::string::npos);

  // Sweep arity: one CSV row per requested t_r.
  std::size_t rows = 0;
  {
    std::istringstream in(sweep_a);
    std::string line;
    while (std::getline(in, line))
      if (!line.empty() && line[0] != '#' && line.rfind("scope,", 0) != 0) ++rows;
  }
  CHECK(rows == 14);
}

TEST_CASE("CLI rejects bad invocations with nonzero exits") {
  TempDir dir;
  const std::string err = dir.file("err.txt");
  CHECK(run_cli("eval --dataset /nonexistent.tsv --tr 5 --t 30 --out " +
                    dir.file("x.csv"),
                "/dev/null", err) != 0);
  CHECK(run_cli("cluster --dataset /nonexistent.tsv --k 2 --out " +
                    dir.file("y.json"),
                "/dev/null", err) != 0);
  CHECK(slurp(err).find("\"error\"") != std::string::npos);
}
