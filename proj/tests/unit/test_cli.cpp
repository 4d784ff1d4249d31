#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "fixtures.hpp"

using graphite::testing::TempDir;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "graphite");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = graphite::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<nlohmann::json> json_lines(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '{') out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

struct Workspace {
  TempDir dir;
  std::string train = (dir / "train.jsonl").string();
  std::string titles = (dir / "titles.jsonl").string();
  std::string model = (dir / "m.gx").string();

  Workspace() {
    graphite::testing::write_file(train, graphite::testing::illustration_jsonl());
    graphite::testing::write_file(titles,
                                  "{\"title\":\"black iphone 13\",\"keyphrases\":[\"iphone 13 pro\"]}\n"
                                  "{\"title\":\"nokia\",\"keyphrases\":[\"nokia phone\"]}\n");
    REQUIRE(::run({"train", "--input", train, "--output", model}).code == 0);
  }
};

}  // namespace

TEST_CASE("train reports counts") {
  TempDir dir;
  graphite::testing::write_file(dir / "t.jsonl", graphite::testing::illustration_jsonl());
  const auto r = run({"train", "--input", (dir / "t.jsonl").string(), "--output", (dir / "m.gx").string()});
  REQUIRE(r.code == 0);
  const auto summary = nlohmann::json::parse(r.out);
  CHECK(summary["instances"] == 4);
  CHECK(summary["labels"] == 6);
  CHECK(std::filesystem::exists(dir / "m.gx"));
}

TEST_CASE("predict writes one JSON line per title") {
  Workspace ws;
  const auto r = run({"predict", "--model", ws.model, "--input", ws.titles, "--k", "1"});
  REQUIRE(r.code == 0);
  const auto lines = json_lines(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0]["title"] == "black iphone 13");
  CHECK(lines[0]["predictions"] == nlohmann::json::array({"iphone 13 pro"}));
  CHECK(lines[1]["predictions"].empty());

  const auto out_path = (ws.dir / "preds.jsonl").string();
  REQUIRE(run({"predict", "--model", ws.model, "--input", ws.titles, "--k", "10", "--workers", "3",
               "--output", out_path})
              .code == 0);
  for (const auto& line : json_lines(graphite::testing::read_file(out_path))) {
    CHECK(line["predictions"].size() <= 10);
  }
}

TEST_CASE("predict --oracle matches the model path") {
  Workspace ws;
  const auto model = run({"predict", "--model", ws.model, "--input", ws.titles, "--budget", "0",
                          "--strategy", "merge-top2"});
  const auto oracle = run({"predict", "--oracle", "--train", ws.train, "--input", ws.titles,
                           "--strategy", "merge-top2"});
  REQUIRE(model.code == 0);
  REQUIRE(oracle.code == 0);
  CHECK(model.out == oracle.out);
  CHECK(run({"predict", "--oracle", "--input", ws.titles}).code == 1);
}

TEST_CASE("explain adds a trace") {
  Workspace ws;
  const auto r = run({"explain", "--model", ws.model, "--input", ws.titles, "--k", "4"});
  REQUIRE(r.code == 0);
  const auto lines = json_lines(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0]["trace"]["instances"] == nlohmann::json::parse("[[0,2],[2,2],[1,1]]"));
  CHECK(lines[0]["trace"]["provenance"]["black phone"] == nlohmann::json::parse("[0,1]"));
  CHECK(lines[1]["trace"]["instances"].empty());
}

TEST_CASE("eval prints a JSON report and a table") {
  Workspace ws;
  const auto r = run({"eval", "--model", ws.model, "--test", ws.titles, "--k", "1,5"});
  REQUIRE(r.code == 0);
  const auto lines = json_lines(r.out);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0]["precision_at"]["1"] == doctest::Approx(0.5));
  CHECK(lines[0]["samples"] == 2);
  CHECK(r.out.find("AVP") != std::string::npos);
}

TEST_CASE("synth then eval gives a perfect score") {
  TempDir dir;
  const auto out_dir = (dir / "synth").string();
  REQUIRE(run({"synth", "--train-n", "500", "--test-n", "50", "--valid-n", "10", "--label-n", "300",
               "--seed", "4", "--out-dir", out_dir})
              .code == 0);
  const auto model = (dir / "s.gx").string();
  REQUIRE(run({"train", "--input", out_dir + "/train.jsonl", "--output", model}).code == 0);
  const auto r = run({"eval", "--model", model, "--test", out_dir + "/test.jsonl"});
  REQUIRE(r.code == 0);
  const auto report = json_lines(r.out).at(0);
  CHECK(report["avp"] == 1.0);
  CHECK(report["precision_at"]["1"] == 1.0);
  CHECK(report["precision_at"]["5"] == 1.0);
}

TEST_CASE("bench reports training, size and latency") {
  Workspace ws;
  const auto r = run({"bench", "--train", ws.train, "--test", ws.titles, "--workers", "2"});
  REQUIRE(r.code == 0);
  const auto report = nlohmann::json::parse(r.out);
  CHECK(report["model_bytes"].get<std::size_t>() > 0);
  CHECK(report["train_seconds"].get<double>() >= 0.0);
  CHECK(report["test_samples"] == 2);
  CHECK(report.contains("ms_per_sample"));
  CHECK(report["eval"]["samples"] == 2);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"train", "--input"}).code == 2);
  CHECK(run({"predict", "--bogus-flag"}).code == 2);
  Workspace ws;
  CHECK(run({"predict", "--model", ws.model, "--input", ws.titles, "--strategy", "best"}).code == 2);
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("predict") != std::string::npos);
}

TEST_CASE("runtime failures exit with 1 and a diagnostic") {
  Workspace ws;
  graphite::testing::write_file(ws.dir / "bad.gx", "nope");
  const auto r = run({"predict", "--model", (ws.dir / "bad.gx").string(), "--input", ws.titles});
  CHECK(r.code == 1);
  CHECK(r.err.find("not a graphite model") != std::string::npos);
}

TEST_CASE("config file supplies defaults and flags override it") {
  Workspace ws;
  const auto cfg = (ws.dir / "graphite.toml").string();
  graphite::testing::write_file(cfg, "[predict]\nk = 1\nstrategy = \"wmr-first\"\n");
  const auto from_config = run({"--config", cfg, "predict", "--model", ws.model, "--input", ws.titles});
  REQUIRE(from_config.code == 0);
  CHECK(json_lines(from_config.out)[0]["predictions"].size() == 1);

  const auto overridden =
      run({"--config", cfg, "predict", "--model", ws.model, "--input", ws.titles, "--k", "3"});
  REQUIRE(overridden.code == 0);
  CHECK(json_lines(overridden.out)[0]["predictions"].size() == 3);
}

TEST_CASE("GRAPHITE_WORKERS is the fallback for --workers") {
  Workspace ws;
  auto workers = [&](std::vector<std::string> extra) {
    std::vector<std::string> args{"bench", "--train", ws.train, "--test", ws.titles};
    args.insert(args.end(), extra.begin(), extra.end());
    const auto r = run(args);
    REQUIRE(r.code == 0);
    return nlohmann::json::parse(r.out)["workers"].get<std::size_t>();
  };
  ::setenv("GRAPHITE_WORKERS", "3", 1);
  CHECK(workers({}) == 3);
  CHECK(workers({"--workers", "2"}) == 2);
  ::unsetenv("GRAPHITE_WORKERS");
}
