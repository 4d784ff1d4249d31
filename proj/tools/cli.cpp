#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <thread>

#include <unistd.h>

#include <CLI11.hpp>

#include "graphite/corpus.hpp"
#include "graphite/evaluation.hpp"
#include "graphite/inference.hpp"
#include "graphite/json_io.hpp"
#include "graphite/model.hpp"
#include "graphite/oracle.hpp"
#include "graphite/serve.hpp"
#include "graphite/synthgen.hpp"

namespace graphite::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct InferenceFlags {
  std::size_t k = 10;
  std::string strategy = "default";
  std::size_t budget = 1000;  // 0 = unlimited
  std::size_t workers = default_workers();

  void add_to(CLI::App& cmd, bool with_workers) {
    cmd.add_option("--k", k, "Number of predictions per title")->check(CLI::Range(1, 100000));
    cmd.add_option("--strategy", strategy,
                   "Ranking strategy: default, jaccard, missing-ratio, wmr-first, merge-top2")
        ->check([](const std::string& s) {
          return parse_strategy(s) ? std::string() : "unknown strategy '" + s + "'";
        });
    cmd.add_option("--budget", budget, "Instances retrieved before tier completion (0 = unlimited)");
    if (with_workers) {
      cmd.add_option("--workers", workers, "Inference threads")
          ->envname("GRAPHITE_WORKERS")
          ->check(CLI::PositiveNumber);
    }
  }

  InferenceConfig config() const {
    InferenceConfig c;
    c.k = k;
    c.strategy = *parse_strategy(strategy);
    c.instance_budget = budget == 0 ? InferenceConfig::kUnlimitedBudget : budget;
    return c;
  }
};

// Writes to `fallback` when path is "-".
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw Error("cannot open " + path + " for writing");
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

std::vector<std::string> titles_of(const std::vector<RawSample>& samples) {
  std::vector<std::string> titles;
  titles.reserve(samples.size());
  for (const auto& s : samples) titles.push_back(s.title);
  return titles;
}

void print_table(std::ostream& out, const EvalReport& report) {
  out << std::fixed << std::setprecision(4);
  out << "metric      value\n";
  for (const auto& [k, v] : report.precision_at) out << "P@" << std::left << std::setw(9) << k << v << '\n';
  for (const auto& [k, v] : report.recall_at) out << "R@" << std::left << std::setw(9) << k << v << '\n';
  out << "AVP         " << report.avp << '\n';
  out << "samples     " << report.sample_count << '\n';
  out.unsetf(std::ios::floatfield);
}

std::pair<std::string, int> parse_bind(const std::string& bind) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) throw Error("--bind must look like host:port");
  const std::string host = bind.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(bind.substr(colon + 1));
  } catch (const std::exception&) {
    throw Error("--bind has an invalid port");
  }
  if (port < 0 || port > 65535) throw Error("--bind port out of range");
  return {host, port};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"graphite: graph-based keyphrase recommendation"};
  app.name("graphite");
  app.set_config("--config", "", "Read option defaults from a TOML/INI file");
  app.require_subcommand(1);

  // train
  std::string train_input, train_output;
  auto* train = app.add_subcommand("train", "Build a model from a JSONL training set");
  train->add_option("--input", train_input, "Training JSONL")->required()->check(CLI::ExistingFile);
  train->add_option("--output", train_output, "Model file to write")->required();

  // predict
  std::string predict_model, predict_input, predict_output = "-", oracle_train;
  bool use_oracle = false;
  InferenceFlags predict_flags;
  auto* predict_cmd = app.add_subcommand("predict", "Predict keyphrases for a JSONL file of titles");
  predict_cmd->add_option("--model", predict_model, "Model file");
  predict_cmd->add_option("--input", predict_input, "JSONL titles")->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--output", predict_output, "Output JSONL ('-' for stdout)");
  predict_flags.add_to(*predict_cmd, true);
  predict_cmd->add_flag("--oracle", use_oracle, "Use the brute-force reference predictor");
  predict_cmd->add_option("--train", oracle_train, "Training JSONL for --oracle")->check(CLI::ExistingFile);

  // explain
  std::string explain_model, explain_input, explain_output = "-";
  InferenceFlags explain_flags;
  auto* explain_cmd = app.add_subcommand("explain", "Predict and report the supporting training instances");
  explain_cmd->add_option("--model", explain_model, "Model file")->required()->check(CLI::ExistingFile);
  explain_cmd->add_option("--input", explain_input, "JSONL titles")->required()->check(CLI::ExistingFile);
  explain_cmd->add_option("--output", explain_output, "Output JSONL ('-' for stdout)");
  explain_flags.add_to(*explain_cmd, false);

  // eval
  std::string eval_model, eval_test, eval_json;
  std::vector<std::size_t> eval_ks{1, 5, 10};
  InferenceFlags eval_flags;
  auto* eval_cmd = app.add_subcommand("eval", "Score a model on a labelled test set");
  eval_cmd->add_option("--model", eval_model, "Model file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--test", eval_test, "Test JSONL with keyphrases")->required()->check(CLI::ExistingFile);
  eval_flags.add_to(*eval_cmd, true);
  eval_cmd->remove_option(eval_cmd->get_option("--k"));
  eval_cmd->add_option("--k", eval_ks, "Cut-offs, comma separated")->delimiter(',')->check(CLI::PositiveNumber);
  eval_cmd->add_option("--json-out", eval_json, "Also write the JSON report to this file");

  // synth
  SynthParams synth_params;
  std::string synth_dir;
  auto* synth = app.add_subcommand("synth", "Generate the exact-match synthetic dataset");
  synth->add_option("--train-n", synth_params.train_n, "Training samples")->capture_default_str();
  synth->add_option("--test-n", synth_params.test_n, "Test samples")->capture_default_str();
  synth->add_option("--valid-n", synth_params.valid_n, "Validation samples")->capture_default_str();
  synth->add_option("--label-n", synth_params.label_n, "Distinct labels")->capture_default_str();
  synth->add_option("--title-len", synth_params.title_len, "Words per title")->capture_default_str();
  synth->add_option("--labels-per", synth_params.labels_per, "Labels per sample")->capture_default_str();
  synth->add_option("--vocab-n", synth_params.vocab_n, "Word pool size (0 = automatic)")->capture_default_str();
  synth->add_option("--seed", synth_params.seed, "Random seed")->capture_default_str();
  synth->add_option("--out-dir", synth_dir, "Directory for train/test/valid JSONL")->required();

  // bench
  std::string bench_train, bench_test, bench_model_out;
  InferenceFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "Measure training time, model size and inference latency");
  bench->add_option("--train", bench_train, "Training JSONL")->required()->check(CLI::ExistingFile);
  bench->add_option("--test", bench_test, "Test JSONL")->required()->check(CLI::ExistingFile);
  bench->add_option("--model-out", bench_model_out, "Where to write the model (default: temp file)");
  bench_flags.add_to(*bench, true);

  // serve
  std::string serve_model, serve_bind = "127.0.0.1:8080";
  std::size_t serve_workers = default_workers();
  auto* serve_cmd = app.add_subcommand("serve", "Serve predictions over HTTP");
  serve_cmd->add_option("--model", serve_model, "Model file")->required()->check(CLI::ExistingFile);
  serve_cmd->add_option("--bind", serve_bind, "host:port")->capture_default_str();
  serve_cmd->add_option("--workers", serve_workers, "Request handler threads")
      ->envname("GRAPHITE_WORKERS")
      ->check(CLI::PositiveNumber);

  for (auto* sub : app.get_subcommands({})) sub->configurable();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << "graphite: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*train) {
      const auto start = Clock::now();
      const auto samples = load_jsonl(train_input);
      const auto model = build_model(encode(samples));
      save_model(model, train_output);
      const double elapsed = seconds_since(start);
      const nlohmann::json summary{
          {"instances", model.num_instances()},
          {"labels", model.num_labels()},
          {"words", model.num_words()},
          {"word_instance_edges", model.word_instances.num_edges()},
          {"instance_label_edges", model.instance_labels.num_edges()},
          {"model_bytes", fs::file_size(train_output)},
          {"train_seconds", elapsed},
      };
      out << summary.dump() << '\n';
      return 0;
    }

    if (*predict_cmd) {
      const auto samples = load_jsonl(predict_input);
      const auto config = predict_flags.config();
      config.validate();
      std::vector<std::vector<std::string>> predictions;
      if (use_oracle) {
        if (oracle_train.empty()) throw Error("--oracle needs --train");
        const auto dataset = encode(load_jsonl(oracle_train));
        for (const auto& s : samples) {
          predictions.push_back(oracle::predict(dataset, s.title, config.k, config.strategy));
        }
      } else {
        if (predict_model.empty()) throw Error("--model is required");
        const auto model = load_model(predict_model);
        predictions = predict_batch(model, titles_of(samples), config, predict_flags.workers);
      }
      Output sink(predict_output, out);
      for (std::size_t i = 0; i < samples.size(); ++i) {
        *sink << prediction_record(samples[i].title, predictions[i]).dump() << '\n';
      }
      return 0;
    }

    if (*explain_cmd) {
      const auto model = load_model(explain_model);
      const auto samples = load_jsonl(explain_input);
      const auto config = explain_flags.config();
      InferenceSession session(model);
      Output sink(explain_output, out);
      for (const auto& s : samples) {
        const auto e = session.explain(s.title, config);
        auto record = prediction_record(s.title, e.predictions);
        record["trace"] = trace_to_json(model, e.trace);
        *sink << record.dump() << '\n';
      }
      return 0;
    }

    if (*eval_cmd) {
      const auto model = load_model(eval_model);
      const auto samples = load_jsonl(eval_test);
      const auto report = evaluate_model(model, samples, eval_flags.config(), eval_ks, eval_flags.workers);
      auto json = report_to_json(report);
      json["strategy"] = eval_flags.strategy;
      out << json.dump() << '\n';
      print_table(out, report);
      if (!eval_json.empty()) {
        std::ofstream f(eval_json, std::ios::trunc);
        f << json.dump(2) << '\n';
        if (!f) throw Error("failed writing " + eval_json);
      }
      return 0;
    }

    if (*synth) {
      const auto data = generate(synth_params);
      fs::create_directories(synth_dir);
      write_jsonl(fs::path(synth_dir) / "train.jsonl", data.train);
      write_jsonl(fs::path(synth_dir) / "test.jsonl", data.test);
      write_jsonl(fs::path(synth_dir) / "valid.jsonl", data.valid);
      out << nlohmann::json{{"train", data.train.size()},
                            {"test", data.test.size()},
                            {"valid", data.valid.size()},
                            {"out_dir", synth_dir}}
                 .dump()
          << '\n';
      return 0;
    }

    if (*bench) {
      const auto config = bench_flags.config();
      config.validate();
      const auto train_samples = load_jsonl(bench_train);
      const auto test_samples = load_jsonl(bench_test);

      const auto train_start = Clock::now();
      const auto model = build_model(encode(train_samples));
      fs::path model_path = bench_model_out.empty()
                                ? fs::temp_directory_path() / ("graphite-bench-" + std::to_string(::getpid()) + ".gx")
                                : fs::path(bench_model_out);
      save_model(model, model_path);
      const double train_seconds = seconds_since(train_start);
      const auto model_bytes = fs::file_size(model_path);
      if (bench_model_out.empty()) fs::remove(model_path);

      const auto titles = titles_of(test_samples);
      const auto infer_start = Clock::now();
      const auto preds = predict_batch_ids(model, titles, config, bench_flags.workers);
      const double infer_seconds = seconds_since(infer_start);

      nlohmann::json report{
          {"train_samples", train_samples.size()},
          {"instances", model.num_instances()},
          {"labels", model.num_labels()},
          {"train_seconds", train_seconds},
          {"model_bytes", model_bytes},
          {"model_mb", static_cast<double>(model_bytes) / (1024.0 * 1024.0)},
          {"test_samples", titles.size()},
          {"workers", bench_flags.workers},
          {"k", config.k},
          {"inference_seconds", infer_seconds},
          {"ms_per_sample", titles.empty() ? 0.0 : 1000.0 * infer_seconds / static_cast<double>(titles.size())},
      };
      const bool labelled = !test_samples.empty() &&
                            std::all_of(test_samples.begin(), test_samples.end(),
                                        [](const RawSample& s) { return !s.keyphrases.empty(); });
      if (labelled) {
        const std::vector<std::size_t> ks{1, 5, 10};
        report["eval"] = report_to_json(evaluate_model(model, test_samples, config, ks, bench_flags.workers));
      }
      out << report.dump() << '\n';
      return 0;
    }

    if (*serve_cmd) {
      const auto [host, port] = parse_bind(serve_bind);
      ServeOptions options;
      options.host = host;
      options.port = port;
      options.workers = serve_workers;
      return serve(serve_model, options);
    }
  } catch (const std::exception& e) {
    err << "graphite: error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace graphite::cli
