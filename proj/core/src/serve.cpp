#include "graphite/serve.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <iostream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "graphite/inference.hpp"
#include "graphite/json_io.hpp"

namespace graphite {
namespace {

constexpr std::size_t kMaxK = 100;

using Json = nlohmann::json;

struct BadRequest {
  std::string message;
};

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

InferenceConfig parse_request(const Json& body, std::string& title) {
  if (!body.is_object()) throw BadRequest{"request body must be a JSON object"};
  auto t = body.find("title");
  if (t == body.end() || !t->is_string()) throw BadRequest{"missing title"};
  title = t->get<std::string>();

  InferenceConfig config;
  if (auto k = body.find("k"); k != body.end()) {
    if (!k->is_number_integer()) throw BadRequest{"k must be an integer"};
    const auto value = k->get<long long>();
    if (value < 1 || value > static_cast<long long>(kMaxK)) {
      throw BadRequest{"k must be between 1 and " + std::to_string(kMaxK)};
    }
    config.k = static_cast<std::size_t>(value);
  }
  if (auto s = body.find("strategy"); s != body.end()) {
    if (!s->is_string()) throw BadRequest{"strategy must be a string"};
    auto parsed = parse_strategy(s->get<std::string>());
    if (!parsed) throw BadRequest{"unknown strategy '" + s->get<std::string>() + "'"};
    config.strategy = *parsed;
  }
  if (auto b = body.find("budget"); b != body.end()) {
    if (!b->is_number_integer() || b->get<long long>() < 1) {
      throw BadRequest{"budget must be a positive integer"};
    }
    config.instance_budget = b->get<std::size_t>();
  }
  return config;
}

// Each server gets a distinct id so a worker thread never reuses a session
// built for another server's model.
std::atomic<std::uint64_t> next_server_id{1};

}  // namespace

struct PredictionServer::Impl {
  std::shared_ptr<const GraphiteModel> model;
  ServeOptions options;
  httplib::Server http;
  std::uint64_t id = next_server_id.fetch_add(1);

  InferenceSession& session() {
    thread_local std::uint64_t owner = 0;
    thread_local std::unique_ptr<InferenceSession> local;
    if (owner != id || !local) {
      local = std::make_unique<InferenceSession>(*model);
      owner = id;
    }
    return *local;
  }

  void handle(const httplib::Request& req, httplib::Response& res, bool with_trace) {
    const auto start = std::chrono::steady_clock::now();
    Json body;
    try {
      body = Json::parse(req.body);
    } catch (const Json::parse_error& e) {
      reply(res, 400, {{"error", std::string("malformed JSON: ") + e.what()}});
      return;
    }
    std::string title;
    InferenceConfig config;
    try {
      config = parse_request(body, title);
    } catch (const BadRequest& e) {
      reply(res, 400, {{"error", e.message}});
      return;
    }

    Json out;
    auto& s = session();
    if (with_trace) {
      auto explanation = s.explain(title, config);
      out["predictions"] = explanation.predictions;
      out["trace"] = trace_to_json(*model, explanation.trace);
    } else {
      out["predictions"] = s.predict(title, config);
    }
    const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
    out["latency_ms"] = elapsed.count();
    reply(res, 200, out);
  }
};

PredictionServer::PredictionServer(std::shared_ptr<const GraphiteModel> model, ServeOptions options)
    : impl_(std::make_unique<Impl>()) {
  if (!model) throw Error("serve: no model");
  if (options.workers < 1) throw Error("serve: workers must be at least 1");
  impl_->model = std::move(model);
  impl_->options = std::move(options);

  auto& http = impl_->http;
  const std::size_t workers = impl_->options.workers;
  http.new_task_queue = [workers] { return new httplib::ThreadPool(workers); };
  Impl* impl = impl_.get();
  http.Post("/predict", [impl](const httplib::Request& req, httplib::Response& res) {
    impl->handle(req, res, false);
  });
  http.Post("/explain", [impl](const httplib::Request& req, httplib::Response& res) {
    impl->handle(req, res, true);
  });
  http.Get("/healthz", [impl](const httplib::Request&, httplib::Response& res) {
    reply(res, 200,
          {{"status", "ok"},
           {"labels", impl->model->num_labels()},
           {"instances", impl->model->num_instances()}});
  });
  http.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string message = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      message = e.what();
    } catch (...) {
    }
    reply(res, 500, {{"error", message}});
  });
}

PredictionServer::~PredictionServer() { stop(); }

int PredictionServer::bind() {
  auto& http = impl_->http;
  const auto& opt = impl_->options;
  if (opt.port == 0) {
    const int port = http.bind_to_any_port(opt.host);
    if (port < 0) throw Error("serve: cannot bind " + opt.host);
    return port;
  }
  if (!http.bind_to_port(opt.host, opt.port)) {
    throw Error("serve: cannot bind " + opt.host + ":" + std::to_string(opt.port));
  }
  return opt.port;
}

void PredictionServer::listen() { impl_->http.listen_after_bind(); }

void PredictionServer::stop() {
  if (impl_) impl_->http.stop();
}

bool PredictionServer::is_running() const { return impl_->http.is_running(); }

namespace {
std::atomic<PredictionServer*> active_server{nullptr};

extern "C" void on_signal(int) {
  if (auto* server = active_server.load()) server->stop();
}
}  // namespace

int serve(const std::string& model_path, const ServeOptions& options) {
  auto model = std::make_shared<const GraphiteModel>(load_model(model_path));
  PredictionServer server(model, options);
  const int port = server.bind();
  std::cerr << "graphite: serving " << model->num_labels() << " labels from " << model->num_instances()
            << " instances on " << options.host << ":" << port << " with " << options.workers
            << " workers\n";
  active_server.store(&server);
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.listen();
  active_server.store(nullptr);
  std::cerr << "graphite: shut down\n";
  return 0;
}

}  // namespace graphite
