#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>

#include "graphite/model.hpp"

namespace graphite {

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 binds an ephemeral port
  std::size_t workers = 4;
};

// JSON over HTTP/1.1:
//   POST /predict  {"title": s, "k": n?, "strategy": s?, "budget": n?}
//   POST /explain  same body, response adds "trace"
//   GET  /healthz
// The model is shared read-only; each worker thread keeps its own session.
class PredictionServer {
 public:
  PredictionServer(std::shared_ptr<const GraphiteModel> model, ServeOptions options);
  ~PredictionServer();

  PredictionServer(const PredictionServer&) = delete;
  PredictionServer& operator=(const PredictionServer&) = delete;

  // Binds the socket; returns the bound port. Throws Error on failure.
  int bind();
  // Blocks until stop() is called.
  void listen();
  void stop();
  bool is_running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Loads the model, serves until SIGINT/SIGTERM. Returns a process exit code.
int serve(const std::string& model_path, const ServeOptions& options);

}  // namespace graphite
