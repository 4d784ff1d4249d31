#include "graphite/json_io.hpp"

namespace graphite {

nlohmann::json trace_to_json(const GraphiteModel& model, const ExplainTrace& trace) {
  auto instances = nlohmann::json::array();
  for (const auto& r : trace.instances) instances.push_back({r.instance, r.similarity});
  auto provenance = nlohmann::json::object();
  for (const auto& p : trace.provenance) provenance[model.labels.text(p.label)] = p.instances;
  return {{"instances", std::move(instances)}, {"provenance", std::move(provenance)}};
}

nlohmann::json report_to_json(const EvalReport& report) {
  auto precision = nlohmann::json::object();
  for (const auto& [k, v] : report.precision_at) precision[std::to_string(k)] = v;
  auto recall = nlohmann::json::object();
  for (const auto& [k, v] : report.recall_at) recall[std::to_string(k)] = v;
  return {
      {"samples", report.sample_count},
      {"precision_at", std::move(precision)},
      {"recall_at", std::move(recall)},
      {"avp", report.avp},
      {"avp_depth", "min(|truth|, " + std::to_string(kAvpTruthCap) + ")"},
  };
}

nlohmann::json prediction_record(const std::string& title, const std::vector<std::string>& predictions) {
  return {{"title", title}, {"predictions", predictions}};
}

}  // namespace graphite
