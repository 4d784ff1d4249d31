#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "graphite/inference.hpp"
#include "graphite/metrics.hpp"

namespace graphite {

// {"instances": [[id, sim], ...], "provenance": {label: [ids]}}
nlohmann::json trace_to_json(const GraphiteModel& model, const ExplainTrace& trace);

nlohmann::json report_to_json(const EvalReport& report);

// One line of predict/explain output.
nlohmann::json prediction_record(const std::string& title, const std::vector<std::string>& predictions);

}  // namespace graphite
