#include "graphite/metrics.hpp"

#include <algorithm>
#include <unordered_set>

namespace graphite {

std::size_t relevance(std::span<const LabelId> truth, std::span<const LabelId> preds, std::size_t k) {
  const std::unordered_set<LabelId> truth_set(truth.begin(), truth.end());
  const std::size_t depth = std::min(k, preds.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < depth; ++i) hits += truth_set.count(preds[i]);
  return hits;
}

EvalReport evaluate(std::span<const std::vector<LabelId>> truths,
                    std::span<const std::vector<LabelId>> preds,
                    std::span<const std::size_t> ks) {
  if (truths.size() != preds.size()) {
    throw Error("evaluate: " + std::to_string(truths.size()) + " ground-truth lists but " +
                std::to_string(preds.size()) + " prediction lists");
  }
  if (truths.empty()) throw Error("evaluate: no samples");

  EvalReport report;
  report.sample_count = truths.size();
  for (std::size_t k : ks) {
    if (k == 0) throw Error("evaluate: k must be at least 1");
    report.precision_at[k] = 0.0;
    report.recall_at[k] = 0.0;
  }

  std::vector<LabelId> truth;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    truth = truths[i];
    std::sort(truth.begin(), truth.end());
    truth.erase(std::unique(truth.begin(), truth.end()), truth.end());
    if (truth.empty()) throw Error("evaluate: sample " + std::to_string(i) + " has no ground truth");

    const auto& p = preds[i];
    for (auto& [k, precision] : report.precision_at) {
      const std::size_t hits = relevance(truth, p, k);
      const std::size_t shown = std::min(k, p.size());
      if (shown > 0) precision += static_cast<double>(hits) / static_cast<double>(shown);
      report.recall_at[k] += static_cast<double>(hits) / static_cast<double>(truth.size());
    }
    const std::size_t depth = std::min(truth.size(), kAvpTruthCap);
    report.avp += static_cast<double>(relevance(truth, p, depth)) / static_cast<double>(depth);
  }

  const auto n = static_cast<double>(truths.size());
  for (auto& [k, v] : report.precision_at) v /= n;
  for (auto& [k, v] : report.recall_at) v /= n;
  report.avp /= n;
  return report;
}

}  // namespace graphite
