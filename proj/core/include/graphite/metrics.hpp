#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "graphite/types.hpp"

namespace graphite {

// Ground-truth depth cap used by AVP.
inline constexpr std::size_t kAvpTruthCap = 10;

struct EvalReport {
  std::map<std::size_t, double> precision_at;
  std::map<std::size_t, double> recall_at;
  double avp = 0.0;
  std::size_t sample_count = 0;
};

// |truth & first k of preds|. `truth` may be in any order.
std::size_t relevance(std::span<const LabelId> truth, std::span<const LabelId> preds, std::size_t k);

// Precision@k divides by min(k, |preds|); a sample with no predictions scores
// 0. AVP scores each sample at depth g = min(|truth|, 10) and divides by g.
// Throws Error on a length mismatch or an empty truth set.
EvalReport evaluate(std::span<const std::vector<LabelId>> truths,
                    std::span<const std::vector<LabelId>> preds,
                    std::span<const std::size_t> ks);

}  // namespace graphite
