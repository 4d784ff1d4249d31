#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "graphite/corpus.hpp"
#include "graphite/inference.hpp"
#include "graphite/metrics.hpp"

namespace graphite {

struct GroundTruth {
  std::vector<std::string> titles;
  std::vector<std::vector<LabelId>> labels;
};

// Resolves each sample's keyphrases against the model's label table.
// Keyphrases the model has never seen get fresh ids >= num_labels() so they
// still count in recall denominators but can never be hit.
GroundTruth encode_ground_truth(const GraphiteModel& model, std::span<const RawSample> samples);

// Predicts every sample at depth max(ks, 10) and scores the result.
EvalReport evaluate_model(const GraphiteModel& model, std::span<const RawSample> samples,
                          InferenceConfig config, std::span<const std::size_t> ks,
                          std::size_t workers);

}  // namespace graphite
