#include "graphite/evaluation.hpp"

#include <algorithm>
#include <map>

#include "graphite/tokenizer.hpp"

namespace graphite {

GroundTruth encode_ground_truth(const GraphiteModel& model, std::span<const RawSample> samples) {
  GroundTruth out;
  out.titles.reserve(samples.size());
  out.labels.reserve(samples.size());
  std::map<std::string, LabelId> unseen;
  std::vector<WordId> words;
  for (const auto& sample : samples) {
    out.titles.push_back(sample.title);
    auto& truth = out.labels.emplace_back();
    for (const auto& phrase : sample.keyphrases) {
      const auto tokens = tokenize(phrase);
      if (tokens.empty()) continue;
      words.clear();
      bool known = true;
      for (const auto& token : tokens) {
        auto id = model.vocabulary.find(token);
        if (!id) {
          known = false;
          break;
        }
        words.push_back(*id);
      }
      std::optional<LabelId> id = known ? model.labels.find(words) : std::nullopt;
      if (!id) {
        const auto key = normalize_phrase(phrase);
        auto it = unseen.find(key);
        if (it == unseen.end()) {
          it = unseen.emplace(key, static_cast<LabelId>(model.num_labels() + unseen.size())).first;
        }
        id = it->second;
      }
      if (std::find(truth.begin(), truth.end(), *id) == truth.end()) truth.push_back(*id);
    }
  }
  return out;
}

EvalReport evaluate_model(const GraphiteModel& model, std::span<const RawSample> samples,
                          InferenceConfig config, std::span<const std::size_t> ks,
                          std::size_t workers) {
  const auto truth = encode_ground_truth(model, samples);
  std::size_t depth = kAvpTruthCap;
  for (std::size_t k : ks) depth = std::max(depth, k);
  config.k = depth;
  const auto preds = predict_batch_ids(model, truth.titles, config, workers);
  return evaluate(truth.labels, preds, ks);
}

}  // namespace graphite
