#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "graphite/model.hpp"

namespace graphite {

enum class RankingStrategy {
  Default,       // similarity, word match ratio, multiplicity
  JaccardWmr,    // Default key with |t & l| / |t | l| as the ratio
  MissingRatio,  // Default key with |t & l| / |l - t| as the ratio
  WmrFirst,      // word match ratio before similarity
  MergeTop2,     // top two similarity tiers merged, then Default
};

std::string_view to_string(RankingStrategy strategy);
std::optional<RankingStrategy> parse_strategy(std::string_view name);
const std::vector<RankingStrategy>& all_strategies();

// Non-negative rational. A zero denominator encodes +infinity, which orders
// above every finite value (MissingRatio when the title covers the label).
struct Ratio {
  std::uint32_t num = 0;
  std::uint32_t den = 1;

  bool is_infinite() const noexcept { return den == 0; }
  double value() const noexcept;

  friend bool operator==(Ratio a, Ratio b) noexcept;
  friend std::strong_ordering operator<=>(Ratio a, Ratio b) noexcept;
};

// Set sizes needed by every ratio: |t|, |l| and |t & l| over distinct words.
struct Overlap {
  std::uint32_t common = 0;
  std::uint32_t query = 0;
  std::uint32_t label = 0;
};

Ratio ratio_for(RankingStrategy strategy, Overlap overlap);

// Set-based ratios over word ids. Duplicates in either argument are ignored.
// All three throw Error when `label` is empty.
Ratio word_match_ratio(std::span<const WordId> query, std::span<const WordId> label);
Ratio jaccard_ratio(std::span<const WordId> query, std::span<const WordId> label);
Ratio missing_ratio(std::span<const WordId> query, std::span<const WordId> label);

struct InferenceConfig {
  static constexpr std::size_t kUnlimitedBudget = std::numeric_limits<std::size_t>::max();

  std::size_t k = 10;
  std::size_t instance_budget = 1000;
  RankingStrategy strategy = RankingStrategy::Default;

  void validate() const;
};

struct RetrievedInstance {
  InstanceId instance = 0;
  std::uint32_t similarity = 0;

  friend bool operator==(const RetrievedInstance&, const RetrievedInstance&) = default;
};

struct Candidate {
  LabelId label = 0;
  std::uint32_t similarity = 0;  // max over contributing instances
  Ratio ratio;                   // word match ratio or the strategy's replacement
  std::uint32_t multiplicity = 0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct LabelProvenance {
  LabelId label = 0;
  std::vector<InstanceId> instances;
};

struct ExplainTrace {
  // Retrieved instances restricted to the two highest similarity tiers.
  std::vector<RetrievedInstance> instances;
  // One entry per predicted label, in prediction order.
  std::vector<LabelProvenance> provenance;
};

struct Explanation {
  std::vector<LabelId> label_ids;
  std::vector<std::string> predictions;
  ExplainTrace trace;
};

// Per-thread scratch for queries against one model: a count array over
// instances, a slot array over labels and a mark array over words. All three
// are reset through touched lists/epochs, so a query costs time proportional
// to what it touches, not to the model size. Not thread-safe; use one session
// per worker.
class InferenceSession {
 public:
  explicit InferenceSession(const GraphiteModel& model);

  const GraphiteModel& model() const noexcept { return *model_; }

  // Instances sharing at least one distinct query word, by similarity
  // descending then instance id ascending. Whole similarity tiers are taken
  // from the top until at least instance_budget instances are collected.
  // Ids outside the vocabulary are ignored.
  std::vector<RetrievedInstance> retrieve(std::span<const WordId> query,
                                          const InferenceConfig& config);

  std::vector<Candidate> gather(std::span<const RetrievedInstance> retrieved,
                                std::span<const WordId> query, RankingStrategy strategy);

  std::vector<LabelId> predict_ids(std::span<const WordId> query, const InferenceConfig& config);
  std::vector<LabelId> predict_ids(std::string_view title, const InferenceConfig& config);
  std::vector<std::string> predict(std::string_view title, const InferenceConfig& config);
  Explanation explain(std::string_view title, const InferenceConfig& config);

 private:
  void mark_query(std::span<const WordId> query);

  const GraphiteModel* model_;
  std::vector<std::uint32_t> instance_counts_;
  std::vector<InstanceId> touched_;
  std::vector<std::uint32_t> label_slot_;
  std::vector<std::uint32_t> label_epoch_;
  std::vector<std::uint32_t> word_epoch_;
  std::vector<WordId> distinct_query_;
  std::uint32_t epoch_ = 0;
};

// Orders candidates by the strategy's sort key and keeps the first k. The
// final tie-break is label id ascending so the order is total.
std::vector<Candidate> rank(std::vector<Candidate> candidates, const InferenceConfig& config);

std::vector<RetrievedInstance> retrieve_instances(const GraphiteModel& model,
                                                  std::span<const WordId> query,
                                                  const InferenceConfig& config);
std::vector<Candidate> gather_candidates(const GraphiteModel& model,
                                         std::span<const RetrievedInstance> retrieved,
                                         std::span<const WordId> query,
                                         RankingStrategy strategy = RankingStrategy::Default);

std::vector<std::string> predict(const GraphiteModel& model, std::string_view title,
                                 const InferenceConfig& config);
Explanation explain(const GraphiteModel& model, std::string_view title,
                    const InferenceConfig& config);

// Runs one prediction per title on `workers` threads, each with its own
// session. output[i] is exactly predict(model, titles[i], config).
std::vector<std::vector<LabelId>> predict_batch_ids(const GraphiteModel& model,
                                                    std::span<const std::string> titles,
                                                    const InferenceConfig& config,
                                                    std::size_t workers);
std::vector<std::vector<std::string>> predict_batch(const GraphiteModel& model,
                                                    std::span<const std::string> titles,
                                                    const InferenceConfig& config,
                                                    std::size_t workers);

std::vector<std::string> decode_labels(const GraphiteModel& model, std::span<const LabelId> ids);

}  // namespace graphite
