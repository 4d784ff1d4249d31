#include "graphite/inference.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace graphite {
namespace {

struct StrategyName {
  RankingStrategy strategy;
  std::string_view name;
};

constexpr StrategyName kStrategyNames[] = {
    {RankingStrategy::Default, "default"},
    {RankingStrategy::JaccardWmr, "jaccard"},
    {RankingStrategy::MissingRatio, "missing-ratio"},
    {RankingStrategy::WmrFirst, "wmr-first"},
    {RankingStrategy::MergeTop2, "merge-top2"},
};

// Distinct-word overlap between a query set and a label word list.
Overlap overlap_of(std::span<const WordId> query, std::span<const WordId> label) {
  std::vector<WordId> q(query.begin(), query.end());
  std::vector<WordId> l(label.begin(), label.end());
  std::sort(q.begin(), q.end());
  q.erase(std::unique(q.begin(), q.end()), q.end());
  std::sort(l.begin(), l.end());
  l.erase(std::unique(l.begin(), l.end()), l.end());
  if (l.empty()) throw Error("label has no constituent words");
  Overlap o;
  o.query = static_cast<std::uint32_t>(q.size());
  o.label = static_cast<std::uint32_t>(l.size());
  for (WordId w : l) o.common += std::binary_search(q.begin(), q.end(), w) ? 1u : 0u;
  return o;
}

// Descending on everything except the label id.
bool default_before(const Candidate& a, const Candidate& b) {
  if (a.similarity != b.similarity) return a.similarity > b.similarity;
  if (a.ratio != b.ratio) return a.ratio > b.ratio;
  if (a.multiplicity != b.multiplicity) return a.multiplicity > b.multiplicity;
  return a.label < b.label;
}

bool ratio_first_before(const Candidate& a, const Candidate& b) {
  if (a.ratio != b.ratio) return a.ratio > b.ratio;
  if (a.similarity != b.similarity) return a.similarity > b.similarity;
  if (a.multiplicity != b.multiplicity) return a.multiplicity > b.multiplicity;
  return a.label < b.label;
}

}  // namespace

std::string_view to_string(RankingStrategy strategy) {
  for (const auto& entry : kStrategyNames) {
    if (entry.strategy == strategy) return entry.name;
  }
  return "unknown";
}

std::optional<RankingStrategy> parse_strategy(std::string_view name) {
  for (const auto& entry : kStrategyNames) {
    if (entry.name == name) return entry.strategy;
  }
  return std::nullopt;
}

const std::vector<RankingStrategy>& all_strategies() {
  static const std::vector<RankingStrategy> strategies = [] {
    std::vector<RankingStrategy> out;
    for (const auto& entry : kStrategyNames) out.push_back(entry.strategy);
    return out;
  }();
  return strategies;
}

double Ratio::value() const noexcept {
  if (is_infinite()) return std::numeric_limits<double>::infinity();
  return static_cast<double>(num) / static_cast<double>(den);
}

std::strong_ordering operator<=>(Ratio a, Ratio b) noexcept {
  if (a.is_infinite() || b.is_infinite()) {
    return static_cast<int>(a.is_infinite()) <=> static_cast<int>(b.is_infinite());
  }
  return static_cast<std::uint64_t>(a.num) * b.den <=> static_cast<std::uint64_t>(b.num) * a.den;
}

bool operator==(Ratio a, Ratio b) noexcept { return (a <=> b) == std::strong_ordering::equal; }

Ratio ratio_for(RankingStrategy strategy, Overlap o) {
  switch (strategy) {
    case RankingStrategy::JaccardWmr:
      return {o.common, o.query + o.label - o.common};
    case RankingStrategy::MissingRatio:
      return {o.common, o.label - o.common};
    case RankingStrategy::Default:
    case RankingStrategy::WmrFirst:
    case RankingStrategy::MergeTop2:
      break;
  }
  return {o.common, o.label};
}

Ratio word_match_ratio(std::span<const WordId> query, std::span<const WordId> label) {
  return ratio_for(RankingStrategy::Default, overlap_of(query, label));
}

Ratio jaccard_ratio(std::span<const WordId> query, std::span<const WordId> label) {
  return ratio_for(RankingStrategy::JaccardWmr, overlap_of(query, label));
}

Ratio missing_ratio(std::span<const WordId> query, std::span<const WordId> label) {
  return ratio_for(RankingStrategy::MissingRatio, overlap_of(query, label));
}

void InferenceConfig::validate() const {
  if (k < 1) throw Error("k must be at least 1");
  if (instance_budget < 1) throw Error("instance budget must be at least 1");
}

InferenceSession::InferenceSession(const GraphiteModel& model)
    : model_(&model),
      instance_counts_(model.num_instances(), 0),
      label_slot_(model.num_labels(), 0),
      label_epoch_(model.num_labels(), 0),
      word_epoch_(model.num_words(), 0) {}

std::vector<RetrievedInstance> InferenceSession::retrieve(std::span<const WordId> query,
                                                          const InferenceConfig& config) {
  const auto& g = model_->word_instances;
  distinct_query_.clear();
  for (WordId w : query) {
    if (w < g.num_rows()) distinct_query_.push_back(w);
  }
  std::sort(distinct_query_.begin(), distinct_query_.end());
  distinct_query_.erase(std::unique(distinct_query_.begin(), distinct_query_.end()),
                        distinct_query_.end());

  touched_.clear();
  for (WordId w : distinct_query_) {
    for (InstanceId i : g.row(w)) {
      if (instance_counts_[i]++ == 0) touched_.push_back(i);
    }
  }
  if (touched_.empty()) return {};

  // Tier sizes, then the lowest similarity whose tier still fits the budget
  // rule: whole tiers from the top until the running total reaches it.
  std::vector<std::size_t> tier_size(distinct_query_.size() + 1, 0);
  for (InstanceId i : touched_) ++tier_size[instance_counts_[i]];
  std::uint32_t cutoff = 1;
  std::size_t taken = 0;
  for (std::size_t s = tier_size.size() - 1; s >= 1; --s) {
    taken += tier_size[s];
    cutoff = static_cast<std::uint32_t>(s);
    if (taken >= config.instance_budget) break;
  }

  std::vector<RetrievedInstance> out;
  out.reserve(taken);
  for (InstanceId i : touched_) {
    if (instance_counts_[i] >= cutoff) out.push_back({i, instance_counts_[i]});
    instance_counts_[i] = 0;
  }
  touched_.clear();
  std::sort(out.begin(), out.end(), [](const RetrievedInstance& a, const RetrievedInstance& b) {
    return a.similarity != b.similarity ? a.similarity > b.similarity : a.instance < b.instance;
  });
  return out;
}

void InferenceSession::mark_query(std::span<const WordId> query) {
  if (++epoch_ == 0) {
    std::fill(label_epoch_.begin(), label_epoch_.end(), 0);
    std::fill(word_epoch_.begin(), word_epoch_.end(), 0);
    epoch_ = 1;
  }
  for (WordId w : query) word_epoch_[w] = epoch_;
}

std::vector<Candidate> InferenceSession::gather(std::span<const RetrievedInstance> retrieved,
                                                std::span<const WordId> query,
                                                RankingStrategy strategy) {
  distinct_query_.clear();
  for (WordId w : query) {
    if (w < word_epoch_.size()) distinct_query_.push_back(w);
  }
  std::sort(distinct_query_.begin(), distinct_query_.end());
  distinct_query_.erase(std::unique(distinct_query_.begin(), distinct_query_.end()),
                        distinct_query_.end());
  const auto query_size = static_cast<std::uint32_t>(distinct_query_.size());
  mark_query(distinct_query_);

  std::vector<Candidate> candidates;
  const auto& il = model_->instance_labels;
  for (const auto& r : retrieved) {
    for (LabelId l : il.row(r.instance)) {
      if (label_epoch_[l] != epoch_) {
        label_epoch_[l] = epoch_;
        label_slot_[l] = static_cast<std::uint32_t>(candidates.size());
        candidates.push_back({l, r.similarity, {}, 1});
      } else {
        auto& c = candidates[label_slot_[l]];
        c.similarity = std::max(c.similarity, r.similarity);
        ++c.multiplicity;
      }
    }
  }

  for (auto& c : candidates) {
    const auto words = model_->labels.constituents(c.label);
    Overlap o;
    o.query = query_size;
    for (std::size_t j = 0; j < words.size(); ++j) {
      if (std::find(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(j), words[j]) !=
          words.begin() + static_cast<std::ptrdiff_t>(j)) {
        continue;
      }
      ++o.label;
      if (word_epoch_[words[j]] == epoch_) ++o.common;
    }
    c.ratio = ratio_for(strategy, o);
  }
  return candidates;
}

std::vector<Candidate> rank(std::vector<Candidate> candidates, const InferenceConfig& config) {
  if (config.strategy == RankingStrategy::MergeTop2 && !candidates.empty()) {
    std::uint32_t top = 0;
    for (const auto& c : candidates) top = std::max(top, c.similarity);
    std::uint32_t second = 0;
    for (const auto& c : candidates) {
      if (c.similarity < top) second = std::max(second, c.similarity);
    }
    for (auto& c : candidates) {
      if (c.similarity == second) c.similarity = top;
    }
  }
  const auto keep = std::min(config.k, candidates.size());
  const auto middle = candidates.begin() + static_cast<std::ptrdiff_t>(keep);
  if (config.strategy == RankingStrategy::WmrFirst) {
    std::partial_sort(candidates.begin(), middle, candidates.end(), ratio_first_before);
  } else {
    std::partial_sort(candidates.begin(), middle, candidates.end(), default_before);
  }
  candidates.erase(middle, candidates.end());
  return candidates;
}

std::vector<LabelId> InferenceSession::predict_ids(std::span<const WordId> query,
                                                   const InferenceConfig& config) {
  config.validate();
  const auto retrieved = retrieve(query, config);
  auto ranked = rank(gather(retrieved, query, config.strategy), config);
  std::vector<LabelId> ids;
  ids.reserve(ranked.size());
  for (const auto& c : ranked) ids.push_back(c.label);
  return ids;
}

std::vector<LabelId> InferenceSession::predict_ids(std::string_view title,
                                                   const InferenceConfig& config) {
  return predict_ids(encode_title(model_->vocabulary, title), config);
}

std::vector<std::string> InferenceSession::predict(std::string_view title,
                                                   const InferenceConfig& config) {
  return decode_labels(*model_, predict_ids(title, config));
}

Explanation InferenceSession::explain(std::string_view title, const InferenceConfig& config) {
  config.validate();
  const auto query = encode_title(model_->vocabulary, title);
  const auto retrieved = retrieve(query, config);
  const auto ranked = rank(gather(retrieved, query, config.strategy), config);

  Explanation out;
  for (const auto& c : ranked) out.label_ids.push_back(c.label);
  out.predictions = decode_labels(*model_, out.label_ids);

  // Retrieved is sorted by similarity, so the top two tiers are a prefix.
  std::size_t tiers = 0;
  for (std::size_t i = 0; i < retrieved.size(); ++i) {
    if (i == 0 || retrieved[i].similarity != retrieved[i - 1].similarity) {
      if (++tiers > 2) break;
    }
    out.trace.instances.push_back(retrieved[i]);
  }

  const auto& il = model_->instance_labels;
  for (LabelId label : out.label_ids) {
    auto& entry = out.trace.provenance.emplace_back();
    entry.label = label;
    for (const auto& r : out.trace.instances) {
      const auto row = il.row(r.instance);
      if (std::binary_search(row.begin(), row.end(), label)) entry.instances.push_back(r.instance);
    }
  }
  return out;
}

std::vector<RetrievedInstance> retrieve_instances(const GraphiteModel& model,
                                                  std::span<const WordId> query,
                                                  const InferenceConfig& config) {
  InferenceSession session(model);
  return session.retrieve(query, config);
}

std::vector<Candidate> gather_candidates(const GraphiteModel& model,
                                         std::span<const RetrievedInstance> retrieved,
                                         std::span<const WordId> query, RankingStrategy strategy) {
  InferenceSession session(model);
  return session.gather(retrieved, query, strategy);
}

std::vector<std::string> predict(const GraphiteModel& model, std::string_view title,
                                 const InferenceConfig& config) {
  InferenceSession session(model);
  return session.predict(title, config);
}

Explanation explain(const GraphiteModel& model, std::string_view title,
                    const InferenceConfig& config) {
  InferenceSession session(model);
  return session.explain(title, config);
}

std::vector<std::vector<LabelId>> predict_batch_ids(const GraphiteModel& model,
                                                    std::span<const std::string> titles,
                                                    const InferenceConfig& config,
                                                    std::size_t workers) {
  config.validate();
  if (workers < 1) throw Error("workers must be at least 1");
  std::vector<std::vector<LabelId>> out(titles.size());
  workers = std::min(workers, titles.size());
  if (workers <= 1) {
    InferenceSession session(model);
    for (std::size_t i = 0; i < titles.size(); ++i) out[i] = session.predict_ids(titles[i], config);
    return out;
  }

  // Titles are handed out in fixed-size chunks; each slot of `out` is written
  // by exactly one worker, so no further synchronization is needed.
  constexpr std::size_t kChunk = 32;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    InferenceSession session(model);
    for (;;) {
      const std::size_t begin = next.fetch_add(kChunk, std::memory_order_relaxed);
      if (begin >= titles.size()) return;
      const std::size_t end = std::min(begin + kChunk, titles.size());
      for (std::size_t i = begin; i < end; ++i) out[i] = session.predict_ids(titles[i], config);
    }
  };
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) threads.emplace_back(work);
  threads.clear();
  return out;
}

std::vector<std::vector<std::string>> predict_batch(const GraphiteModel& model,
                                                    std::span<const std::string> titles,
                                                    const InferenceConfig& config,
                                                    std::size_t workers) {
  const auto ids = predict_batch_ids(model, titles, config, workers);
  std::vector<std::vector<std::string>> out;
  out.reserve(ids.size());
  for (const auto& row : ids) out.push_back(decode_labels(model, row));
  return out;
}

std::vector<std::string> decode_labels(const GraphiteModel& model, std::span<const LabelId> ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (LabelId id : ids) out.push_back(model.labels.text(id));
  return out;
}

}  // namespace graphite
