#include "graphite/oracle.hpp"

#include <algorithm>
#include <iterator>
#include <limits>
#include <map>
#include <set>

#include "graphite/tokenizer.hpp"

namespace graphite::oracle {
namespace {

struct Scored {
  LabelId label;
  std::size_t similarity;
  double ratio;
  std::size_t multiplicity;
};

double ratio_of(RankingStrategy strategy, const std::set<WordId>& title, const std::set<WordId>& label) {
  std::vector<WordId> common;
  std::set_intersection(title.begin(), title.end(), label.begin(), label.end(),
                        std::back_inserter(common));
  std::vector<WordId> all;
  std::set_union(title.begin(), title.end(), label.begin(), label.end(), std::back_inserter(all));
  const auto c = static_cast<double>(common.size());
  switch (strategy) {
    case RankingStrategy::JaccardWmr:
      return c / static_cast<double>(all.size());
    case RankingStrategy::MissingRatio: {
      const std::size_t missing = label.size() - common.size();
      if (missing == 0) return std::numeric_limits<double>::infinity();
      return c / static_cast<double>(missing);
    }
    default:
      return c / static_cast<double>(label.size());
  }
}

}  // namespace

std::vector<LabelId> predict_ids(const EncodedDataset& dataset, std::string_view title,
                                 std::size_t k, RankingStrategy strategy) {
  std::set<WordId> words;
  for (const auto& token : tokenize(title)) {
    if (auto id = dataset.vocabulary.find(token)) words.insert(*id);
  }

  // label -> (best similarity, contributing instances)
  std::map<LabelId, std::pair<std::size_t, std::set<std::size_t>>> pool;
  for (std::size_t i = 0; i < dataset.instances.size(); ++i) {
    const std::set<WordId> instance(dataset.instances[i].begin(), dataset.instances[i].end());
    std::size_t similarity = 0;
    for (WordId w : words) similarity += instance.count(w);
    if (similarity == 0) continue;
    for (LabelId l : dataset.labels[i]) {
      auto& entry = pool[l];
      entry.first = std::max(entry.first, similarity);
      entry.second.insert(i);
    }
  }

  std::vector<Scored> scored;
  for (const auto& [label, entry] : pool) {
    const auto row = dataset.label_table.constituents(label);
    const std::set<WordId> label_words(row.begin(), row.end());
    scored.push_back({label, entry.first, ratio_of(strategy, words, label_words), entry.second.size()});
  }

  if (strategy == RankingStrategy::MergeTop2) {
    std::set<std::size_t, std::greater<>> levels;
    for (const auto& s : scored) levels.insert(s.similarity);
    if (levels.size() >= 2) {
      const std::size_t top = *levels.begin();
      const std::size_t second = *std::next(levels.begin());
      for (auto& s : scored) {
        if (s.similarity == second) s.similarity = top;
      }
    }
  }

  const bool ratio_first = strategy == RankingStrategy::WmrFirst;
  std::sort(scored.begin(), scored.end(), [&](const Scored& a, const Scored& b) {
    // Negate to sort descending on everything but the label id.
    auto key = [&](const Scored& s) {
      const double sim = -static_cast<double>(s.similarity);
      return ratio_first ? std::make_tuple(-s.ratio, sim, -static_cast<double>(s.multiplicity), s.label)
                         : std::make_tuple(sim, -s.ratio, -static_cast<double>(s.multiplicity), s.label);
    };
    return key(a) < key(b);
  });

  std::vector<LabelId> out;
  for (std::size_t i = 0; i < scored.size() && i < k; ++i) out.push_back(scored[i].label);
  return out;
}

std::vector<std::string> predict(const EncodedDataset& dataset, std::string_view title,
                                 std::size_t k, RankingStrategy strategy) {
  std::vector<std::string> out;
  for (LabelId id : predict_ids(dataset, title, k, strategy)) out.push_back(dataset.label_table.text(id));
  return out;
}

}  // namespace graphite::oracle
