#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "graphite/corpus.hpp"
#include "graphite/inference.hpp"

namespace graphite::oracle {

// Reference predictor for tests. Scores every training instance by a full set
// intersection, with no graphs, no count arrays and no instance budget.
std::vector<std::string> predict(const EncodedDataset& dataset, std::string_view title,
                                 std::size_t k, RankingStrategy strategy);

std::vector<LabelId> predict_ids(const EncodedDataset& dataset, std::string_view title,
                                 std::size_t k, RankingStrategy strategy);

}  // namespace graphite::oracle
