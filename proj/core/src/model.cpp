#include "graphite/model.hpp"

#include <algorithm>
#include <limits>

namespace graphite {

GraphiteModel build_model(const EncodedDataset& dataset) {
  if (dataset.instances.size() != dataset.labels.size()) {
    throw Error("dataset has " + std::to_string(dataset.instances.size()) + " instances but " +
                std::to_string(dataset.labels.size()) + " label lists");
  }
  if (dataset.instances.size() > std::numeric_limits<InstanceId>::max()) {
    throw Error("too many instances for 32-bit instance ids");
  }
  const std::size_t num_instances = dataset.instances.size();
  const std::size_t num_words = dataset.vocabulary.size();
  const std::size_t num_labels = dataset.label_table.size();

  std::size_t word_edges = 0;
  std::size_t label_edges = 0;
  for (std::size_t i = 0; i < num_instances; ++i) {
    if (dataset.labels[i].empty()) {
      throw Error("training instance " + std::to_string(i) + " has no labels");
    }
    word_edges += dataset.instances[i].size();
    label_edges += dataset.labels[i].size();
  }

  std::vector<CsrGraph::Edge> edges;
  edges.reserve(word_edges);
  for (std::size_t i = 0; i < num_instances; ++i) {
    for (WordId w : dataset.instances[i]) {
      if (w >= num_words) throw Error("instance " + std::to_string(i) + " has unknown word id");
      edges.emplace_back(w, static_cast<InstanceId>(i));
    }
  }
  GraphiteModel model;
  model.word_instances = CsrGraph::from_edges(num_words, std::move(edges));

  edges.clear();
  edges.reserve(label_edges);
  for (std::size_t i = 0; i < num_instances; ++i) {
    for (LabelId l : dataset.labels[i]) {
      if (l >= num_labels) throw Error("instance " + std::to_string(i) + " has unknown label id");
      edges.emplace_back(static_cast<InstanceId>(i), l);
    }
  }
  model.instance_labels = CsrGraph::from_edges(num_instances, std::move(edges));
  model.vocabulary = dataset.vocabulary;
  model.labels = dataset.label_table;
  return model;
}

}  // namespace graphite
