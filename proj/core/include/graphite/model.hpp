#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "graphite/corpus.hpp"
#include "graphite/csr_graph.hpp"

namespace graphite {

inline constexpr std::uint32_t kModelFormatVersion = 1;

// The word->instance graph, the instance->label graph and the id spaces they
// index into. Immutable once built; safe to share across threads.
struct GraphiteModel {
  CsrGraph word_instances;   // rows: word-ids, targets: instance-ids
  CsrGraph instance_labels;  // rows: instance-ids, targets: label-ids
  Vocabulary vocabulary;
  LabelTable labels;

  std::size_t num_instances() const noexcept { return instance_labels.num_rows(); }
  std::size_t num_labels() const noexcept { return labels.size(); }
  std::size_t num_words() const noexcept { return vocabulary.size(); }

  friend bool operator==(const GraphiteModel&, const GraphiteModel&) = default;
};

// Edges are collected as tuples, sorted, de-duplicated and packed into CSR.
// There is nothing to fit: the graphs are the model. Throws Error naming the
// first instance that carries no label.
GraphiteModel build_model(const EncodedDataset& dataset);

// Binary format, little-endian throughout:
//   "GRPH" | version u32 | flags u32 | instances u32 | labels u32 | words u32
//   vocabulary strings | label texts | label constituents CSR
//   word->instance CSR | instance->label CSR | CRC-32 u32
// Strings and arrays are length-prefixed. Offsets and array lengths are u32
// unless flag bit 0 is set, in which case they are u64.
std::vector<std::uint8_t> serialize_model(const GraphiteModel& model);
GraphiteModel deserialize_model(std::span<const std::uint8_t> bytes);

void save_model(const GraphiteModel& model, const std::filesystem::path& path);
GraphiteModel load_model(const std::filesystem::path& path);

}  // namespace graphite
