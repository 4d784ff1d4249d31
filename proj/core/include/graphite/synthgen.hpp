#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "graphite/corpus.hpp"

namespace graphite {

struct SynthParams {
  std::size_t train_n = 500000;
  std::size_t test_n = 10000;
  std::size_t valid_n = 10000;
  std::size_t label_n = 200000;
  std::size_t title_len = 10;
  std::size_t labels_per = 10;
  // Size of the "w<i>" word pool. 0 picks a pool large enough that every
  // training title can get a distinct word set.
  std::size_t vocab_n = 0;
  std::uint64_t seed = 0;
};

struct SynthDataset {
  std::vector<RawSample> train;
  std::vector<RawSample> test;
  std::vector<RawSample> valid;
};

// Every training title is a distinct set of title_len words. Each test and
// validation sample is a shuffled copy of one training title and carries that
// sample's labels as ground truth. Throws Error on infeasible parameters.
SynthDataset generate(const SynthParams& params);

void write_jsonl(const std::filesystem::path& path, const std::vector<RawSample>& samples);

}  // namespace graphite
