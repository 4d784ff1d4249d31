#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "graphite/csr_graph.hpp"
#include "graphite/types.hpp"

namespace graphite {

struct RawSample {
  std::string title;
  std::vector<std::string> keyphrases;
};

// Dense word-string <-> word-id mapping. Ids are handed out in first-seen order.
class Vocabulary {
 public:
  WordId intern(std::string_view word);
  std::optional<WordId> find(std::string_view word) const;
  const std::string& word(WordId id) const { return words_.at(id); }
  std::size_t size() const noexcept { return words_.size(); }
  const std::vector<std::string>& words() const noexcept { return words_; }

  static Vocabulary from_words(std::vector<std::string> words);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.words_ == b.words_; }

 private:
  std::unordered_map<std::string, WordId> index_;
  std::vector<std::string> words_;
};

// Interned keyphrases. A label is keyed by its ordered word-id sequence, so
// "black phone" and "phone black" are different labels. Constituents are kept
// in CSR form: row i is the word-id sequence of label i. Each label also keeps
// the display text of its first occurrence.
class LabelTable {
 public:
  LabelId intern(std::span<const WordId> words, std::string_view text);
  std::optional<LabelId> find(std::span<const WordId> words) const;

  std::span<const WordId> constituents(LabelId id) const { return constituents_.row(id); }
  const std::string& text(LabelId id) const { return texts_.at(id); }
  std::size_t size() const noexcept { return texts_.size(); }

  const CsrGraph& constituent_graph() const noexcept { return constituents_; }
  const std::vector<std::string>& texts() const noexcept { return texts_; }

  static LabelTable from_parts(CsrGraph constituents, std::vector<std::string> texts);

  friend bool operator==(const LabelTable& a, const LabelTable& b) {
    return a.constituents_ == b.constituents_ && a.texts_ == b.texts_;
  }

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<WordId>& key) const noexcept;
  };

  std::unordered_map<std::vector<WordId>, LabelId, KeyHash> index_;
  CsrGraph constituents_ = CsrGraph::empty(0);
  std::vector<std::string> texts_;
};

struct EncodedDataset {
  std::vector<std::vector<WordId>> instances;
  std::vector<std::vector<LabelId>> labels;
  Vocabulary vocabulary;
  LabelTable label_table;
};

// One sample per line: {"title": string, "keyphrases": [string]}.
std::vector<RawSample> load_jsonl(const std::filesystem::path& path);
std::vector<RawSample> read_jsonl(std::istream& in);

// Parses a single JSONL line; `line_no` is used in error messages only.
RawSample parse_sample(std::string_view line, std::size_t line_no);

// Builds the shared word-id space over titles and keyphrases and interns every
// keyphrase. Keyphrases that tokenize to nothing are dropped.
EncodedDataset encode(std::span<const RawSample> samples);

// Maps a title onto an existing vocabulary; unknown tokens are dropped.
std::vector<WordId> encode_title(const Vocabulary& vocabulary, std::string_view title);

}  // namespace graphite
