#include "graphite/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "graphite/tokenizer.hpp"

namespace graphite {

WordId Vocabulary::intern(std::string_view word) {
  std::string key(word);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  const auto id = static_cast<WordId>(words_.size());
  index_.emplace(key, id);
  words_.push_back(std::move(key));
  return id;
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary Vocabulary::from_words(std::vector<std::string> words) {
  Vocabulary vocab;
  vocab.index_.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!vocab.index_.emplace(words[i], static_cast<WordId>(i)).second) {
      throw ModelFormatError("duplicate vocabulary entry '" + words[i] + "'");
    }
  }
  vocab.words_ = std::move(words);
  return vocab;
}

std::size_t LabelTable::KeyHash::operator()(const std::vector<WordId>& key) const noexcept {
  // FNV-1a over the id sequence.
  std::uint64_t h = 1469598103934665603ULL;
  for (WordId w : key) {
    h ^= w;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

LabelId LabelTable::intern(std::span<const WordId> words, std::string_view text) {
  std::vector<WordId> key(words.begin(), words.end());
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  const auto id = static_cast<LabelId>(texts_.size());
  constituents_.append_row(words);
  texts_.emplace_back(text);
  index_.emplace(std::move(key), id);
  return id;
}

std::optional<LabelId> LabelTable::find(std::span<const WordId> words) const {
  auto it = index_.find(std::vector<WordId>(words.begin(), words.end()));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

LabelTable LabelTable::from_parts(CsrGraph constituents, std::vector<std::string> texts) {
  if (constituents.num_rows() != texts.size()) {
    throw ModelFormatError("label constituent rows do not match label count");
  }
  LabelTable table;
  table.index_.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    auto row = constituents.row(i);
    if (row.empty()) throw ModelFormatError("label " + std::to_string(i) + " has no words");
    if (!table.index_.emplace(std::vector<WordId>(row.begin(), row.end()), static_cast<LabelId>(i)).second) {
      throw ModelFormatError("duplicate label key at label " + std::to_string(i));
    }
  }
  table.constituents_ = std::move(constituents);
  table.texts_ = std::move(texts);
  return table;
}

RawSample parse_sample(std::string_view line, std::size_t line_no) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw DatasetError(line_no, std::string("malformed JSON: ") + e.what());
  }
  if (!obj.is_object()) throw DatasetError(line_no, "expected a JSON object");

  auto title = obj.find("title");
  if (title == obj.end()) throw DatasetError(line_no, "missing title");
  if (!title->is_string()) throw DatasetError(line_no, "title must be a string");

  RawSample sample;
  sample.title = title->get<std::string>();
  if (trim(sample.title).empty()) throw DatasetError(line_no, "empty title");

  auto phrases = obj.find("keyphrases");
  if (phrases != obj.end() && !phrases->is_null()) {
    if (!phrases->is_array()) throw DatasetError(line_no, "keyphrases must be an array");
    std::unordered_set<std::string> seen;
    for (const auto& p : *phrases) {
      if (!p.is_string()) throw DatasetError(line_no, "keyphrases must be strings");
      auto text = p.get<std::string>();
      if (seen.insert(normalize_phrase(text)).second) sample.keyphrases.push_back(std::move(text));
    }
  }
  return sample;
}

std::vector<RawSample> read_jsonl(std::istream& in) {
  std::vector<RawSample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    samples.push_back(parse_sample(line, line_no));
  }
  return samples;
}

std::vector<RawSample> load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open dataset " + path.string());
  return read_jsonl(in);
}

EncodedDataset encode(std::span<const RawSample> samples) {
  EncodedDataset out;
  out.instances.reserve(samples.size());
  out.labels.reserve(samples.size());
  std::vector<WordId> words;
  for (const auto& sample : samples) {
    auto& instance = out.instances.emplace_back();
    for (const auto& token : tokenize(sample.title)) {
      instance.push_back(out.vocabulary.intern(token));
    }
    auto& labels = out.labels.emplace_back();
    for (const auto& phrase : sample.keyphrases) {
      words.clear();
      for (const auto& token : tokenize(phrase)) words.push_back(out.vocabulary.intern(token));
      if (words.empty()) continue;
      const LabelId id = out.label_table.intern(words, trim(phrase));
      if (std::find(labels.begin(), labels.end(), id) == labels.end()) labels.push_back(id);
    }
  }
  return out;
}

std::vector<WordId> encode_title(const Vocabulary& vocabulary, std::string_view title) {
  std::vector<WordId> ids;
  for (const auto& token : tokenize(title)) {
    if (auto id = vocabulary.find(token)) ids.push_back(*id);
  }
  return ids;
}

}  // namespace graphite
