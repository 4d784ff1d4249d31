#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "graphite/corpus.hpp"

namespace graphite::testing {

// The four-item illustration: titles and keyphrases exactly as published.
inline std::vector<RawSample> illustration_samples() {
  return {
      {"black iphone 12 pro 128GB", {"iphone 12 pro", "black phone"}},
      {"google pixel black 64GB", {"pixel 6", "black phone"}},
      {"grey iphone 13 pro", {"iphone 13 pro", "grey phone"}},
      {"Samsung s6 grey", {"Samsung galaxy", "grey phone"}},
  };
}

inline std::string illustration_jsonl() {
  return R"({"title":"black iphone 12 pro 128GB","keyphrases":["iphone 12 pro","black phone"]}
{"title":"google pixel black 64GB","keyphrases":["pixel 6","black phone"]}
{"title":"grey iphone 13 pro","keyphrases":["iphone 13 pro","grey phone"]}
{"title":"Samsung s6 grey","keyphrases":["Samsung galaxy","grey phone"]}
)";
}

// Small random corpora for property tests: at most `max_instances` samples,
// a pool of at most `max_words` words and at most `max_labels` distinct
// keyphrases of one to three pool words.
class RandomCorpus {
 public:
  explicit RandomCorpus(std::uint64_t seed) : rng_(seed) {}

  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  std::mt19937_64& rng() { return rng_; }

  std::vector<RawSample> samples(std::size_t max_instances = 200, std::size_t max_words = 50,
                                 std::size_t max_labels = 100) {
    words_ = uniform(2, max_words);
    const std::size_t label_pool = uniform(1, max_labels);
    phrases_.clear();
    for (std::size_t i = 0; i < label_pool; ++i) {
      std::string phrase;
      const std::size_t len = uniform(1, 3);
      for (std::size_t j = 0; j < len; ++j) {
        if (!phrase.empty()) phrase += ' ';
        phrase += word();
      }
      phrases_.push_back(phrase);
    }
    std::vector<RawSample> out(uniform(1, max_instances));
    for (auto& s : out) {
      s.title = title(1, 8);
      const std::size_t n = uniform(1, 4);
      for (std::size_t j = 0; j < n; ++j) s.keyphrases.push_back(phrases_[uniform(0, phrases_.size() - 1)]);
      dedupe(s.keyphrases);
    }
    return out;
  }

  // A query over the current word pool, sometimes with words the model has
  // never seen.
  std::string query() {
    std::string q = title(0, 6);
    if (uniform(0, 4) == 0) q += " unseenword";
    return q;
  }

 private:
  std::string word() { return "w" + std::to_string(uniform(0, words_ - 1)); }

  std::string title(std::size_t lo, std::size_t hi) {
    std::string t;
    const std::size_t len = uniform(lo, hi);
    for (std::size_t j = 0; j < len; ++j) {
      if (!t.empty()) t += ' ';
      t += word();
    }
    return t.empty() && lo > 0 ? word() : t;
  }

  static void dedupe(std::vector<std::string>& v) {
    std::vector<std::string> out;
    for (auto& s : v) {
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
    v = std::move(out);
  }

  std::mt19937_64 rng_;
  std::size_t words_ = 2;
  std::vector<std::string> phrases_;
};

// Unique scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("graphite-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace graphite::testing
