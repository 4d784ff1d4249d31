#include "graphite/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace graphite {
namespace {

// mt19937_64 output is fixed by the standard, but the std distributions are
// not, so bounded draws are done here to keep files identical across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

  // `count` distinct values from [0, pool), via Floyd's algorithm; order is
  // randomized afterwards.
  std::vector<std::uint32_t> distinct(std::size_t count, std::size_t pool) {
    std::vector<std::uint32_t> out;
    std::unordered_set<std::uint32_t> seen;
    for (std::size_t j = pool - count; j < pool; ++j) {
      auto t = static_cast<std::uint32_t>(below(j + 1));
      if (!seen.insert(t).second) {
        t = static_cast<std::uint32_t>(j);
        seen.insert(t);
      }
      out.push_back(t);
    }
    shuffle(out);
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

// log C(n, r), good enough to size the word pool.
double log_choose(std::size_t n, std::size_t r) {
  return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(r) + 1) -
         std::lgamma(static_cast<double>(n - r) + 1);
}

std::size_t pick_vocab_size(const SynthParams& p) {
  // A pool of about sqrt(train_n) * title_len words keeps posting lists short,
  // and it must leave plenty of distinct title_len-subsets for rejection.
  auto n = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(p.train_n)))) * p.title_len;
  n = std::max(n, p.title_len + 1);
  while (log_choose(n, p.title_len) < std::log(4.0 * static_cast<double>(p.train_n) + 1.0)) ++n;
  return n;
}

struct SetHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto x : v) {
      h ^= x;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

std::string join_words(const std::vector<std::uint32_t>& ids) {
  std::string out;
  for (auto id : ids) {
    if (!out.empty()) out.push_back(' ');
    out += 'w';
    out += std::to_string(id);
  }
  return out;
}

}  // namespace

SynthDataset generate(const SynthParams& p) {
  if (p.title_len == 0) throw Error("synth: title_len must be at least 1");
  if (p.labels_per == 0) throw Error("synth: labels_per must be at least 1");
  if (p.label_n < p.labels_per) throw Error("synth: label_n must be at least labels_per");
  if (p.train_n == 0 && (p.test_n > 0 || p.valid_n > 0)) {
    throw Error("synth: test/validation samples need at least one training sample");
  }
  const std::size_t vocab_n = p.vocab_n > 0 ? p.vocab_n : pick_vocab_size(p);
  if (vocab_n < p.title_len ||
      log_choose(vocab_n, p.title_len) < std::log(static_cast<double>(p.train_n)) - 1e-9) {
    throw Error("synth: a pool of " + std::to_string(vocab_n) + " words cannot give " +
                std::to_string(p.train_n) + " distinct titles of " + std::to_string(p.title_len) +
                " words");
  }
  // Rejection sampling needs slack; refuse pools that are nearly exhausted.
  if (log_choose(vocab_n, p.title_len) < std::log(2.0 * static_cast<double>(p.train_n))) {
    throw Error("synth: word pool too small for rejection sampling; raise vocab_n");
  }

  Rng rng(p.seed);
  SynthDataset out;
  out.train.reserve(p.train_n);
  std::vector<std::vector<std::uint32_t>> titles;
  titles.reserve(p.train_n);
  std::unordered_set<std::vector<std::uint32_t>, SetHash> used;
  used.reserve(p.train_n);
  while (titles.size() < p.train_n) {
    auto words = rng.distinct(p.title_len, vocab_n);
    auto key = words;
    std::sort(key.begin(), key.end());
    if (!used.insert(std::move(key)).second) continue;

    RawSample sample;
    sample.title = join_words(words);
    for (auto l : rng.distinct(p.labels_per, p.label_n)) sample.keyphrases.push_back("l" + std::to_string(l));
    out.train.push_back(std::move(sample));
    titles.push_back(std::move(words));
  }

  auto twins = [&](std::size_t n, std::vector<RawSample>& dst) {
    dst.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto source = static_cast<std::size_t>(rng.below(p.train_n));
      auto words = titles[source];
      rng.shuffle(words);
      dst.push_back({join_words(words), out.train[source].keyphrases});
    }
  };
  twins(p.test_n, out.test);
  twins(p.valid_n, out.valid);
  return out;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<RawSample>& samples) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  for (const auto& s : samples) {
    nlohmann::json line{{"title", s.title}, {"keyphrases", s.keyphrases}};
    out << line.dump() << '\n';
  }
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace graphite
