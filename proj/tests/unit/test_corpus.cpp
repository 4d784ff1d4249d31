#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "graphite/corpus.hpp"
#include "graphite/tokenizer.hpp"

using namespace graphite;

TEST_CASE("parse_sample reads title and keyphrases") {
  auto s = parse_sample(R"({"title":"treated wooden deckboards","keyphrases":["deckboards"]})", 1);
  CHECK(s.title == "treated wooden deckboards");
  CHECK(s.keyphrases == std::vector<std::string>{"deckboards"});
}

TEST_CASE("parse_sample treats keyphrases as optional") {
  auto s = parse_sample(R"({"title":"x"})", 1);
  CHECK(s.title == "x");
  CHECK(s.keyphrases.empty());
}

TEST_CASE("parse_sample de-duplicates keyphrases keeping the first") {
  auto s = parse_sample(R"({"title":"x","keyphrases":["Black Phone","a","black phone!"]})", 1);
  CHECK(s.keyphrases == std::vector<std::string>{"Black Phone", "a"});
}

TEST_CASE("read_jsonl reports the failing line") {
  std::istringstream missing_title("{\"title\":\"ok\"}\n{\"keyphrases\":[]}\n");
  try {
    read_jsonl(missing_title);
    FAIL("expected DatasetError");
  } catch (const DatasetError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("missing title") != std::string::npos);
  }

  std::istringstream malformed("{\"title\":\"ok\"}\n\n{\"title\": oops}\n");
  try {
    read_jsonl(malformed);
    FAIL("expected DatasetError");
  } catch (const DatasetError& e) {
    CHECK(e.line() == 3);
  }

  std::istringstream bad_type("{\"title\":3}\n");
  CHECK_THROWS_AS(read_jsonl(bad_type), DatasetError);
  std::istringstream blank("{\"title\":\"   \"}\n");
  CHECK_THROWS_AS(read_jsonl(blank), DatasetError);
}

TEST_CASE("load_jsonl keeps file order") {
  testing::TempDir dir;
  testing::write_file(dir / "fig.jsonl", testing::illustration_jsonl());
  const auto samples = load_jsonl(dir / "fig.jsonl");
  REQUIRE(samples.size() == 4);
  CHECK(samples[0].title == "black iphone 12 pro 128GB");
  CHECK(samples[3].keyphrases[0] == "Samsung galaxy");
  CHECK_THROWS_AS(load_jsonl(dir / "absent.jsonl"), Error);
}

TEST_CASE("encode on the four-item illustration") {
  const auto samples = testing::illustration_samples();
  const auto ds = encode(samples);
  const std::vector<std::string> expected_words{
      "black", "iphone", "12", "pro", "128gb", "phone", "google", "pixel",
      "64gb",  "6",      "grey", "13", "samsung", "s6", "galaxy"};
  CHECK(ds.vocabulary.words() == expected_words);
  CHECK(ds.label_table.size() == 6);
  CHECK(ds.instances.size() == 4);
  CHECK(ds.labels.size() == 4);
  // "black phone" and "grey phone" are shared between items.
  CHECK(ds.labels[0][1] == ds.labels[1][1]);
  CHECK(ds.labels[2][1] == ds.labels[3][1]);
  CHECK(ds.label_table.text(ds.labels[3][0]) == "Samsung galaxy");
}

TEST_CASE("encode keeps duplicate title words") {
  const std::vector<RawSample> samples{{"a a b", {"a"}}};
  const auto ds = encode(samples);
  CHECK(ds.instances[0] == std::vector<WordId>{0, 0, 1});
  REQUIRE(ds.label_table.size() == 1);
  const auto row = ds.label_table.constituents(0);
  CHECK(std::vector<WordId>(row.begin(), row.end()) == std::vector<WordId>{0});
}

TEST_CASE("encode gives word permutations distinct label ids") {
  const std::vector<RawSample> samples{{"black phone", {"black phone", "phone black"}}};
  const auto ds = encode(samples);
  CHECK(ds.label_table.size() == 2);
  CHECK(ds.labels[0] == std::vector<LabelId>{0, 1});
}

TEST_CASE("encode drops keyphrases with no tokens") {
  const std::vector<RawSample> samples{{"x", {"!!!", "x"}}};
  const auto ds = encode(samples);
  CHECK(ds.label_table.size() == 1);
  CHECK(ds.labels[0].size() == 1);
}

TEST_CASE("encode_title skips unknown words") {
  const auto ds = encode(testing::illustration_samples());
  const auto ids = encode_title(ds.vocabulary, "Black unknown IPHONE");
  CHECK(ids == std::vector<WordId>{0, 1});
}

TEST_CASE("encoding properties over random corpora") {
  testing::RandomCorpus gen(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto samples = gen.samples();
    const auto ds = encode(samples);
    const auto again = encode(samples);
    CHECK(ds.vocabulary == again.vocabulary);
    CHECK(ds.label_table == again.label_table);
    CHECK(ds.instances == again.instances);
    CHECK(ds.labels == again.labels);

    for (std::size_t i = 0; i < samples.size(); ++i) {
      std::vector<std::string> decoded;
      for (WordId w : ds.instances[i]) decoded.push_back(ds.vocabulary.word(w));
      CHECK(decoded == tokenize(samples[i].title));
      for (LabelId l : ds.labels[i]) CHECK(l < ds.label_table.size());
    }
    for (WordId w = 0; w < ds.vocabulary.size(); ++w) {
      CHECK(ds.vocabulary.find(ds.vocabulary.word(w)) == w);
    }
    for (LabelId l = 0; l < ds.label_table.size(); ++l) {
      const auto row = ds.label_table.constituents(l);
      CHECK(!row.empty());
      for (WordId w : row) CHECK(w < ds.vocabulary.size());
      CHECK(ds.label_table.find(row) == l);
    }
  }
}
