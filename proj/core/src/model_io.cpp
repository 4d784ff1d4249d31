#include "graphite/model.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include <zlib.h>

namespace graphite {
namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'G', 'R', 'P', 'H'};
constexpr std::uint32_t kFlagWideOffsets = 1u;

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large buffers in chunks.
  constexpr std::size_t kChunk = 1u << 30;
  for (std::size_t pos = 0; pos < bytes.size(); pos += kChunk) {
    const std::size_t n = std::min(kChunk, bytes.size() - pos);
    crc = crc32(crc, bytes.data() + pos, static_cast<uInt>(n));
  }
  return static_cast<std::uint32_t>(crc);
}

class Writer {
 public:
  explicit Writer(bool wide) : wide_(wide) {}

  void u32(std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
  }
  void u64(std::uint64_t v) {
    for (int s = 0; s < 64; s += 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
  }
  void length(std::uint64_t n) {
    if (wide_) {
      u64(n);
    } else {
      u32(static_cast<std::uint32_t>(n));
    }
  }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void string(const std::string& s) {
    length(s.size());
    out_.insert(out_.end(), s.begin(), s.end());
  }
  void strings(const std::vector<std::string>& list) {
    length(list.size());
    for (const auto& s : list) string(s);
  }
  void csr(const CsrGraph& g) {
    length(g.offsets().size());
    for (EdgeOffset o : g.offsets()) length(o);
    length(g.targets().size());
    for (auto t : g.targets()) u32(t);
  }

  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  bool wide_;
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  void set_wide(bool wide) { wide_ = wide; }

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }
  std::uint64_t length() { return wide_ ? u64() : u32(); }

  // Lengths are checked against the bytes left so a corrupt prefix cannot
  // trigger a huge allocation.
  std::size_t count(std::size_t min_item_bytes) {
    const std::uint64_t n = length();
    if (min_item_bytes > 0 && n > remaining() / min_item_bytes) truncated();
    return static_cast<std::size_t>(n);
  }
  std::string string() {
    const std::size_t n = count(1);
    need(n);
    std::string s(reinterpret_cast<const char*>(in_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  std::vector<std::string> strings() {
    const std::size_t n = count(wide_ ? 8 : 4);
    std::vector<std::string> list;
    list.reserve(n);
    for (std::size_t i = 0; i < n; ++i) list.push_back(string());
    return list;
  }
  CsrGraph csr() {
    std::vector<EdgeOffset> offsets(count(wide_ ? 8 : 4));
    for (auto& o : offsets) o = length();
    std::vector<CsrGraph::Target> targets(count(4));
    for (auto& t : targets) t = u32();
    return CsrGraph::from_parts(std::move(offsets), std::move(targets));
  }

  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (n > remaining()) truncated();
  }
  [[noreturn]] static void truncated() { throw ModelFormatError("truncated model file"); }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
  bool wide_ = false;
};

void check_graph(const CsrGraph& g, std::size_t rows, std::size_t target_limit, const char* name) {
  if (g.num_rows() != rows) {
    throw ModelFormatError(std::string(name) + " has " + std::to_string(g.num_rows()) +
                           " rows, expected " + std::to_string(rows));
  }
  if (g.num_edges() > 0 && g.max_target() >= target_limit) {
    throw ModelFormatError(std::string(name) + " references an id out of range");
  }
}

}  // namespace

std::vector<std::uint8_t> serialize_model(const GraphiteModel& model) {
  constexpr std::uint64_t kNarrowMax = std::numeric_limits<std::uint32_t>::max();
  const bool wide = model.word_instances.num_edges() > kNarrowMax ||
                    model.instance_labels.num_edges() > kNarrowMax ||
                    model.labels.constituent_graph().num_edges() > kNarrowMax;

  Writer w(wide);
  w.bytes(kMagic);
  w.u32(kModelFormatVersion);
  w.u32(wide ? kFlagWideOffsets : 0u);
  w.u32(static_cast<std::uint32_t>(model.num_instances()));
  w.u32(static_cast<std::uint32_t>(model.num_labels()));
  w.u32(static_cast<std::uint32_t>(model.num_words()));
  w.strings(model.vocabulary.words());
  w.strings(model.labels.texts());
  w.csr(model.labels.constituent_graph());
  w.csr(model.word_instances);
  w.csr(model.instance_labels);
  auto out = w.take();
  const std::uint32_t crc = crc32_of(out);
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>(crc >> s));
  return out;
}

GraphiteModel deserialize_model(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kMagic.size() || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw ModelFormatError("not a graphite model (bad magic bytes)");
  }
  Reader header(bytes.subspan(kMagic.size()));
  const std::uint32_t version = header.u32();
  if (version != kModelFormatVersion) {
    throw ModelFormatError("unsupported model format version " + std::to_string(version) +
                           " (expected " + std::to_string(kModelFormatVersion) + ")");
  }
  if (bytes.size() < kMagic.size() + 4 * 6 + 4) throw ModelFormatError("truncated model file");

  const auto body = bytes.first(bytes.size() - 4);
  Reader trailer(bytes.last(4));
  if (crc32_of(body) != trailer.u32()) {
    throw ModelFormatError("model checksum mismatch (file corrupted)");
  }

  Reader r(body.subspan(kMagic.size() + 4));
  const std::uint32_t flags = r.u32();
  if ((flags & ~kFlagWideOffsets) != 0) throw ModelFormatError("unknown model flags");
  r.set_wide((flags & kFlagWideOffsets) != 0);
  const std::size_t num_instances = r.u32();
  const std::size_t num_labels = r.u32();
  const std::size_t num_words = r.u32();

  auto words = r.strings();
  auto texts = r.strings();
  auto constituents = r.csr();
  GraphiteModel model;
  model.word_instances = r.csr();
  model.instance_labels = r.csr();
  if (r.remaining() != 0) throw ModelFormatError("trailing bytes after model payload");

  if (words.size() != num_words) throw ModelFormatError("vocabulary size does not match header");
  if (texts.size() != num_labels) throw ModelFormatError("label count does not match header");
  check_graph(constituents, num_labels, num_words, "label constituents");
  check_graph(model.word_instances, num_words, num_instances, "word->instance graph");
  check_graph(model.instance_labels, num_instances, num_labels, "instance->label graph");
  if (!model.word_instances.is_canonical() || !model.instance_labels.is_canonical()) {
    throw ModelFormatError("graph rows are not sorted and de-duplicated");
  }

  model.vocabulary = Vocabulary::from_words(std::move(words));
  model.labels = LabelTable::from_parts(std::move(constituents), std::move(texts));
  return model;
}

void save_model(const GraphiteModel& model, const std::filesystem::path& path) {
  const auto bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing model to " + path.string());
}

GraphiteModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_model(bytes);
}

}  // namespace graphite
