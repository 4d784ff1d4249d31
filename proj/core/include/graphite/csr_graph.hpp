#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "graphite/types.hpp"

namespace graphite {

// Offsets/targets pair. Row r spans targets[offsets[r], offsets[r + 1]).
//
// Graphs built with from_edges() are canonical: every row is sorted ascending
// and duplicate-free. Graphs built row-by-row with append_row() keep the rows
// exactly as given (label constituents rely on this to preserve word order).
class CsrGraph {
 public:
  using Target = std::uint32_t;
  using Edge = std::pair<Target, Target>;

  static CsrGraph empty(std::size_t num_rows);

  // Sorts and de-duplicates `edges` (source, target) and packs them. Every
  // source must be < num_rows.
  static CsrGraph from_edges(std::size_t num_rows, std::vector<Edge> edges);

  // Validates and adopts raw arrays. Throws ModelFormatError when offsets are
  // not a monotone prefix-sum over targets.
  static CsrGraph from_parts(std::vector<EdgeOffset> offsets, std::vector<Target> targets);

  void append_row(std::span<const Target> row);

  std::span<const Target> row(std::size_t r) const {
    return {targets_.data() + offsets_[r], targets_.data() + offsets_[r + 1]};
  }
  std::size_t row_size(std::size_t r) const {
    return static_cast<std::size_t>(offsets_[r + 1] - offsets_[r]);
  }

  std::size_t num_rows() const noexcept { return offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return targets_.size(); }
  const std::vector<EdgeOffset>& offsets() const noexcept { return offsets_; }
  const std::vector<Target>& targets() const noexcept { return targets_; }

  // True when every row is strictly increasing.
  bool is_canonical() const;
  Target max_target() const;

  friend bool operator==(const CsrGraph&, const CsrGraph&) = default;

 private:
  std::vector<EdgeOffset> offsets_{0};
  std::vector<Target> targets_;
};

}  // namespace graphite
