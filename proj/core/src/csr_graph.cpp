#include "graphite/csr_graph.hpp"

#include <algorithm>

namespace graphite {

CsrGraph CsrGraph::empty(std::size_t num_rows) {
  CsrGraph g;
  g.offsets_.assign(num_rows + 1, 0);
  return g;
}

CsrGraph CsrGraph::from_edges(std::size_t num_rows, std::vector<Edge> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  CsrGraph g;
  g.offsets_.assign(num_rows + 1, 0);
  g.targets_.reserve(edges.size());
  for (const auto& [source, target] : edges) {
    if (source >= num_rows) {
      throw Error("edge source " + std::to_string(source) + " out of range");
    }
    ++g.offsets_[source + 1];
    g.targets_.push_back(target);
  }
  for (std::size_t r = 0; r < num_rows; ++r) g.offsets_[r + 1] += g.offsets_[r];
  return g;
}

CsrGraph CsrGraph::from_parts(std::vector<EdgeOffset> offsets, std::vector<Target> targets) {
  if (offsets.empty() || offsets.front() != 0) {
    throw ModelFormatError("CSR offsets must start at 0");
  }
  if (!std::is_sorted(offsets.begin(), offsets.end())) {
    throw ModelFormatError("CSR offsets must be non-decreasing");
  }
  if (offsets.back() != targets.size()) {
    throw ModelFormatError("CSR offsets do not cover the target array");
  }
  CsrGraph g;
  g.offsets_ = std::move(offsets);
  g.targets_ = std::move(targets);
  return g;
}

void CsrGraph::append_row(std::span<const Target> row) {
  targets_.insert(targets_.end(), row.begin(), row.end());
  offsets_.push_back(targets_.size());
}

bool CsrGraph::is_canonical() const {
  for (std::size_t r = 0; r < num_rows(); ++r) {
    auto cells = row(r);
    for (std::size_t j = 1; j < cells.size(); ++j) {
      if (cells[j - 1] >= cells[j]) return false;
    }
  }
  return true;
}

CsrGraph::Target CsrGraph::max_target() const {
  if (targets_.empty()) return 0;
  return *std::max_element(targets_.begin(), targets_.end());
}

}  // namespace graphite
