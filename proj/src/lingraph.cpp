#include "flm/lingraph.hpp"

#include <numeric>
#include <set>

namespace flm {

ConceptGraph::ConceptGraph(SpacePtr space, std::vector<std::string> concepts,
                           std::vector<Edge> edges, bool directed)
    : space_(std::move(space)),
      concepts_(std::move(concepts)),
      edges_(std::move(edges)),
      directed_(directed) {
  if (!space_) throw Error(ErrorCode::InvalidGraph, "graph without a space");
  if (concepts_.empty()) throw Error(ErrorCode::InvalidGraph, "graph without concepts");
  std::set<std::string> seen;
  for (const auto& c : concepts_)
    if (!seen.insert(c).second)
      throw Error(ErrorCode::InvalidGraph, "duplicate concept '" + c + "'");
  for (const auto& e : edges_) {
    if (e.from >= concepts_.size() || e.to >= concepts_.size())
      throw Error(ErrorCode::InvalidGraph, "edge endpoint out of range");
    if (e.from == e.to)
      throw Error(ErrorCode::InvalidGraph,
                  "self-loop on '" + concepts_[e.from] + "'");
    if (!space_->contains(e.label))
      throw Error(ErrorCode::ForeignTerm,
                  "edge label does not belong to space '" + space_->name() + "'");
    if (space_->is_zero(e.label))
      throw Error(ErrorCode::InvalidGraph, "edge '" + concepts_[e.from] + "' -> '" +
                                               concepts_[e.to] + "' has a zero label");
  }
}

LingMatrix graph_to_matrix(const ConceptGraph& g) {
  const std::size_t n = g.size();
  LingMatrix m(g.space(), n, n);
  std::vector<bool> taken(n * n, false);
  auto place = [&](std::size_t i, std::size_t j, Term label) {
    if (taken[i * n + j])
      throw Error(ErrorCode::DuplicateEdge, "two labels for '" + g.concepts()[i] +
                                                "' -> '" + g.concepts()[j] + "'");
    taken[i * n + j] = true;
    m.set(i, j, label);
  };
  for (const auto& e : g.edges()) {
    place(e.from, e.to, e.label);
    if (!g.directed()) place(e.to, e.from, e.label);
  }
  return m;
}

ConceptGraph matrix_to_graph(const LingMatrix& m, std::vector<std::string> concepts,
                             bool directed) {
  if (m.rows() != m.cols() || m.rows() != concepts.size())
    throw Error(ErrorCode::ShapeMismatch,
                "adjacency matrix must be square and match the concept count");
  const auto& s = *m.space();
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = directed ? 0 : i + 1; j < m.cols(); ++j) {
      if (i == j || s.is_zero(m(i, j))) continue;
      if (!directed && m(i, j) != m(j, i))
        throw Error(ErrorCode::InvalidGraph, "undirected adjacency must be symmetric");
      edges.push_back({i, j, m(i, j)});
    }
  }
  return ConceptGraph(m.space(), std::move(concepts), std::move(edges), directed);
}

bool is_connected(const ConceptGraph& g) {
  std::vector<std::size_t> parent(g.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = g.size();
  for (const auto& e : g.edges()) {
    auto a = find(e.from), b = find(e.to);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

ExpertCollection::ExpertCollection(std::vector<ConceptGraph> graphs)
    : graphs_(std::move(graphs)) {
  if (graphs_.empty())
    throw Error(ErrorCode::EmptyCollection, "expert collection has no graphs");
  for (const auto& g : graphs_)
    if (g.concepts() != graphs_.front().concepts())
      throw Error(ErrorCode::InvalidGraph,
                  "expert graphs must share the same concept list");
}

std::string_view to_string(ExpertStrength s) {
  switch (s) {
    case ExpertStrength::SuperStrong: return "super-strong";
    case ExpertStrength::Mixed: return "mixed";
    case ExpertStrength::TotallyDisconnected: return "totally-disconnected";
  }
  return "?";
}

ExpertClass classify_experts(const ExpertCollection& c) {
  std::size_t connected = 0;
  for (const auto& g : c.graphs()) connected += is_connected(g) ? 1 : 0;
  const std::size_t total = c.graphs().size();
  ExpertStrength kind = ExpertStrength::Mixed;
  if (connected == total) kind = ExpertStrength::SuperStrong;
  else if (connected == 0) kind = ExpertStrength::TotallyDisconnected;
  return {kind, connected, total};
}

}  // namespace flm
