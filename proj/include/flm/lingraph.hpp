#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "flm/lingmatrix.hpp"
#include "flm/space.hpp"

namespace flm {

struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  Term label;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Concepts as nodes, nonzero terms as edge labels. Self-loops are rejected
/// on construction; duplicate edges are reported by graph_to_matrix.
class ConceptGraph {
 public:
  ConceptGraph(SpacePtr space, std::vector<std::string> concepts,
               std::vector<Edge> edges, bool directed = true);

  const SpacePtr& space() const noexcept { return space_; }
  const std::vector<std::string>& concepts() const noexcept { return concepts_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool directed() const noexcept { return directed_; }
  std::size_t size() const noexcept { return concepts_.size(); }

 private:
  SpacePtr space_;
  std::vector<std::string> concepts_;
  std::vector<Edge> edges_;
  bool directed_;
};

/// n x n adjacency matrix, symmetric for undirected graphs.
LingMatrix graph_to_matrix(const ConceptGraph& g);
/// Inverse of graph_to_matrix: one edge per nonzero off-diagonal entry (upper
/// triangle only for undirected graphs).
ConceptGraph matrix_to_graph(const LingMatrix& m, std::vector<std::string> concepts,
                             bool directed = true);

/// Weak connectivity: edges are followed in both directions.
bool is_connected(const ConceptGraph& g);

/// Graphs from several experts over the same concept list.
class ExpertCollection {
 public:
  explicit ExpertCollection(std::vector<ConceptGraph> graphs);
  const std::vector<ConceptGraph>& graphs() const noexcept { return graphs_; }

 private:
  std::vector<ConceptGraph> graphs_;
};

enum class ExpertStrength { SuperStrong, Mixed, TotallyDisconnected };

std::string_view to_string(ExpertStrength s);

struct ExpertClass {
  ExpertStrength kind;
  std::size_t connected;  // graphs that are connected
  std::size_t total;
  friend bool operator==(const ExpertClass&, const ExpertClass&) = default;
};

ExpertClass classify_experts(const ExpertCollection& c);

}  // namespace flm
