#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flm/lingraph.hpp"
#include "flm/space.hpp"

namespace flm {

/// Symmetric term-pair -> distance-term table. Distance terms come from a
/// companion space whose overlap-flagged terms decide the topology.
class MetricTable {
 public:
  struct Entry {
    Term a;
    Term b;
    Term distance;
  };

  /// Entries are keyed by unordered pair. A pair declared twice with
  /// different distances is kept (first value wins) and reported by
  /// validate_metric as asymmetric.
  MetricTable(SpacePtr source, SpacePtr distance, std::vector<Entry> entries,
              bool partial = false);

  const SpacePtr& source() const noexcept { return source_; }
  const SpacePtr& distance_space() const noexcept { return distance_; }
  bool partial() const noexcept { return partial_; }
  /// Entries in declaration order, duplicates included.
  const std::vector<Entry>& declared() const noexcept { return declared_; }

  /// Stored distance; identical terms default to the distance-space zero.
  /// Throws MissingPair for a pair the table does not cover.
  Term distance(Term a, Term b) const;
  std::optional<Term> lookup(Term a, Term b) const;

 private:
  static std::pair<Term, Term> key(Term a, Term b) {
    return a < b ? std::pair{a, b} : std::pair{b, a};
  }

  SpacePtr source_;
  SpacePtr distance_;
  bool partial_;
  std::vector<Entry> declared_;
  std::map<std::pair<Term, Term>, Term> entries_;
};

enum class MetricIssue { NonZeroSelfDistance, Asymmetric, MissingPair };

std::string_view to_string(MetricIssue issue);

struct MetricDiagnostic {
  MetricIssue issue;
  Term a;
  Term b;
  std::string message;
};

/// Checks self-distance zero, symmetry of repeated declarations and, for
/// tables not marked partial, coverage of every unordered pair.
std::vector<MetricDiagnostic> validate_metric(const MetricTable& table);

enum class MetricKind { Discrete, Overlapping };

std::string_view to_string(MetricKind kind);

/// Overlapping iff some distinct pair inside `subset` maps to an
/// overlap-flagged term. The subset must contain only source-space terms.
MetricKind metric_kind(const MetricTable& table, const std::vector<Term>& subset);
MetricKind metric_kind(const MetricTable& table);

struct TopologyReport {
  MetricKind metric_kind = MetricKind::Discrete;
  bool chain_connected = false;
  bool lattice_connected = false;
  std::optional<ExpertClass> graph_connectivity;
};

TopologyReport classify_topology(const MetricTable& table,
                                 const std::optional<ExpertCollection>& graphs =
                                     std::nullopt);

/// A {0, t} subspace that classifies Discrete, if the table has one.
std::optional<std::vector<Term>> find_discrete_subspace(const MetricTable& table);

}  // namespace flm
