#include "flm/metric.hpp"

#include <algorithm>

namespace flm {

MetricTable::MetricTable(SpacePtr source, SpacePtr distance,
                         std::vector<Entry> entries, bool partial)
    : source_(std::move(source)),
      distance_(std::move(distance)),
      partial_(partial),
      declared_(std::move(entries)) {
  if (!source_ || !distance_)
    throw Error(ErrorCode::SpaceMismatch, "metric needs a source and a distance space");
  for (const auto& e : declared_) {
    if (!source_->contains(e.a) || !source_->contains(e.b))
      throw Error(ErrorCode::ForeignTerm,
                  "metric pair outside space '" + source_->name() + "'");
    if (!distance_->contains(e.distance))
      throw Error(ErrorCode::ForeignTerm,
                  "distance term outside space '" + distance_->name() + "'");
    entries_.emplace(key(e.a, e.b), e.distance);
  }
}

std::optional<Term> MetricTable::lookup(Term a, Term b) const {
  if (!source_->contains(a) || !source_->contains(b))
    throw Error(ErrorCode::ForeignTerm,
                "term does not belong to space '" + source_->name() + "'");
  auto it = entries_.find(key(a, b));
  if (it != entries_.end()) return it->second;
  if (a == b) return distance_->zero();
  return std::nullopt;
}

Term MetricTable::distance(Term a, Term b) const {
  if (auto d = lookup(a, b)) return *d;
  throw Error(ErrorCode::MissingPair, "no distance declared for (" +
                                          source_->name_of(a) + ", " +
                                          source_->name_of(b) + ")");
}

std::string_view to_string(MetricIssue issue) {
  switch (issue) {
    case MetricIssue::NonZeroSelfDistance: return "non-zero-self-distance";
    case MetricIssue::Asymmetric: return "asymmetric";
    case MetricIssue::MissingPair: return "missing-pair";
  }
  return "?";
}

std::string_view to_string(MetricKind kind) {
  return kind == MetricKind::Discrete ? "discrete" : "overlapping";
}

std::vector<MetricDiagnostic> validate_metric(const MetricTable& table) {
  const auto& src = *table.source();
  const auto& dst = *table.distance_space();
  std::vector<MetricDiagnostic> out;
  auto pair_text = [&](Term a, Term b) {
    return "(" + src.name_of(a) + ", " + src.name_of(b) + ")";
  };

  for (const auto& e : table.declared()) {
    if (e.a == e.b && !dst.is_zero(e.distance))
      out.push_back({MetricIssue::NonZeroSelfDistance, e.a, e.b,
                     "distance " + pair_text(e.a, e.b) + " is '" +
                         dst.name_of(e.distance) + "', expected '0'"});
  }
  const auto& decl = table.declared();
  for (std::size_t i = 0; i < decl.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const bool same = (decl[i].a == decl[j].a && decl[i].b == decl[j].b) ||
                        (decl[i].a == decl[j].b && decl[i].b == decl[j].a);
      if (same && decl[i].distance != decl[j].distance) {
        out.push_back({MetricIssue::Asymmetric, decl[i].a, decl[i].b,
                       "distance " + pair_text(decl[i].a, decl[i].b) +
                           " declared as both '" + dst.name_of(decl[j].distance) +
                           "' and '" + dst.name_of(decl[i].distance) + "'"});
        break;
      }
    }
  }
  if (!table.partial()) {
    const auto terms = src.terms();
    for (std::size_t i = 0; i < terms.size(); ++i)
      for (std::size_t j = i + 1; j < terms.size(); ++j)
        if (!table.lookup(terms[i], terms[j]))
          out.push_back({MetricIssue::MissingPair, terms[i], terms[j],
                         "no distance for " + pair_text(terms[i], terms[j])});
  }
  return out;
}

MetricKind metric_kind(const MetricTable& table, const std::vector<Term>& subset) {
  const auto& dst = *table.distance_space();
  for (std::size_t i = 0; i < subset.size(); ++i) {
    for (std::size_t j = i + 1; j < subset.size(); ++j) {
      if (subset[i] == subset[j]) continue;
      auto d = table.lookup(subset[i], subset[j]);
      if (d && dst.is_overlap(*d)) return MetricKind::Overlapping;
    }
  }
  return MetricKind::Discrete;
}

MetricKind metric_kind(const MetricTable& table) {
  return metric_kind(table, table.source()->terms());
}

TopologyReport classify_topology(const MetricTable& table,
                                 const std::optional<ExpertCollection>& graphs) {
  TopologyReport r;
  r.metric_kind = metric_kind(table);
  r.chain_connected = table.source()->is_chain_lattice();
  r.lattice_connected = table.source()->is_lattice();
  if (graphs) r.graph_connectivity = classify_experts(*graphs);
  return r;
}

std::optional<std::vector<Term>> find_discrete_subspace(const MetricTable& table) {
  const auto& src = *table.source();
  for (auto t : src.terms()) {
    if (src.is_zero(t)) continue;
    std::vector<Term> candidate{src.zero(), t};
    if (metric_kind(table, candidate) == MetricKind::Discrete) return candidate;
  }
  return std::nullopt;
}

}  // namespace flm
