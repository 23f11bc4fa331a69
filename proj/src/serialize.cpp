#include "flm/modelfile.hpp"

#include <sstream>

namespace flm {

namespace {

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

void write_space(std::ostream& os, const std::string& name, const LinguisticSpace& s) {
  const SpaceDecl& d = s.decl();
  os << "space " << name << ": " << to_string(d.kind) << ' ';
  if (d.kind == OrderKind::Poset) {
    std::vector<std::string> items = d.terms;
    for (const auto& [lo, hi] : d.covers) items.push_back(lo + " < " + hi);
    os << "{ " << join(items, ", ") << " }";
  } else {
    os << join(d.chain, " < ");
  }
  os << '\n';
  if (d.greatest) os << "  greatest " << *d.greatest << '\n';
  for (const auto& [alias, canonical] : d.aliases)
    os << "  alias " << alias << " = " << canonical << '\n';
  if (!d.overlap_terms.empty())
    os << "  overlap-terms { " << join(d.overlap_terms, ", ") << " }\n";
}

void write_matrix_body(std::ostream& os, const LingMatrix& m, std::string_view indent) {
  os << m.rows() << 'x' << m.cols() << " [\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << indent << "  ";
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m.name_at(i, j);
    os << '\n';
  }
  os << indent << "]\n";
}

std::string row_literal(const LingMatrix& m) {
  return "(" + join(m.names(), ", ") + ")";
}

void write_model_matrix(std::ostream& os, const LingMatrix& m,
                        const std::optional<std::string>& ref) {
  if (ref) {
    os << "  matrix " << *ref << '\n';
    return;
  }
  os << "  matrix over " << m.space()->name() << ' ';
  write_matrix_body(os, m, "  ");
}

std::string write_poly(const LingPolynomial& p) {
  if (!p.coefficients().empty() || p.shape().scalar) return format_poly(p);
  const LingMatrix zero(p.space(), p.shape().rows, p.shape().cols);
  if (zero.rows() == 1) return row_literal(zero);
  std::string out = "[";
  for (std::size_t i = 0; i < zero.rows(); ++i) {
    if (i) out += "; ";
    for (std::size_t j = 0; j < zero.cols(); ++j) out += j ? " 0" : "0";
  }
  return out + "]";
}

}  // namespace

std::string serialize(const ModelBundle& b) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [kind, name] : b.order) {
    if (!first) os << '\n';
    first = false;
    switch (kind) {
      case DeclKind::Space:
        write_space(os, name, *b.spaces.at(name));
        break;
      case DeclKind::Metric: {
        const auto& m = b.metrics.at(name);
        os << "metric " << name << " over " << m.source()->name() << " dist "
           << m.distance_space()->name() << (m.partial() ? " partial" : "") << ":\n";
        for (const auto& e : m.declared())
          os << "  (" << m.source()->name_of(e.a) << ", " << m.source()->name_of(e.b)
             << ") = " << m.distance_space()->name_of(e.distance) << '\n';
        break;
      }
      case DeclKind::Matrix: {
        const auto& m = b.matrices.at(name);
        os << "matrix " << name << " over " << m.space()->name() << ": ";
        write_matrix_body(os, m, "");
        break;
      }
      case DeclKind::Graph: {
        const auto& g = b.graphs.at(name);
        const auto& s = *g.space();
        os << "graph " << name << " over " << s.name() << ":\n";
        if (!g.concepts().empty()) os << "  nodes " << join(g.concepts(), ", ") << '\n';
        for (const auto& e : g.edges())
          os << "  " << g.concepts()[e.from] << " -" << s.name_of(e.label)
             << (g.directed() ? "-> " : "- ") << g.concepts()[e.to] << '\n';
        break;
      }
      case DeclKind::Poly: {
        const auto& p = b.polynomials.at(name);
        os << "poly " << name << " over " << p.space()->name() << ": " << write_poly(p)
           << '\n';
        break;
      }
      case DeclKind::State: {
        const auto& st = b.states.at(name);
        os << "state " << name << " over " << st.values.space()->name() << ": "
           << row_literal(st.values) << '\n';
        break;
      }
      case DeclKind::Flcm: {
        const auto& d = b.flcm_models.at(name);
        os << "flcm " << name << ":\n";
        os << "  concepts " << join(d.model.concepts, ", ") << '\n';
        write_model_matrix(os, d.model.matrix, d.matrix_ref);
        os << "  pair " << to_string(d.model.pair) << '\n';
        break;
      }
      case DeclKind::Flrm: {
        const auto& d = b.flrm_models.at(name);
        os << "flrm " << name << ":\n";
        os << "  domain " << join(d.model.domain, ", ") << '\n';
        os << "  range " << join(d.model.range, ", ") << '\n';
        write_model_matrix(os, d.model.matrix, d.matrix_ref);
        os << "  pair " << to_string(d.model.pair) << '\n';
        break;
      }
      case DeclKind::Relation: {
        const auto& r = b.relations.at(name);
        os << "relation " << name << " over " << r.space->name() << ":\n";
        os << "  left " << join(r.relation.left(), ", ") << '\n';
        os << "  right " << join(r.relation.right(), ", ") << '\n';
        for (const auto& l : r.relation.links())
          os << "  " << r.relation.left()[l.left] << " -" << r.space->name_of(l.membership)
             << "-> " << r.relation.right()[l.right] << '\n';
        break;
      }
      case DeclKind::Activation: {
        const auto& a = b.activations.at(name);
        std::vector<std::string> items;
        for (const auto& [from, to] : a.mapping)
          items.push_back(a.space->name_of(from) + " -> " + a.space->name_of(to));
        os << "activation " << name << " over " << a.space->name() << ": "
           << join(items, ", ") << '\n';
        break;
      }
      case DeclKind::Experts:
        os << "experts " << name << ": " << join(b.experts.at(name), ", ") << '\n';
        break;
    }
  }
  return os.str();
}

namespace {

// Name-level fingerprints: equal fingerprints mean equal content, whatever
// space objects the terms belong to.
std::vector<std::string> names_of(const LingMatrix& m) {
  std::vector<std::string> out{m.space()->name(), std::to_string(m.rows()),
                               std::to_string(m.cols())};
  for (auto& n : m.names()) out.push_back(std::move(n));
  return out;
}

std::vector<std::string> names_of(const ConceptGraph& g) {
  std::vector<std::string> out{g.space()->name(), g.directed() ? "directed" : "undirected"};
  out.insert(out.end(), g.concepts().begin(), g.concepts().end());
  out.push_back("|");
  for (const auto& e : g.edges()) {
    out.push_back(std::to_string(e.from));
    out.push_back(std::to_string(e.to));
    out.push_back(g.space()->name_of(e.label));
  }
  return out;
}

std::vector<std::string> names_of(const MetricTable& m) {
  std::vector<std::string> out{m.source()->name(), m.distance_space()->name(),
                               m.partial() ? "partial" : "total"};
  for (const auto& e : m.declared()) {
    out.push_back(m.source()->name_of(e.a));
    out.push_back(m.source()->name_of(e.b));
    out.push_back(m.distance_space()->name_of(e.distance));
  }
  return out;
}

std::vector<std::string> names_of(const LingPolynomial& p) {
  std::vector<std::string> out{p.space()->name(), p.shape().scalar ? "scalar" : "matrix",
                               std::to_string(p.shape().rows),
                               std::to_string(p.shape().cols)};
  for (const auto& [e, c] : p.coefficients()) {
    out.push_back("x^" + std::to_string(e));
    for (auto& n : names_of(c)) out.push_back(std::move(n));
  }
  return out;
}

std::vector<std::string> names_of(const StateVector& s) { return names_of(s.values); }

std::vector<std::string> names_of(const FlcmDecl& d) {
  auto out = names_of(d.model.matrix);
  out.insert(out.end(), d.model.concepts.begin(), d.model.concepts.end());
  out.push_back(to_string(d.model.pair));
  out.push_back(d.matrix_ref.value_or("<inline>"));
  return out;
}

std::vector<std::string> names_of(const FlrmDecl& d) {
  auto out = names_of(d.model.matrix);
  out.insert(out.end(), d.model.domain.begin(), d.model.domain.end());
  out.push_back("|");
  out.insert(out.end(), d.model.range.begin(), d.model.range.end());
  out.push_back(to_string(d.model.pair));
  out.push_back(d.matrix_ref.value_or("<inline>"));
  return out;
}

std::vector<std::string> names_of(const RelationDecl& r) {
  std::vector<std::string> out{r.space->name()};
  out.insert(out.end(), r.relation.left().begin(), r.relation.left().end());
  out.push_back("|");
  out.insert(out.end(), r.relation.right().begin(), r.relation.right().end());
  for (const auto& l : r.relation.links()) {
    out.push_back(std::to_string(l.left));
    out.push_back(std::to_string(l.right));
    out.push_back(r.space->name_of(l.membership));
  }
  return out;
}

std::vector<std::string> names_of(const ActivationDecl& a) {
  std::vector<std::string> out{a.space->name()};
  for (const auto& [from, to] : a.mapping) {
    out.push_back(a.space->name_of(from));
    out.push_back(a.space->name_of(to));
  }
  return out;
}

template <class Map>
bool same_entries(const Map& a, const Map& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [name, v] : a) {
    auto it = b.find(name);
    if (it == b.end() || names_of(v) != names_of(it->second)) return false;
  }
  return true;
}

}  // namespace

bool equivalent(const ModelBundle& a, const ModelBundle& b) {
  if (a.order != b.order || a.experts != b.experts) return false;
  if (a.spaces.size() != b.spaces.size()) return false;
  for (const auto& [name, s] : a.spaces) {
    auto it = b.spaces.find(name);
    if (it == b.spaces.end() || s->decl() != it->second->decl()) return false;
  }
  return same_entries(a.metrics, b.metrics) && same_entries(a.matrices, b.matrices) &&
         same_entries(a.graphs, b.graphs) && same_entries(a.polynomials, b.polynomials) &&
         same_entries(a.states, b.states) && same_entries(a.flcm_models, b.flcm_models) &&
         same_entries(a.flrm_models, b.flrm_models) &&
         same_entries(a.relations, b.relations) &&
         same_entries(a.activations, b.activations);
}

}  // namespace flm
