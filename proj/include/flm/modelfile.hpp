#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flm/inference.hpp"
#include "flm/lingmatrix.hpp"
#include "flm/lingpoly.hpp"
#include "flm/lingraph.hpp"
#include "flm/metric.hpp"
#include "flm/space.hpp"

namespace flm {

struct SourceLocation {
  std::size_t line = 1;
  std::size_t column = 1;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  SourceLocation location;
  std::string message;
  std::string code;
};

/// "LINE:COL: error[code]: message"
std::string format_diagnostic(const Diagnostic& d);

struct FlcmDecl {
  FLCMModel model;
  std::optional<std::string> matrix_ref;  // unset when the matrix was inline
};

struct FlrmDecl {
  FLRMModel model;
  std::optional<std::string> matrix_ref;
};

struct RelationDecl {
  SpacePtr space;
  BipartiteRelation relation;
};

/// Term rewrite applied after a network layer; unlisted terms map to
/// themselves.
struct ActivationDecl {
  SpacePtr space;
  std::vector<std::pair<Term, Term>> mapping;

  Activation as_function() const;
};

enum class DeclKind {
  Space,
  Metric,
  Matrix,
  Graph,
  Poly,
  State,
  Flcm,
  Flrm,
  Relation,
  Activation,
  Experts,
};

std::string_view to_string(DeclKind kind);

/// Everything declared in one model file, keyed by name per kind. `order`
/// remembers declaration order so the bundle can be written back out with
/// every reference after its target.
struct ModelBundle {
  std::map<std::string, SpacePtr> spaces;
  std::map<std::string, MetricTable> metrics;
  std::map<std::string, LingMatrix> matrices;
  std::map<std::string, ConceptGraph> graphs;
  std::map<std::string, LingPolynomial> polynomials;
  std::map<std::string, StateVector> states;
  std::map<std::string, FlcmDecl> flcm_models;
  std::map<std::string, FlrmDecl> flrm_models;
  std::map<std::string, RelationDecl> relations;
  std::map<std::string, ActivationDecl> activations;
  std::map<std::string, std::vector<std::string>> experts;
  std::vector<std::pair<DeclKind, std::string>> order;

  ExpertCollection expert_collection(const std::string& name) const;
  /// "1 space, 2 matrices, 1 flcm model"; kinds with no entries are skipped.
  std::string summary() const;
};

struct ParseResult {
  std::optional<ModelBundle> bundle;  // set iff no error diagnostics
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return bundle.has_value(); }
};

ParseResult parse_model_file(std::string_view text);

/// Canonical text form; parsing it yields an equivalent bundle.
std::string serialize(const ModelBundle& bundle);

/// Structural equality by names: two bundles parsed from different texts
/// never share space objects, so terms are compared through their names.
bool equivalent(const ModelBundle& a, const ModelBundle& b);

/// Parses a state literal such as "(often, 0, some)" against a space.
LingMatrix parse_row_literal(const SpacePtr& space, std::string_view text);

}  // namespace flm
