#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "flm/lingmatrix.hpp"

namespace flm {

inline constexpr std::size_t kDefaultMaxIters = 1000;

/// Cognitive map: square zero-diagonal matrix over the concepts.
struct FLCMModel {
  std::vector<std::string> concepts;
  LingMatrix matrix;
  OperatorPair pair = OperatorPair::max_min();

  /// Checks shape, concept count and the zero diagonal.
  void validate() const;
};

/// Relational map: domain concepts index rows, range concepts columns.
struct FLRMModel {
  std::vector<std::string> domain;
  std::vector<std::string> range;
  LingMatrix matrix;
  OperatorPair pair = OperatorPair::max_min();

  void validate() const;
};

/// A 1 x n state with the coordinates that stay fixed at their initial value.
struct StateVector {
  LingMatrix values;
  std::vector<bool> clamp_mask;

  /// Clamps exactly the nonzero coordinates of `values`.
  static StateVector initial(LingMatrix values);
  std::size_t size() const noexcept { return values.cols(); }
  /// Copy of `raw` with every clamped coordinate restored.
  LingMatrix clamp(const LingMatrix& raw) const;
};

enum class PatternKind { FixedPoint, LimitCycle };

std::string_view to_string(PatternKind kind);

struct HiddenPattern {
  PatternKind kind = PatternKind::FixedPoint;
  /// Every visited state from the initial one up to and including the first
  /// repeated state.
  std::vector<LingMatrix> trace;
  /// The fixed state, or the repeating segment of a limit cycle.
  std::vector<LingMatrix> cycle;
  /// Number of update steps taken.
  std::size_t iterations = 0;
};

LingMatrix flcm_step(const FLCMModel& model, const LingMatrix& state,
                     const StateVector& initial);
HiddenPattern flcm_run(const FLCMModel& model, const StateVector& initial,
                       std::size_t max_iters = kDefaultMaxIters);

enum class Side { Domain, Range };

struct FLRMResult {
  HiddenPattern domain;
  HiddenPattern range;
};

/// Alternates between the two sides; clamping applies on the initiating
/// side only. Stops on the first repeated (domain, range) pair.
FLRMResult flrm_run(const FLRMModel& model, const StateVector& initial, Side side,
                    std::size_t max_iters = kDefaultMaxIters);

/// P o Q = R.
LingMatrix flre_compose(const LingMatrix& p, const LingMatrix& q, OperatorPair pair);

struct Link {
  std::size_t left = 0;
  std::size_t right = 0;
  Term membership;
};

/// Sagittal relation between two label sets with term-valued memberships.
class BipartiteRelation {
 public:
  BipartiteRelation(std::vector<std::string> left, std::vector<std::string> right,
                    std::vector<Link> links);

  /// Builds links from labels; throws UnknownLabel for an undeclared one.
  static BipartiteRelation from_labels(
      std::vector<std::string> left, std::vector<std::string> right,
      const std::vector<std::tuple<std::string, std::string, Term>>& links);

  const std::vector<std::string>& left() const noexcept { return left_; }
  const std::vector<std::string>& right() const noexcept { return right_; }
  const std::vector<Link>& links() const noexcept { return links_; }

 private:
  std::vector<std::string> left_;
  std::vector<std::string> right_;
  std::vector<Link> links_;
};

/// |left| x |right| membership matrix; absent links are zero. Throws
/// DuplicateLink for a repeated pair and ForeignTerm for memberships outside
/// `space`.
LingMatrix relation_to_matrix(const BipartiteRelation& r, const SpacePtr& space);
BipartiteRelation matrix_to_relation(const LingMatrix& m, std::vector<std::string> left,
                                     std::vector<std::string> right);

/// Term-to-term map applied after a layer.
using Activation = std::function<Term(Term)>;

/// Folds compose over the layers left to right, applying the layer's
/// activation (when present) to every output entry.
LingMatrix feedforward_eval(const std::vector<LingMatrix>& layers, const LingMatrix& input,
                            OperatorPair pair,
                            const std::vector<std::optional<Activation>>& activations = {});

}  // namespace flm
