#include "flm/inference.hpp"

#include <set>

namespace flm {

std::string_view to_string(PatternKind kind) {
  return kind == PatternKind::FixedPoint ? "fixed-point" : "limit-cycle";
}

void FLCMModel::validate() const {
  if (matrix.rows() != matrix.cols())
    throw Error(ErrorCode::ShapeMismatch, "cognitive map matrix must be square");
  if (concepts.size() != matrix.rows())
    throw Error(ErrorCode::ShapeMismatch,
                std::to_string(concepts.size()) + " concepts for a " +
                    std::to_string(matrix.rows()) + "x" + std::to_string(matrix.cols()) +
                    " matrix");
  const auto& s = *matrix.space();
  for (std::size_t i = 0; i < matrix.rows(); ++i)
    if (!s.is_zero(matrix(i, i)))
      throw Error(ErrorCode::InvalidModel,
                  "cognitive map diagonal must be zero (concept '" + concepts[i] + "')");
}

void FLRMModel::validate() const {
  if (domain.size() != matrix.rows() || range.size() != matrix.cols())
    throw Error(ErrorCode::ShapeMismatch,
                "relational map is " + std::to_string(matrix.rows()) + "x" +
                    std::to_string(matrix.cols()) + " but declares " +
                    std::to_string(domain.size()) + " domain and " +
                    std::to_string(range.size()) + " range concepts");
}

StateVector StateVector::initial(LingMatrix values) {
  if (values.rows() != 1)
    throw Error(ErrorCode::ShapeMismatch, "state vectors are 1 x n");
  std::vector<bool> mask(values.cols());
  const auto& s = *values.space();
  for (std::size_t j = 0; j < values.cols(); ++j) mask[j] = !s.is_zero(values(0, j));
  return StateVector{std::move(values), std::move(mask)};
}

LingMatrix StateVector::clamp(const LingMatrix& raw) const {
  if (raw.rows() != 1 || raw.cols() != values.cols())
    throw Error(ErrorCode::ShapeMismatch, "state length does not match the clamp mask");
  LingMatrix out = raw;
  for (std::size_t j = 0; j < clamp_mask.size(); ++j)
    if (clamp_mask[j]) out.set(0, j, values(0, j));
  return out;
}

LingMatrix flcm_step(const FLCMModel& model, const LingMatrix& state,
                     const StateVector& initial) {
  if (state.rows() != 1 || state.cols() != model.matrix.rows())
    throw Error(ErrorCode::ShapeMismatch,
                "state of length " + std::to_string(state.cols()) + " for " +
                    std::to_string(model.matrix.rows()) + " concepts");
  return initial.clamp(compose(state, model.matrix, model.pair));
}

namespace {

// Shared bookkeeping of both engines: record `next`, and report whether it
// closes a fixed point or a cycle.
bool close_pattern(std::vector<LingMatrix>& trace, const LingMatrix& next,
                   HiddenPattern& out) {
  for (std::size_t j = 0; j < trace.size(); ++j) {
    if (trace[j] != next) continue;
    const std::size_t last = trace.size() - 1;
    out.kind = j == last ? PatternKind::FixedPoint : PatternKind::LimitCycle;
    out.cycle.assign(trace.begin() + static_cast<std::ptrdiff_t>(j), trace.end());
    out.iterations = trace.size();
    trace.push_back(next);
    out.trace = trace;
    return true;
  }
  trace.push_back(next);
  return false;
}

[[noreturn]] void cap_exceeded(std::size_t cap) {
  throw Error(ErrorCode::IterationCapExceeded,
              "no repetition within " + std::to_string(cap) + " iterations");
}

}  // namespace

HiddenPattern flcm_run(const FLCMModel& model, const StateVector& initial,
                       std::size_t max_iters) {
  model.validate();
  if (max_iters == 0) cap_exceeded(0);
  std::vector<LingMatrix> trace{initial.values};
  HiddenPattern out;
  for (std::size_t k = 0; k < max_iters; ++k) {
    LingMatrix next = flcm_step(model, trace.back(), initial);
    if (close_pattern(trace, next, out)) return out;
  }
  cap_exceeded(max_iters);
}

FLRMResult flrm_run(const FLRMModel& model, const StateVector& initial, Side side,
                    std::size_t max_iters) {
  model.validate();
  if (max_iters == 0) cap_exceeded(0);
  const LingMatrix forward = side == Side::Domain ? model.matrix : transpose(model.matrix);
  const LingMatrix backward = transpose(forward);
  if (initial.size() != forward.rows())
    throw Error(ErrorCode::ShapeMismatch,
                "initial state of length " + std::to_string(initial.size()) +
                    " does not match the " +
                    (side == Side::Domain ? std::string("domain") : std::string("range")) +
                    " side");

  // `own` is the initiating side, `other` the opposite one. The opposite
  // state is a function of the own state, so a repeated own state is a
  // repeated pair.
  std::vector<LingMatrix> own{initial.values};
  std::vector<LingMatrix> other{compose(initial.values, forward, model.pair)};
  HiddenPattern own_pattern;
  for (std::size_t k = 0; k < max_iters; ++k) {
    LingMatrix next = initial.clamp(compose(other.back(), backward, model.pair));
    LingMatrix next_other = compose(next, forward, model.pair);
    if (close_pattern(own, next, own_pattern)) {
      other.push_back(next_other);
      HiddenPattern other_pattern;
      other_pattern.kind = own_pattern.kind;
      other_pattern.iterations = own_pattern.iterations;
      other_pattern.trace = other;
      const std::size_t start = own.size() - 1 - own_pattern.cycle.size();
      other_pattern.cycle.assign(other.begin() + static_cast<std::ptrdiff_t>(start),
                                 other.end() - 1);
      if (side == Side::Domain) return {own_pattern, other_pattern};
      return {other_pattern, own_pattern};
    }
    other.push_back(next_other);
  }
  cap_exceeded(max_iters);
}

LingMatrix flre_compose(const LingMatrix& p, const LingMatrix& q, OperatorPair pair) {
  return compose(p, q, pair);
}

BipartiteRelation::BipartiteRelation(std::vector<std::string> left,
                                     std::vector<std::string> right,
                                     std::vector<Link> links)
    : left_(std::move(left)), right_(std::move(right)), links_(std::move(links)) {
  for (const auto& l : links_)
    if (l.left >= left_.size() || l.right >= right_.size())
      throw Error(ErrorCode::UnknownLabel, "link endpoint out of range");
}

BipartiteRelation BipartiteRelation::from_labels(
    std::vector<std::string> left, std::vector<std::string> right,
    const std::vector<std::tuple<std::string, std::string, Term>>& links) {
  auto index_of = [](const std::vector<std::string>& labels, const std::string& l) {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == l) return i;
    throw Error(ErrorCode::UnknownLabel, "unknown label '" + l + "'");
  };
  std::vector<Link> out;
  for (const auto& [a, b, m] : links)
    out.push_back({index_of(left, a), index_of(right, b), m});
  return BipartiteRelation(std::move(left), std::move(right), std::move(out));
}

LingMatrix relation_to_matrix(const BipartiteRelation& r, const SpacePtr& space) {
  LingMatrix m(space, r.left().size(), r.right().size());
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& l : r.links()) {
    if (!seen.emplace(l.left, l.right).second)
      throw Error(ErrorCode::DuplicateLink, "two memberships for ('" + r.left()[l.left] +
                                                "', '" + r.right()[l.right] + "')");
    if (space->is_zero(l.membership))
      throw Error(ErrorCode::InvalidModel, "link ('" + r.left()[l.left] + "', '" +
                                               r.right()[l.right] +
                                               "') has a zero membership");
    m.set(l.left, l.right, l.membership);
  }
  return m;
}

BipartiteRelation matrix_to_relation(const LingMatrix& m, std::vector<std::string> left,
                                     std::vector<std::string> right) {
  if (left.size() != m.rows() || right.size() != m.cols())
    throw Error(ErrorCode::ShapeMismatch, "labels do not match the membership matrix");
  std::vector<Link> links;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m.space()->is_zero(m(i, j))) links.push_back({i, j, m(i, j)});
  return BipartiteRelation(std::move(left), std::move(right), std::move(links));
}

LingMatrix feedforward_eval(const std::vector<LingMatrix>& layers, const LingMatrix& input,
                            OperatorPair pair,
                            const std::vector<std::optional<Activation>>& activations) {
  if (!activations.empty() && activations.size() != layers.size())
    throw Error(ErrorCode::ShapeMismatch, "one activation slot per layer is required");
  LingMatrix signal = input;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    signal = compose(signal, layers[l], pair);
    if (activations.empty() || !activations[l]) continue;
    const auto& s = *signal.space();
    for (std::size_t i = 0; i < signal.rows(); ++i) {
      for (std::size_t j = 0; j < signal.cols(); ++j) {
        Term mapped = (*activations[l])(signal(i, j));
        if (!s.contains(mapped))
          throw Error(ErrorCode::ForeignActivation,
                      "activation of layer " + std::to_string(l + 1) +
                          " left space '" + s.name() + "'");
        signal.set(i, j, mapped);
      }
    }
  }
  return signal;
}

}  // namespace flm
