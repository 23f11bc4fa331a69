#include "flm/space.hpp"

#include <algorithm>
#include <atomic>
#include <set>

namespace flm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ForeignTerm: return "foreign-term";
    case ErrorCode::UnknownTerm: return "unknown-term";
    case ErrorCode::NoJoin: return "no-join";
    case ErrorCode::UnsignedSpace: return "unsigned-space";
    case ErrorCode::InvalidPartition: return "invalid-partition";
    case ErrorCode::InvalidSpace: return "invalid-space";
    case ErrorCode::MissingPair: return "missing-pair";
    case ErrorCode::ShapeMismatch: return "shape-mismatch";
    case ErrorCode::SpaceMismatch: return "space-mismatch";
    case ErrorCode::DuplicateEdge: return "duplicate-edge";
    case ErrorCode::InvalidGraph: return "invalid-graph";
    case ErrorCode::EmptyCollection: return "empty-collection";
    case ErrorCode::IterationCapExceeded: return "iteration-cap-exceeded";
    case ErrorCode::UnknownLabel: return "unknown-label";
    case ErrorCode::DuplicateLink: return "duplicate-link";
    case ErrorCode::InvalidModel: return "invalid-model";
    case ErrorCode::InvalidPolynomial: return "invalid-polynomial";
    case ErrorCode::ForeignActivation: return "foreign-activation";
  }
  return "unknown";
}

std::string_view to_string(OrderKind kind) {
  switch (kind) {
    case OrderKind::Chain: return "chain";
    case OrderKind::Poset: return "poset";
    case OrderKind::SignedChain: return "signed-chain";
  }
  return "?";
}

std::string_view to_string(Ordering ord) {
  switch (ord) {
    case Ordering::Less: return "less";
    case Ordering::Equal: return "equal";
    case Ordering::Greater: return "greater";
    case Ordering::Incomparable: return "incomparable";
  }
  return "?";
}

std::string_view to_string(Comparability c) {
  switch (c) {
    case Comparability::TypeOne: return "type-one";
    case Comparability::TypeTwo: return "type-two";
    case Comparability::TypeThree: return "type-three";
  }
  return "?";
}

namespace {

std::atomic<std::uint32_t> next_uid{1};

[[noreturn]] void invalid(const std::string& space, const std::string& what) {
  throw Error(ErrorCode::InvalidSpace, "space '" + space + "': " + what);
}

void check_name(const std::string& space, const std::string& name) {
  if (name.empty()) invalid(space, "empty term name");
  if (name == kZeroName) invalid(space, "'0' is reserved for the zero term");
}

}  // namespace

SpacePtr LinguisticSpace::chain(std::string name,
                                std::vector<std::string> ascending) {
  SpaceDecl d;
  d.name = std::move(name);
  d.kind = OrderKind::Chain;
  d.chain = std::move(ascending);
  return build(std::move(d));
}

SpacePtr LinguisticSpace::signed_chain(std::string name,
                                       std::vector<std::string> magnitudes) {
  SpaceDecl d;
  d.name = std::move(name);
  d.kind = OrderKind::SignedChain;
  d.chain = std::move(magnitudes);
  return build(std::move(d));
}

SpacePtr LinguisticSpace::build(SpaceDecl decl) {
  std::shared_ptr<LinguisticSpace> s(new LinguisticSpace());
  const std::string& sname = decl.name;
  if (sname.empty()) invalid(sname, "empty space name");

  // Rank is used for the two totally ordered kinds; the poset kind fills the
  // closure from its cover relation instead.
  std::vector<std::int64_t> rank;

  switch (decl.kind) {
    case OrderKind::Chain: {
      if (decl.chain.empty() || decl.chain.front() != kZeroName)
        invalid(sname, "a chain must start with '0'");
      for (std::size_t i = 0; i < decl.chain.size(); ++i) {
        if (i > 0) check_name(sname, decl.chain[i]);
        s->names_.push_back(decl.chain[i]);
        s->signs_.push_back(Sign::Unsigned);
        rank.push_back(static_cast<std::int64_t>(i));
      }
      if (!decl.terms.empty() || !decl.covers.empty() || decl.greatest)
        invalid(sname, "chains take neither covers nor a greatest term");
      break;
    }
    case OrderKind::SignedChain: {
      s->names_.push_back(std::string(kZeroName));
      s->signs_.push_back(Sign::Unsigned);
      rank.push_back(0);
      for (const auto& m : decl.chain) {
        check_name(sname, m);
        if (m.front() == '+' || m.front() == '-')
          invalid(sname, "magnitude '" + m + "' must not carry a sign");
      }
      const auto k = static_cast<std::int64_t>(decl.chain.size());
      for (std::int64_t i = 0; i < k; ++i) {
        s->names_.push_back("+" + decl.chain[static_cast<std::size_t>(i)]);
        s->signs_.push_back(Sign::Positive);
        rank.push_back(i + 1);
      }
      for (std::int64_t i = 0; i < k; ++i) {
        s->names_.push_back("-" + decl.chain[static_cast<std::size_t>(i)]);
        s->signs_.push_back(Sign::Negative);
        rank.push_back(-(i + 1));
      }
      if (!decl.terms.empty() || !decl.covers.empty() || decl.greatest)
        invalid(sname, "signed chains take neither covers nor a greatest term");
      break;
    }
    case OrderKind::Poset: {
      s->names_.push_back(std::string(kZeroName));
      s->signs_.push_back(Sign::Unsigned);
      for (const auto& t : decl.terms) {
        check_name(sname, t);
        s->names_.push_back(t);
        s->signs_.push_back(Sign::Unsigned);
      }
      if (!decl.chain.empty()) invalid(sname, "posets take covers, not a chain");
      break;
    }
  }

  for (std::uint32_t i = 0; i < s->names_.size(); ++i) {
    if (!s->lookup_.emplace(s->names_[i], i).second)
      invalid(sname, "duplicate term '" + s->names_[i] + "'");
  }
  if (s->names_.size() > 4096) invalid(sname, "too many terms");

  const std::size_t n = s->names_.size();
  s->leq_.assign(n * n, false);
  if (decl.kind == OrderKind::Poset) {
    for (std::size_t i = 0; i < n; ++i) {
      s->leq_[i * n + i] = true;
      s->leq_[0 * n + i] = true;
    }
    for (const auto& [lo, hi] : decl.covers) {
      auto a = s->lookup_.find(lo);
      auto b = s->lookup_.find(hi);
      if (a == s->lookup_.end() || b == s->lookup_.end())
        invalid(sname, "cover '" + lo + " < " + hi + "' names an undeclared term");
      if (a->second == b->second)
        invalid(sname, "cover '" + lo + " < " + hi + "' is reflexive");
      s->leq_[a->second * n + b->second] = true;
    }
    if (decl.greatest) {
      auto g = s->lookup_.find(*decl.greatest);
      if (g == s->lookup_.end() || g->second == 0)
        invalid(sname, "greatest term '" + *decl.greatest + "' is not a nonzero term");
      for (std::size_t i = 0; i < n; ++i) s->leq_[i * n + g->second] = true;
      s->greatest_ = g->second;
    }
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        if (s->leq_[i * n + k])
          for (std::size_t j = 0; j < n; ++j)
            if (s->leq_[k * n + j]) s->leq_[i * n + j] = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (s->leq_[i * n + j] && s->leq_[j * n + i])
          invalid(sname, "order has a cycle through '" + s->names_[i] +
                             "' and '" + s->names_[j] + "'");
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s->leq_[i * n + j] = rank[i] <= rank[j];
    // A chain's top element doubles as its greatest.
    auto top = std::max_element(rank.begin(), rank.end());
    if (n > 1) s->greatest_ = static_cast<std::uint32_t>(top - rank.begin());
  }

  // Meet: greatest common lower bound, else zero. Join: least common upper
  // bound, else the greatest term, else undefined.
  s->meet_.assign(n * n, 0);
  s->join_.assign(n * n, -1);
  std::vector<std::uint32_t> bounds;
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = 0; b < n; ++b) {
      bounds.clear();
      for (std::uint32_t c = 0; c < n; ++c)
        if (s->leq_[c * n + a] && s->leq_[c * n + b]) bounds.push_back(c);
      std::uint32_t glb = 0;
      for (auto c : bounds) {
        if (std::all_of(bounds.begin(), bounds.end(),
                        [&](std::uint32_t d) { return s->leq_[d * n + c]; })) {
          glb = c;
          break;
        }
      }
      s->meet_[a * n + b] = glb;

      bounds.clear();
      for (std::uint32_t c = 0; c < n; ++c)
        if (s->leq_[a * n + c] && s->leq_[b * n + c]) bounds.push_back(c);
      std::int64_t lub = -1;
      for (auto c : bounds) {
        if (std::all_of(bounds.begin(), bounds.end(),
                        [&](std::uint32_t d) { return s->leq_[c * n + d]; })) {
          lub = c;
          break;
        }
      }
      if (lub < 0 && s->greatest_) lub = *s->greatest_;
      s->join_[a * n + b] = lub;
    }
  }

  for (const auto& [alias, canonical] : decl.aliases) {
    if (alias.empty() || s->lookup_.count(alias))
      invalid(sname, "alias '" + alias + "' collides with a term");
    auto target = s->lookup_.find(canonical);
    if (target == s->lookup_.end())
      invalid(sname, "alias target '" + canonical + "' is not a term");
    s->lookup_.emplace(alias, target->second);
  }
  // Bare magnitudes name the positive term in signed spaces; aliases win.
  if (decl.kind == OrderKind::SignedChain) {
    for (std::size_t i = 0; i < decl.chain.size(); ++i)
      s->lookup_.emplace(decl.chain[i], static_cast<std::uint32_t>(i + 1));
  }

  s->overlap_.assign(n, false);
  for (const auto& o : decl.overlap_terms) {
    auto it = s->lookup_.find(o);
    if (it == s->lookup_.end())
      invalid(sname, "overlap term '" + o + "' is not a term");
    s->overlap_[it->second] = true;
  }

  s->decl_ = std::move(decl);
  s->uid_ = next_uid.fetch_add(1);
  return s;
}

void LinguisticSpace::check(Term t) const {
  if (!contains(t))
    throw Error(ErrorCode::ForeignTerm,
                "term does not belong to space '" + decl_.name + "'");
}

Term LinguisticSpace::at(std::size_t index) const {
  if (index >= names_.size())
    throw Error(ErrorCode::UnknownTerm, "term index out of range in space '" +
                                            decl_.name + "'");
  return Term{uid_, static_cast<std::uint32_t>(index)};
}

std::vector<Term> LinguisticSpace::terms() const {
  std::vector<Term> out;
  out.reserve(names_.size());
  for (std::uint32_t i = 0; i < names_.size(); ++i) out.push_back({uid_, i});
  return out;
}

std::optional<Term> LinguisticSpace::find(std::string_view name) const {
  auto it = lookup_.find(std::string(name));
  if (it == lookup_.end()) return std::nullopt;
  return Term{uid_, it->second};
}

Term LinguisticSpace::term(std::string_view name) const {
  if (auto t = find(name)) return *t;
  throw Error(ErrorCode::UnknownTerm, "unknown term '" + std::string(name) +
                                          "' in space '" + decl_.name + "'");
}

const std::string& LinguisticSpace::name_of(Term t) const {
  check(t);
  return names_[t.index];
}

bool LinguisticSpace::is_zero(Term t) const {
  check(t);
  return t.index == 0;
}

Sign LinguisticSpace::sign(Term t) const {
  check(t);
  return signs_[t.index];
}

bool LinguisticSpace::is_overlap(Term t) const {
  check(t);
  return overlap_[t.index];
}

std::optional<Term> LinguisticSpace::greatest() const {
  if (!greatest_) return std::nullopt;
  return Term{uid_, *greatest_};
}

bool LinguisticSpace::leq(Term a, Term b) const {
  check(a);
  check(b);
  return leq_[cell(a.index, b.index)];
}

Ordering LinguisticSpace::compare(Term a, Term b) const {
  check(a);
  check(b);
  const bool ab = leq_[cell(a.index, b.index)];
  const bool ba = leq_[cell(b.index, a.index)];
  if (ab && ba) return Ordering::Equal;
  if (ab) return Ordering::Less;
  if (ba) return Ordering::Greater;
  return Ordering::Incomparable;
}

Term LinguisticSpace::meet(Term a, Term b) const {
  check(a);
  check(b);
  return Term{uid_, meet_[cell(a.index, b.index)]};
}

std::optional<Term> LinguisticSpace::try_join(Term a, Term b) const {
  check(a);
  check(b);
  const auto j = join_[cell(a.index, b.index)];
  if (j < 0) return std::nullopt;
  return Term{uid_, static_cast<std::uint32_t>(j)};
}

Term LinguisticSpace::join(Term a, Term b) const {
  if (auto j = try_join(a, b)) return *j;
  throw Error(ErrorCode::NoJoin, "no join of '" + names_[a.index] + "' and '" +
                                     names_[b.index] + "' in space '" +
                                     decl_.name + "'");
}

Term LinguisticSpace::negate(Term a) const {
  check(a);
  if (decl_.kind != OrderKind::SignedChain)
    throw Error(ErrorCode::UnsignedSpace,
                "negation needs a signed space, '" + decl_.name + "' is not");
  if (a.index == 0) return a;
  const auto k = static_cast<std::uint32_t>(decl_.chain.size());
  return Term{uid_, a.index <= k ? a.index + k : a.index - k};
}

bool LinguisticSpace::is_chain_lattice() const {
  const std::size_t n = names_.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!leq_[i * n + j] && !leq_[j * n + i]) return false;
  return true;
}

bool LinguisticSpace::is_lattice() const {
  return std::none_of(join_.begin(), join_.end(),
                      [](std::int64_t j) { return j < 0; });
}

std::vector<Term> LinguisticSpace::maximal_terms() const {
  const std::size_t n = names_.size();
  std::vector<Term> out;
  for (std::uint32_t i = 0; i < n; ++i) {
    bool dominated = false;
    for (std::uint32_t j = 0; j < n && !dominated; ++j)
      dominated = j != i && leq_[i * n + j];
    if (!dominated) out.push_back({uid_, i});
  }
  return out;
}

ComparabilityClass LinguisticSpace::classify_comparability(
    const std::optional<std::vector<std::vector<Term>>>& partition) const {
  if (partition) {
    std::set<std::uint32_t> seen;
    for (const auto& block : *partition) {
      std::size_t nonzero = 0;
      for (auto t : block) {
        if (!contains(t))
          throw Error(ErrorCode::InvalidPartition,
                      "partition names a term outside space '" + decl_.name + "'");
        if (t.index == 0) continue;
        ++nonzero;
        if (!seen.insert(t.index).second)
          throw Error(ErrorCode::InvalidPartition,
                      "term '" + names_[t.index] + "' appears in two blocks");
      }
      if (nonzero < 2)
        throw Error(ErrorCode::InvalidPartition,
                    "every block needs at least two nonzero terms");
      for (std::size_t i = 0; i < block.size(); ++i)
        for (std::size_t j = i + 1; j < block.size(); ++j)
          if (compare(block[i], block[j]) == Ordering::Incomparable)
            throw Error(ErrorCode::InvalidPartition,
                        "block is not a chain: '" + names_[block[i].index] +
                            "' and '" + names_[block[j].index] +
                            "' are incomparable");
    }
    if (seen.size() + 1 != names_.size())
      throw Error(ErrorCode::InvalidPartition,
                  "blocks must cover every nonzero term");
  }
  if (is_chain_lattice()) return {Comparability::TypeOne, {}};
  if (partition) return {Comparability::TypeThree, *partition};
  return {Comparability::TypeTwo, {}};
}

}  // namespace flm
