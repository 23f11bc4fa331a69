#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "flm/error.hpp"

namespace flm {

/// Handle to a term of one particular space. Two terms are equal iff they
/// come from the same space and name the same canonical symbol. The
/// defaulted ordering is only for use as a container key; semantic order
/// lives in LinguisticSpace::compare.
struct Term {
  std::uint32_t space = 0;
  std::uint32_t index = 0;

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

enum class OrderKind { Chain, Poset, SignedChain };
enum class Sign { Unsigned, Positive, Negative };
enum class Ordering { Less, Equal, Greater, Incomparable };
enum class Comparability { TypeOne, TypeTwo, TypeThree };

std::string_view to_string(OrderKind kind);
std::string_view to_string(Ordering ord);
std::string_view to_string(Comparability c);

inline constexpr std::string_view kZeroName = "0";

/// Declarative description of a space, kept verbatim so that a space can be
/// written back out exactly as it was declared.
///
/// Chain:       `chain` lists every term in ascending order, starting at "0".
/// SignedChain: `chain` lists magnitudes in ascending order; the terms are
///              "-m" and "+m" for each magnitude plus "0" in the middle.
/// Poset:       `terms` lists the nonzero terms, `covers` the (lower, upper)
///              relations. "0" is implicitly below everything and a declared
///              `greatest` is implicitly above everything.
struct SpaceDecl {
  std::string name;
  OrderKind kind = OrderKind::Chain;
  std::vector<std::string> chain;
  std::vector<std::string> terms;
  std::vector<std::pair<std::string, std::string>> covers;
  std::optional<std::string> greatest;
  std::vector<std::pair<std::string, std::string>> aliases;  // alias, canonical
  std::vector<std::string> overlap_terms;

  friend bool operator==(const SpaceDecl&, const SpaceDecl&) = default;
};

struct ComparabilityClass {
  Comparability kind = Comparability::TypeOne;
  std::vector<std::vector<Term>> blocks;  // TypeThree only
};

class LinguisticSpace;
using SpacePtr = std::shared_ptr<const LinguisticSpace>;

/// A finite set of linguistic terms with a designated zero and an order.
/// Immutable once built; all order queries are table lookups.
class LinguisticSpace {
 public:
  /// Validates the declaration and precomputes the order closure together
  /// with the meet/join tables. Throws Error(InvalidSpace) on a malformed
  /// declaration.
  static SpacePtr build(SpaceDecl decl);

  static SpacePtr chain(std::string name, std::vector<std::string> ascending);
  static SpacePtr signed_chain(std::string name,
                               std::vector<std::string> magnitudes);

  const SpaceDecl& decl() const noexcept { return decl_; }
  const std::string& name() const noexcept { return decl_.name; }
  OrderKind kind() const noexcept { return decl_.kind; }
  std::uint32_t uid() const noexcept { return uid_; }
  std::size_t size() const noexcept { return names_.size(); }

  Term zero() const noexcept { return Term{uid_, 0}; }
  Term at(std::size_t index) const;
  std::vector<Term> terms() const;

  /// Resolves a term or alias name. In signed spaces a bare magnitude name
  /// resolves to its positive term.
  std::optional<Term> find(std::string_view name) const;
  Term term(std::string_view name) const;  // throws UnknownTerm
  const std::string& name_of(Term t) const;

  bool contains(Term t) const noexcept {
    return t.space == uid_ && t.index < names_.size();
  }
  bool is_zero(Term t) const;
  Sign sign(Term t) const;
  bool is_overlap(Term t) const;
  std::optional<Term> greatest() const;

  Ordering compare(Term a, Term b) const;
  bool leq(Term a, Term b) const;
  /// Greatest lower bound, or zero when none exists.
  Term meet(Term a, Term b) const;
  /// Least upper bound, else the declared greatest; throws NoJoin otherwise.
  Term join(Term a, Term b) const;
  std::optional<Term> try_join(Term a, Term b) const;
  /// Sign flip in a signed chain; throws UnsignedSpace elsewhere.
  Term negate(Term a) const;

  bool is_chain_lattice() const;
  bool is_lattice() const;
  /// Blocks must partition the nonzero terms; each block must be a chain of
  /// at least two nonzero terms, else InvalidPartition.
  ComparabilityClass classify_comparability(
      const std::optional<std::vector<std::vector<Term>>>& partition =
          std::nullopt) const;

  /// Terms that no other term lies above.
  std::vector<Term> maximal_terms() const;

 private:
  LinguisticSpace() = default;
  void check(Term t) const;
  std::size_t cell(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::size_t>(a) * names_.size() + b;
  }

  SpaceDecl decl_;
  std::uint32_t uid_ = 0;
  std::vector<std::string> names_;
  std::vector<Sign> signs_;
  std::vector<bool> overlap_;
  std::unordered_map<std::string, std::uint32_t> lookup_;
  std::vector<bool> leq_;
  std::vector<std::uint32_t> meet_;
  std::vector<std::int64_t> join_;  // -1 where no join exists
  std::optional<std::uint32_t> greatest_;
};

}  // namespace flm

template <>
struct std::hash<flm::Term> {
  std::size_t operator()(const flm::Term& t) const noexcept {
    return (static_cast<std::size_t>(t.space) << 32) ^ t.index;
  }
};
