#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flm/space.hpp"

namespace flm {

enum class Op { Min, Max };

/// Outer reduction and inner combination of a composition.
struct OperatorPair {
  Op outer = Op::Max;
  Op inner = Op::Min;

  static constexpr OperatorPair min_min() { return {Op::Min, Op::Min}; }
  static constexpr OperatorPair min_max() { return {Op::Min, Op::Max}; }
  static constexpr OperatorPair max_min() { return {Op::Max, Op::Min}; }
  static constexpr OperatorPair max_max() { return {Op::Max, Op::Max}; }

  friend bool operator==(const OperatorPair&, const OperatorPair&) = default;
};

inline constexpr OperatorPair kAllPairs[] = {
    OperatorPair::min_min(), OperatorPair::max_min(), OperatorPair::min_max(),
    OperatorPair::max_max()};

/// "minmin", "maxmin", "minmax" or "maxmax".
std::string to_string(OperatorPair pair);
std::optional<OperatorPair> parse_pair(std::string_view text);

/// Dense row-major grid of terms drawn from a single space.
class LingMatrix {
 public:
  /// All-zero matrix.
  LingMatrix(SpacePtr space, std::size_t rows, std::size_t cols);
  LingMatrix(SpacePtr space, std::size_t rows, std::size_t cols,
             std::vector<Term> data);

  static LingMatrix from_names(SpacePtr space,
                               const std::vector<std::vector<std::string>>& rows);
  static LingMatrix row(SpacePtr space, const std::vector<std::string>& names);
  static LingMatrix column(SpacePtr space, const std::vector<std::string>& names);

  const SpacePtr& space() const noexcept { return space_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const std::vector<Term>& data() const noexcept { return data_; }

  Term operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Term at(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, Term t);

  bool is_zero() const;
  std::vector<std::string> names() const;
  std::string name_at(std::size_t r, std::size_t c) const;

  /// Same space object, shape and entries.
  friend bool operator==(const LingMatrix& a, const LingMatrix& b);

 private:
  SpacePtr space_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Term> data_;
};

LingMatrix elementwise(Op op, const LingMatrix& a, const LingMatrix& b);
LingMatrix transpose(const LingMatrix& a);

/// C(i,j) = outer over t of inner(A(i,t), B(t,j)), taken over every inner
/// index including those where an operand is zero. Any undefined join aborts
/// the whole composition with the offending coordinates.
LingMatrix compose(const LingMatrix& a, const LingMatrix& b, OperatorPair pair);

struct ZeroDivisor {
  LingMatrix partner;
  /// False when `a` had no zero entry, so only the all-zero partner works.
  bool exists;
};

/// Builds a matrix that is nonzero exactly where `a` is zero, so that the
/// elementwise min of the two is all-zero. The nonzero entries use the
/// space's greatest term when there is one, else its first maximal term.
ZeroDivisor make_zero_divisor(const LingMatrix& a);

/// Space-padded grid, one row per line, trailing blanks trimmed.
std::string format_grid(const LingMatrix& a);

}  // namespace flm
