#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include "flm/lingmatrix.hpp"

namespace flm {

/// Largest exponent with a nonzero coefficient; nullopt stands for the
/// degree of the zero polynomial (minus infinity). std::optional's ordering
/// already places nullopt below every engaged value.
using Degree = std::optional<std::size_t>;

std::string to_string(Degree d);

struct CoeffShape {
  bool scalar = true;
  std::size_t rows = 1;
  std::size_t cols = 1;

  friend bool operator==(const CoeffShape&, const CoeffShape&) = default;
};

/// Sparse polynomial with linguistic coefficients. Scalar coefficients are
/// stored as 1x1 matrices. Zero coefficients are never stored.
class LingPolynomial {
 public:
  explicit LingPolynomial(SpacePtr space, CoeffShape shape = {});

  static LingPolynomial scalar(SpacePtr space, const std::map<std::size_t, Term>& coeffs);
  static LingPolynomial matrix(SpacePtr space, CoeffShape shape,
                               const std::map<std::size_t, LingMatrix>& coeffs);

  const SpacePtr& space() const noexcept { return space_; }
  const CoeffShape& shape() const noexcept { return shape_; }
  const std::map<std::size_t, LingMatrix>& coefficients() const noexcept {
    return coeffs_;
  }

  /// Throws on a shape or space mismatch; a zero coefficient erases.
  void set(std::size_t exponent, const LingMatrix& coeff);
  void set(std::size_t exponent, Term coeff);

  LingMatrix coefficient(std::size_t exponent) const;
  Term scalar_coefficient(std::size_t exponent) const;
  Degree degree() const;

  friend bool operator==(const LingPolynomial&, const LingPolynomial&) = default;

 private:
  SpacePtr space_;
  CoeffShape shape_;
  std::map<std::size_t, LingMatrix> coeffs_;
};

/// Coefficientwise meet/join; a missing coefficient counts as zero.
LingPolynomial poly_op(Op op, const LingPolynomial& p, const LingPolynomial& q);

/// "good + very_bad x^1 + fair x^2"; "0" for the zero polynomial.
std::string format_poly(const LingPolynomial& p);

}  // namespace flm
