#include "flm/lingpoly.hpp"

#include <set>

namespace flm {

std::string to_string(Degree d) { return d ? std::to_string(*d) : "-inf"; }

LingPolynomial::LingPolynomial(SpacePtr space, CoeffShape shape)
    : space_(std::move(space)), shape_(shape) {
  if (!space_) throw Error(ErrorCode::InvalidPolynomial, "polynomial without a space");
  if (shape_.scalar) shape_.rows = shape_.cols = 1;
  if (shape_.rows == 0 || shape_.cols == 0)
    throw Error(ErrorCode::ShapeMismatch, "coefficient shape must be nonempty");
}

LingPolynomial LingPolynomial::scalar(SpacePtr space,
                                      const std::map<std::size_t, Term>& coeffs) {
  LingPolynomial p(std::move(space));
  for (const auto& [e, t] : coeffs) p.set(e, t);
  return p;
}

LingPolynomial LingPolynomial::matrix(SpacePtr space, CoeffShape shape,
                                      const std::map<std::size_t, LingMatrix>& coeffs) {
  LingPolynomial p(std::move(space), shape);
  for (const auto& [e, m] : coeffs) p.set(e, m);
  return p;
}

void LingPolynomial::set(std::size_t exponent, const LingMatrix& coeff) {
  if (coeff.space() != space_)
    throw Error(ErrorCode::SpaceMismatch,
                "coefficient is not over space '" + space_->name() + "'");
  if (coeff.rows() != shape_.rows || coeff.cols() != shape_.cols)
    throw Error(ErrorCode::ShapeMismatch,
                "coefficient of x^" + std::to_string(exponent) + " has the wrong shape");
  if (coeff.is_zero())
    coeffs_.erase(exponent);
  else
    coeffs_.insert_or_assign(exponent, coeff);
}

void LingPolynomial::set(std::size_t exponent, Term coeff) {
  if (!shape_.scalar)
    throw Error(ErrorCode::ShapeMismatch, "scalar coefficient in a matrix polynomial");
  set(exponent, LingMatrix(space_, 1, 1, {coeff}));
}

LingMatrix LingPolynomial::coefficient(std::size_t exponent) const {
  auto it = coeffs_.find(exponent);
  if (it != coeffs_.end()) return it->second;
  return LingMatrix(space_, shape_.rows, shape_.cols);
}

Term LingPolynomial::scalar_coefficient(std::size_t exponent) const {
  if (!shape_.scalar)
    throw Error(ErrorCode::ShapeMismatch, "matrix polynomial has no scalar coefficients");
  return coefficient(exponent)(0, 0);
}

Degree LingPolynomial::degree() const {
  if (coeffs_.empty()) return std::nullopt;
  return coeffs_.rbegin()->first;
}

LingPolynomial poly_op(Op op, const LingPolynomial& p, const LingPolynomial& q) {
  if (p.space() != q.space())
    throw Error(ErrorCode::SpaceMismatch, "polynomials are over different spaces");
  if (p.shape() != q.shape())
    throw Error(ErrorCode::ShapeMismatch, "polynomials have different coefficient shapes");
  std::set<std::size_t> exponents;
  for (const auto& [e, c] : p.coefficients()) exponents.insert(e);
  for (const auto& [e, c] : q.coefficients()) exponents.insert(e);
  LingPolynomial out(p.space(), p.shape());
  for (auto e : exponents)
    out.set(e, elementwise(op, p.coefficient(e), q.coefficient(e)));
  return out;
}

namespace {

std::string format_coeff(const LingPolynomial& p, const LingMatrix& c) {
  if (p.shape().scalar) return c.name_at(0, 0);
  std::string s;
  if (c.rows() == 1) {
    s = "(";
    for (std::size_t j = 0; j < c.cols(); ++j) s += (j ? ", " : "") + c.name_at(0, j);
    return s + ")";
  }
  s = "[";
  for (std::size_t i = 0; i < c.rows(); ++i) {
    if (i) s += "; ";
    for (std::size_t j = 0; j < c.cols(); ++j) s += (j ? " " : "") + c.name_at(i, j);
  }
  return s + "]";
}

}  // namespace

std::string format_poly(const LingPolynomial& p) {
  if (p.coefficients().empty()) return "0";
  std::string out;
  for (const auto& [e, c] : p.coefficients()) {
    if (!out.empty()) out += " + ";
    out += format_coeff(p, c);
    if (e > 0) out += " x^" + std::to_string(e);
  }
  return out;
}

}  // namespace flm
