#include "flm/lingmatrix.hpp"

#include <algorithm>
#include <sstream>

namespace flm {

std::string to_string(OperatorPair pair) {
  auto part = [](Op op) { return op == Op::Min ? "min" : "max"; };
  return std::string(part(pair.outer)) + part(pair.inner);
}

std::optional<OperatorPair> parse_pair(std::string_view text) {
  for (auto p : kAllPairs)
    if (to_string(p) == text) return p;
  return std::nullopt;
}

namespace {

std::string shape_of(const LingMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_space(const LingMatrix& a, const LingMatrix& b) {
  if (a.space() != b.space())
    throw Error(ErrorCode::SpaceMismatch, "matrices are over different spaces ('" +
                                              a.space()->name() + "' and '" +
                                              b.space()->name() + "')");
}

Term apply(const LinguisticSpace& s, Op op, Term x, Term y) {
  return op == Op::Min ? s.meet(x, y) : s.join(x, y);
}

}  // namespace

LingMatrix::LingMatrix(SpacePtr space, std::size_t rows, std::size_t cols)
    : space_(std::move(space)), rows_(rows), cols_(cols) {
  if (!space_) throw Error(ErrorCode::SpaceMismatch, "matrix without a space");
  if (rows_ == 0 || cols_ == 0)
    throw Error(ErrorCode::ShapeMismatch, "matrices need at least one row and column");
  data_.assign(rows_ * cols_, space_->zero());
}

LingMatrix::LingMatrix(SpacePtr space, std::size_t rows, std::size_t cols,
                       std::vector<Term> data)
    : space_(std::move(space)), rows_(rows), cols_(cols), data_(std::move(data)) {
  if (!space_) throw Error(ErrorCode::SpaceMismatch, "matrix without a space");
  if (rows_ == 0 || cols_ == 0 || data_.size() != rows_ * cols_)
    throw Error(ErrorCode::ShapeMismatch,
                "matrix data does not fit a " + std::to_string(rows_) + "x" +
                    std::to_string(cols_) + " shape");
  for (auto t : data_)
    if (!space_->contains(t))
      throw Error(ErrorCode::ForeignTerm,
                  "matrix entry does not belong to space '" + space_->name() + "'");
}

LingMatrix LingMatrix::from_names(SpacePtr space,
                                  const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty() || rows.front().empty())
    throw Error(ErrorCode::ShapeMismatch, "empty matrix literal");
  const std::size_t cols = rows.front().size();
  std::vector<Term> data;
  for (const auto& row : rows) {
    if (row.size() != cols)
      throw Error(ErrorCode::ShapeMismatch, "ragged matrix literal");
    for (const auto& n : row) data.push_back(space->term(n));
  }
  const std::size_t r = rows.size();
  return LingMatrix(std::move(space), r, cols, std::move(data));
}

LingMatrix LingMatrix::row(SpacePtr space, const std::vector<std::string>& names) {
  return from_names(std::move(space), {names});
}

LingMatrix LingMatrix::column(SpacePtr space, const std::vector<std::string>& names) {
  return transpose(row(std::move(space), names));
}

Term LingMatrix::at(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_)
    throw Error(ErrorCode::ShapeMismatch, "index outside a " + shape_of(*this) + " matrix");
  return data_[r * cols_ + c];
}

void LingMatrix::set(std::size_t r, std::size_t c, Term t) {
  if (r >= rows_ || c >= cols_)
    throw Error(ErrorCode::ShapeMismatch, "index outside a " + shape_of(*this) + " matrix");
  if (!space_->contains(t))
    throw Error(ErrorCode::ForeignTerm,
                "term does not belong to space '" + space_->name() + "'");
  data_[r * cols_ + c] = t;
}

bool LingMatrix::is_zero() const {
  const Term z = space_->zero();
  return std::all_of(data_.begin(), data_.end(), [&](Term t) { return t == z; });
}

std::vector<std::string> LingMatrix::names() const {
  std::vector<std::string> out;
  out.reserve(data_.size());
  for (auto t : data_) out.push_back(space_->name_of(t));
  return out;
}

std::string LingMatrix::name_at(std::size_t r, std::size_t c) const {
  return space_->name_of(at(r, c));
}

bool operator==(const LingMatrix& a, const LingMatrix& b) {
  return a.space_ == b.space_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
         a.data_ == b.data_;
}

LingMatrix elementwise(Op op, const LingMatrix& a, const LingMatrix& b) {
  require_same_space(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::ShapeMismatch,
                "elementwise operands differ in shape (" + shape_of(a) + " vs " +
                    shape_of(b) + ")");
  const auto& s = *a.space();
  std::vector<Term> out(a.data().size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = apply(s, op, a.data()[i], b.data()[i]);
  return LingMatrix(a.space(), a.rows(), a.cols(), std::move(out));
}

LingMatrix transpose(const LingMatrix& a) {
  std::vector<Term> out(a.data().size());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out[c * a.rows() + r] = a(r, c);
  return LingMatrix(a.space(), a.cols(), a.rows(), std::move(out));
}

LingMatrix compose(const LingMatrix& a, const LingMatrix& b, OperatorPair pair) {
  require_same_space(a, b);
  if (a.cols() != b.rows())
    throw Error(ErrorCode::ShapeMismatch, "cannot compose " + shape_of(a) + " with " +
                                              shape_of(b));
  const auto& s = *a.space();
  LingMatrix out(a.space(), a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      try {
        Term acc = apply(s, pair.inner, a(i, 0), b(0, j));
        for (std::size_t t = 1; t < a.cols(); ++t)
          acc = apply(s, pair.outer, acc, apply(s, pair.inner, a(i, t), b(t, j)));
        out.set(i, j, acc);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoJoin) throw;
        throw Error(ErrorCode::NoJoin, std::string(e.what()) + " at entry (" +
                                           std::to_string(i + 1) + "," +
                                           std::to_string(j + 1) + ")");
      }
    }
  }
  return out;
}

ZeroDivisor make_zero_divisor(const LingMatrix& a) {
  const auto& s = *a.space();
  std::optional<Term> fill = s.greatest();
  if (!fill) {
    for (auto t : s.maximal_terms())
      if (!s.is_zero(t)) {
        fill = t;
        break;
      }
  }
  LingMatrix partner(a.space(), a.rows(), a.cols());
  bool any_zero = false;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (!s.is_zero(a(r, c))) continue;
      any_zero = true;
      if (fill) partner.set(r, c, *fill);
    }
  }
  return {std::move(partner), any_zero && fill.has_value()};
}

std::string format_grid(const LingMatrix& a) {
  std::vector<std::size_t> width(a.cols(), 0);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      width[c] = std::max(width[c], a.name_at(r, c).size());
  std::ostringstream os;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < a.cols(); ++c) {
      std::string cell = a.name_at(r, c);
      if (c + 1 < a.cols()) cell.resize(width[c] + 2, ' ');
      line += cell;
    }
    os << line << '\n';
  }
  return os.str();
}

}  // namespace flm
