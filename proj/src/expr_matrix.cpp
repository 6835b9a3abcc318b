#include "odegeom/expr_matrix.hpp"

#include <stdexcept>

namespace odegeom {

ExprMatrix ExprMatrix::identity(std::size_t n) {
  ExprMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Expr(1);
  return m;
}

ExprMatrix ExprMatrix::transpose() const {
  ExprMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

ExprMatrix operator*(const ExprMatrix& a, const ExprMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch");
  ExprMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      std::vector<Expr> terms;
      for (std::size_t k = 0; k < a.cols(); ++k) {
        Expr t = a(i, k) * b(k, j);
        if (!t.is_zero()) terms.push_back(t);
      }
      c(i, j) = sum(terms);
    }
  return c;
}

ExprMatrix invert_lower_triangular(const ExprMatrix& m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw std::invalid_argument("matrix must be square");
  ExprMatrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    if (m(j, j).is_zero()) throw std::domain_error("singular triangular matrix");
    Expr d = pow(m(j, j), Rational(-1));
    inv(j, j) = d;
    for (std::size_t k = 0; k < j; ++k) {
      std::vector<Expr> terms;
      for (std::size_t l = k; l < j; ++l) {
        Expr t = m(j, l) * inv(l, k);
        if (!t.is_zero()) terms.push_back(t);
      }
      inv(j, k) = -(d * sum(terms));
    }
  }
  return inv;
}

namespace {

Expr det_rec(const ExprMatrix& m, std::vector<std::size_t>& cols, std::size_t row) {
  if (cols.size() == 1) return m(row, cols[0]);
  std::vector<Expr> terms;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const Expr& a = m(row, cols[k]);
    if (a.is_zero()) continue;
    std::size_t c = cols[k];
    cols.erase(cols.begin() + static_cast<long>(k));
    Expr minor = det_rec(m, cols, row + 1);
    cols.insert(cols.begin() + static_cast<long>(k), c);
    if (minor.is_zero()) continue;
    Expr t = a * minor;
    terms.push_back(k % 2 == 0 ? t : -t);
  }
  return sum(terms);
}

ExprMatrix minor_matrix(const ExprMatrix& m, std::size_t skip_r, std::size_t skip_c) {
  const std::size_t n = m.rows();
  ExprMatrix out(n - 1, n - 1);
  for (std::size_t i = 0, ii = 0; i < n; ++i) {
    if (i == skip_r) continue;
    for (std::size_t j = 0, jj = 0; j < n; ++j) {
      if (j == skip_c) continue;
      out(ii, jj++) = m(i, j);
    }
    ++ii;
  }
  return out;
}

}  // namespace

Expr determinant(const ExprMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
  if (m.rows() == 0) return Expr(1);
  std::vector<std::size_t> cols(m.cols());
  for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = j;
  return det_rec(m, cols, 0);
}

ExprMatrix cofactor_inverse(const ExprMatrix& m) {
  const std::size_t n = m.rows();
  Expr det = determinant(m);
  if (det.is_zero()) throw std::domain_error("singular matrix");
  Expr inv_det = pow(det, Rational(-1));
  ExprMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Expr c = determinant(minor_matrix(m, j, i));
      out(i, j) = ((i + j) % 2 == 0 ? c : -c) * inv_det;
    }
  return out;
}

}  // namespace odegeom
