#pragma once

#include <vector>

#include "odegeom/expr.hpp"

namespace odegeom {

/// Dense row-major matrix of expressions.
class ExprMatrix {
 public:
  ExprMatrix() = default;
  ExprMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ExprMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Expr& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Expr& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<Expr>& entries() const { return data_; }

  ExprMatrix transpose() const;
  friend ExprMatrix operator*(const ExprMatrix& a, const ExprMatrix& b);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Expr> data_;
};

/// Inverse of a lower-triangular matrix by forward substitution.
ExprMatrix invert_lower_triangular(const ExprMatrix& m);

/// Determinant by Laplace expansion (intended for n <= 5).
Expr determinant(const ExprMatrix& m);

/// Inverse as adjugate / determinant.
ExprMatrix cofactor_inverse(const ExprMatrix& m);

}  // namespace odegeom
