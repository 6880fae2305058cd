#pragma once

// Small dense matrices. Dimensions in this library never exceed a handful of
// rows, so everything is row-major std::vector storage and cubic algorithms.

#include "pcred/numeric.hpp"

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace pcred {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DomainError("ragged matrix initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  template <class S>
  Matrix& scale(const S& s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DomainError("matrix product shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == T(0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  void check_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DomainError("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using CMatrix = Matrix<Complex>;
using RMatrix = Matrix<Real>;
using IMatrix = Matrix<Integer>;
using CVector = std::vector<Complex>;

CMatrix adjoint(const CMatrix& m);
CMatrix conjugate(const CMatrix& m);
CMatrix to_complex(const RMatrix& m);
CMatrix to_complex(const IMatrix& m);
RMatrix to_real(const IMatrix& m);
RMatrix real_part(const CMatrix& m);
Real max_abs_imag(const CMatrix& m);
Real frobenius_norm(const CMatrix& m);
Real frobenius_norm(const RMatrix& m);
Complex trace(const CMatrix& m);

Complex determinant(const CMatrix& m);
Real determinant(const RMatrix& m);
// Exact (fraction-free Bareiss elimination).
Integer determinant(const IMatrix& m);

// Throws DomainError when the matrix is singular to working precision.
CMatrix inverse(const CMatrix& m);
// Exact inverse of an integer matrix with determinant +-1.
IMatrix unimodular_inverse(const IMatrix& m);

// Upper-triangular S with m = S^H S. Throws DomainError when m is not
// (numerically) positive definite.
CMatrix cholesky_upper(const CMatrix& m);

struct HermitianEigen {
  std::vector<Real> values;  // ascending
  CMatrix vectors;           // column k is the unit eigenvector for values[k]
};
// Cyclic complex Jacobi; m must be Hermitian.
HermitianEigen hermitian_eigen(const CMatrix& m);
// exp(m) for Hermitian m.
CMatrix hermitian_exp(const CMatrix& m);
// Largest entrywise deviation |m - m^H|.
Real hermitian_defect(const CMatrix& m);

// Row-vector helpers (points are rows).
Complex inner(std::span<const Complex> a, std::span<const Complex> b);  // conj(a) . b
Real norm_squared(std::span<const Complex> v);

// Orthonormal basis (rows) of the span of the given row vectors, computed by
// pivoted Gram-Schmidt with reorthogonalization. Directions whose residual
// falls below rel_tol times the largest input norm are dropped.
std::vector<CVector> orthonormal_span(std::span<const CVector> vectors, const Real& rel_tol);
// Distance from unit(v) to the span of an orthonormal basis.
Real relative_distance_to_span(std::span<const Complex> v, std::span<const CVector> basis);
std::size_t numerical_rank(std::span<const CVector> vectors, const Real& rel_tol);

}  // namespace pcred
