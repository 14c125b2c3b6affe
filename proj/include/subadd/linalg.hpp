#pragma once

// Small dense matrices and a cyclic Jacobi eigensolver. Sizes here are tiny
// (n <= 16), so everything is plain row-major storage.

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace subadd {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(const std::vector<double>& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Matrix transpose() const;
  double trace() const;
  double frobenius_norm() const;
  /// max |A_ij - A_ji|
  double asymmetry() const;
  Matrix submatrix(const std::vector<int>& index) const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(double s, const Matrix& a);
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;  // columns are eigenvectors
};

/// Cyclic Jacobi rotations until the off-diagonal mass drops below `tol`
/// relative to the Frobenius norm. Input is symmetrized first.
SymmetricEigen jacobi_eigen(const Matrix& a, double tol = 1e-12);

}  // namespace subadd
