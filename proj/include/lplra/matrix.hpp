#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lplra {

/// Dense real matrix, row-major. Entries are validated to be finite when the
/// matrix is built from user data; column and submatrix accessors copy, they
/// never alias the parent storage.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  std::span<const double> row_span(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  std::vector<double> column(std::size_t j) const;
  std::vector<double> row(std::size_t i) const;
  void set_column(std::size_t j, std::span<const double> values);

  /// Submatrix made of the given columns, in the given order. Copies.
  Matrix columns(std::span<const std::size_t> indices) const;

  Matrix transposed() const;

  double max_abs() const;
  bool all_finite() const;

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool operator==(const Matrix& other) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double c, const Matrix& a);

/// a * b with the inner loops spread over OpenMP workers.
Matrix multiply(const Matrix& a, const Matrix& b);
/// Serial reference for `multiply`; bitwise-identical output.
Matrix multiply_reference(const Matrix& a, const Matrix& b);

Matrix from_column(std::span<const double> v);

} // namespace lplra
