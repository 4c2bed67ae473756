#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace gdht {

/// Dense row-major matrix of doubles.
///
/// Construction rejects empty shapes and non-finite entries; element access
/// afterwards is unchecked, mirroring how solvers mutate the buffer in place.
class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  bool all_finite() const noexcept;

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double scalar) noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(double scalar, DenseMatrix a);

DenseMatrix transpose(const DenseMatrix& a);
/// a * b
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
/// aᵀ * b
DenseMatrix transpose_multiply(const DenseMatrix& a, const DenseMatrix& b);
/// aᵀ * a, computed on the upper triangle and mirrored so the result is exactly symmetric.
DenseMatrix gram(const DenseMatrix& a);

/// Copy of the listed rows, in the order given.
DenseMatrix select_rows(const DenseMatrix& a, std::span<const std::size_t> indices);
/// Rows [first, first + count).
DenseMatrix row_block(const DenseMatrix& a, std::size_t first, std::size_t count);

double frobenius_norm(const DenseMatrix& a);
double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b);
/// trace(aᵀ b)
double frobenius_inner(const DenseMatrix& a, const DenseMatrix& b);
double max_abs(const DenseMatrix& a);
double trace(const DenseMatrix& a);
std::size_t count_nonzero(const DenseMatrix& a);

bool is_symmetric(const DenseMatrix& a, double tol);
/// (a + aᵀ) / 2
DenseMatrix symmetrize(const DenseMatrix& a);

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* context);

}  // namespace gdht
