#include "gdht/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gdht/error.hpp"

namespace gdht {

namespace {

std::string shape_string(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

void require_nonempty(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorKind::DimensionMismatch,
                "matrix shape must be at least 1x1, got " + shape_string(rows, cols));
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols) {
  require_nonempty(rows, cols);
  if (!std::isfinite(fill)) throw Error(ErrorKind::NonFiniteEntry, "non-finite fill value");
  data_.assign(rows * cols, fill);
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  require_nonempty(rows, cols);
  if (data_.size() != rows * cols) {
    throw Error(ErrorKind::DimensionMismatch,
                "entry count " + std::to_string(data_.size()) + " does not match shape " +
                    shape_string(rows, cols));
  }
  if (!all_finite()) throw Error(ErrorKind::NonFiniteEntry, "matrix contains NaN or Inf");
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  require_nonempty(rows_, cols_);
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorKind::RaggedRows, "initializer rows differ in length");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  if (!all_finite()) throw Error(ErrorKind::NonFiniteEntry, "matrix contains NaN or Inf");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
  DenseMatrix out(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) out(i, i) = diag[i];
  if (!out.all_finite()) throw Error(ErrorKind::NonFiniteEntry, "diagonal contains NaN or Inf");
  return out;
}

bool DenseMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double scalar) noexcept {
  for (double& v : data_) v *= scalar;
  return *this;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(double scalar, DenseMatrix a) { return a *= scalar; }

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* context) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::ShapeMismatch, std::string(context) + ": " +
                                              shape_string(a.rows(), a.cols()) + " vs " +
                                              shape_string(b.rows(), b.cols()));
  }
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "multiply: " + shape_string(a.rows(), a.cols()) +
                                                  " * " + shape_string(b.rows(), b.cols()));
  }
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    const auto a_row = a.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a_row[k];
      if (aik == 0.0) continue;
      const auto b_row = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
    }
  }
  return out;
}

DenseMatrix transpose_multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch,
                "transpose_multiply: " + shape_string(a.rows(), a.cols()) + "^T * " +
                    shape_string(b.rows(), b.cols()));
  }
  DenseMatrix out(a.cols(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto a_row = a.row(r);
    const auto b_row = b.row(r);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double ari = a_row[i];
      if (ari == 0.0) continue;
      auto out_row = out.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += ari * b_row[j];
    }
  }
  return out;
}

DenseMatrix gram(const DenseMatrix& a) {
  const std::size_t p = a.cols();
  DenseMatrix out(p, p);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto a_row = a.row(r);
    for (std::size_t i = 0; i < p; ++i) {
      const double ari = a_row[i];
      if (ari == 0.0) continue;
      auto out_row = out.row(i);
      for (std::size_t j = i; j < p; ++j) out_row[j] += ari * a_row[j];
    }
  }
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < i; ++j) out(i, j) = out(j, i);
  return out;
}

DenseMatrix select_rows(const DenseMatrix& a, std::span<const std::size_t> indices) {
  if (indices.empty()) throw Error(ErrorKind::DimensionMismatch, "select_rows: empty selection");
  DenseMatrix out(indices.size(), a.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= a.rows()) {
      throw Error(ErrorKind::DimensionMismatch,
                  "select_rows: index " + std::to_string(indices[r]) + " out of range");
    }
    std::copy_n(a.row(indices[r]).begin(), a.cols(), out.row(r).begin());
  }
  return out;
}

DenseMatrix row_block(const DenseMatrix& a, std::size_t first, std::size_t count) {
  if (count == 0 || first + count > a.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "row_block out of range");
  }
  DenseMatrix out(count, a.cols());
  for (std::size_t r = 0; r < count; ++r)
    std::copy_n(a.row(first + r).begin(), a.cols(), out.row(r).begin());
  return out;
}

double frobenius_norm(const DenseMatrix& a) { return std::sqrt(frobenius_inner(a, a)); }

double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "frobenius_distance");
  double acc = 0.0;
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t k = 0; k < av.size(); ++k) {
    const double diff = av[k] - bv[k];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

double frobenius_inner(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b, "frobenius_inner");
  double acc = 0.0;
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t k = 0; k < av.size(); ++k) acc += av[k] * bv[k];
  return acc;
}

double max_abs(const DenseMatrix& a) {
  double best = 0.0;
  for (double v : a.values()) best = std::max(best, std::abs(v));
  return best;
}

double trace(const DenseMatrix& a) {
  if (!a.is_square()) throw Error(ErrorKind::NotSquare, "trace of non-square matrix");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) acc += a(i, i);
  return acc;
}

std::size_t count_nonzero(const DenseMatrix& a) {
  return static_cast<std::size_t>(
      std::count_if(a.values().begin(), a.values().end(), [](double v) { return v != 0.0; }));
}

bool is_symmetric(const DenseMatrix& a, double tol) {
  if (!a.is_square()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > tol) return false;
  return true;
}

DenseMatrix symmetrize(const DenseMatrix& a) {
  if (!a.is_square()) throw Error(ErrorKind::NotSquare, "symmetrize of non-square matrix");
  DenseMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      const double avg = 0.5 * (a(i, j) + a(j, i));
      out(i, j) = avg;
      out(j, i) = avg;
    }
  }
  return out;
}

}  // namespace gdht
