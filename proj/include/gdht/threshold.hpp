#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "gdht/matrix.hpp"

namespace gdht {

/// Retained (row, col) positions of a host matrix, sorted row-major, no duplicates.
class SupportSet {
 public:
  using Position = std::pair<std::size_t, std::size_t>;

  SupportSet(std::size_t rows, std::size_t cols, std::vector<Position> positions);

  static SupportSet all(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return positions_.size(); }
  const std::vector<Position>& positions() const noexcept { return positions_; }
  bool contains(std::size_t i, std::size_t j) const;

  friend bool operator==(const SupportSet&, const SupportSet&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Position> positions_;
};

/// The s largest-magnitude entries; ties go to the earlier row-major index.
SupportSet supp(const DenseMatrix& m, std::size_t s);

/// Symmetric support for a precision matrix: the whole diagonal, then
/// off-diagonal pairs {(i,j),(j,i)} by descending |m_ij| while two more
/// positions still fit in s.
SupportSet supp_sym(const DenseMatrix& m, std::size_t s);

/// Zeroes every entry outside the support; retained entries are copied unchanged.
DenseMatrix ht(const DenseMatrix& m, const SupportSet& set);

}  // namespace gdht
