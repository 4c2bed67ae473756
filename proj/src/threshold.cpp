#include "gdht/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gdht/error.hpp"
#include "gdht/linalg.hpp"

namespace gdht {

SupportSet::SupportSet(std::size_t rows, std::size_t cols, std::vector<Position> positions)
    : rows_(rows), cols_(cols), positions_(std::move(positions)) {
  std::sort(positions_.begin(), positions_.end());
  if (std::adjacent_find(positions_.begin(), positions_.end()) != positions_.end()) {
    throw Error(ErrorKind::InvalidConfig, "support set contains duplicate positions");
  }
  for (const auto& [i, j] : positions_) {
    if (i >= rows_ || j >= cols_) {
      throw Error(ErrorKind::ShapeMismatch, "support position out of range");
    }
  }
}

SupportSet SupportSet::all(std::size_t rows, std::size_t cols) {
  std::vector<Position> pos;
  pos.reserve(rows * cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) pos.emplace_back(i, j);
  return SupportSet(rows, cols, std::move(pos));
}

bool SupportSet::contains(std::size_t i, std::size_t j) const {
  return std::binary_search(positions_.begin(), positions_.end(), Position{i, j});
}

SupportSet supp(const DenseMatrix& m, std::size_t s) {
  const std::size_t p = m.size();
  if (s < 1 || s > p) {
    throw Error(ErrorKind::BudgetOutOfRange,
                "supp: s=" + std::to_string(s) + " outside [1, " + std::to_string(p) + "]");
  }
  const auto v = m.values();
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(v[a]) > std::abs(v[b]);
  });
  std::vector<SupportSet::Position> pos;
  pos.reserve(s);
  for (std::size_t k = 0; k < s; ++k) pos.emplace_back(order[k] / m.cols(), order[k] % m.cols());
  return SupportSet(m.rows(), m.cols(), std::move(pos));
}

SupportSet supp_sym(const DenseMatrix& m, std::size_t s) {
  require_symmetric(m, "supp_sym");
  const std::size_t n = m.rows();
  if (s < n || s > n * n) {
    throw Error(ErrorKind::BudgetOutOfRange, "supp_sym: s=" + std::to_string(s) + " outside [" +
                                                 std::to_string(n) + ", " +
                                                 std::to_string(n * n) + "]");
  }
  std::vector<SupportSet::Position> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
    return std::abs(m(a.first, a.second)) > std::abs(m(b.first, b.second));
  });

  const std::size_t n_pairs = (s - n) / 2;
  std::vector<SupportSet::Position> pos;
  pos.reserve(n + 2 * n_pairs);
  for (std::size_t i = 0; i < n; ++i) pos.emplace_back(i, i);
  for (std::size_t k = 0; k < n_pairs; ++k) {
    pos.emplace_back(pairs[k].first, pairs[k].second);
    pos.emplace_back(pairs[k].second, pairs[k].first);
  }
  return SupportSet(n, n, std::move(pos));
}

DenseMatrix ht(const DenseMatrix& m, const SupportSet& set) {
  if (set.rows() != m.rows() || set.cols() != m.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "ht: support shape does not match matrix");
  }
  DenseMatrix out(m.rows(), m.cols());
  for (const auto& [i, j] : set.positions()) out(i, j) = m(i, j);
  return out;
}

}  // namespace gdht
