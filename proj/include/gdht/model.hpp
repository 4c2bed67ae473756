#pragma once

#include <cstddef>

#include "gdht/matrix.hpp"

namespace gdht {

/// Design X (n x d) and responses Y (n x m).
class Dataset {
 public:
  Dataset(DenseMatrix x, DenseMatrix y);

  const DenseMatrix& x() const noexcept { return x_; }
  const DenseMatrix& y() const noexcept { return y_; }
  std::size_t n() const noexcept { return x_.rows(); }
  std::size_t d() const noexcept { return x_.cols(); }
  std::size_t m() const noexcept { return y_.cols(); }

 private:
  DenseMatrix x_;
  DenseMatrix y_;
};

/// Throws DimensionMismatch or NonFiniteEntry if the dataset's invariants do not hold.
void validate(const Dataset& data);

/// Coefficients W (d x m) and precision Ω (m x m, symmetric).
struct JointParams {
  DenseMatrix w;
  DenseMatrix omega;

  JointParams(DenseMatrix w_in, DenseMatrix omega_in);
};

/// Nonzero budgets for W and Ω. Ω's budget counts every stored nonzero,
/// both halves of a symmetric pair and the whole diagonal.
struct SparsityBudget {
  std::size_t s1;
  std::size_t s2;

  /// Throws BudgetOutOfRange unless 1 <= s1 <= d*m and m <= s2 <= m*m.
  void check(std::size_t d, std::size_t m) const;
};

struct SolverConfig {
  std::size_t iterations = 100;
  SparsityBudget budget{1, 1};
  double eta1 = 0.1;
  double eta2 = 0.1;
  bool resample = false;
  double rel_tol = 0.0;
  std::size_t backtrack_max = 30;

  /// Throws InvalidConfig; `n` is only consulted when resampling.
  void check(std::size_t n, std::size_t d, std::size_t m) const;
};

/// Eigenvalue bound ν, design bound τ and R = max(‖W*‖_F, ‖Ω*‖_F).
struct TheoryConstants {
  double nu = 1.0;
  double tau = 1.0;
  double r_norm = 1.0;

  void check() const;
};

struct GroundTruth {
  DenseMatrix w_star;
  DenseMatrix omega_star;
  DenseMatrix sigma_star;
  DenseMatrix sigma_x;
  std::size_t s1_star;
  std::size_t s2_star;

  /// Derives Σ* = Ω*⁻¹ and the nonzero counts; validates shapes and definiteness.
  static GroundTruth from(DenseMatrix w_star, DenseMatrix omega_star, DenseMatrix sigma_x);
};

}  // namespace gdht
