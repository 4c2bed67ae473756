#include "gdht/model.hpp"

#include <cmath>
#include <string>

#include "gdht/error.hpp"
#include "gdht/linalg.hpp"

namespace gdht {

namespace {

std::string dims(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

Dataset::Dataset(DenseMatrix x, DenseMatrix y) : x_(std::move(x)), y_(std::move(y)) {
  validate(*this);
}

void validate(const Dataset& data) {
  if (data.x().rows() != data.y().rows()) {
    throw Error(ErrorKind::DimensionMismatch,
                "X has " + std::to_string(data.x().rows()) + " rows but Y has " +
                    std::to_string(data.y().rows()));
  }
  if (!data.x().all_finite()) throw Error(ErrorKind::NonFiniteEntry, "X contains NaN or Inf");
  if (!data.y().all_finite()) throw Error(ErrorKind::NonFiniteEntry, "Y contains NaN or Inf");
}

JointParams::JointParams(DenseMatrix w_in, DenseMatrix omega_in)
    : w(std::move(w_in)), omega(std::move(omega_in)) {
  require_symmetric(omega, "JointParams omega");
  if (w.cols() != omega.rows()) {
    throw Error(ErrorKind::DimensionMismatch,
                "W is " + dims(w.rows(), w.cols()) + " but Omega is " +
                    dims(omega.rows(), omega.cols()));
  }
}

void SparsityBudget::check(std::size_t d, std::size_t m) const {
  if (s1 < 1 || s1 > d * m) {
    throw Error(ErrorKind::BudgetOutOfRange,
                "s1=" + std::to_string(s1) + " outside [1, " + std::to_string(d * m) + "]");
  }
  if (s2 < m || s2 > m * m) {
    throw Error(ErrorKind::BudgetOutOfRange, "s2=" + std::to_string(s2) + " outside [" +
                                                 std::to_string(m) + ", " +
                                                 std::to_string(m * m) + "]");
  }
}

void SolverConfig::check(std::size_t n, std::size_t d, std::size_t m) const {
  if (iterations < 1) throw Error(ErrorKind::InvalidConfig, "iterations must be >= 1");
  if (!(std::isfinite(eta1) && eta1 > 0.0)) {
    throw Error(ErrorKind::InvalidConfig, "eta1 must be finite and positive");
  }
  if (!(std::isfinite(eta2) && eta2 > 0.0)) {
    throw Error(ErrorKind::InvalidConfig, "eta2 must be finite and positive");
  }
  if (!(rel_tol >= 0.0)) throw Error(ErrorKind::InvalidConfig, "rel_tol must be >= 0");
  if (resample && iterations > n) {
    throw Error(ErrorKind::SliceTooSmall, "resampling with " + std::to_string(iterations) +
                                              " iterations needs at least that many rows, got " +
                                              std::to_string(n));
  }
  budget.check(d, m);
}

void TheoryConstants::check() const {
  if (!(nu >= 1.0) || !std::isfinite(nu)) throw Error(ErrorKind::InvalidConfig, "nu must be >= 1");
  if (!(tau >= 1.0) || !std::isfinite(tau)) {
    throw Error(ErrorKind::InvalidConfig, "tau must be >= 1");
  }
  if (!(r_norm > 0.0) || !std::isfinite(r_norm)) {
    throw Error(ErrorKind::InvalidConfig, "R must be positive");
  }
}

GroundTruth GroundTruth::from(DenseMatrix w_star, DenseMatrix omega_star, DenseMatrix sigma_x) {
  if (w_star.rows() != sigma_x.rows() || w_star.cols() != omega_star.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "ground truth shapes are inconsistent");
  }
  require_symmetric(sigma_x, "GroundTruth sigma_x");
  DenseMatrix sigma_star = spd_inverse(omega_star);
  const std::size_t s1 = count_nonzero(w_star);
  const std::size_t s2 = count_nonzero(omega_star);
  return GroundTruth{std::move(w_star), std::move(omega_star), std::move(sigma_star),
                     std::move(sigma_x), s1, s2};
}

}  // namespace gdht
