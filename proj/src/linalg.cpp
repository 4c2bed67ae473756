#include "gdht/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gdht/error.hpp"

namespace gdht {

namespace {

constexpr double kPivotRelTol = 1e-12;
constexpr double kJacobiOffTol = 1e-12;
constexpr int kJacobiMaxSweeps = 100;

double max_diagonal(const DenseMatrix& m) {
  double best = m(0, 0);
  for (std::size_t i = 1; i < m.rows(); ++i) best = std::max(best, m(i, i));
  return best;
}

// Returns false on pivot failure, leaving `lower` partially filled.
bool factor_into(const DenseMatrix& m, DenseMatrix& lower, std::size_t* failed_pivot) {
  const std::size_t n = m.rows();
  const double max_diag = max_diagonal(m);
  const double floor = kPivotRelTol * max_diag;
  if (!(max_diag > 0.0)) {
    if (failed_pivot != nullptr) *failed_pivot = 0;
    return false;
  }
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = m(j, j);
    const auto lj = lower.row(j);
    for (std::size_t k = 0; k < j; ++k) pivot -= lj[k] * lj[k];
    if (!(pivot > floor)) {
      if (failed_pivot != nullptr) *failed_pivot = j;
      return false;
    }
    const double ljj = std::sqrt(pivot);
    lower(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double acc = m(i, j);
      const auto li = lower.row(i);
      for (std::size_t k = 0; k < j; ++k) acc -= li[k] * lj[k];
      lower(i, j) = acc / ljj;
    }
  }
  return true;
}

double symmetry_tolerance(const DenseMatrix& m) {
  return kSymmetryTol * std::max(1.0, max_abs(m));
}

}  // namespace

void require_square(const DenseMatrix& m, const char* context) {
  if (!m.is_square()) {
    throw Error(ErrorKind::NotSquare, std::string(context) + ": matrix is " +
                                          std::to_string(m.rows()) + "x" +
                                          std::to_string(m.cols()));
  }
}

void require_symmetric(const DenseMatrix& m, const char* context) {
  require_square(m, context);
  if (!is_symmetric(m, symmetry_tolerance(m))) {
    throw Error(ErrorKind::NotSymmetric, std::string(context) + ": matrix is not symmetric");
  }
}

CholeskyFactor cholesky(const DenseMatrix& m) {
  require_symmetric(m, "cholesky");
  DenseMatrix lower(m.rows(), m.cols());
  std::size_t failed = 0;
  if (!factor_into(m, lower, &failed)) {
    throw Error(ErrorKind::NotPositiveDefinite,
                "cholesky: pivot " + std::to_string(failed) + " is not positive");
  }
  return CholeskyFactor{std::move(lower)};
}

bool is_positive_definite(const DenseMatrix& m) {
  if (!m.is_square() || !is_symmetric(m, symmetry_tolerance(m))) return false;
  DenseMatrix lower(m.rows(), m.cols());
  return factor_into(m, lower, nullptr);
}

double log_det_spd(const DenseMatrix& m) {
  const CholeskyFactor f = cholesky(m);
  double acc = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) acc += std::log(f.lower(i, i));
  return 2.0 * acc;
}

DenseMatrix spd_inverse(const DenseMatrix& m) {
  const CholeskyFactor f = cholesky(m);
  const std::size_t n = m.rows();
  const DenseMatrix& l = f.lower;

  // Forward substitution for L⁻¹ (lower triangular), one column at a time.
  DenseMatrix l_inv(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    l_inv(c, c) = 1.0 / l(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t k = c; k < i; ++k) acc -= l(i, k) * l_inv(k, c);
      l_inv(i, c) = acc / l(i, i);
    }
  }
  // M⁻¹ = L⁻ᵀ L⁻¹
  DenseMatrix inv = transpose_multiply(l_inv, l_inv);
  return symmetrize(inv);
}

std::vector<double> symmetric_eigenvalues(const DenseMatrix& m) {
  require_symmetric(m, "symmetric_eigenvalues");
  const std::size_t n = m.rows();
  DenseMatrix a = symmetrize(m);
  const double threshold = kJacobiOffTol * std::max(1.0, frobenius_norm(a));

  auto off_norm = [&]() {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) acc += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(acc);
  };

  for (int sweep = 0; sweep < kJacobiMaxSweeps && off_norm() >= threshold; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 1.0 / (2.0 * theta);
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

double min_eigenvalue_sym(const DenseMatrix& m) { return symmetric_eigenvalues(m).front(); }
double max_eigenvalue_sym(const DenseMatrix& m) { return symmetric_eigenvalues(m).back(); }

double largest_gram_eigenvalue(const DenseMatrix& x) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d)));
  std::vector<double> xv(n);
  std::vector<double> next(d);
  double estimate = 0.0;
  for (int iter = 0; iter < 1000; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = x.row(i);
      double acc = 0.0;
      for (std::size_t j = 0; j < d; ++j) acc += row[j] * v[j];
      xv[i] = acc;
    }
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = x.row(i);
      for (std::size_t j = 0; j < d; ++j) next[j] += row[j] * xv[i];
    }
    double norm = 0.0;
    for (double& e : next) {
      e /= static_cast<double>(n);
      norm += e * e;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    const double previous = estimate;
    estimate = norm;
    for (std::size_t j = 0; j < d; ++j) v[j] = next[j] / norm;
    if (iter > 0 && std::abs(estimate - previous) <= 1e-10 * estimate) break;
  }
  return estimate;
}

}  // namespace gdht
