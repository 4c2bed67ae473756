#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "doctest.h"
#include "gdht/error.hpp"
#include "gdht/matrix.hpp"
#include "gdht/random.hpp"

namespace testing {

inline gdht::DenseMatrix random_matrix(std::size_t rows, std::size_t cols, gdht::Rng& rng,
                                       double scale = 1.0) {
  gdht::DenseMatrix out(rows, cols);
  for (double& v : out.values()) v = scale * rng.normal();
  return out;
}

/// BᵀB + shift·I for a random square B.
inline gdht::DenseMatrix random_spd(std::size_t n, gdht::Rng& rng, double shift = 0.1) {
  gdht::DenseMatrix out = gdht::gram(random_matrix(n, n, rng));
  for (std::size_t i = 0; i < n; ++i) out(i, i) += shift;
  return out;
}

inline gdht::DenseMatrix random_symmetric(std::size_t n, gdht::Rng& rng) {
  return gdht::symmetrize(random_matrix(n, n, rng));
}

inline double max_abs_diff(const gdht::DenseMatrix& a, const gdht::DenseMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
  return worst;
}

inline double rel_frobenius(const gdht::DenseMatrix& a, const gdht::DenseMatrix& ref) {
  return gdht::frobenius_distance(a, ref) / gdht::frobenius_norm(ref);
}

/// Runs `f` and returns the kind of the gdht::Error it throws; fails the test otherwise.
template <typename F>
gdht::ErrorKind error_kind_of(F&& f) {
  try {
    f();
  } catch (const gdht::Error& e) {
    return e.kind();
  }
  FAIL("expected a gdht::Error");
  return gdht::ErrorKind::InvalidConfig;
}

template <typename F>
std::string error_message_of(F&& f) {
  try {
    f();
  } catch (const gdht::Error& e) {
    return e.what();
  }
  FAIL("expected a gdht::Error");
  return {};
}

}  // namespace testing

#define CHECK_ERROR_KIND(expr, kind) CHECK(::testing::error_kind_of([&] { (void)(expr); }) == (kind))
