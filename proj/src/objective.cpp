#include "gdht/objective.hpp"

#include <string>

#include "gdht/error.hpp"
#include "gdht/linalg.hpp"

namespace gdht {

namespace {

void check_dims(const Dataset& data, const DenseMatrix& w) {
  if (w.rows() != data.d() || w.cols() != data.m()) {
    throw Error(ErrorKind::DimensionMismatch,
                "W is " + std::to_string(w.rows()) + "x" + std::to_string(w.cols()) +
                    ", expected " + std::to_string(data.d()) + "x" + std::to_string(data.m()));
  }
}

void check_dims(const Dataset& data, const JointParams& p) {
  check_dims(data, p.w);
  if (p.omega.rows() != data.m() || p.omega.cols() != data.m()) {
    throw Error(ErrorKind::DimensionMismatch, "Omega does not match the response count");
  }
}

}  // namespace

DenseMatrix residual(const Dataset& data, const DenseMatrix& w) {
  check_dims(data, w);
  return data.y() - multiply(data.x(), w);
}

double loss(const Dataset& data, const JointParams& p) {
  check_dims(data, p);
  const DenseMatrix r = residual(data, p.w);
  const DenseMatrix r_omega = multiply(r, p.omega);
  const double fit = frobenius_inner(r_omega, r) / static_cast<double>(data.n());
  return -log_det_spd(p.omega) + fit;
}

DenseMatrix grad_w(const Dataset& data, const JointParams& p) {
  check_dims(data, p);
  const DenseMatrix r = residual(data, p.w);
  DenseMatrix g = multiply(transpose_multiply(data.x(), r), p.omega);
  g *= -2.0 / static_cast<double>(data.n());
  return g;
}

DenseMatrix grad_omega(const Dataset& data, const JointParams& p) {
  check_dims(data, p);
  DenseMatrix g = residual_covariance(data, p.w).s;
  g -= spd_inverse(p.omega);
  return g;
}

ResidualCovariance residual_covariance(const Dataset& data, const DenseMatrix& w) {
  DenseMatrix s = gram(residual(data, w));
  s *= 1.0 / static_cast<double>(data.n());
  return ResidualCovariance{std::move(s)};
}

}  // namespace gdht
