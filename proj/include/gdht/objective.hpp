#pragma once

#include "gdht/matrix.hpp"
#include "gdht/model.hpp"

namespace gdht {

/// S = (1/n) Rᵀ R for R = Y − X W. Exactly symmetric, PSD.
struct ResidualCovariance {
  DenseMatrix s;
};

/// R = Y − X W
DenseMatrix residual(const Dataset& data, const DenseMatrix& w);

/// Negative Gaussian log-likelihood  −log|Ω| + (1/n) tr[(Y − XW) Ω (Y − XW)ᵀ].
double loss(const Dataset& data, const JointParams& p);

/// −(2/n) Xᵀ (Y − XW) Ω. Ω is not inverted, so it need not be SPD.
DenseMatrix grad_w(const Dataset& data, const JointParams& p);

/// −Ω⁻¹ + (1/n)(Y − XW)ᵀ(Y − XW), exactly symmetric.
DenseMatrix grad_omega(const Dataset& data, const JointParams& p);

ResidualCovariance residual_covariance(const Dataset& data, const DenseMatrix& w);

}  // namespace gdht
