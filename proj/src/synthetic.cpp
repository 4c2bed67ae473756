#include "gdht/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gdht/error.hpp"
#include "gdht/linalg.hpp"

namespace gdht {

namespace {

void shift_to_margin(DenseMatrix& omega, double margin) {
  const double lambda_min = min_eigenvalue_sym(omega);
  if (lambda_min <= margin) {
    const double shift = std::abs(lambda_min) + margin;
    for (std::size_t i = 0; i < omega.rows(); ++i) omega(i, i) += shift;
  }
}

// rows_out(i, :) = L · z_i for standard normal z_i.
DenseMatrix correlated_normals(std::size_t n, const DenseMatrix& lower, Rng& rng) {
  const std::size_t p = lower.rows();
  DenseMatrix out(n, p);
  std::vector<double> z(p);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& v : z) v = rng.normal();
    auto row = out.row(i);
    for (std::size_t a = 0; a < p; ++a) {
      double acc = 0.0;
      const auto l_row = lower.row(a);
      for (std::size_t b = 0; b <= a; ++b) acc += l_row[b] * z[b];
      row[a] = acc;
    }
  }
  return out;
}

}  // namespace

std::string_view graph_kind_name(GraphKind kind) {
  switch (kind) {
    case GraphKind::Band: return "band";
    case GraphKind::Hub: return "hub";
    case GraphKind::ScaleFree: return "scale-free";
  }
  return "band";
}

GraphKind parse_graph_kind(std::string_view name) {
  if (name == "band") return GraphKind::Band;
  if (name == "hub") return GraphKind::Hub;
  if (name == "scale-free") return GraphKind::ScaleFree;
  throw Error(ErrorKind::RangeError,
              "unknown graph kind '" + std::string(name) + "' (band, hub, scale-free)");
}

void GraphSpec::check() const {
  if (m < 1) throw Error(ErrorKind::InvalidConfig, "graph needs m >= 1");
  if (kind == GraphKind::Hub && (hub_groups < 1 || hub_groups > m)) {
    throw Error(ErrorKind::InvalidConfig, "hub_groups must lie in [1, m]");
  }
  if (kind == GraphKind::ScaleFree && m < 2) {
    throw Error(ErrorKind::InvalidConfig, "scale-free graph needs m >= 2");
  }
  if (kind != GraphKind::Band) {
    if (!std::isfinite(hub_value)) throw Error(ErrorKind::InvalidConfig, "hub_value not finite");
    if (!(pd_margin > 0.0) || !std::isfinite(pd_margin)) {
      throw Error(ErrorKind::InvalidConfig, "pd_margin must be positive");
    }
  }
}

DenseMatrix make_sigma_x(std::size_t d) {
  DenseMatrix out(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      out(i, j) = std::pow(0.6, static_cast<double>(i > j ? i - j : j - i));
  return out;
}

DenseMatrix barabasi_albert(std::size_t m, Rng& rng) {
  if (m < 2) throw Error(ErrorKind::InvalidConfig, "barabasi_albert needs m >= 2");
  DenseMatrix adj(m, m);
  // Each node appears once per incident edge, so a uniform pick is degree-proportional.
  std::vector<std::size_t> endpoints{0, 1};
  endpoints.reserve(2 * (m - 1));
  adj(0, 1) = adj(1, 0) = 1.0;
  for (std::size_t node = 2; node < m; ++node) {
    const std::size_t target = endpoints[rng.below(endpoints.size())];
    adj(node, target) = adj(target, node) = 1.0;
    endpoints.push_back(node);
    endpoints.push_back(target);
  }
  return adj;
}

PrecisionMatrix make_precision(const GraphSpec& spec, Rng& rng) {
  spec.check();
  const std::size_t m = spec.m;
  DenseMatrix omega = DenseMatrix::identity(m);
  switch (spec.kind) {
    case GraphKind::Band:
      for (std::size_t i = 0; i + 1 < m; ++i) omega(i, i + 1) = omega(i + 1, i) = 0.4;
      break;
    case GraphKind::Hub: {
      const std::size_t block = (m + spec.hub_groups - 1) / spec.hub_groups;
      for (std::size_t center = 0; center < m; center += block) {
        for (std::size_t k = center + 1; k < std::min(center + block, m); ++k)
          omega(center, k) = omega(k, center) = spec.hub_value;
      }
      shift_to_margin(omega, spec.pd_margin);
      break;
    }
    case GraphKind::ScaleFree: {
      const DenseMatrix adj = barabasi_albert(m, rng);
      omega += spec.hub_value * adj;
      shift_to_margin(omega, spec.pd_margin);
      break;
    }
  }
  const std::size_t s2 = count_nonzero(omega);
  return PrecisionMatrix{std::move(omega), s2};
}

DenseMatrix make_coefficients(std::size_t d, std::size_t m, std::size_t s1_star, Rng& rng) {
  if (s1_star < 1 || s1_star > d * m) {
    throw Error(ErrorKind::BudgetOutOfRange, "s1_star=" + std::to_string(s1_star) +
                                                 " outside [1, " + std::to_string(d * m) + "]");
  }
  // Partial Fisher–Yates over the flattened positions.
  std::vector<std::size_t> cells(d * m);
  for (std::size_t k = 0; k < cells.size(); ++k) cells[k] = k;
  DenseMatrix w(d, m);
  for (std::size_t k = 0; k < s1_star; ++k) {
    const std::size_t pick = k + static_cast<std::size_t>(rng.below(cells.size() - k));
    std::swap(cells[k], cells[pick]);
    const double magnitude = 0.5 + 0.5 * rng.uniform();
    const double sign = rng.below(2) == 0 ? -1.0 : 1.0;
    w.values()[cells[k]] = sign * magnitude;
  }
  return w;
}

SyntheticInstance sample_dataset(const GroundTruth& truth, std::size_t n, Rng& rng,
                                 const SampleOptions& options) {
  if (n < 1) throw Error(ErrorKind::InvalidConfig, "sample_dataset needs n >= 1");
  const std::size_t m = truth.omega_star.rows();
  DenseMatrix x = correlated_normals(n, cholesky(truth.sigma_x).lower, rng);
  if (options.normalize_rows) {
    double max_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (double v : x.row(i)) acc += v * v;
      max_norm = std::max(max_norm, std::sqrt(acc));
    }
    if (max_norm > 0.0) x *= 1.0 / max_norm;
  }
  DenseMatrix e = options.noiseless ? DenseMatrix(n, m)
                                    : correlated_normals(n, cholesky(truth.sigma_star).lower, rng);
  const DenseMatrix signal = multiply(x, truth.w_star);
  DenseMatrix y = signal + e;
  DenseMatrix noise = y - signal;
  return SyntheticInstance{truth, Dataset(std::move(x), std::move(y)), std::move(noise), 0};
}

SyntheticInstance make_instance(const InstanceSpec& spec, std::uint64_t seed) {
  GraphSpec graph = spec.graph;
  graph.m = spec.m;
  Rng rng(seed);
  PrecisionMatrix precision = make_precision(graph, rng);
  DenseMatrix w_star = make_coefficients(spec.d, spec.m, spec.s1_star, rng);
  GroundTruth truth =
      GroundTruth::from(std::move(w_star), std::move(precision.omega), make_sigma_x(spec.d));
  SyntheticInstance inst = sample_dataset(truth, spec.n, rng, spec.sampling);
  inst.seed = seed;
  return inst;
}

}  // namespace gdht
