#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "gdht/matrix.hpp"
#include "gdht/model.hpp"
#include "gdht/random.hpp"

namespace gdht {

enum class GraphKind { Band, Hub, ScaleFree };

std::string_view graph_kind_name(GraphKind kind);
GraphKind parse_graph_kind(std::string_view name);

struct GraphSpec {
  GraphKind kind = GraphKind::Band;
  std::size_t m = 10;
  std::size_t hub_groups = 2;  // Hub only
  double hub_value = 0.3;      // Hub and ScaleFree off-diagonal magnitude
  double pd_margin = 0.1;      // Hub and ScaleFree eigenvalue margin

  void check() const;
};

struct PrecisionMatrix {
  DenseMatrix omega;
  std::size_t s2_star;
};

struct SyntheticInstance {
  GroundTruth truth;
  Dataset data;
  DenseMatrix noise;  // Y − X W*, as computed after Y was formed
  std::uint64_t seed;
};

/// [Σ_X]_ij = 0.6^|i−j|
DenseMatrix make_sigma_x(std::size_t d);

/// Band: tridiagonal, 1 on the diagonal and 0.4 beside it.
/// Hub: consecutive blocks of ceil(m/g) indices, the first index of each block
///   linked to the rest with hub_value; diagonal 1.
/// ScaleFree: I + hub_value · A for a Barabási–Albert adjacency A.
/// Hub and ScaleFree add (|λ_min| + pd_margin)·I whenever λ_min <= pd_margin.
PrecisionMatrix make_precision(const GraphSpec& spec, Rng& rng);

/// Preferential attachment tree: edge (0,1), then each new node links to one
/// existing node picked with probability proportional to its degree.
DenseMatrix barabasi_albert(std::size_t m, Rng& rng);

/// s1_star distinct uniform positions, magnitudes uniform on [0.5, 1], random signs.
DenseMatrix make_coefficients(std::size_t d, std::size_t m, std::size_t s1_star, Rng& rng);

struct SampleOptions {
  bool noiseless = false;       // E = 0
  bool normalize_rows = false;  // rescale X so that max_i ‖x_i‖₂ = 1
};

/// Gaussian rows x_i ~ N(0, Σ_X), ε_i ~ N(0, Σ*) through Cholesky factors; Y = XW* + E.
SyntheticInstance sample_dataset(const GroundTruth& truth, std::size_t n, Rng& rng,
                                 const SampleOptions& options = {});

struct InstanceSpec {
  std::size_t n = 2000;
  std::size_t d = 100;
  std::size_t m = 10;
  std::size_t s1_star = 20;
  GraphSpec graph;
  SampleOptions sampling;
};

/// Builds ground truth and data from one seed, in a fixed draw order:
/// precision, coefficients, then samples.
SyntheticInstance make_instance(const InstanceSpec& spec, std::uint64_t seed);

}  // namespace gdht
