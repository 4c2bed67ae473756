#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gdht/model.hpp"

namespace gdht {

struct TraceRecord {
  std::size_t t = 0;
  double loss = 0.0;
  std::optional<double> err_w;      // ‖W⁽ᵗ⁾ − W*‖_F, only with ground truth
  std::optional<double> err_omega;  // ‖Ω⁽ᵗ⁾ − Ω*‖_F
  double opt_err_w = 0.0;           // ‖W⁽ᵗ⁾ − Ŵ‖_F against the final iterate
  double opt_err_omega = 0.0;
  std::optional<double> eta2_used;  // step that produced Ω⁽ᵗ⁾; absent for t = 0
};

struct SolverTrace {
  std::vector<TraceRecord> records;  // t = 0 .. iterations_run
};

struct FitResult {
  JointParams params;
  SolverTrace trace;
  std::size_t iterations_run = 0;
  std::size_t backtracks_total = 0;
};

/// Called with (t, W⁽ᵗ⁾, Ω⁽ᵗ⁾) for every recorded iterate, t = 0 included.
using IterateObserver = std::function<void(std::size_t, const JointParams&)>;

/// Gradient descent with hard thresholding on the full sample.
///
/// The initial pair is thresholded first (supp on W, supp_sym on Ω), then
/// each iteration takes simultaneous gradient steps from (W⁽ᵗ⁾, Ω⁽ᵗ⁾) and
/// re-thresholds. A thresholded Ω that fails the SPD check is recomputed with
/// η₂ halved, at most `backtrack_max` times per iteration.
FitResult gdht_fit(const Dataset& data, const JointParams& init, const SolverConfig& cfg,
                   const GroundTruth* truth = nullptr, const IterateObserver& observer = {});

/// Resampling variant: rows are shuffled with `seed`, cut into T contiguous
/// slices of floor(n/T) rows (remainder dropped), and iteration t computes
/// both gradients on slice t alone. Rows within a slice keep their original
/// relative order.
FitResult gdht_fit_resampled(const Dataset& data, const JointParams& init,
                             const SolverConfig& cfg, std::uint64_t seed,
                             const GroundTruth* truth = nullptr,
                             const IterateObserver& observer = {});

/// Row indices of each resampling slice.
std::vector<std::vector<std::size_t>> resampling_slices(std::size_t n, std::size_t slices,
                                                        std::uint64_t seed);

struct StepSizes {
  double eta1;
  double eta2;
};

/// η₁ = 2ντ / (2ν²τ + 1),  η₂ = 1568R² / (2401R⁴ + 256).
StepSizes suggest_step_sizes(const TheoryConstants& tc);

/// ceil(max(100/9, 16/(1/ρ − 1)²) · s*) for each budget, clamped to the valid ranges.
SparsityBudget suggest_sparsity(std::size_t s1_star, std::size_t s2_star, double rho,
                                std::size_t d, std::size_t m);

}  // namespace gdht
