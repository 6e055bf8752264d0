#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "fever/numerics/autodiff.hpp"
#include "fever/numerics/param_set.hpp"

namespace fever::num {

using LossFn = std::function<Var(Tape&)>;

struct GradCheckOptions {
  double eps = 1e-4;
  /// Coordinates sampled per parameter; 0 checks every coordinate.
  std::size_t max_coords_per_param = 0;
  std::uint64_t seed = 7;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t coordinates_checked = 0;
};

/// Compares taped gradients of `loss` against central finite differences.
/// Relative error per coordinate is |a − n| / max(|a|, |n|, 1e-8).
/// `loss` must be deterministic and must bind parameters from `params`.
GradCheckResult grad_check(const LossFn& loss, ParamSet& params,
                           const GradCheckOptions& options = {});

}  // namespace fever::num
