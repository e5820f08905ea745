#pragma once

#include <cstddef>
#include <functional>

namespace phasegrating::numerics {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  std::size_t max_subdivisions = 2000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool used_fallback = false;
};

// Globally adaptive 15-point Gauss-Kronrod. If the error target is not met within
// max_subdivisions, a panel-doubling Simpson rule is tried; if that also fails a
// QuadratureError carrying the best estimate and its error bound is thrown.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& options = {});

}  // namespace phasegrating::numerics
