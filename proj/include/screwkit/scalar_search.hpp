#pragma once

#include <functional>

namespace screwkit {

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
};

/// Minimizes f over [lo, hi]: evaluates `grid_points` evenly spaced seeds
/// (endpoints included), then golden-section search inside the bracket around
/// the best seed until the bracket is narrower than `tol`.
ScalarMinimum minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                              int grid_points, double tol);

}  // namespace screwkit
