#include "screwkit/scalar_search.hpp"

#include <algorithm>
#include <cmath>

namespace screwkit {

ScalarMinimum minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                              int grid_points, double tol) {
  if (hi < lo) std::swap(lo, hi);
  const int n = std::max(grid_points, 2);
  const double step = (hi - lo) / (n - 1);
  int best = 0;
  double best_value = f(lo);
  for (int i = 1; i < n; ++i) {
    const double x = i == n - 1 ? hi : lo + step * i;
    const double v = f(x);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double best_x = best == n - 1 ? hi : lo + step * best;
  double a = std::max(lo, best_x - step);
  double b = std::min(hi, best_x + step);

  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int iter = 0; iter < 200 && (b - a) > tol; ++iter) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  ScalarMinimum out{best_x, best_value};
  const double mid = 0.5 * (a + b);
  for (const auto& [x, v] : {std::pair{c, fc}, std::pair{d, fd}, std::pair{mid, f(mid)}}) {
    if (v < out.value) out = {x, v};
  }
  return out;
}

}  // namespace screwkit
