#pragma once

// Brute-force shadowing oracle for short windows of the cat map [[2,1],[1,1]].
// It knows nothing about the eigen-splitting: it iterates candidate start
// points on the covering plane and grid-searches the largest deviation.

#include <algorithm>
#include <cmath>
#include <span>

#include "cwx/spaces.hpp"

namespace cwx::oracle {

inline double wrapped_gap(double a, double b) {
  double d = a - b;
  return d - std::round(d);
}

/// Largest torus distance between the orbit of the plane point y and xs.
inline double max_deviation(PlanePoint y, std::span<const TorusPoint> xs) {
  double worst = 0;
  for (const TorusPoint& x : xs) {
    worst = std::max(worst, std::hypot(wrapped_gap(y.x, x.x()), wrapped_gap(y.y, x.y())));
    y = {2 * y.x + y.y, y.x + y.y};
  }
  return worst;
}

struct Minimizer {
  PlanePoint start;
  double max_dev = 0;
};

// The objective is convex in the start point (a max of norms of affine maps
// while the window is short), so a one-dimensional golden-section search is exact.
template <class F>
double golden_min(F&& f, double lo, double hi, double* arg) {
  const double r = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi, c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 120 && b - a > 1e-16; ++it) {
    if (fc <= fd) {
      b = d, d = c, fd = fc, c = b - r * (b - a), fc = f(c);
    } else {
      a = c, c = d, fc = fd, d = a + r * (b - a), fd = f(d);
    }
  }
  *arg = fc <= fd ? c : d;
  return std::min(fc, fd);
}

/// Grid in x at resolution `step` over [x0 - half_width, x0 + half_width], each
/// node minimized exactly in y over the same half-width, then the best node
/// refined by a line search in x between its neighbours.
inline Minimizer brute_force_shadow(std::span<const TorusPoint> xs, double half_width, double step = 1e-4) {
  const PlanePoint c = xs.front().lift();
  auto slice = [&](double x, double* y_best) {
    return golden_min([&](double y) { return max_deviation({x, y}, xs); }, c.y - half_width, c.y + half_width,
                      y_best);
  };
  Minimizer best{c, max_deviation(c, xs)};
  const int k = static_cast<int>(std::ceil(half_width / step));
  double x_best = c.x;
  for (int i = -k; i <= k; ++i) {
    double x = c.x + i * step, y = 0;
    double d = slice(x, &y);
    if (d < best.max_dev) best = {{x, y}, d}, x_best = x;
  }
  double x = 0;
  golden_min([&](double t) { double y; return slice(t, &y); }, x_best - step, x_best + step, &x);
  double y = 0;
  double d = slice(x, &y);
  if (d < best.max_dev) best = {{x, y}, d};
  return best;
}

}  // namespace cwx::oracle
