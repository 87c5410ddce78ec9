#pragma once

// Pseudo-orbits of the Anosov map and of its sphere quotient, the closed-form
// shadowing solver for the linear map, exact verification on a fine dyadic
// grid, and the lift-shadow-project pipeline for the sphere.

#include <cstdint>
#include <vector>

#include "cwx/hyperbolic.hpp"
#include "cwx/quotient.hpp"

namespace cwx {

template <class P>
struct PseudoOrbit {
  std::vector<P> pts;
  double delta = 0;
};

struct TorusShadow {
  TorusPoint point;        ///< nearest double to the shadowing point
  ExactTorusPoint exact;   ///< the verified shadowing point
  double eps_achieved = 0;
  double eps_bound = 0;
};

struct SphereShadow {
  SpherePoint point;
  ExactTorusPoint exact_lift;
  double eps_achieved = 0;
  double eps_bound = 0;
};

/// Largest dist(f(x_k), x_{k+1}).
double pseudo_orbit_defect(const AnosovMap& f, const PseudoOrbit<TorusPoint>& po);
double pseudo_orbit_defect(const SphereMap& g, const PseudoOrbit<SpherePoint>& po);

/// x_{k+1} = f(x_k) + noise, noise uniform in the disk of radius 0.99 delta; `length` points.
PseudoOrbit<TorusPoint> make_pseudo_orbit(const AnosovMap& f, const TorusPoint& x0, int length, double delta,
                                          std::uint64_t seed);
PseudoOrbit<SpherePoint> make_pseudo_orbit(const SphereMap& g, const SpherePoint& y0, int length, double delta,
                                           std::uint64_t seed);

/// delta sqrt(1 + lambda^2) / (lambda - 1): the unstable deviation is bounded by
/// delta/(lambda - 1), the stable one by delta lambda/(lambda - 1), and the two
/// are orthogonal.
double shadow_eps_bound(double delta, double lambda);

/// Longest pseudo-orbit the exact grid can verify.
inline constexpr int kMaxShadowLength = 600;

/// Shadowing point of a torus pseudo-orbit of the unperturbed map. The
/// unstable correction sums future errors with weights lambda^-(j+1); the free
/// end values (stable at time 0, unstable at the last step) are chosen to
/// minimize the largest deviation.
/// Throws UnwrapError when delta >= 1/4 or a step error reaches 1/4.
TorusShadow shadow_solve(const AnosovMap& f, const PseudoOrbit<TorusPoint>& po);

struct VerifyResult {
  bool ok = false;
  double max_deviation = 0;
};

/// Follows the exact orbit of x and checks dist(f^n(x), x_n) <= eps over the window.
VerifyResult shadow_verify(const AnosovMap& f, const PseudoOrbit<TorusPoint>& po, const ExactTorusPoint& x,
                           double eps);
VerifyResult shadow_verify(const AnosovMap& f, const PseudoOrbit<TorusPoint>& po, const TorusPoint& x, double eps);
/// Sphere metric; x is a torus lift of the candidate sphere point.
VerifyResult shadow_verify(const SphereMap& g, const PseudoOrbit<SpherePoint>& po, const ExactTorusPoint& x,
                           double eps);

/// For the antipodal quotient q, q(B_rho(x)) contains B_rho(q(x)).
double openness_modulus(double rho);

/// x_0 = rep(y_0); x_{k+1} is the lift of y_{k+1} closer to f(x_k).
PseudoOrbit<TorusPoint> lift_pseudo_orbit(const SphereMap& g, const PseudoOrbit<SpherePoint>& po);

SphereShadow sphere_shadow(const SphereMap& g, const PseudoOrbit<SpherePoint>& po);

}  // namespace cwx
