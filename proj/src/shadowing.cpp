#include "cwx/shadowing.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <fmt/format.h>

namespace cwx {

namespace {

namespace mp = boost::multiprecision;
using Real = mp::number<mp::cpp_bin_float<1152, mp::digit_base_2>, mp::et_off>;
using Word = ExactTorusPoint::Word;

struct RealPoint {
  Real x, y;
};

Real to_grid_fraction(const Real& v) { return v - floor(v); }

Word to_word(const Real& unit_fraction) {
  mp::cpp_int big = static_cast<mp::cpp_int>(round(ldexp(unit_fraction, static_cast<int>(ExactTorusPoint::kBits))));
  mp::cpp_int modulus = mp::cpp_int(1) << ExactTorusPoint::kBits;
  big %= modulus;
  if (big < 0) big += modulus;
  return static_cast<Word>(big);
}

PlanePoint noise(std::mt19937_64& rng, double delta) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double r = 0.99 * delta * std::sqrt(unit(rng));
  double t = 2.0 * std::numbers::pi * unit(rng);
  return {r * std::cos(t), r * std::sin(t)};
}

// Minimizes a convex function on [lo, hi] by golden-section search.
template <class F>
double golden_min(F cost, double lo, double hi) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = cost(c), fd = cost(d);
  for (int i = 0; i < 120 && b - a > 0.0; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = cost(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = cost(d);
    }
  }
  return fc <= fd ? c : d;
}

}  // namespace

double pseudo_orbit_defect(const AnosovMap& f, const PseudoOrbit<TorusPoint>& po) {
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < po.pts.size(); ++k)
    worst = std::max(worst, torus_dist(f.apply(po.pts[k]), po.pts[k + 1]));
  return worst;
}

double pseudo_orbit_defect(const SphereMap& g, const PseudoOrbit<SpherePoint>& po) {
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < po.pts.size(); ++k)
    worst = std::max(worst, sphere_dist(g.apply(po.pts[k]), po.pts[k + 1]));
  return worst;
}

PseudoOrbit<TorusPoint> make_pseudo_orbit(const AnosovMap& f, const TorusPoint& x0, int length, double delta,
                                          std::uint64_t seed) {
  if (length < 1) throw InvalidInput("make_pseudo_orbit: length must be at least 1");
  if (!(delta > 0.0)) throw InvalidInput("make_pseudo_orbit: delta must be positive");
  std::mt19937_64 rng(seed);
  PseudoOrbit<TorusPoint> po{{x0}, delta};
  for (int k = 1; k < length; ++k) po.pts.push_back(TorusPoint(f.apply(po.pts.back()).lift() + noise(rng, delta)));
  return po;
}

PseudoOrbit<SpherePoint> make_pseudo_orbit(const SphereMap& g, const SpherePoint& y0, int length, double delta,
                                           std::uint64_t seed) {
  if (length < 1) throw InvalidInput("make_pseudo_orbit: length must be at least 1");
  if (!(delta > 0.0)) throw InvalidInput("make_pseudo_orbit: delta must be positive");
  std::mt19937_64 rng(seed);
  PseudoOrbit<SpherePoint> po{{y0}, delta};
  for (int k = 1; k < length; ++k) {
    TorusPoint next(g.apply(po.pts.back()).rep().lift() + noise(rng, delta));
    po.pts.push_back(sphere_canon(next));
  }
  return po;
}

double shadow_eps_bound(double delta, double lambda) {
  return delta * std::sqrt(1.0 + lambda * lambda) / (lambda - 1.0);
}

TorusShadow shadow_solve(const AnosovMap& f, const PseudoOrbit<TorusPoint>& po) {
  const std::size_t n = po.pts.size();
  if (n == 0) throw InvalidInput("shadow_solve: empty pseudo-orbit");
  if (!(po.delta > 0.0)) throw InvalidInput("shadow_solve: delta must be positive");
  if (n > static_cast<std::size_t>(kMaxShadowLength))
    throw DomainError(fmt::format("shadow_solve: orbits longer than {} exceed the exact verification grid",
                                  kMaxShadowLength));
  if (po.delta >= 0.25)
    throw UnwrapError(fmt::format("shadow_solve: delta = {} is not below 1/4; nearest-lift unwrapping is "
                                  "ambiguous, use a smaller delta",
                                  po.delta));

  const double lambda = f.lambda();
  const PlanePoint eu = f.unstable(), es = f.stable();
  std::vector<double> au(n, 0.0), s(n, 0.0);
  std::vector<double> err_u(n, 0.0), err_s(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    PlanePoint e = torus_delta(f.apply(po.pts[k]), po.pts[k + 1]);
    if (std::abs(e.x) >= 0.25 || std::abs(e.y) >= 0.25)
      throw UnwrapError(fmt::format("shadow_solve: step error at k = {} reaches 1/4; use a smaller delta or a "
                                    "shorter orbit",
                                    k));
    err_u[k] = dot(e, eu);
    err_s[k] = dot(e, es);
  }
  // Deviation of the shadow orbit from the pseudo-orbit in eigen-coordinates:
  //   a_{k+1} = lambda a_k - eu_k,   b_{k+1} = b_k / lambda - es_k.
  for (std::size_t k = n - 1; k-- > 0;) au[k] = (au[k + 1] + err_u[k]) / lambda;
  for (std::size_t k = 0; k + 1 < n; ++k) s[k + 1] = s[k] / lambda + err_s[k];
  // Both ends of a finite window are free: the stable deviation b_0 and the
  // unstable deviation a_{n-1}. The largest deviation is jointly convex in them.
  std::vector<double> grow(n, 0.0), decay(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    grow[k] = std::pow(lambda, static_cast<double>(k) - static_cast<double>(n - 1));
    decay[k] = std::pow(lambda, -static_cast<double>(k));
  }
  // Steps far from both ends do not feel the free values at double precision;
  // on long windows the two free values then decouple.
  constexpr double kNegligible = 1e-18;
  std::vector<std::size_t> active;
  double frozen = 0.0;
  bool coupled = false;
  for (std::size_t k = 0; k < n; ++k) {
    bool early = decay[k] > kNegligible, late = grow[k] > kNegligible;
    coupled = coupled || (early && late);
    if (early || late) active.push_back(k);
    else frozen = std::max(frozen, au[k] * au[k] + s[k] * s[k]);
  }
  auto sq = [](double x, double y) { return x * x + y * y; };
  auto deviation = [&](double a_end, double b0) {
    double worst = frozen;
    for (std::size_t k : active) worst = std::max(worst, sq(au[k] + grow[k] * a_end, decay[k] * b0 - s[k]));
    return worst;
  };
  double span = po.delta * (1.0 + lambda) / (lambda - 1.0);
  auto best_b0 = [&](double a_end) {
    return golden_min([&](double b0) { return deviation(a_end, b0); }, -span, span);
  };
  double a_end = 0.0, b0 = 0.0;
  if (coupled) {
    a_end = golden_min([&](double a) { return deviation(a, best_b0(a)); }, -span, span);
    b0 = best_b0(a_end);
  } else {
    // Each free value only sees its own end; optimize them separately so a
    // plateau from the other end cannot hide the minimizer.
    auto part = [&](bool early_part, double a, double b) {
      double worst = 0.0;
      for (std::size_t k : active) {
        if ((decay[k] > kNegligible) == early_part) worst = std::max(worst, sq(au[k] + grow[k] * a, decay[k] * b - s[k]));
      }
      return worst;
    };
    b0 = golden_min([&](double b) { return part(true, 0.0, b); }, -span, span);
    a_end = golden_min([&](double a) { return part(false, a, 0.0); }, -span, span);
  }

  // The unstable correction is recomputed in extended precision: its error is
  // amplified by lambda^n along the orbit.
  const auto& m = f.entries();
  Real t = m[0] + m[3];
  Real lam = (t + sqrt(t * t - 4)) / 2;
  Real ux = m[1], uy = lam - m[0];
  Real un = sqrt(ux * ux + uy * uy);
  ux /= un;
  uy /= un;
  Real a0 = a_end;
  for (std::size_t k = n - 1; k-- > 0;) {
    RealPoint x{po.pts[k].x(), po.pts[k].y()};
    RealPoint y{po.pts[k + 1].x(), po.pts[k + 1].y()};
    Real ex = y.x - (m[0] * x.x + m[1] * x.y);
    Real ey = y.y - (m[2] * x.x + m[3] * x.y);
    ex -= round(ex);
    ey -= round(ey);
    a0 = (a0 + ex * ux + ey * uy) / lam;
  }
  // The stable vector must be the extended-precision one as well.
  Real zx = Real(po.pts[0].x()) + a0 * ux - Real(b0) * uy;
  Real zy = Real(po.pts[0].y()) + a0 * uy + Real(b0) * ux;
  ExactTorusPoint exact(to_word(to_grid_fraction(zx)), to_word(to_grid_fraction(zy)));

  TorusShadow out{exact.to_torus(), exact, 0.0, shadow_eps_bound(po.delta, lambda)};
  out.eps_achieved = shadow_verify(f, po, exact, out.eps_bound).max_deviation;
  return out;
}

VerifyResult shadow_verify(const AnosovMap& f, const PseudoOrbit<TorusPoint>& po, const ExactTorusPoint& x,
                           double eps) {
  VerifyResult r;
  ExactTorusPoint z = x;
  for (std::size_t k = 0; k < po.pts.size(); ++k) {
    r.max_deviation = std::max(r.max_deviation, norm(z.delta_to(po.pts[k])));
    if (k + 1 < po.pts.size()) z = z.apply(f);
  }
  r.ok = r.max_deviation <= eps;
  return r;
}

VerifyResult shadow_verify(const AnosovMap& f, const PseudoOrbit<TorusPoint>& po, const TorusPoint& x, double eps) {
  return shadow_verify(f, po, ExactTorusPoint(x), eps);
}

VerifyResult shadow_verify(const SphereMap& g, const PseudoOrbit<SpherePoint>& po, const ExactTorusPoint& x,
                           double eps) {
  VerifyResult r;
  ExactTorusPoint z = x;
  for (std::size_t k = 0; k < po.pts.size(); ++k) {
    const SpherePoint& y = po.pts[k];
    double d = std::min(norm(z.delta_to(y.rep())), norm(z.delta_to(y.other_lift())));
    r.max_deviation = std::max(r.max_deviation, d);
    if (k + 1 < po.pts.size()) z = z.apply(g.base());
  }
  r.ok = r.max_deviation <= eps;
  return r;
}

double openness_modulus(double rho) {
  if (!(rho >= 0.0)) throw InvalidInput("openness_modulus: rho must be non-negative");
  return rho;
}

PseudoOrbit<TorusPoint> lift_pseudo_orbit(const SphereMap& g, const PseudoOrbit<SpherePoint>& po) {
  PseudoOrbit<TorusPoint> out{{}, po.delta};
  if (po.pts.empty()) return out;
  out.pts.push_back(po.pts.front().rep());
  for (std::size_t k = 1; k < po.pts.size(); ++k) {
    TorusPoint fx = g.base().apply(out.pts.back());
    const SpherePoint& y = po.pts[k];
    TorusPoint a = y.rep(), b = y.other_lift();
    out.pts.push_back(torus_dist(fx, a) <= torus_dist(fx, b) ? a : b);
  }
  return out;
}

SphereShadow sphere_shadow(const SphereMap& g, const PseudoOrbit<SpherePoint>& po) {
  TorusShadow t = shadow_solve(g.base(), lift_pseudo_orbit(g, po));
  SphereShadow out{sphere_canon(t.point), t.exact, 0.0, t.eps_bound};
  out.eps_achieved = shadow_verify(g, po, t.exact, t.eps_bound).max_deviation;
  return out;
}

}  // namespace cwx
