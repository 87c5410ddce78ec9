#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cwx/shadowing.hpp"
#include "support/shadow_oracle.hpp"

using namespace cwx;

namespace {

const double kLambda = (3 + std::sqrt(5.0)) / 2;

// x_{k+1} = f(x_k) + errs[k].
PseudoOrbit<TorusPoint> orbit_with_errors(const AnosovMap& f, TorusPoint x0, const std::vector<PlanePoint>& errs,
                                          double delta) {
  PseudoOrbit<TorusPoint> po{{x0}, delta};
  for (PlanePoint e : errs) po.pts.push_back(TorusPoint(f.apply(po.pts.back()).lift() + e));
  return po;
}

}  // namespace

TEST_CASE("shadow bound constant") {
  CHECK(shadow_eps_bound(1e-4, kLambda) == doctest::Approx(std::sqrt(3.0) * 1e-4).epsilon(1e-12));
  CHECK(2e-4 / (kLambda - 1) == doctest::Approx(1.236e-4).epsilon(1e-3));
}

TEST_CASE("pseudo-orbit generator respects delta") {
  AnosovMap f;
  auto po = make_pseudo_orbit(f, TorusPoint(0.2, 0.7), 200, 1e-4, 3);
  CHECK(po.pts.size() == 200);
  CHECK(pseudo_orbit_defect(f, po) < 1e-4);
  CHECK(pseudo_orbit_defect(f, po) > 0.5e-4);
  auto again = make_pseudo_orbit(f, TorusPoint(0.2, 0.7), 200, 1e-4, 3);
  CHECK(again.pts == po.pts);
}

TEST_CASE("single unstable kick") {
  AnosovMap f;
  const double d = 0.99e-3;
  for (int k = 0; k < 5; ++k) {
    std::vector<PlanePoint> errs(5, PlanePoint{0, 0});
    errs[static_cast<std::size_t>(k)] = d * f.unstable();
    auto po = orbit_with_errors(f, TorusPoint(0.31, 0.47), errs, 1e-3);
    TorusShadow s = shadow_solve(f, po);
    double a0 = dot(torus_delta(po.pts[0], s.point), f.unstable());
    CHECK(std::abs(a0 - d * std::pow(kLambda, -(k + 1))) < 1e-3);
    // The finite window shifts the optimum only by a fraction of the closed form.
    CHECK(a0 == doctest::Approx(d * std::pow(kLambda, -(k + 1))).epsilon(0.2));
    oracle::Minimizer m = oracle::brute_force_shadow(po.pts, 3e-3);
    CHECK(torus_dist(s.point, TorusPoint(m.start)) < 1e-3);
  }
}

TEST_CASE("solver agrees with the brute-force oracle on short windows") {
  AnosovMap f;
  const double delta = 1e-3;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_gap = 0, worst_excess = 0;
  for (int i = 0; i < 100; ++i) {
    int length = 2 + i % 5;
    auto po = make_pseudo_orbit(f, TorusPoint(u(rng), u(rng)), length, delta, 1000 + i);
    TorusShadow s = shadow_solve(f, po);
    oracle::Minimizer m = oracle::brute_force_shadow(po.pts, 3 * delta);
    worst_gap = std::max(worst_gap, torus_dist(s.point, TorusPoint(m.start)));
    worst_excess = std::max(worst_excess, s.eps_achieved - m.max_dev);
    CHECK(shadow_verify(f, po, s.exact, s.eps_bound).ok);
  }
  CHECK(worst_gap < 1e-3);
  // The solver optimizes the same objective, so it never loses to the grid by more than the grid step.
  CHECK(worst_excess < 1e-6);
}

TEST_CASE("the 2 delta / (lambda - 1) constant is not an upper bound") {
  // Equal stable-direction errors: every shadow drifts to lambda/(lambda - 1) times the error.
  AnosovMap f;
  const double delta = 1e-3;
  std::vector<PlanePoint> errs(5, 0.99 * delta * f.stable());
  auto po = orbit_with_errors(f, TorusPoint(0.6, 0.2), errs, delta);
  oracle::Minimizer m = oracle::brute_force_shadow(po.pts, 3 * delta);
  CHECK(m.max_dev > 2 * delta / (kLambda - 1));
  CHECK(m.max_dev < shadow_eps_bound(delta, kLambda));
  TorusShadow s = shadow_solve(f, po);
  CHECK(s.eps_achieved == doctest::Approx(m.max_dev).epsilon(1e-3));

  std::vector<PlanePoint> long_errs(199, 0.99e-4 * f.stable());
  auto lp = orbit_with_errors(f, TorusPoint(0.6, 0.2), long_errs, 1e-4);
  TorusShadow ls = shadow_solve(f, lp);
  CHECK(ls.eps_achieved > 2e-4 / (kLambda - 1));
  CHECK(shadow_verify(f, lp, ls.exact, ls.eps_bound).ok);
}

TEST_CASE("long pseudo-orbits are shadowed within sqrt(3) delta") {
  AnosovMap f;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    auto po = make_pseudo_orbit(f, TorusPoint(u(rng), u(rng)), 200, 1e-4, 500 + i);
    TorusShadow s = shadow_solve(f, po);
    VerifyResult v = shadow_verify(f, po, s.exact, s.eps_bound);
    CHECK(v.ok);
    CHECK(v.max_deviation == doctest::Approx(s.eps_achieved));
    CHECK(s.eps_achieved <= std::sqrt(3.0) * 1e-4);
  }
}

TEST_CASE("verifier rejects a point pushed along e_u") {
  AnosovMap f;
  auto po = make_pseudo_orbit(f, TorusPoint(0.4, 0.1), 10, 1e-4, 2);
  TorusShadow s = shadow_solve(f, po);
  double eps = s.eps_bound;
  TorusPoint pushed(s.point.lift() + 10 * eps * f.unstable());
  CHECK(!shadow_verify(f, po, pushed, eps).ok);
  // A push of eps/10 also fails by the last step of a long enough window.
  TorusPoint nudged(s.point.lift() + 0.1 * eps * f.unstable());
  CHECK(!shadow_verify(f, po, nudged, eps).ok);
}

TEST_CASE("solver input limits") {
  AnosovMap f;
  auto po = make_pseudo_orbit(f, TorusPoint(0.4, 0.1), 10, 1e-4, 2);
  po.delta = 0.3;
  CHECK_THROWS_AS(shadow_solve(f, po), UnwrapError);
  auto jump = make_pseudo_orbit(f, TorusPoint(0.4, 0.1), 10, 1e-4, 2);
  jump.pts[5] = TorusPoint(jump.pts[5].lift() + PlanePoint{0.3, 0.0});
  CHECK_THROWS_AS(shadow_solve(f, jump), UnwrapError);
  auto longer = make_pseudo_orbit(f, TorusPoint(0.4, 0.1), kMaxShadowLength + 1, 1e-4, 2);
  CHECK_THROWS_AS(shadow_solve(f, longer), DomainError);
}

TEST_CASE("openness of the antipodal quotient") {
  CHECK(openness_modulus(0.1) == 0.1);
  CHECK_THROWS(openness_modulus(-1.0));
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int seen = 0;
  for (int i = 0; i < 10000; ++i) {
    TorusPoint x(u(rng), u(rng));
    SpherePoint y = sphere_canon(TorusPoint(u(rng), u(rng)));
    if (sphere_dist(sphere_canon(x), y) > 0.1) continue;
    ++seen;
    CHECK(std::min(torus_dist(x, y.rep()), torus_dist(x, y.other_lift())) <= 0.1 + 1e-15);
  }
  CHECK(seen > 100);
}

TEST_CASE("lifting a projected pseudo-orbit recovers it up to antipody") {
  AnosovMap f;
  SphereMap g(f);
  for (int i = 0; i < 20; ++i) {
    auto po = make_pseudo_orbit(f, TorusPoint(0.05 * i, 0.3), 100, 1e-4, 40 + i);
    PseudoOrbit<SpherePoint> sp{{}, po.delta};
    for (const TorusPoint& p : po.pts) sp.pts.push_back(sphere_canon(p));
    auto lifted = lift_pseudo_orbit(g, sp);
    CHECK(pseudo_orbit_defect(f, lifted) < 1e-4);
    bool same = true, flipped = true;
    for (std::size_t k = 0; k < po.pts.size(); ++k) {
      same = same && torus_dist(lifted.pts[k], po.pts[k]) < 1e-15;
      flipped = flipped && torus_dist(lifted.pts[k], antipode(po.pts[k])) < 1e-15;
    }
    CHECK((same || flipped));
  }
}

TEST_CASE("sphere pipeline") {
  AnosovMap f;
  SphereMap g(f);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    auto po = make_pseudo_orbit(g, sphere_canon(TorusPoint(u(rng), u(rng))), 200, 1e-4, 800 + i);
    CHECK(pseudo_orbit_defect(g, po) < 1e-4);
    SphereShadow s = sphere_shadow(g, po);
    CHECK(s.eps_achieved <= s.eps_bound);
    CHECK(shadow_verify(g, po, s.exact_lift, s.eps_bound).ok);
  }
}
