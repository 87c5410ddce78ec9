#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cwx/perturbation.hpp"

using namespace cwx;

namespace {

const double kL = std::log((3 + std::sqrt(5.0)) / 2);

// Plane point with hyperbolic coordinates (u, v), written out independently of from_hyper.
PlanePoint hyp(double u, double v) { return {std::sqrt(u) * std::exp(-v), std::sqrt(u) * std::exp(v)}; }

// Level-0 T0 for points inside the pi-rotation disk: rotate about (1, L/2), then shear.
PlanePoint t0_inner_oracle(PlanePoint p) {
  double u = p.x * p.y, v = 0.5 * std::log(p.y / p.x);
  double ru = 2.0 - u, rv = kL - v;
  return hyp(ru, rv - kL);
}

}  // namespace

TEST_CASE("region geometry at level 0") {
  RegionSpec spec;
  CHECK(spec.max_corner_norm() == doctest::Approx(6.0).epsilon(1e-3));
  // Independent boundary sweep of E in plane coordinates.
  std::vector<PlanePoint> edge;
  const int k = 400;
  for (int i = 0; i <= k; ++i) {
    double s = static_cast<double>(i) / k;
    double u = 0.5 + 1.5 * s, v = -1.5 * kL + 2 * kL * s;
    edge.push_back(hyp(u, -1.5 * kL));
    edge.push_back(hyp(u, 0.5 * kL));
    edge.push_back(hyp(0.5, v));
    edge.push_back(hyp(2.0, v));
  }
  double d = 0;
  for (std::size_t i = 0; i < edge.size(); ++i)
    for (std::size_t j = i + 1; j < edge.size(); ++j) d = std::max(d, norm(edge[i] - edge[j]));
  CHECK(spec.diameter_e0() == doctest::Approx(d).epsilon(1e-5));
  CHECK(spec.diameter_e0() == doctest::Approx(5.612486).epsilon(1e-6));
}

TEST_CASE("region_locate") {
  RegionSpec spec;
  RegionLocation arc = region_locate({1.0, 1.0}, spec);
  CHECK(arc.level == 0);
  CHECK(arc.half == Half::Arc);
  CHECK(arc.d == Zone::Interior);
  for (int n = 0; n <= 20; ++n) {
    double s = std::ldexp(1.0, -n);
    RegionLocation loc = region_locate({s, s}, spec);
    CHECK(loc.level == n);
    CHECK(loc.d == Zone::Interior);
  }
  // On the hyperbola H_n the point sits on the shared band edge.
  RegionLocation h = region_locate({0.25, 0.5}, spec);
  CHECK(h.level == 2);
  CHECK(h.d == Zone::Boundary);
  CHECK(region_locate({-1.0, 1.0}, spec).d == Zone::Outside);
}

TEST_CASE("twist about (1, L/2)") {
  TwistParams tw;
  HyperCoord a = twist_tau({1.0, 0.0}, tw);
  CHECK(a.u == doctest::Approx(1.0));
  CHECK(a.v == doctest::Approx(kL));
  HyperCoord b = twist_tau({1.2, kL / 2}, tw);
  CHECK(b.u == doctest::Approx(0.8));
  CHECK(b.v == doctest::Approx(kL / 2));
  // Identity outside the support, inverse exact up to rounding inside.
  HyperCoord far = twist_tau({1.9, kL / 2}, tw);
  CHECK(far.u == 1.9);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi), rad(0, 0.49);
  for (int i = 0; i < 1000; ++i) {
    double t = ang(rng), r = rad(rng);
    HyperCoord h{1 + r * std::cos(t), kL / 2 + r * std::sin(t)};
    HyperCoord back = twist_tau_inverse(twist_tau(h, tw), tw);
    CHECK(std::hypot(back.u - h.u, back.v - h.v) < 1e-13);
    HyperCoord im = twist_tau(h, tw);
    CHECK(std::hypot(im.u - 1, im.v - kL / 2) == doctest::Approx(r).epsilon(1e-12));
  }
  TwistParams bad;
  bad.outer_radius = 0.4;
  CHECK_THROWS_AS(bad.validate(), GeometryGateError);
}

TEST_CASE("T0 against an independent composition") {
  PerturbedMap map;
  PlanePoint fixed = map.t0_apply({1.0, 1.0});
  CHECK(norm(fixed - PlanePoint{1.0, 1.0}) < 1e-14);
  PlanePoint p = hyp(1.2, kL / 2);
  CHECK(p.x == doctest::Approx(0.677).epsilon(1e-3));
  CHECK(p.y == doctest::Approx(1.772).epsilon(1e-3));
  PlanePoint q = map.t0_apply(p);
  CHECK(q.x == doctest::Approx(1.447).epsilon(1e-3));
  CHECK(q.y == doctest::Approx(0.553).epsilon(1e-3));
  CHECK(norm(q - t0_inner_oracle(p)) < 1e-13);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi), rad(0, 0.48);
  for (int i = 0; i < 500; ++i) {
    double t = ang(rng), r = rad(rng);
    PlanePoint s = hyp(1 + r * std::cos(t), kL / 2 + r * std::sin(t));
    CHECK(norm(map.t0_apply(s) - t0_inner_oracle(s)) < 1e-12);
  }
}

TEST_CASE("n0 from brute-force corner enumeration") {
  double worst = 0;
  for (double u : {0.5, 2.0})
    for (double v : {-1.5 * kL, -0.5 * kL, 0.5 * kL, 1.5 * kL}) worst = std::max(worst, norm(hyp(u, v)));
  int brute = 0;
  while (worst * std::ldexp(1.0, -brute) > 0.01) ++brute;
  CHECK(brute == 10);
  CHECK(compute_n0(ChartBoxes{}, RegionSpec{}) == brute);
  PerturbationConfig low;
  low.n0_override = 9;
  CHECK_THROWS_AS(PerturbedMap{low}, GeometryGateError);
}

TEST_CASE("fixed point ladder") {
  PerturbedMap map;
  REQUIRE(map.n0() == 10);
  for (int n = 10; n <= 18; ++n) {
    PlanePoint u = PerturbedMap::fixed_point(n);
    CHECK(map.apply(u) == u);
    CHECK(map.inverse(u) == u);
    CHECK(map.modifies(u));
  }
  // Below n0 the map is linear and u_9 moves.
  CHECK(!(map.apply(PerturbedMap::fixed_point(9)) == PerturbedMap::fixed_point(9)));
}

TEST_CASE("T~ equals T on the hyperbolas H_m and off the levels") {
  PerturbedMap map;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> v(-2.0, 2.0);
  for (int m = 10; m <= 16; ++m) {
    for (int i = 0; i < 200; ++i) {
      PlanePoint p = hyp(2.0 * std::ldexp(1.0, -2 * m), v(rng));
      CHECK(norm(map.apply(p) - map.model().apply(p)) == 0.0);
    }
  }
  PlanePoint out{-0.001, 0.002};
  CHECK(map.apply(out) == map.model().apply(out));
}

TEST_CASE("bijectivity") {
  PerturbedMap map;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.5, 2.0), v(-0.5 * kL, 1.5 * kL);
  std::uniform_int_distribution<int> lvl(10, 16);
  for (int i = 0; i < 5000; ++i) {
    int n = lvl(rng);
    PlanePoint p = PerturbedMap::from_level_coords({u(rng), v(rng)}, n);
    PlanePoint back = map.inverse(map.apply(p));
    CHECK(norm(back - p) <= 1e-12 * norm(p));
  }
}

TEST_CASE("area preservation") {
  PerturbedMap map;
  CHECK(t0_jacobian_error(map, 20000, 5) < 1e-6);
  std::vector<Rect> rects = default_test_rectangles(map, map.n0());
  REQUIRE(!rects.empty());
  PlaneMap fwd = [&](PlanePoint p) { return map.apply(p); };
  PlaneMap inv = [&](PlanePoint p) { return map.inverse(p); };
  const Rect& a = rects.front();
  MassCheck mc = monte_carlo_mass(fwd, inv, a, image_bounding_box(map, a, map.n0()),
                                  preimage_bounding_box(map, a, map.n0()), 200000, 6);
  CHECK(mc.image_within(3.0));
  CHECK(mc.preimage_within(3.0));
  // A map that doubles area is caught.
  PlaneMap twice = [](PlanePoint p) { return PlanePoint{2 * p.x, p.y}; };
  PlaneMap half = [](PlanePoint p) { return PlanePoint{p.x / 2, p.y}; };
  Rect big{a.x0, 2 * a.x1, a.y0, a.y1};
  MassCheck bad = monte_carlo_mass(twice, half, a, big, big, 200000, 7);
  CHECK(!bad.image_within(3.0));
  CHECK(jacobian_determinant(twice, {1, 1}, 1e-4) == doctest::Approx(2.0));
}

TEST_CASE("level C0 bound") {
  PerturbedMap map;
  for (int n = 10; n <= 14; ++n) {
    double dev = sampled_level_deviation(map, n, 10000, 8);
    CHECK(dev > 0.0);
    CHECK(dev <= map.c0_level_distance(n));
  }
  CHECK(map.c0_level_distance(10) == doctest::Approx(5.612486 / 1024).epsilon(1e-6));
}

TEST_CASE("g_pert is f outside the chart image of W and within delta of it") {
  PerturbedMap planar;
  AnosovMap f;
  PerturbedTorusMap g(planar, f);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0), w(-0.01, 0.01);
  double sup = 0, outside = 0;
  for (int i = 0; i < 20000; ++i) {
    // Half the samples land near the fixed point where the twist disks live.
    TorusPoint p = i % 2 ? TorusPoint(u(rng), u(rng)) : g.chart().to_torus({w(rng), w(rng)});
    double d = torus_dist(f.apply(p), g.apply(p));
    sup = std::max(sup, d);
    auto q = g.chart().try_from_torus(p);
    if (!q || !planar.boxes().in_w(*q)) outside = std::max(outside, d);
    CHECK(torus_dist(g.inverse(g.apply(p)), p) < 1e-12);
  }
  CHECK(sup > 0.0);
  CHECK(sup <= 0.02);
  CHECK(outside <= 1e-12);
  for (int n = 10; n <= 18; ++n) CHECK(torus_dist(g.apply(g.fixed_point(n)), g.fixed_point(n)) < 1e-12);
}
