#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cwx/quotient.hpp"

using namespace cwx;

TEST_CASE("g on a few classes") {
  SphereMap g;
  SpherePoint p = g.apply(sphere_canon(TorusPoint(0.5, 0.0)));
  CHECK(p == sphere_canon(TorusPoint(0.0, 0.5)));
  CHECK(g.inverse(p) == sphere_canon(TorusPoint(0.5, 0.0)));
  CHECK(g.apply(sphere_canon(TorusPoint(0.0, 0.0))) == sphere_canon(TorusPoint(0.0, 0.0)));
}

TEST_CASE("cone points are permuted") {
  SphereMap g;
  auto cones = cone_points();
  std::vector<SpherePoint> images;
  for (const SpherePoint& c : cones) {
    CHECK(c.is_cone_point());
    SpherePoint im = g.apply(c);
    CHECK(std::find(cones.begin(), cones.end(), im) != cones.end());
    images.push_back(im);
  }
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j) CHECK(!(images[i] == images[j]));
}

TEST_CASE("q conjugates f to g") {
  AnosovMap f;
  SphereMap g(f);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    TorusPoint p(u(rng), u(rng));
    CHECK(sphere_dist(sphere_canon(f.apply(p)), g.apply(sphere_canon(p))) < 1e-15);
  }
}

TEST_CASE("exact sphere points") {
  AnosovMap f;
  SphereMap g(f);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    ExactTorusPoint p(TorusPoint(u(rng), u(rng)));
    ExactSpherePoint s = ExactSpherePoint::canon(p);
    // Antipodes are exact on the grid, so canonicalization is a true class function.
    CHECK(ExactSpherePoint::canon(p.antipode()) == s);
    CHECK(g.inverse(g.apply(s)) == s);
    CHECK(sphere_dist(g.apply(s).to_sphere(), g.apply(s.to_sphere())) < 1e-15);
  }
  ExactSpherePoint a = ExactSpherePoint::canon(ExactTorusPoint(TorusPoint(0.1, 0.0)));
  ExactSpherePoint b = ExactSpherePoint::canon(ExactTorusPoint(TorusPoint(0.85, 0.0)));
  CHECK(distance(a, b) == doctest::Approx(0.05));
  CHECK(distance(midpoint(a, b), a) == doctest::Approx(0.025));
}

TEST_CASE("unstable arc grows past xi") {
  SphereMap g;
  const double xi = 0.02;
  int limit = static_cast<int>(std::ceil(std::log(xi / 1e-3) / g.base().log_lambda())) + 2;
  auto arc = sphere_unstable_arc(g, TorusPoint(0.2, 0.3), 1e-3, 1e-4);
  CHECK(chain_diam(arc) == doctest::Approx(1e-3).epsilon(1e-9));
  StabilityReport r = xi_stability_test(sphere_dynamics(g), arc, xi, limit, {1e-4, 1000000});
  REQUIRE(r.first_violation);
  CHECK(std::abs(*r.first_violation) <= limit);
  CHECK(*r.first_violation == 4);
}

TEST_CASE("sphere family and cw evidence") {
  SphereMap g;
  auto family = random_sphere_family(g, 30, 11, 1e-4);
  CHECK(family.size() == 30);
  for (const auto& c : family) CHECK(chain_diam(c) >= 1e-3);
  auto again = random_sphere_family(g, 30, 11, 1e-4);
  CHECK(again[7].pts() == family[7].pts());
  CwEvidenceReport rep = cw_evidence_sphere(g, 0.02, family, 6, 1e-3, {1e-4, 1000000});
  CHECK(rep.tested == 30);
  CHECK(rep.all_violated);
  CHECK(rep.max_first_violation <= 6);
  // A point chain is below the floor and excluded.
  std::vector<Chain<SpherePoint>> dot{Chain<SpherePoint>({sphere_canon(TorusPoint(0.3, 0.3))}, 1e-4)};
  CwEvidenceReport none = cw_evidence_sphere(g, 0.02, dot, 6);
  CHECK(none.excluded == 1);
  CHECK(none.tested == 0);
  CHECK_THROWS_AS(random_sphere_family(g, 3, 1, 1e-4, 0.2, 0.3), InvalidInput);
}
