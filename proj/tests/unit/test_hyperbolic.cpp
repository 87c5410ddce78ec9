#include <doctest.h>

#include <cmath>
#include <random>

#include "cwx/hyperbolic.hpp"

using namespace cwx;

TEST_CASE("integer matrix action mod 1") {
  AnosovMap f;
  TorusPoint p = f.apply(TorusPoint(0.5, 0.5));
  CHECK(p.x() == 0.5);
  CHECK(p.y() == 0.0);
  TorusPoint q = f.apply(TorusPoint(0.5, 0.0));
  CHECK(q.x() == 0.0);
  CHECK(q.y() == 0.5);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    TorusPoint r(u(rng), u(rng));
    CHECK(torus_dist(f.inverse(f.apply(r)), r) < 1e-15);
  }
}

TEST_CASE("eigen data of [[2,1],[1,1]]") {
  AnosovMap f;
  double lambda = (3 + std::sqrt(5.0)) / 2;
  CHECK(f.lambda() == doctest::Approx(lambda).epsilon(1e-15));
  CHECK(f.log_lambda() == doctest::Approx(0.9624236501192069));
  PlanePoint eu = f.unstable(), es = f.stable();
  CHECK(norm(f.apply_linear(eu) - lambda * eu) < 1e-14);
  CHECK(norm(f.apply_linear(es) - (1 / lambda) * es) < 1e-15);
  CHECK(dot(eu, es) == doctest::Approx(0.0));
  CHECK(eu.x * es.y - eu.y * es.x == doctest::Approx(1.0));
  CHECK_THROWS_AS(AnosovMap(1, 1, 0, 1), InvalidInput);
}

TEST_CASE("diagonal model") {
  LinearModel t;
  PlanePoint p = t.apply({1, 1});
  CHECK(p.x == doctest::Approx(2.6180339887498949));
  CHECK(p.y == doctest::Approx(0.3819660112501051));
  // y = kx goes into y = k lambda^-2 x.
  for (double k : {0.3, 1.0, 7.0}) {
    PlanePoint q = t.apply({0.2, 0.2 * k});
    CHECK(q.y / q.x == doctest::Approx(k / (t.lambda() * t.lambda())));
  }
}

TEST_CASE("hyperbolic coordinates") {
  PlanePoint p = from_hyper({2.0, 0.0});
  CHECK(p.x == doctest::Approx(std::sqrt(2.0)));
  CHECK(p.y == doctest::Approx(std::sqrt(2.0)));
  LinearModel t;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  for (int i = 0; i < 1000; ++i) {
    PlanePoint q{u(rng), u(rng)};
    HyperCoord h = to_hyper(q), ht = to_hyper(t.apply(q));
    CHECK(ht.u == doctest::Approx(h.u).epsilon(1e-14));
    CHECK(ht.v == doctest::Approx(h.v - t.log_lambda()).epsilon(1e-13));
    PlanePoint back = from_hyper(h);
    CHECK(norm(back - q) < 1e-14 * norm(q) + 1e-15);
  }
  CHECK_THROWS(to_hyper({-1.0, 1.0}));
}

TEST_CASE("eigen-chart conjugates T to f") {
  AnosovMap f;
  EigenChart phi(f);
  LinearModel t(f.lambda());
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-0.07, 0.07);
  double worst = 0;
  for (int i = 0; i < 10000; ++i) {
    PlanePoint p{u(rng), u(rng)};
    if (norm(t.apply(p)) >= phi.radius()) continue;
    worst = std::max(worst, torus_dist(f.apply(phi.to_torus(p)), phi.to_torus(t.apply(p))));
  }
  CHECK(worst < 1e-12);
  PlanePoint q{0.01, -0.02};
  CHECK(norm(phi.from_torus(phi.to_torus(q)) - q) < 1e-15);
  CHECK(!phi.try_from_torus(TorusPoint(0.5, 0.5)).has_value());
}

TEST_CASE("exact grid points follow the integer matrix") {
  AnosovMap f;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    TorusPoint p(u(rng), u(rng));
    ExactTorusPoint e(p);
    CHECK(e.to_torus() == p);
    CHECK(e.apply(f).inverse(f) == e);
    CHECK(e.antipode().antipode() == e);
    CHECK(torus_dist(e.apply(f).to_torus(), f.apply(p)) < 1e-15);
  }
  // A hundred forward steps and back returns to the starting word exactly.
  ExactTorusPoint e(TorusPoint(0.3, 0.6));
  ExactTorusPoint w = e;
  for (int k = 0; k < 100; ++k) w = w.apply(f);
  for (int k = 0; k < 100; ++k) w = w.inverse(f);
  CHECK(w == e);
}

TEST_CASE("exact grid distance and midpoint") {
  ExactTorusPoint a(TorusPoint(0.95, 0.5)), b(TorusPoint(0.05, 0.5));
  CHECK(distance(a, b) == doctest::Approx(0.1));
  ExactTorusPoint m = midpoint(a, b);
  CHECK(distance(m, a) == doctest::Approx(0.05));
  CHECK(distance(m, b) == doctest::Approx(0.05));
  CHECK(m.to_torus().x() < 1e-15);
  const ExactTorusPoint v[] = {a, b};
  auto c = Chain<ExactTorusPoint>::from_polyline(v, 1e-3);
  CHECK(chain_diam(c) == doctest::Approx(0.1));
}
