#include "cwx/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace cwx {

ExactSpherePoint ExactSpherePoint::canon(const ExactTorusPoint& p) {
  ExactTorusPoint q = p.antipode();
  bool keep = p.x_word() < q.x_word() || (p.x_word() == q.x_word() && p.y_word() <= q.y_word());
  return ExactSpherePoint(keep ? p : q);
}

double distance(const ExactSpherePoint& a, const ExactSpherePoint& b) {
  return std::min(distance(a.rep(), b.rep()), distance(a.rep(), b.other_lift()));
}

ExactSpherePoint midpoint(const ExactSpherePoint& a, const ExactSpherePoint& b) {
  ExactTorusPoint near = distance(a.rep(), b.rep()) <= distance(a.rep(), b.other_lift()) ? b.rep() : b.other_lift();
  return ExactSpherePoint::canon(midpoint(a.rep(), near));
}

double chain_diam(const Chain<ExactSpherePoint>& c) { return pairwise_diameter<ExactSpherePoint>(c.pts()); }

DynamicalMap<ExactSpherePoint> sphere_exact_dynamics(const SphereMap& g) {
  return {[g](const ExactSpherePoint& s) { return g.apply(s); },
          [g](const ExactSpherePoint& s) { return g.inverse(s); }, "g"};
}

DynamicalMap<SpherePoint> sphere_dynamics(const SphereMap& g) {
  return {[g](const SpherePoint& s) { return g.apply(s); }, [g](const SpherePoint& s) { return g.inverse(s); },
          "g"};
}

std::array<SpherePoint, 4> cone_points() {
  return {sphere_canon(TorusPoint(0.0, 0.0)), sphere_canon(TorusPoint(0.5, 0.0)), sphere_canon(TorusPoint(0.0, 0.5)),
          sphere_canon(TorusPoint(0.5, 0.5))};
}

CwEvidenceReport cw_evidence_sphere(const SphereMap& g, double xi, const std::vector<Chain<SpherePoint>>& family,
                                    int horizon, double diam_floor, const PropagationOptions& opt) {
  if (!(xi > 0.0)) throw InvalidInput("cw_evidence_sphere: xi must be positive");
  if (!(diam_floor > 0.0)) throw InvalidInput("cw_evidence_sphere: diameter floor must be positive");
  CwEvidenceReport rep;
  rep.xi = xi;
  rep.horizon = horizon;
  rep.diam_floor = diam_floor;
  DynamicalMap<SpherePoint> dyn = sphere_dynamics(g);
  for (const Chain<SpherePoint>& c : family) {
    if (chain_diam(c) < diam_floor) {
      ++rep.excluded;
      continue;
    }
    ++rep.tested;
    StabilityReport r = xi_stability_test(dyn, c, xi, horizon, opt);
    rep.first_violation.push_back(r.first_violation);
    if (r.first_violation) {
      rep.max_first_violation = std::max(rep.max_first_violation, std::abs(*r.first_violation));
    } else {
      rep.all_violated = false;
    }
  }
  rep.note = "sampled evidence over a finite family and window; not a proof of cw-expansivity";
  return rep;
}

namespace {

Chain<SpherePoint> sphere_polyline(const std::vector<PlanePoint>& verts, double eta) {
  std::vector<SpherePoint> pts;
  for (PlanePoint v : verts) pts.push_back(sphere_canon(TorusPoint(v)));
  return Chain<SpherePoint>::from_polyline(pts, eta);
}

}  // namespace

Chain<SpherePoint> sphere_unstable_arc(const SphereMap& g, const TorusPoint& p, double length, double eta) {
  PlanePoint a = p.lift();
  PlanePoint b = a + length * g.base().unstable();
  // Split so consecutive vertices are close enough for the shortest-lift midpoint.
  return sphere_polyline({a, midpoint(a, b), b}, eta);
}

std::vector<Chain<SpherePoint>> random_sphere_family(const SphereMap& g, int count, std::uint64_t seed, double eta,
                                                     double min_len, double max_len) {
  if (count < 0) throw InvalidInput("random_sphere_family: count must be non-negative");
  if (!(0.0 < min_len && min_len <= max_len && max_len < 0.1))
    throw InvalidInput("random_sphere_family: need 0 < min_len <= max_len < 0.1");
  std::vector<Chain<SpherePoint>> out;
  if (count == 0) return out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Mid-range length: an arc of exactly min_len can round to just below the floor.
  out.push_back(sphere_unstable_arc(g, TorusPoint(unit(rng), unit(rng)), 0.5 * (min_len + max_len), eta));
  std::uniform_int_distribution<int> bends(1, 3);
  for (int i = 1; i < count; ++i) {
    PlanePoint p{unit(rng), unit(rng)};
    double len = min_len + (max_len - min_len) * unit(rng);
    int k = bends(rng);
    double theta = 2.0 * std::numbers::pi * unit(rng);
    std::vector<PlanePoint> verts{p};
    for (int j = 0; j <= k; ++j) {
      double turn = (unit(rng) - 0.5) * std::numbers::pi / 2;
      PlanePoint dir{std::cos(theta + turn), std::sin(theta + turn)};
      verts.push_back(verts.back() + (len / (k + 1)) * dir);
    }
    // Bends can fold the path back on itself; a single straight leg keeps the floor.
    Chain<SpherePoint> c = sphere_polyline(verts, eta);
    if (chain_diam(c) < min_len) c = sphere_polyline({p, p + len * PlanePoint{std::cos(theta), std::sin(theta)}}, eta);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace cwx
