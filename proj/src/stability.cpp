#include "cwx/stability.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cwx {

DynamicalMap<PlanePoint> perturbed_dynamics(const PerturbedMap& map) {
  return {[&map](const PlanePoint& p) { return map.apply(p); },
          [&map](const PlanePoint& p) { return map.inverse(p); }, "T~"};
}

DynamicalMap<PlanePoint> linear_dynamics(const LinearModel& model) {
  return {[model](const PlanePoint& p) { return model.apply(p); },
          [model](const PlanePoint& p) { return model.inverse(p); }, "T"};
}

DynamicalMap<TorusPoint> anosov_dynamics(const AnosovMap& f) {
  return {[f](const TorusPoint& p) { return f.apply(p); }, [f](const TorusPoint& p) { return f.inverse(p); },
          "f"};
}

DynamicalMap<ExactTorusPoint> anosov_exact_dynamics(const AnosovMap& f) {
  return {[f](const ExactTorusPoint& p) { return p.apply(f); }, [f](const ExactTorusPoint& p) { return p.inverse(f); },
          "f"};
}

DynamicalMap<TorusPoint> perturbed_torus_dynamics(const PerturbedTorusMap& g) {
  return {[&g](const TorusPoint& p) { return g.apply(p); }, [&g](const TorusPoint& p) { return g.inverse(p); },
          "g"};
}

int escape_bound(int m, double xi, double lambda) {
  if (m < 0) throw InvalidInput("escape_bound: level must be non-negative");
  if (!(xi > 0.0) || !(lambda > 1.0)) throw InvalidInput("escape_bound: need xi > 0 and lambda > 1");
  double arg = xi * xi * std::ldexp(1.0, 2 * m) / 2.0;
  if (arg <= 1.0) return 0;
  return static_cast<int>(std::ceil(std::log(arg) / std::log(lambda)));
}

namespace {

double distance_to_chain(PlanePoint p, const Chain<PlanePoint>& c) {
  double best = distance(p, c.pts().front());
  for (PlanePoint q : c.pts()) best = std::min(best, distance(p, q));
  return best;
}

}  // namespace

EscapeCertificate escape_experiment(int n, int m, const Chain<PlanePoint>& c, const PerturbedMap& map,
                                    const PropagationOptions& opt) {
  if (!(m > n && n >= map.n0()))
    throw InvalidInput(fmt::format("escape_experiment: need m > n >= n0 = {} (got n = {}, m = {})", map.n0(), n, m));
  const ChartBoxes& boxes = map.boxes();
  const double xi = boxes.xi;
  if (distance_to_chain(PerturbedMap::fixed_point(n), c) > c.eta() ||
      distance_to_chain(PerturbedMap::fixed_point(m), c) > c.eta()) {
    throw InvalidInput("escape_experiment: chain must contain both fixed points u_n and u_m");
  }
  if (chain_diam(c) > xi / 2) throw InvalidInput("escape_experiment: chain diameter exceeds xi/2");

  EscapeCertificate cert;
  cert.n = n;
  cert.m = m;
  cert.n_star = escape_bound(m, xi, map.model().lambda());
  cert.contained = true;
  const double lambda = map.model().lambda();
  // Past N* the certificate has already failed; the slack only shows by how much.
  const int limit = cert.n_star + 16;
  propagate_until<PlanePoint>(perturbed_dynamics(map), c, limit, opt, [&](int k, const Chain<PlanePoint>& ch) {
    bool all_in_k = true;
    for (PlanePoint p : ch.pts()) {
      if (!boxes.in_k_or_tk(p, lambda)) cert.contained = false;
      if (!boxes.in_k(p)) all_in_k = false;
    }
    if (!all_in_k) {
      cert.n_exit = k;
      cert.exit_diam = chain_diam(ch);
      cert.exit_points = ch.size();
      return false;
    }
    return cert.contained;
  });
  return cert;
}

ClassSeparationReport class_separation(int n, int m, const std::vector<Chain<PlanePoint>>& family,
                                       const PerturbedMap& map, const PropagationOptions& opt) {
  ClassSeparationReport rep;
  rep.n = n;
  rep.m = m;
  rep.xi = map.boxes().xi;
  for (const Chain<PlanePoint>& c : family) {
    rep.certificates.push_back(escape_experiment(n, m, c, map, opt));
    rep.all_certified = rep.all_certified && rep.certificates.back().certified(rep.xi);
  }
  rep.note =
      "sampled evidence: each certified chain leaves the xi-ball; every continuum joining p_n to p_m "
      "meets H+_m, whose points leave K within n_star steps";
  return rep;
}

Chain<PlanePoint> segment_chain(PlanePoint a, PlanePoint b, double eta) {
  const PlanePoint v[] = {a, b};
  return Chain<PlanePoint>::from_polyline(v, eta);
}

std::vector<Chain<PlanePoint>> random_path_family(PlanePoint a, PlanePoint b, int count, std::uint64_t seed,
                                                  double eta) {
  if (count < 0) throw InvalidInput("random_path_family: count must be non-negative");
  std::vector<Chain<PlanePoint>> out;
  if (count == 0) return out;
  out.push_back(segment_chain(a, b, eta));
  PlanePoint d = b - a;
  double len = norm(d);
  PlanePoint perp = len > 0 ? (1.0 / len) * PlanePoint{-d.y, d.x} : PlanePoint{0, 0};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> waypoints(2, 6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> offset(-1.5, 1.5);
  for (int i = 1; i < count; ++i) {
    int k = waypoints(rng);
    std::vector<double> ts(static_cast<std::size_t>(k));
    for (double& t : ts) t = unit(rng);
    std::sort(ts.begin(), ts.end());
    std::vector<PlanePoint> verts{a};
    for (double t : ts) verts.push_back(a + t * d + (offset(rng) * len) * perp);
    verts.push_back(b);
    out.push_back(Chain<PlanePoint>::from_polyline(verts, eta));
  }
  return out;
}

double dist3_constant(double xi, double d1_diameter) {
  if (!(xi > 0.0) || !(d1_diameter >= 0.0)) throw InvalidInput("dist3_constant: need xi > 0 and D1 >= 0");
  return xi / (1.0 + 2.0 * d1_diameter);
}

}  // namespace cwx
