#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <set>

#include <fmt/format.h>

#include "cwx/quotient.hpp"
#include "cwx/shadowing.hpp"
#include "cwx/stability.hpp"

namespace cwx::cli {

namespace {

PropagationOptions propagation(const ExperimentConfig& cfg) {
  PropagationOptions p;
  p.eta = cfg.eta;
  return p;
}

std::string csv_header(bool sphere) { return sphere ? "step,rep_x,rep_y\n" : "step,x,y\n"; }

Chain<TorusPoint> torus_segment(TorusPoint p, PlanePoint dir, double length, double eta) {
  PlanePoint a = p.lift(), b = a + length * dir;
  const TorusPoint v[] = {TorusPoint(a), TorusPoint(midpoint(a, b)), TorusPoint(b)};
  return Chain<TorusPoint>::from_polyline(v, eta);
}

// Backward iteration in doubles loses the segment after a few dozen steps; the
// exact grid keeps every iterate honest.
Chain<ExactTorusPoint> exact_segment(TorusPoint p, PlanePoint dir, double length, double eta) {
  PlanePoint a = p.lift(), b = a + length * dir;
  const ExactTorusPoint v[] = {ExactTorusPoint(TorusPoint(a)), ExactTorusPoint(TorusPoint(midpoint(a, b))),
                               ExactTorusPoint(TorusPoint(b))};
  return Chain<ExactTorusPoint>::from_polyline(v, eta);
}

}  // namespace

int cmd_orbit(const ExperimentConfig& cfg, const OrbitOptions& opt, std::ostream& log) {
  if (opt.steps < 0) throw UsageError("orbit: --steps must be non-negative");
  AnosovMap f;
  TorusPoint start(opt.x0, opt.y0);
  std::string csv;
  if (opt.map == "gpert" || opt.start_level) {
    PerturbedMap planar(cfg.perturbation());
    PerturbedTorusMap g(planar, f);
    if (opt.start_level) {
      if (*opt.start_level < 0) throw UsageError("orbit: --start-level must be non-negative");
      start = g.fixed_point(*opt.start_level);
    }
    if (opt.map == "gpert") {
      csv = csv_header(false);
      TorusPoint p = start;
      for (int k = 0; k <= opt.steps; ++k, p = g.apply(p))
        csv += fmt::format("{},{},{}\n", k, csv_num(p.x()), csv_num(p.y()));
    }
  }
  if (opt.map == "anosov") {
    csv = csv_header(false);
    TorusPoint p = start;
    for (int k = 0; k <= opt.steps; ++k, p = f.apply(p))
      csv += fmt::format("{},{},{}\n", k, csv_num(p.x()), csv_num(p.y()));
  } else if (opt.map == "sphere") {
    SphereMap g(f);
    csv = csv_header(true);
    SpherePoint s = sphere_canon(start);
    for (int k = 0; k <= opt.steps; ++k, s = g.apply(s))
      csv += fmt::format("{},{},{}\n", k, csv_num(s.rep().x()), csv_num(s.rep().y()));
  } else if (opt.map != "gpert") {
    throw UsageError(fmt::format("orbit: unknown map '{}'", opt.map));
  }
  log << "wrote " << write_output(cfg.output_dir, "orbit.csv", csv) << "\n";
  return kOk;
}

int cmd_escape(const ExperimentConfig& cfg, const EscapeOptions& opt, std::ostream& log) {
  PerturbedMap map(cfg.perturbation());
  int n = opt.n.value_or(map.n0());
  int m = opt.m.value_or(n + 1);
  if (n < map.n0()) throw UsageError(fmt::format("escape: n = {} is below n0 = {}", n, map.n0()));
  if (m <= n) throw UsageError(fmt::format("escape: need m > n (got n = {}, m = {})", n, m));
  if (opt.family < 0) throw UsageError("escape: --family must be non-negative");

  PropagationOptions prop = propagation(cfg);
  auto family = random_path_family(PerturbedMap::fixed_point(n), PerturbedMap::fixed_point(m), opt.family,
                                   cfg.seed, prop.eta);
  ClassSeparationReport rep = class_separation(n, m, family, map, prop);

  Json j;
  j["config"] = to_json(cfg);
  j["n"] = n;
  j["m"] = m;
  j["n_star"] = escape_bound(m, cfg.xi, map.model().lambda());
  j["family_size"] = family.size();
  j["all_certified"] = rep.all_certified;
  j["note"] = rep.note;
  Json certs = Json::array();
  for (const EscapeCertificate& c : rep.certificates) certs.push_back(to_json(c, cfg.xi));
  j["certificates"] = certs;

  std::string csv = "step,diam\n";
  if (!family.empty()) {
    int last = rep.certificates.front().n_exit.value_or(rep.certificates.front().n_star);
    propagate_until<PlanePoint>(perturbed_dynamics(map), family.front(), last, prop,
                                [&csv](int k, const Chain<PlanePoint>& c) {
                                  csv += fmt::format("{},{}\n", k, csv_num(chain_diam(c)));
                                  return true;
                                });
  }
  log << "wrote " << write_output(cfg.output_dir, "escape_certificates.json", dump(j)) << "\n";
  log << "wrote " << write_output(cfg.output_dir, "escape_diams.csv", csv) << "\n";
  std::size_t ok = std::count_if(rep.certificates.begin(), rep.certificates.end(),
                                 [&](const EscapeCertificate& c) { return c.certified(cfg.xi); });
  log << fmt::format("{} of {} chains certified\n", ok, rep.certificates.size());
  return rep.all_certified ? kOk : kPropertyFailure;
}

int cmd_shadow(const ExperimentConfig& cfg, const ShadowOptions& opt, std::ostream& log) {
  if (opt.space != "torus" && opt.space != "sphere")
    throw UsageError(fmt::format("shadow: unknown space '{}'", opt.space));
  if (opt.length < 1 || opt.count < 1) throw UsageError("shadow: --length and --count must be positive");
  if (!(opt.pseudo_delta > 0.0)) throw UsageError("shadow: --pseudo-delta must be positive");
  AnosovMap f;
  SphereMap g(f);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Json runs = Json::array();
  bool all = true;
  double worst = 0.0;
  for (int i = 0; i < opt.count; ++i) {
    TorusPoint x0(unit(rng), unit(rng));
    std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
    Json run;
    if (opt.space == "torus") {
      auto po = make_pseudo_orbit(f, x0, opt.length, opt.pseudo_delta, seed);
      TorusShadow s = shadow_solve(f, po);
      bool ok = s.eps_achieved <= s.eps_bound;
      all = all && ok;
      worst = std::max(worst, s.eps_achieved);
      run["pseudo_orbit"] = to_json(po);
      run["result"] = to_json(s, ok);
    } else {
      auto po = make_pseudo_orbit(g, sphere_canon(x0), opt.length, opt.pseudo_delta, seed);
      SphereShadow s = sphere_shadow(g, po);
      bool ok = s.eps_achieved <= s.eps_bound;
      all = all && ok;
      worst = std::max(worst, s.eps_achieved);
      run["pseudo_orbit"] = to_json(po);
      run["result"] = to_json(s, ok);
    }
    runs.push_back(run);
  }
  Json j;
  j["config"] = to_json(cfg);
  j["space"] = opt.space;
  j["length"] = opt.length;
  j["delta"] = opt.pseudo_delta;
  j["eps_bound"] = shadow_eps_bound(opt.pseudo_delta, f.lambda());
  j["all_verified"] = all;
  j["runs"] = runs;
  log << "wrote " << write_output(cfg.output_dir, "shadow.json", dump(j)) << "\n";
  log << fmt::format("max eps_achieved {} (bound {})\n", worst, shadow_eps_bound(opt.pseudo_delta, f.lambda()));
  return all ? kOk : kPropertyFailure;
}

int cmd_area_check(const ExperimentConfig& cfg, const AreaOptions& opt, std::ostream& log) {
  if (opt.jacobian_samples < 0 || opt.levels < 1 || opt.mc_samples < 1)
    throw UsageError("area-check: sample counts must be positive");
  PerturbedMap map(cfg.perturbation());
  AreaCheckOptions o;
  o.jacobian_samples = opt.jacobian_samples;
  o.mc_samples = opt.mc_samples;
  o.levels = opt.levels;
  o.seed = cfg.seed;
  AreaStats stats = verify_area(map, o);
  bool ok = stats.max_jacobian_error <= 1e-6;
  for (const MassCheck& m : stats.mass) ok = ok && m.image_within(3.0) && m.preimage_within(3.0);
  Json j;
  j["config"] = to_json(cfg);
  j["n0"] = map.n0();
  j["jacobian_tolerance"] = 1e-6;
  j["stats"] = to_json(stats);
  j["passed"] = ok;
  log << "wrote " << write_output(cfg.output_dir, "area_check.json", dump(j)) << "\n";
  log << fmt::format("max |det DT~ - 1| = {}\n", stats.max_jacobian_error);
  return ok ? kOk : kPropertyFailure;
}

int cmd_stability(const ExperimentConfig& cfg, const StabilityOptions& opt, std::ostream& log) {
  if (opt.direction != "unstable" && opt.direction != "stable")
    throw UsageError(fmt::format("stability: unknown direction '{}'", opt.direction));
  AnosovMap f;
  double length = opt.length.value_or(cfg.xi / 10);
  if (!(length >= 0.0) || length >= 0.25) throw UsageError("stability: --length must lie in [0, 1/4)");
  PlanePoint dir = opt.direction == "unstable" ? f.unstable() : f.stable();
  TorusPoint p(opt.x0, opt.y0);
  PropagationOptions prop = propagation(cfg);
  StabilityReport rep;
  if (opt.map == "anosov") {
    rep = xi_stability_test(anosov_exact_dynamics(f), exact_segment(p, dir, length, prop.eta), cfg.xi, cfg.horizon,
                            prop);
  } else if (opt.map == "gpert") {
    PerturbedMap planar(cfg.perturbation());
    PerturbedTorusMap g(planar, f);
    rep = xi_stability_test(perturbed_torus_dynamics(g), torus_segment(p, dir, length, prop.eta), cfg.xi,
                            cfg.horizon, prop);
  } else if (opt.map == "sphere") {
    SphereMap g(f);
    auto seg = exact_segment(p, dir, length, prop.eta);
    std::vector<ExactSpherePoint> pts;
    for (const ExactTorusPoint& t : seg.pts()) pts.push_back(ExactSpherePoint::canon(t));
    rep = xi_stability_test(sphere_exact_dynamics(g), Chain<ExactSpherePoint>::from_polyline(pts, prop.eta), cfg.xi,
                            cfg.horizon, prop);
  } else {
    throw UsageError(fmt::format("stability: unknown map '{}'", opt.map));
  }
  Json j;
  j["config"] = to_json(cfg);
  j["map"] = opt.map;
  j["direction"] = opt.direction;
  j["length"] = length;
  j["report"] = to_json(rep);
  std::string csv = "step,diam\n";
  for (int n = -rep.horizon; n <= rep.horizon; ++n) {
    if (auto d = rep.diam_at(n)) csv += fmt::format("{},{}\n", n, csv_num(*d));
  }
  log << "wrote " << write_output(cfg.output_dir, "stability.json", dump(j)) << "\n";
  log << "wrote " << write_output(cfg.output_dir, "stability_diams.csv", csv) << "\n";
  log << (rep.first_violation ? fmt::format("violated at n = {}\n", *rep.first_violation)
                              : fmt::format("no violation within |n| <= {}\n", rep.horizon));
  return kOk;
}

// ---------------------------------------------------------------------------
// verify

namespace {

class Suite {
 public:
  void add(std::string name, bool passed, std::string detail) {
    checks_.push_back({std::move(name), passed, std::move(detail)});
  }
  std::vector<CheckResult> take() { return std::move(checks_); }

 private:
  std::vector<CheckResult> checks_;
};

std::uint64_t sub_seed(const ExperimentConfig& cfg, std::uint64_t k) { return cfg.seed * 1000003ULL + k; }

void perturbation_checks(const ExperimentConfig& cfg, const PerturbedMap& map, Suite& suite) {
  AnosovMap f;
  PerturbedTorusMap g(map, f);
  const int n0 = map.n0();
  const LinearModel& T = map.model();

  {
    double worst = 0.0, worst_torus = 0.0;
    for (int n = n0; n <= n0 + 8; ++n) {
      PlanePoint u = PerturbedMap::fixed_point(n);
      worst = std::max(worst, norm(map.apply(u) - u));
      TorusPoint p = g.fixed_point(n);
      worst_torus = std::max(worst_torus, torus_dist(g.apply(p), p));
    }
    suite.add("fixed_point_ladder", worst < 1e-12 && worst_torus < 1e-12,
              fmt::format("levels {}..{}: max |T~(u_n) - u_n| = {}, max dist(g(p_n), p_n) = {}", n0, n0 + 8, worst,
                          worst_torus));
  }
  {
    std::mt19937_64 rng(sub_seed(cfg, 1));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const RegionSpec& rg = map.regions();
    double worst = 0.0;
    int count = 0;
    for (int i = 0; i < 5000; ++i) {
      int n = n0 + i % 5;
      double t = unit(rng);
      HyperCoord h;
      switch (i % 4) {
        case 0: h = {RegionSpec::kUMin, rg.v_min_d() + t * (rg.v_max_d() - rg.v_min_d())}; break;
        case 1: h = {RegionSpec::kUMax, rg.v_min_d() + t * (rg.v_max_d() - rg.v_min_d())}; break;
        case 2: h = {RegionSpec::kUMin + t * 1.5, rg.v_min_d()}; break;
        default: h = {RegionSpec::kUMin + t * 1.5, rg.v_max_d()}; break;
      }
      PlanePoint p = PerturbedMap::from_level_coords(h, n);
      worst = std::max(worst, norm(map.apply(p) - T.apply(p)));
      ++count;
    }
    for (int i = 0; i < 5000; ++i) {
      int m = n0 + i % 9;
      // Points of H_m = {xy = 2 / 4^m} inside the chart disk.
      HyperCoord h{2.0, (unit(rng) - 0.5) * 10.0};
      PlanePoint p = PerturbedMap::from_level_coords(h, m);
      if (norm(p) >= map.boxes().chart_radius) continue;
      worst = std::max(worst, norm(map.apply(p) - T.apply(p)));
      ++count;
    }
    suite.add("boundary_agreement", worst < 1e-12,
              fmt::format("{} points on the edges of D_n and on H_m: max |T~ - T| = {}", count, worst));
  }
  {
    std::mt19937_64 rng(sub_seed(cfg, 2));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    const double r = map.boxes().chart_radius / std::sqrt(2.0), xi = map.boxes().xi;
    for (int i = 0; i < 100000; ++i) {
      PlanePoint p;
      switch (i % 3) {
        case 0: p = {(2 * unit(rng) - 1) * r, (2 * unit(rng) - 1) * r}; break;
        case 1: p = {(2 * unit(rng) - 1) * xi, (2 * unit(rng) - 1) * xi}; break;
        default: {
          double su = unit(rng), sv = unit(rng);
          p = sample_level_region(map, n0 + i % 5, su, sv);
        }
      }
      worst = std::max(worst, norm(map.inverse(map.apply(p)) - p));
    }
    suite.add("bijectivity", worst < 1e-10, fmt::format("100000 points: max |T~^-1(T~(p)) - p| = {}", worst));
  }
  {
    AreaCheckOptions o;
    o.seed = sub_seed(cfg, 3);
    AreaStats s = verify_area(map, o);
    bool ok = s.max_jacobian_error <= 1e-6;
    std::string mass;
    for (const MassCheck& m : s.mass) {
      ok = ok && m.image_within(3.0) && m.preimage_within(3.0);
      mass += fmt::format("; rect area {}: image {} +- {}, preimage {} +- {}", m.area, m.image_mass, m.image_sigma,
                          m.preimage_mass, m.preimage_sigma);
    }
    suite.add("area_preservation", ok,
              fmt::format("{} Jacobians ({} excluded near the non-smooth set): max |det - 1| = {}{}",
                          s.jacobian_evaluated, s.jacobian_excluded, s.max_jacobian_error, mass));
  }
  {
    std::mt19937_64 rng(sub_seed(cfg, 4));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0, outside = 0.0;
    int outside_count = 0;
    for (int i = 0; i < 100000; ++i) {
      TorusPoint p;
      if (i % 2 == 0) {
        p = TorusPoint(unit(rng), unit(rng));
      } else {
        double su = unit(rng), sv = unit(rng);
        p = g.chart().to_torus(sample_level_region(map, n0 + (i / 2) % 5, su, sv));
      }
      double d = torus_dist(f.apply(p), g.apply(p));
      worst = std::max(worst, d);
      auto c = g.chart().try_from_torus(p);
      if (!c || !map.boxes().in_w(*c)) {
        outside = std::max(outside, d);
        ++outside_count;
      }
    }
    suite.add("perturbation_size", worst <= cfg.delta && outside <= 1e-12,
              fmt::format("100000 points: max dist(f, g) = {} (delta = {}); {} points outside phi(W): max {}", worst,
                          cfg.delta, outside_count, outside));
  }
  {
    bool ok = true;
    std::string detail;
    for (int n = n0; n <= n0 + 4; ++n) {
      double dev = sampled_level_deviation(map, n, 10000, sub_seed(cfg, 5) + n);
      double bound = map.c0_level_distance(n);
      ok = ok && dev <= bound;
      detail += fmt::format("{}n = {}: {} <= {}", detail.empty() ? "" : "; ", n, dev, bound);
    }
    suite.add("level_c0_bound", ok, detail);
  }
  {
    PropagationOptions prop = propagation(cfg);
    auto family = random_path_family(PerturbedMap::fixed_point(n0), PerturbedMap::fixed_point(n0 + 1), 100,
                                     sub_seed(cfg, 6), prop.eta);
    ClassSeparationReport rep = class_separation(n0, n0 + 1, family, map, prop);
    int max_exit = 0;
    double min_diam = std::numeric_limits<double>::infinity();
    for (const EscapeCertificate& c : rep.certificates) {
      max_exit = std::max(max_exit, c.n_exit.value_or(-1));
      min_diam = std::min(min_diam, c.exit_diam);
    }
    suite.add("escape_certificates", rep.all_certified,
              fmt::format("(n, m) = ({}, {}), {} chains: max n_exit = {} (n_star = {}), min exit diam = {}", n0,
                          n0 + 1, family.size(), max_exit, escape_bound(n0 + 1, cfg.xi, T.lambda()), min_diam));
  }
}

void stability_checks(const ExperimentConfig& cfg, Suite& suite) {
  AnosovMap f;
  PropagationOptions prop = propagation(cfg);
  auto dyn = anosov_exact_dynamics(f);
  {
    auto seg = exact_segment(TorusPoint(0.3, 0.6), f.unstable(), cfg.xi / 10, prop.eta);
    StabilityReport r = xi_stability_test(dyn, seg, cfg.xi, cfg.horizon, prop);
    int expected = static_cast<int>(std::ceil(std::log(10.0) / f.log_lambda()));
    suite.add("unstable_segment_violation", r.first_violation && *r.first_violation == expected,
              fmt::format("segment of length xi/10 along e_u: first violation at n = {} (expected {})",
                          r.first_violation ? fmt::format("{}", *r.first_violation) : "none", expected));
  }
  {
    std::mt19937_64 rng(sub_seed(cfg, 7));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int limit = static_cast<int>(std::ceil(std::log(cfg.xi / 1e-3) / f.log_lambda())) + 2;
    int worst = 0;
    bool ok = true;
    for (int i = 0; i < 100; ++i) {
      double theta = 2 * std::numbers::pi * unit(rng);
      double len = 1e-3 + 4e-3 * unit(rng);
      auto seg = exact_segment(TorusPoint(unit(rng), unit(rng)), {std::cos(theta), std::sin(theta)}, len, prop.eta);
      StabilityReport r = xi_stability_test(dyn, seg, cfg.xi, limit, prop);
      if (!r.first_violation) ok = false;
      else worst = std::max(worst, std::abs(*r.first_violation));
    }
    suite.add("torus_cw_evidence", ok,
              fmt::format("100 segments of diameter >= 1e-3: all exceed xi within |n| <= {} (max {})", limit, worst));
  }
  {
    double eps = 1.5 * cfg.xi, alpha = 1.75 * cfg.xi;
    std::vector<Chain<ExactTorusPoint>> family;
    for (int i = 0; i < 10; ++i)
      family.push_back(exact_segment(TorusPoint(0.1 * i, 0.37), f.unstable(), eps / 2, prop.eta));
    HalfCwProbe probe = half_cw_m_finder(dyn, alpha, eps, cfg.xi, family, 8, prop);
    suite.add("half_cw_probe", probe.m_found && *probe.m_found == 1,
              fmt::format("unstable segments of diameter epsilon/2, epsilon = {}, alpha = {}: m = {}", eps, alpha,
                          probe.m_found ? fmt::format("{}", *probe.m_found) : "not found"));
  }
  {
    // Classes of the antipodal quotient with the sphere metric on classes.
    double d1 = std::sqrt(2.0) / 2;
    double k = dist3_constant(cfg.xi, d1);
    auto d3 = dist3_combine<TorusPoint, SpherePoint>(
        k, [](const TorusPoint& a, const TorusPoint& b) { return torus_dist(a, b); },
        [](const TorusPoint& p) { return sphere_canon(p); },
        [](const SpherePoint& a, const SpherePoint& b) { return sphere_dist(a, b); });
    std::mt19937_64 rng(sub_seed(cfg, 8));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    bool ok = true;
    double worst_gap = 0.0;
    for (int i = 0; i < 10000; ++i) {
      TorusPoint x(unit(rng), unit(rng)), y(unit(rng), unit(rng)), z(unit(rng), unit(rng));
      if (i % 3 == 0) y = antipode(x);
      double xy = d3(x, y), yz = d3(y, z), xz = d3(x, z);
      ok = ok && xy == d3(y, x) && d3(x, x) == 0.0 && xz <= xy + yz + 1e-15;
      if (!(x == y) && !(xy > 0.0)) ok = false;
      worst_gap = std::max(worst_gap, xz - xy - yz);
      if (sphere_canon(x) == sphere_canon(y)) ok = ok && xy == k * torus_dist(x, y);
    }
    suite.add("dist3_metric", ok,
              fmt::format("K = {}; 10000 triples: symmetry, identity, triangle (max excess {}), same-class equality",
                          k, worst_gap));
  }
}

void shadow_checks(const ExperimentConfig& cfg, Suite& suite) {
  AnosovMap f;
  SphereMap g(f);
  const double delta = 1e-4;
  const double bound = shadow_eps_bound(delta, f.lambda());
  std::mt19937_64 rng(sub_seed(cfg, 9));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  {
    bool ok = true;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      auto po = make_pseudo_orbit(f, TorusPoint(unit(rng), unit(rng)), 200, delta, sub_seed(cfg, 100 + i));
      TorusShadow s = shadow_solve(f, po);
      ok = ok && shadow_verify(f, po, s.exact, s.eps_bound).ok;
      worst = std::max(worst, s.eps_achieved);
    }
    suite.add("torus_shadowing", ok,
              fmt::format("100 pseudo-orbits, length 200, delta {}: max eps_achieved = {} <= {}", delta, worst, bound));
  }
  {
    bool ok = true, lift_ok = true;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      auto po = make_pseudo_orbit(g, sphere_canon(TorusPoint(unit(rng), unit(rng))), 200, delta,
                                  sub_seed(cfg, 300 + i));
      auto lifted = lift_pseudo_orbit(g, po);
      lift_ok = lift_ok && pseudo_orbit_defect(f, lifted) < delta;
      // 1 - (1 - x) != x in doubles, so compare against both stored lifts rather than re-canonicalizing.
      for (std::size_t k = 0; k < po.pts.size(); ++k)
        lift_ok = lift_ok && (lifted.pts[k] == po.pts[k].rep() || lifted.pts[k] == po.pts[k].other_lift());
      SphereShadow s = sphere_shadow(g, po);
      ok = ok && s.eps_achieved <= s.eps_bound;
      worst = std::max(worst, s.eps_achieved);
    }
    suite.add("lift_soundness", lift_ok, "100 sphere pseudo-orbits: lifts keep delta and each lift is one of the two stored lifts");
    suite.add("sphere_shadowing", ok,
              fmt::format("100 sphere pseudo-orbits, length 200, delta {}: max eps_achieved = {} <= {}", delta, worst,
                          bound));
  }
  {
    bool ok = true;
    for (int i = 0; i < 10000; ++i) {
      TorusPoint x(unit(rng), unit(rng));
      double rho = 0.1;
      double r = rho * 0.999 * std::sqrt(unit(rng)), t = 2 * std::numbers::pi * unit(rng);
      SpherePoint y = sphere_canon(TorusPoint(x.lift() + PlanePoint{r * std::cos(t), r * std::sin(t)}));
      if (sphere_dist(sphere_canon(x), y) >= openness_modulus(rho)) continue;
      ok = ok && std::min(torus_dist(x, y.rep()), torus_dist(x, y.other_lift())) < rho;
    }
    suite.add("openness_modulus", ok, "10000 pairs: every sphere point within rho of q(x) has a lift within rho of x");
  }
}

void quotient_checks(const ExperimentConfig& cfg, Suite& suite) {
  AnosovMap f;
  SphereMap g(f);
  {
    std::mt19937_64 rng(sub_seed(cfg, 10));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i) {
      TorusPoint p(unit(rng), unit(rng));
      worst = std::max(worst, sphere_dist(sphere_canon(f.apply(p)), g.apply(sphere_canon(p))));
      worst = std::max(worst, sphere_dist(sphere_canon(f.apply(p)), sphere_canon(f.apply(antipode(p)))));
    }
    suite.add("sphere_conjugacy", worst <= 1e-12, fmt::format("100000 samples: max dist(q(f(p)), g(q(p))) = {}", worst));
  }
  {
    std::set<std::pair<double, double>> inputs, images;
    bool inverse_ok = true;
    for (int i = 0; i < 512; ++i) {
      for (int j = 0; j < 512; ++j) {
        SpherePoint s = sphere_canon(TorusPoint(i / 512.0, j / 512.0));
        if (!inputs.insert({s.rep().x(), s.rep().y()}).second) continue;
        SpherePoint t = g.apply(s);
        images.insert({t.rep().x(), t.rep().y()});
        inverse_ok = inverse_ok && g.inverse(t) == s;
      }
    }
    suite.add("sphere_bijective", images.size() == inputs.size() && inverse_ok,
              fmt::format("{} grid classes, {} distinct images, inverse exact: {}", inputs.size(), images.size(),
                          inverse_ok));
  }
  {
    auto cones = cone_points();
    bool ok = true;
    for (const SpherePoint& c : cones) {
      ok = ok && c.is_cone_point();
      ok = ok && std::find(cones.begin(), cones.end(), g.apply(c)) != cones.end();
    }
    suite.add("cone_points_invariant", ok, "g permutes the four cone points");
  }
  {
    PropagationOptions prop = propagation(cfg);
    int limit = static_cast<int>(std::ceil(std::log(cfg.xi / 1e-3) / f.log_lambda())) + 2;
    auto family = random_sphere_family(g, 100, sub_seed(cfg, 11), prop.eta);
    CwEvidenceReport rep = cw_evidence_sphere(g, cfg.xi, family, limit, 1e-3, prop);
    suite.add("sphere_cw_evidence", rep.all_violated && rep.tested > 0,
              fmt::format("{} chains tested ({} below the floor): all exceed xi within |n| <= {} (max {})", rep.tested,
                          rep.excluded, limit, rep.max_first_violation));
  }
}

}  // namespace

VerifyReport run_verify_suite(const ExperimentConfig& cfg) {
  cfg.validate();
  Suite suite;
  std::optional<PerturbedMap> map;
  try {
    map.emplace(cfg.perturbation());
    suite.add("geometry_gate", true,
              fmt::format("r* = {} < R0 = {}; n0 = {}", map->twist().inner_radius(), cfg.r0, map->n0()));
  } catch (const GeometryGateError& e) {
    suite.add("geometry_gate", false, e.what());
  }
  if (map) perturbation_checks(cfg, *map, suite);
  stability_checks(cfg, suite);
  shadow_checks(cfg, suite);
  quotient_checks(cfg, suite);

  VerifyReport rep;
  rep.checks = suite.take();
  rep.all_passed = std::all_of(rep.checks.begin(), rep.checks.end(), [](const CheckResult& c) { return c.passed; });
  Json checks = Json::array();
  for (const CheckResult& c : rep.checks) checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  rep.json["config"] = to_json(cfg);
  rep.json["checks"] = checks;
  rep.json["all_passed"] = rep.all_passed;
  return rep;
}

int cmd_verify(const ExperimentConfig& cfg, std::ostream& log) {
  VerifyReport rep = run_verify_suite(cfg);
  for (const CheckResult& c : rep.checks) log << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << "\n";
  log << "wrote " << write_output(cfg.output_dir, "verify.json", dump(rep.json)) << "\n";
  return rep.all_passed ? kOk : kPropertyFailure;
}

}  // namespace cwx::cli
