#include "cwx/perturbation.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

namespace cwx {

namespace {

// Below this u the hyperbolic coordinates lose all precision; T is used instead.
constexpr double kUnderflowFloor = 1e-300;

int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Zone band_zone(double v, double lo, double hi) {
  if (v > lo && v < hi) return Zone::Interior;
  if (v == lo || v == hi) return Zone::Boundary;
  return Zone::Outside;
}

Rect bounding_box(const std::vector<PlanePoint>& pts) {
  Rect r{pts.front().x, pts.front().x, pts.front().y, pts.front().y};
  for (PlanePoint p : pts) r = r.united({p.x, p.x, p.y, p.y});
  return r;
}

Rect inflate(const Rect& r, double fraction) {
  double dx = fraction * (r.x1 - r.x0), dy = fraction * (r.y1 - r.y0);
  return {r.x0 - dx, r.x1 + dx, r.y0 - dy, r.y1 + dy};
}

}  // namespace

RegionSpec::RegionSpec(double lambda) : lambda_(lambda), log_lambda_(std::log(lambda)) {
  if (!(lambda > 1.0)) throw InvalidInput("RegionSpec: lambda must exceed 1");
  // The hull of E is spanned by its boundary; sample all four boundary pieces.
  constexpr int kPerEdge = 4097;
  std::vector<PlanePoint> boundary;
  boundary.reserve(4 * kPerEdge);
  for (int i = 0; i < kPerEdge; ++i) {
    double t = static_cast<double>(i) / (kPerEdge - 1);
    double v = v_min_e() + t * (v_max_e() - v_min_e());
    double u = kUMin + t * (kUMax - kUMin);
    boundary.push_back(from_hyper({kUMin, v}));
    boundary.push_back(from_hyper({kUMax, v}));
    boundary.push_back(from_hyper({u, v_min_e()}));
    boundary.push_back(from_hyper({u, v_max_e()}));
  }
  diameter_e0_ = plane_set_diameter(boundary);
}

std::array<PlanePoint, 8> RegionSpec::corners() const {
  return {from_hyper({kUMin, v_min_d()}), from_hyper({kUMin, v_max_d()}),
          from_hyper({kUMax, v_min_d()}), from_hyper({kUMax, v_max_d()}),
          from_hyper({kUMin, v_min_e()}), from_hyper({kUMin, v_max_e()}),
          from_hyper({kUMax, v_min_e()}), from_hyper({kUMax, v_max_e()})};
}

double RegionSpec::max_corner_norm() const {
  double m = 0.0;
  for (PlanePoint c : corners()) m = std::max(m, norm(c));
  return m;
}

double RegionSpec::diameter_e0() const { return diameter_e0_; }

RegionLocation region_locate(PlanePoint p, const RegionSpec& spec) {
  RegionLocation loc;
  if (!(p.x > 0.0) || !(p.y > 0.0)) return loc;
  double u = p.x * p.y;
  if (u < kUnderflowFloor) {
    loc.underflow = true;
    return loc;
  }
  // u = m 2^e with m in [1/2, 1); log2(2/u) lies in (k-1, k] and equals k iff m = 1/2.
  int e = 0;
  double m = std::frexp(u, &e);
  int k = 2 - e;
  bool on_edge = (m == 0.5) && (k % 2 == 0);
  int n = on_edge ? k / 2 : floor_div(k - 1, 2);
  if (n < 0) return loc;  // u > 2
  loc.level = n;

  double scaled_u = std::ldexp(u, 2 * n);
  loc.half = scaled_u < RegionSpec::kUArc ? Half::Minus
             : scaled_u == RegionSpec::kUArc ? Half::Arc
                                             : Half::Plus;
  double v = 0.5 * std::log(p.y / p.x);
  Zone dz = band_zone(v, spec.v_min_d(), spec.v_max_d());
  Zone ez = band_zone(v, spec.v_min_e(), spec.v_max_e());
  if (on_edge) {
    // Shared edge of D_n and D_{n-1}: both candidate maps agree with T there.
    dz = dz == Zone::Outside ? Zone::Outside : Zone::Boundary;
    ez = ez == Zone::Outside ? Zone::Outside : Zone::Boundary;
  }
  loc.d = dz;
  loc.e = ez;
  return loc;
}

double TwistParams::angle(double r) const {
  double inner = inner_radius();
  if (r <= inner) return std::numbers::pi;
  if (r >= outer_radius) return 0.0;
  return std::numbers::pi * (outer_radius - r) / (outer_radius - inner);
}

double TwistParams::radius_of(HyperCoord h) const {
  PlanePoint c = center();
  return std::hypot(squeeze * h.u - c.x, h.v / squeeze - c.y);
}

void TwistParams::validate() const {
  if (!(squeeze > 0.0) || !std::isfinite(squeeze)) throw GeometryGateError("twist squeeze must be positive");
  double inner = inner_radius();
  double clearance = std::min(0.5 * squeeze, log_lambda / squeeze);
  if (!(inner < outer_radius && outer_radius < clearance)) {
    throw GeometryGateError(fmt::format(
        "twist geometry gate failed: need r* = {:.6g} < R0 = {:.6g} < {:.6g}", inner, outer_radius,
        clearance));
  }
}

namespace {

HyperCoord rotate_in_twist(HyperCoord h, const TwistParams& params, double sign) {
  PlanePoint c = params.center();
  double a = params.squeeze;
  double dx = a * h.u - c.x;
  double dy = h.v / a - c.y;
  double r = std::hypot(dx, dy);
  if (r >= params.outer_radius) return h;
  double rx, ry;
  if (r <= params.inner_radius()) {
    // Half turn: exact negation keeps the level fixed points exact.
    rx = -dx;
    ry = -dy;
  } else {
    double alpha = sign * params.angle(r);
    double ca = std::cos(alpha), sa = std::sin(alpha);
    rx = ca * dx - sa * dy;
    ry = sa * dx + ca * dy;
  }
  return {(c.x + rx) / a, (c.y + ry) * a};
}

}  // namespace

HyperCoord twist_tau(HyperCoord h, const TwistParams& params) { return rotate_in_twist(h, params, 1.0); }

HyperCoord twist_tau_inverse(HyperCoord h, const TwistParams& params) {
  return rotate_in_twist(h, params, -1.0);
}

void ChartBoxes::validate(double lambda) const {
  if (!(xi > 0.0)) throw GeometryGateError("xi must be positive");
  if (!(delta > 0.0)) throw GeometryGateError("delta must be positive");
  if (!(chart_radius > 0.0 && chart_radius < 0.5)) throw GeometryGateError("chart radius must lie in (0, 1/2)");
  if (!(xi * std::sqrt(2.0) < chart_radius)) throw GeometryGateError("box K does not fit in the chart");
  double tk_corner = xi * std::hypot(lambda, 1.0 / lambda);
  if (!(tk_corner < chart_radius)) throw GeometryGateError("T(K) does not fit in the chart");
  if (!(delta <= xi)) throw GeometryGateError("W = B(0, delta/2) is not contained in L (need delta <= xi)");
}

int compute_n0(const ChartBoxes& boxes, const RegionSpec& regions) {
  if (!(boxes.delta > 0.0)) throw InvalidInput("compute_n0: delta must be positive");
  double r = regions.max_corner_norm();
  int n = 0;
  while (std::ldexp(r, -n) > boxes.delta / 2.0) ++n;
  return n;
}

PerturbedMap::PerturbedMap(const PerturbationConfig& config)
    : config_(config),
      model_(config.lambda),
      regions_(config.lambda),
      twist_{std::log(config.lambda), config.outer_radius, config.squeeze},
      boxes_{config.xi, config.delta, config.chart_radius} {
  twist_.validate();
  boxes_.validate(config.lambda);
  n0_ = compute_n0(boxes_, regions_);
  if (config.n0_override) {
    if (*config.n0_override < n0_) {
      throw GeometryGateError(fmt::format(
          "n0_override = {} is below {}, the first level with D_n u E_n inside W", *config.n0_override, n0_));
    }
    n0_ = *config.n0_override;
  }
}

HyperCoord PerturbedMap::level_coords(PlanePoint p, int n) {
  HyperCoord h = to_hyper(p);
  h.u = std::ldexp(h.u, 2 * n);
  return h;
}

PlanePoint PerturbedMap::from_level_coords(HyperCoord h, int n) {
  return from_hyper({std::ldexp(h.u, -2 * n), h.v});
}

std::optional<int> PerturbedMap::active_level(PlanePoint p) const {
  RegionLocation loc = region_locate(p, regions_);
  if (loc.d != Zone::Interior || loc.level < n0_) return std::nullopt;
  if (!twist_.in_support(level_coords(p, loc.level))) return std::nullopt;
  return loc.level;
}

bool PerturbedMap::modifies(PlanePoint p) const { return active_level(p).has_value(); }

PerturbedMap::Result PerturbedMap::apply_flagged(PlanePoint p) const {
  if (p.x > 0.0 && p.y > 0.0 && p.x * p.y < kUnderflowFloor) return {model_.apply(p), true};
  if (auto n = active_level(p)) {
    HyperCoord h = twist_tau(level_coords(p, *n), twist_);
    h.v -= model_.log_lambda();
    return {from_level_coords(h, *n), false};
  }
  return {model_.apply(p), false};
}

PerturbedMap::Result PerturbedMap::inverse_flagged(PlanePoint p) const {
  PlanePoint q = model_.inverse(p);
  if (q.x > 0.0 && q.y > 0.0 && q.x * q.y < kUnderflowFloor) return {q, true};
  if (auto n = active_level(q)) {
    return {from_level_coords(twist_tau_inverse(level_coords(q, *n), twist_), *n), false};
  }
  return {q, false};
}

PlanePoint PerturbedMap::apply_level(PlanePoint p, int n) const {
  if (n < 0) throw InvalidInput("apply_level: level must be non-negative");
  if (!(p.x > 0.0) || !(p.y > 0.0)) throw DomainError("apply_level: point outside D_n");
  HyperCoord h = level_coords(p, n);
  bool inside = h.u >= RegionSpec::kUMin && h.u <= RegionSpec::kUMax && h.v >= regions_.v_min_d() &&
                h.v <= regions_.v_max_d();
  if (!inside) throw DomainError(fmt::format("apply_level: point outside D_{}", n));
  if (!twist_.in_support(h)) return model_.apply(p);
  h = twist_tau(h, twist_);
  h.v -= model_.log_lambda();
  return from_level_coords(h, n);
}

PlanePoint PerturbedMap::fixed_point(int n) {
  double s = std::ldexp(1.0, -n);
  return {s, s};
}

double PerturbedMap::c0_level_distance(int n) const {
  if (n < n0_) throw InvalidInput(fmt::format("c0_level_distance: level {} is below n0 = {}", n, n0_));
  return std::ldexp(regions_.diameter_e0(), -n);
}

PerturbedTorusMap::PerturbedTorusMap(const PerturbedMap& planar, const AnosovMap& f)
    : planar_(planar), f_(f), chart_(f, planar.config().chart_radius) {
  double lam = planar.model().lambda();
  if (std::abs(lam - f.lambda()) > 1e-12 * f.lambda()) {
    throw GeometryGateError(fmt::format(
        "perturbation lambda {} does not match the automorphism eigenvalue {}", lam, f.lambda()));
  }
}

TorusPoint PerturbedTorusMap::apply(const TorusPoint& p) const {
  if (auto c = chart_.try_from_torus(p); c && planar_.modifies(*c)) {
    return chart_.to_torus(planar_.apply(*c));
  }
  return f_.apply(p);
}

TorusPoint PerturbedTorusMap::inverse(const TorusPoint& p) const {
  if (auto c = chart_.try_from_torus(p); c && planar_.modifies(planar_.model().inverse(*c))) {
    return chart_.to_torus(planar_.inverse(*c));
  }
  return f_.inverse(p);
}

// ---------------------------------------------------------------------------

double jacobian_determinant(const PlaneMap& f, PlanePoint p, double h) {
  auto deriv = [&](PlanePoint dir) {
    PlanePoint p1 = f(p + h * dir), m1 = f(p - h * dir);
    PlanePoint p2 = f(p + 2 * h * dir), m2 = f(p - 2 * h * dir);
    PlanePoint num = 8.0 * (p1 - m1) - (p2 - m2);
    return (1.0 / (12.0 * h)) * num;
  };
  PlanePoint dx = deriv({1, 0});
  PlanePoint dy = deriv({0, 1});
  return dx.x * dy.y - dy.x * dx.y;
}

MassCheck monte_carlo_mass(const PlaneMap& f, const PlaneMap& f_inv, const Rect& a,
                           const Rect& image_box, const Rect& preimage_box, std::size_t samples,
                           std::uint64_t seed) {
  if (samples == 0) throw InvalidInput("monte_carlo_mass: samples must be positive");
  std::mt19937_64 rng(seed);
  auto estimate = [&](const Rect& box, const PlaneMap& back, double& mass, double& sigma) {
    std::uniform_real_distribution<double> ux(box.x0, box.x1), uy(box.y0, box.y1);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < samples; ++i) {
      PlanePoint y{ux(rng), uy(rng)};
      if (a.contains(back(y))) ++hits;
    }
    double n = static_cast<double>(samples);
    double phat = hits / n;
    mass = box.area() * phat;
    sigma = box.area() * std::sqrt(phat * (1.0 - phat) / n);
  };
  MassCheck out;
  out.rect = a;
  out.samples = samples;
  out.area = a.area();
  // y in F(A) iff F^-1(y) in A.
  estimate(image_box, f_inv, out.image_mass, out.image_sigma);
  estimate(preimage_box, f, out.preimage_mass, out.preimage_sigma);
  return out;
}

PlanePoint sample_level_region(const PerturbedMap& map, int n, double s_u, double s_v) {
  const RegionSpec& r = map.regions();
  HyperCoord h{RegionSpec::kUMin + s_u * (RegionSpec::kUMax - RegionSpec::kUMin),
               r.v_min_d() + s_v * (r.v_max_d() - r.v_min_d())};
  return PerturbedMap::from_level_coords(h, n);
}

namespace {

bool near_non_smooth_set(const PerturbedMap& map, HyperCoord h, double margin) {
  const TwistParams& tw = map.twist();
  const RegionSpec& rg = map.regions();
  double r = tw.radius_of(h);
  return std::abs(r - tw.inner_radius()) < margin || std::abs(r - tw.outer_radius) < margin ||
         std::abs(h.u - RegionSpec::kUMin) < margin || std::abs(h.u - RegionSpec::kUMax) < margin ||
         std::abs(h.v - rg.v_min_d()) < margin || std::abs(h.v - rg.v_max_d()) < margin;
}

Rect twist_disk_box(const PerturbedMap& map, int level) {
  const TwistParams& tw = map.twist();
  PlanePoint c = tw.center();
  std::vector<PlanePoint> ring;
  constexpr int kAngles = 4096;
  for (int i = 0; i < kAngles; ++i) {
    double t = 2.0 * std::numbers::pi * i / kAngles;
    HyperCoord h{(c.x + tw.outer_radius * std::cos(t)) / tw.squeeze,
                 (c.y + tw.outer_radius * std::sin(t)) * tw.squeeze};
    ring.push_back(PerturbedMap::from_level_coords(h, level));
  }
  return inflate(bounding_box(ring), 0.02);
}

Rect apply_diagonal(const Rect& r, double sx, double sy) {
  return {r.x0 * sx, r.x1 * sx, r.y0 * sy, r.y1 * sy};
}

}  // namespace

Rect image_bounding_box(const PerturbedMap& map, const Rect& a, int level) {
  double lam = map.model().lambda();
  // T~(A) = T(tau_n(A)) and tau_n(A) lies in A u disk_n.
  return apply_diagonal(a, lam, 1.0 / lam).united(apply_diagonal(twist_disk_box(map, level), lam, 1.0 / lam));
}

Rect preimage_bounding_box(const PerturbedMap& map, const Rect& a, int level) {
  double lam = map.model().lambda();
  return apply_diagonal(a, 1.0 / lam, lam).united(twist_disk_box(map, level));
}

std::vector<Rect> default_test_rectangles(const PerturbedMap& map, int level) {
  const RegionSpec& rg = map.regions();
  double L = rg.log_lambda();
  double s = std::ldexp(1.0, -level);
  struct Seed {
    HyperCoord center;
    double half_width;
  };
  const Seed seeds[] = {
      {{1.0, 0.5 * L}, 0.15},  // twist center; reaches across the annulus
      {{1.0, 0.0}, 0.10},      // around the fixed point
      {{0.7, 0.2}, 0.08},      // D- side
      {{1.6, 1.0}, 0.10},      // D+ side, partly outside the twist disk
  };
  auto inside = [&](PlanePoint p) {
    HyperCoord h = PerturbedMap::level_coords(p, level);
    return h.u > RegionSpec::kUMin && h.u < RegionSpec::kUMax && h.v > rg.v_min_d() && h.v < rg.v_max_d();
  };
  std::vector<Rect> out;
  for (const Seed& sd : seeds) {
    PlanePoint c = from_hyper(sd.center);
    double w = sd.half_width;
    for (int tries = 0; tries < 40; ++tries, w *= 0.8) {
      Rect r{s * (c.x - w), s * (c.x + w), s * (c.y - w), s * (c.y + w)};
      if (r.x0 <= 0 || r.y0 <= 0) continue;
      // u and y/x are monotone in each coordinate, so the corners decide containment.
      if (inside({r.x0, r.y0}) && inside({r.x0, r.y1}) && inside({r.x1, r.y0}) && inside({r.x1, r.y1})) {
        out.push_back(r);
        break;
      }
    }
  }
  return out;
}

AreaStats verify_area(const PerturbedMap& map, const AreaCheckOptions& options) {
  if (options.jacobian_samples < 0 || options.levels <= 0) throw InvalidInput("verify_area: bad sample counts");
  AreaStats stats;
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PlaneMap f = [&map](PlanePoint p) { return map.apply(p); };
  PlaneMap f_inv = [&map](PlanePoint p) { return map.inverse(p); };

  for (int i = 0; i < options.jacobian_samples; ++i) {
    int n = map.n0() + i % options.levels;
    double su = unit(rng), sv = unit(rng);
    PlanePoint p = sample_level_region(map, n, su, sv);
    if (near_non_smooth_set(map, PerturbedMap::level_coords(p, n), options.exclusion)) {
      ++stats.jacobian_excluded;
      continue;
    }
    double det = jacobian_determinant(f, p, options.fd_step * std::ldexp(1.0, -n));
    stats.max_jacobian_error = std::max(stats.max_jacobian_error, std::abs(det - 1.0));
    ++stats.jacobian_evaluated;
  }

  if (options.monte_carlo) {
    int level = map.n0();
    std::uint64_t k = 0;
    for (const Rect& a : default_test_rectangles(map, level)) {
      MassCheck mc = monte_carlo_mass(f, f_inv, a, image_bounding_box(map, a, level),
                                      preimage_bounding_box(map, a, level), options.mc_samples,
                                      options.seed + 0x9e3779b97f4a7c15ULL * ++k);
      mc.level = level;
      stats.mass.push_back(mc);
    }
  }
  return stats;
}

double t0_jacobian_error(const PerturbedMap& map, int samples, std::uint64_t seed, double step,
                         double exclusion) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PlaneMap t0 = [&map](PlanePoint p) { return map.t0_apply(p); };
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    double su = unit(rng), sv = unit(rng);
    PlanePoint p = sample_level_region(map, 0, su, sv);
    if (near_non_smooth_set(map, to_hyper(p), exclusion)) continue;
    worst = std::max(worst, std::abs(jacobian_determinant(t0, p, step) - 1.0));
  }
  return worst;
}

double sampled_level_deviation(const PerturbedMap& map, int n, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    double su = unit(rng), sv = unit(rng);
    PlanePoint p = sample_level_region(map, n, su, sv);
    worst = std::max(worst, norm(map.model().apply(p) - map.apply_level(p, n)));
  }
  return worst;
}

}  // namespace cwx
