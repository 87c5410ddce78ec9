#include "report.hpp"

#include <filesystem>
#include <fstream>

#include <fmt/format.h>

namespace cwx::cli {

namespace {

Json point(double x, double y) { return Json::array({x, y}); }

Json optional_int(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json to_json(const ExperimentConfig& cfg) {
  Json j;
  j["lambda"] = cfg.lambda;
  j["xi"] = cfg.xi;
  j["delta"] = cfg.delta;
  j["R0"] = cfg.r0;
  j["a"] = cfg.a;
  j["eta"] = cfg.eta;
  j["horizon"] = cfg.horizon;
  j["seed"] = cfg.seed;
  j["n0_override"] = optional_int(cfg.n0_override);
  // Not computable from the construction; recorded as standing assumptions.
  j["assumptions"] = Json::array({"xi is below the cw-expansivity constant of the unperturbed map",
                                  "the delta-ball of f in the C0 topology lies in the neighborhood U"});
  return j;
}

Json to_json(const StabilityReport& r) {
  Json j;
  j["horizon"] = r.horizon;
  j["xi"] = r.xi;
  Json diams = Json::array();
  for (const auto& d : r.diams) diams.push_back(d ? Json(*d) : Json(nullptr));
  j["diams"] = diams;
  j["verdict"] = r.verdict == Verdict::Stable ? "stable" : "violated";
  j["first_violation"] = optional_int(r.first_violation);
  j["note"] = r.verdict == Verdict::Stable ? "finite window; a necessary condition only"
                                           : "finite window; diameters after a violation are not computed";
  return j;
}

Json to_json(const EscapeCertificate& c, double xi) {
  Json j;
  j["n"] = c.n;
  j["m"] = c.m;
  j["n_star"] = c.n_star;
  j["n_exit"] = optional_int(c.n_exit);
  j["exit_diam"] = c.exit_diam;
  j["contained"] = c.contained;
  j["certified"] = c.certified(xi);
  return j;
}

Json to_json(const PseudoOrbit<TorusPoint>& po) {
  Json pts = Json::array();
  for (const TorusPoint& p : po.pts) pts.push_back(point(p.x(), p.y()));
  return Json{{"pts", pts}, {"delta", po.delta}};
}

Json to_json(const PseudoOrbit<SpherePoint>& po) {
  Json pts = Json::array();
  for (const SpherePoint& p : po.pts) pts.push_back(point(p.rep().x(), p.rep().y()));
  return Json{{"pts", pts}, {"delta", po.delta}};
}

Json to_json(const TorusShadow& s, bool verified) {
  Json j;
  j["point"] = point(s.point.x(), s.point.y());
  j["point_exact"] = Json{{"x", s.exact.hex_x()}, {"y", s.exact.hex_y()}, {"scale", "2^-1024"}};
  j["eps_achieved"] = s.eps_achieved;
  j["eps_bound"] = s.eps_bound;
  j["verified"] = verified;
  return j;
}

Json to_json(const SphereShadow& s, bool verified) {
  Json j;
  j["point"] = point(s.point.rep().x(), s.point.rep().y());
  j["point_exact_lift"] = Json{{"x", s.exact_lift.hex_x()}, {"y", s.exact_lift.hex_y()}, {"scale", "2^-1024"}};
  j["eps_achieved"] = s.eps_achieved;
  j["eps_bound"] = s.eps_bound;
  j["verified"] = verified;
  return j;
}

Json to_json(const AreaStats& s) {
  Json j;
  j["jacobian_evaluated"] = s.jacobian_evaluated;
  j["jacobian_excluded"] = s.jacobian_excluded;
  j["max_jacobian_error"] = s.max_jacobian_error;
  Json mass = Json::array();
  for (const MassCheck& m : s.mass) {
    Json r;
    r["rect"] = Json::array({m.rect.x0, m.rect.x1, m.rect.y0, m.rect.y1});
    r["level"] = m.level;
    r["samples"] = m.samples;
    r["area"] = m.area;
    r["image_mass"] = m.image_mass;
    r["image_sigma"] = m.image_sigma;
    r["preimage_mass"] = m.preimage_mass;
    r["preimage_sigma"] = m.preimage_sigma;
    r["image_within_3sigma"] = m.image_within(3.0);
    r["preimage_within_3sigma"] = m.preimage_within(3.0);
    mass.push_back(r);
  }
  j["mass"] = mass;
  return j;
}

std::string csv_num(double v) { return fmt::format("{:.17g}", v); }

std::string write_output(const std::string& dir, const std::string& name, const std::string& text) {
  std::filesystem::create_directories(dir);
  std::filesystem::path path = std::filesystem::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  out << text;
  return path.string();
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace cwx::cli
