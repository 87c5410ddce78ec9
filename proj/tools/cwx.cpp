// cwx: experiment driver for the perturbed Anosov map, its escape
// certificates, and shadowing on the torus and the sphere quotient.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cwx/errors.hpp"

using namespace cwx;
using namespace cwx::cli;

int main(int argc, char** argv) {
  CLI::App app{"cw-expansive perturbation experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> xi, delta, eta, r0, a;
  std::optional<int> horizon;
  std::optional<std::string> out;
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--xi", xi, "expansivity scale xi");
  app.add_option("--delta", delta, "perturbation size delta");
  app.add_option("--horizon", horizon, "iteration window N");
  app.add_option("--eta", eta, "chain mesh");
  app.add_option("--R0", r0, "outer twist radius");
  app.add_option("--a", a, "twist squeeze factor");
  app.add_option("--out", out, "output directory");

  OrbitOptions orbit;
  auto* orbit_cmd = app.add_subcommand("orbit", "write an orbit as CSV");
  orbit_cmd->add_option("--map", orbit.map, "anosov, gpert or sphere")
      ->check(CLI::IsMember({"anosov", "gpert", "sphere"}));
  orbit_cmd->add_option("--x0", orbit.x0);
  orbit_cmd->add_option("--y0", orbit.y0);
  orbit_cmd->add_option("--start-level", orbit.start_level, "start at the fixed point p_N");
  orbit_cmd->add_option("--steps", orbit.steps);

  EscapeOptions escape;
  auto* escape_cmd = app.add_subcommand("escape", "escape certificates for chains joining u_n and u_m");
  escape_cmd->add_option("--n", escape.n);
  escape_cmd->add_option("--m", escape.m);
  escape_cmd->add_option("--family", escape.family, "number of chains");

  ShadowOptions shadow;
  auto* shadow_cmd = app.add_subcommand("shadow", "shadow seeded pseudo-orbits");
  shadow_cmd->add_option("--space", shadow.space, "torus or sphere")->check(CLI::IsMember({"torus", "sphere"}));
  shadow_cmd->add_option("--length", shadow.length);
  shadow_cmd->add_option("--pseudo-delta", shadow.pseudo_delta, "pseudo-orbit step error bound");
  shadow_cmd->add_option("--count", shadow.count);

  AreaOptions area;
  auto* area_cmd = app.add_subcommand("area-check", "Jacobian and Monte Carlo area checks");
  area_cmd->add_option("--jacobian-samples", area.jacobian_samples);
  area_cmd->add_option("--mc-samples", area.mc_samples);
  area_cmd->add_option("--levels", area.levels);

  StabilityOptions stab;
  auto* stab_cmd = app.add_subcommand("stability", "xi-stability report of a short segment");
  stab_cmd->add_option("--map", stab.map, "anosov, gpert or sphere")
      ->check(CLI::IsMember({"anosov", "gpert", "sphere"}));
  stab_cmd->add_option("--direction", stab.direction)->check(CLI::IsMember({"unstable", "stable"}));
  stab_cmd->add_option("--length", stab.length);
  stab_cmd->add_option("--x0", stab.x0);
  stab_cmd->add_option("--y0", stab.y0);

  auto* verify_cmd = app.add_subcommand("verify", "run the full property suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = load_config_file(config_path);
    if (seed) cfg.seed = *seed;
    if (xi) cfg.xi = *xi;
    if (delta) cfg.delta = *delta;
    if (horizon) cfg.horizon = *horizon;
    if (eta) cfg.eta = *eta;
    if (r0) cfg.r0 = *r0;
    if (a) cfg.a = *a;
    if (out) cfg.output_dir = *out;
    cfg.validate();

    if (*orbit_cmd) return cmd_orbit(cfg, orbit, std::cout);
    if (*escape_cmd) return cmd_escape(cfg, escape, std::cout);
    if (*shadow_cmd) return cmd_shadow(cfg, shadow, std::cout);
    if (*area_cmd) return cmd_area_check(cfg, area, std::cout);
    if (*stab_cmd) return cmd_stability(cfg, stab, std::cout);
    if (*verify_cmd) return cmd_verify(cfg, std::cout);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const GeometryGateError& e) {
    std::cerr << "configuration rejected: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const UnwrapError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const DomainError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPropertyFailure;
  }
  return kUsage;
}
