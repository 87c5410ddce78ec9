#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "report.hpp"

namespace cwx::cli {

enum ExitCode : int { kOk = 0, kPropertyFailure = 1, kUsage = 2, kNumeric = 3 };

struct OrbitOptions {
  std::string map = "anosov";  ///< anosov, gpert or sphere
  double x0 = 0.0;
  double y0 = 0.0;
  std::optional<int> start_level;  ///< start at p_N instead of (x0, y0)
  int steps = 10;
};

struct EscapeOptions {
  std::optional<int> n;  ///< defaults to n0
  std::optional<int> m;  ///< defaults to n + 1
  int family = 100;
};

struct ShadowOptions {
  std::string space = "torus";  ///< torus or sphere
  int length = 200;
  double pseudo_delta = 1e-4;
  int count = 1;
};

struct AreaOptions {
  int jacobian_samples = 100000;
  std::size_t mc_samples = 1000000;
  int levels = 5;
};

struct StabilityOptions {
  std::string map = "anosov";        ///< anosov, gpert or sphere
  std::string direction = "unstable";  ///< unstable or stable
  std::optional<double> length;      ///< defaults to xi / 10
  double x0 = 0.3;
  double y0 = 0.6;
};

int cmd_orbit(const ExperimentConfig& cfg, const OrbitOptions& opt, std::ostream& log);
int cmd_escape(const ExperimentConfig& cfg, const EscapeOptions& opt, std::ostream& log);
int cmd_shadow(const ExperimentConfig& cfg, const ShadowOptions& opt, std::ostream& log);
int cmd_area_check(const ExperimentConfig& cfg, const AreaOptions& opt, std::ostream& log);
int cmd_stability(const ExperimentConfig& cfg, const StabilityOptions& opt, std::ostream& log);
int cmd_verify(const ExperimentConfig& cfg, std::ostream& log);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed = false;
  Json json;
};

/// Runs every module's invariant suite. Deterministic given the configuration.
VerifyReport run_verify_suite(const ExperimentConfig& cfg);

}  // namespace cwx::cli
