#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "cwx/perturbation.hpp"

namespace cwx::cli {

/// Bad command line or configuration file (exit status 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  double lambda = kGoldenLambda;
  double xi = 0.02;
  double delta = 0.02;
  double r0 = 0.49;
  double a = 1.0;
  double eta = 1e-4;
  int horizon = 64;
  std::uint64_t seed = 1;
  std::optional<int> n0_override;
  std::string output_dir = "out";

  PerturbationConfig perturbation() const;
  /// Range checks that do not need the map; the geometric gates are checked by PerturbedMap.
  void validate() const;
};

/// Flat key=value file; '#' starts a comment. Keys: lambda, xi, delta, R0, a,
/// eta, horizon, seed, n0_override, output_dir.
ExperimentConfig parse_config_text(const std::string& text, ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = {});

}  // namespace cwx::cli
