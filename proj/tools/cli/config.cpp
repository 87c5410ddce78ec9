#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace cwx::cli {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value, int line) {
  T out{};
  const char* first = value.data();
  const char* last = first + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last)
    throw UsageError(fmt::format("config line {}: bad value '{}' for {}", line, value, key));
  return out;
}

}  // namespace

PerturbationConfig ExperimentConfig::perturbation() const {
  PerturbationConfig p;
  p.lambda = lambda;
  p.xi = xi;
  p.delta = delta;
  p.outer_radius = r0;
  p.squeeze = a;
  p.n0_override = n0_override;
  return p;
}

void ExperimentConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(fmt::format("{} must be positive", name));
  };
  if (!(lambda > 1.0) || !std::isfinite(lambda)) throw UsageError("lambda must exceed 1");
  positive(xi, "xi");
  positive(delta, "delta");
  positive(r0, "R0");
  positive(a, "a");
  positive(eta, "eta");
  if (horizon < 0) throw UsageError("horizon must be non-negative");
  if (n0_override && *n0_override < 0) throw UsageError("n0_override must be non-negative");
  if (output_dir.empty()) throw UsageError("output_dir must not be empty");
}

ExperimentConfig parse_config_text(const std::string& text, ExperimentConfig cfg) {
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw.substr(0, raw.find('#')));
    if (s.empty()) continue;
    auto eq = s.find('=');
    if (eq == std::string::npos) throw UsageError(fmt::format("config line {}: expected key=value", line));
    std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
    if (value.empty()) throw UsageError(fmt::format("config line {}: missing value for {}", line, key));
    if (key == "lambda") cfg.lambda = parse_number<double>(key, value, line);
    else if (key == "xi") cfg.xi = parse_number<double>(key, value, line);
    else if (key == "delta") cfg.delta = parse_number<double>(key, value, line);
    else if (key == "R0") cfg.r0 = parse_number<double>(key, value, line);
    else if (key == "a") cfg.a = parse_number<double>(key, value, line);
    else if (key == "eta") cfg.eta = parse_number<double>(key, value, line);
    else if (key == "horizon") cfg.horizon = parse_number<int>(key, value, line);
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value, line);
    else if (key == "n0_override") cfg.n0_override = parse_number<int>(key, value, line);
    else if (key == "output_dir") cfg.output_dir = value;
    else throw UsageError(fmt::format("config line {}: unknown key '{}'", line, key));
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw UsageError(fmt::format("cannot read config file '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), base);
}

}  // namespace cwx::cli
