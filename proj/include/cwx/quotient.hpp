#pragma once

// The homeomorphism g of the sphere T^2 / (p ~ -p) induced by the Anosov map,
// and sampled cw-expansivity evidence for it.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cwx/hyperbolic.hpp"
#include "cwx/stability.hpp"

namespace cwx {

/// Sphere point on the exact grid, represented by its lexicographically smaller lift.
class ExactSpherePoint {
 public:
  static ExactSpherePoint canon(const ExactTorusPoint& p);
  const ExactTorusPoint& rep() const { return rep_; }
  ExactTorusPoint other_lift() const { return rep_.antipode(); }
  SpherePoint to_sphere() const { return sphere_canon(rep_.to_torus()); }

  friend bool operator==(const ExactSpherePoint&, const ExactSpherePoint&) = default;

 private:
  explicit ExactSpherePoint(const ExactTorusPoint& rep) : rep_(rep) {}
  ExactTorusPoint rep_;
};

double distance(const ExactSpherePoint& a, const ExactSpherePoint& b);
ExactSpherePoint midpoint(const ExactSpherePoint& a, const ExactSpherePoint& b);
double chain_diam(const Chain<ExactSpherePoint>& c);

class SphereMap {
 public:
  explicit SphereMap(const AnosovMap& base = AnosovMap()) : base_(base) {}

  SpherePoint apply(const SpherePoint& s) const { return sphere_canon(base_.apply(s.rep())); }
  SpherePoint inverse(const SpherePoint& s) const { return sphere_canon(base_.inverse(s.rep())); }
  ExactSpherePoint apply(const ExactSpherePoint& s) const { return ExactSpherePoint::canon(s.rep().apply(base_)); }
  ExactSpherePoint inverse(const ExactSpherePoint& s) const {
    return ExactSpherePoint::canon(s.rep().inverse(base_));
  }
  const AnosovMap& base() const { return base_; }

 private:
  AnosovMap base_;
};

DynamicalMap<SpherePoint> sphere_dynamics(const SphereMap& g);
DynamicalMap<ExactSpherePoint> sphere_exact_dynamics(const SphereMap& g);

/// Classes of the four fixed points of p -> -p.
std::array<SpherePoint, 4> cone_points();

struct CwEvidenceReport {
  double xi = 0;
  int horizon = 0;
  double diam_floor = 0;
  std::size_t tested = 0;
  std::size_t excluded = 0;  ///< below the diameter floor
  /// Smallest-|n| violating step per tested chain, empty if none within the horizon.
  std::vector<std::optional<int>> first_violation;
  bool all_violated = true;
  int max_first_violation = 0;  ///< largest |n| over the tested chains
  std::string note;
};

/// For each chain of diameter >= diam_floor, looks for an iterate |n| <= horizon of diameter > xi.
CwEvidenceReport cw_evidence_sphere(const SphereMap& g, double xi, const std::vector<Chain<SpherePoint>>& family,
                                    int horizon, double diam_floor = 1e-3, const PropagationOptions& opt = {});

/// Short arc in the unstable direction of length `length` starting at p.
Chain<SpherePoint> sphere_unstable_arc(const SphereMap& g, const TorusPoint& p, double length, double eta);

/// Chain 0 is an unstable arc of length (min_len + max_len)/2; the rest are seeded polylines
/// with 1 to 3 bends, random base point and direction, length in [min_len, max_len].
std::vector<Chain<SpherePoint>> random_sphere_family(const SphereMap& g, int count, std::uint64_t seed, double eta,
                                                     double min_len = 1e-3, double max_len = 5e-3);

}  // namespace cwx
