#pragma once

// Area-preserving perturbation of the diagonal hyperbolic map T with a fixed
// point inside every dyadic level D_n, n >= n0, and its transport to the torus
// through the eigen-chart.
//
// Level 0 lives in the hyperbolic coordinates (u, v) = (xy, ln(y/x)/2):
//   D = [1/2, 2] x [-L/2, 3L/2],  E = T(D) = [1/2, 2] x [-3L/2, L/2],  L = ln(lambda).
// The homothety v -> v / 2^n divides u by 4^n and leaves v alone, so the level
// of a point is read off u alone, and the u-bands of consecutive levels share
// exactly the hyperbolas H_n : xy = 2 / 4^n.
//
// On D the map is T0 = T o tau, where tau is a compactly supported twist about
// c = (1, L/2): rotation by pi inside radius L/2, a linearly decaying angle out
// to R0, the identity beyond. tau(1, 0) = (1, L), so T0 fixes (1, 1).

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cwx/hyperbolic.hpp"

namespace cwx {

/// Level-0 regions D, E and the arc l_D in hyperbolic coordinates.
class RegionSpec {
 public:
  explicit RegionSpec(double lambda = kGoldenLambda);

  static constexpr double kUMin = 0.5;
  static constexpr double kUArc = 1.0;
  static constexpr double kUMax = 2.0;

  double lambda() const { return lambda_; }
  double log_lambda() const { return log_lambda_; }
  double v_min_d() const { return -0.5 * log_lambda_; }
  double v_max_d() const { return 1.5 * log_lambda_; }
  double v_min_e() const { return -1.5 * log_lambda_; }
  double v_max_e() const { return 0.5 * log_lambda_; }

  /// Corners of D followed by corners of E, in plane coordinates.
  std::array<PlanePoint, 8> corners() const;
  /// Largest norm of a point of D u E (attained at a corner).
  double max_corner_norm() const;
  /// Diameter of E at level 0.
  double diameter_e0() const;

 private:
  double lambda_;
  double log_lambda_;
  double diameter_e0_;
};

enum class Zone { Outside, Boundary, Interior };

/// Position relative to the arc l_D (u = 1 at level 0).
enum class Half { Minus, Arc, Plus };

struct RegionLocation {
  Zone d = Zone::Outside;  ///< relative to D_level
  Zone e = Zone::Outside;  ///< relative to E_level
  /// Level whose u-band contains the point. On a shared band edge u = 2/4^n
  /// (the hyperbola H_n) this is n and both zones are Boundary at most.
  int level = -1;
  Half half = Half::Minus;
  bool underflow = false;
};

RegionLocation region_locate(PlanePoint p, const RegionSpec& spec);

struct TwistParams {
  double log_lambda = std::log(kGoldenLambda);
  double outer_radius = 0.49;
  /// Area-preserving squeeze (u, v) -> (a u, v / a) applied before twisting.
  double squeeze = 1.0;

  PlanePoint center() const { return {squeeze, 0.5 * log_lambda / squeeze}; }
  double inner_radius() const { return 0.5 * log_lambda / squeeze; }
  /// pi on [0, r*], linear down to 0 at R0, 0 beyond.
  double angle(double r) const;
  /// Distance from the twist center in squeezed coordinates.
  double radius_of(HyperCoord h) const;
  bool in_support(HyperCoord h) const { return radius_of(h) < outer_radius; }

  /// Requires r* < R0 < min(a/2, L/a): the support disk sits inside int D.
  void validate() const;
};

HyperCoord twist_tau(HyperCoord h, const TwistParams& params);
HyperCoord twist_tau_inverse(HyperCoord h, const TwistParams& params);

/// K = [-xi, xi]^2, L = [-xi/2, xi/2]^2, W = open ball of radius delta/2.
struct ChartBoxes {
  double xi = 0.02;
  double delta = 0.02;
  double chart_radius = 0.2;

  bool in_k(PlanePoint p) const { return std::abs(p.x) <= xi && std::abs(p.y) <= xi; }
  bool in_l(PlanePoint p) const { return std::abs(p.x) <= xi / 2 && std::abs(p.y) <= xi / 2; }
  bool in_w(PlanePoint p) const { return norm(p) < delta / 2; }
  bool in_k_or_tk(PlanePoint p, double lambda) const {
    return in_k(p) || (std::abs(p.x) <= lambda * xi && std::abs(p.y) <= xi / lambda);
  }
  /// Checks K and T(K) inside the chart disk and W inside L.
  void validate(double lambda) const;
};

/// Smallest n0 >= 0 with max|D u E| * 2^-n <= delta/2.
int compute_n0(const ChartBoxes& boxes, const RegionSpec& regions);

struct PerturbationConfig {
  double lambda = kGoldenLambda;
  double xi = 0.02;
  double delta = 0.02;
  double outer_radius = 0.49;
  double squeeze = 1.0;
  double chart_radius = 0.2;
  std::optional<int> n0_override;
};

/// The map T~ : T modified by T_n = M_n o T0 o M_n^-1 on every D_n, n >= n0.
/// Levels are resolved lazily from u, so there is no truncation level.
class PerturbedMap {
 public:
  explicit PerturbedMap(const PerturbationConfig& config = {});

  struct Result {
    PlanePoint point;
    bool underflow = false;
  };

  PlanePoint apply(PlanePoint p) const { return apply_flagged(p).point; }
  PlanePoint inverse(PlanePoint p) const { return inverse_flagged(p).point; }
  Result apply_flagged(PlanePoint p) const;
  Result inverse_flagged(PlanePoint p) const;

  /// True where T~ can differ from T (inside a twist disk of an active level).
  bool modifies(PlanePoint p) const;

  /// T_n on the closed region D_n, for any level n >= 0.
  PlanePoint apply_level(PlanePoint p, int n) const;
  PlanePoint t0_apply(PlanePoint p) const { return apply_level(p, 0); }

  /// u_n = (2^-n, 2^-n).
  static PlanePoint fixed_point(int n);

  /// 2^-n diam E_0, the C0 distance bound between consecutive truncations.
  double c0_level_distance(int n) const;

  int n0() const { return n0_; }
  const LinearModel& model() const { return model_; }
  const TwistParams& twist() const { return twist_; }
  const RegionSpec& regions() const { return regions_; }
  const ChartBoxes& boxes() const { return boxes_; }
  const PerturbationConfig& config() const { return config_; }

  /// Hyperbolic coordinates of p rescaled to level n (u multiplied by 4^n).
  static HyperCoord level_coords(PlanePoint p, int n);
  static PlanePoint from_level_coords(HyperCoord h, int n);

 private:
  std::optional<int> active_level(PlanePoint p) const;

  PerturbationConfig config_;
  LinearModel model_;
  RegionSpec regions_;
  TwistParams twist_;
  ChartBoxes boxes_;
  int n0_;
};

/// g_pert = phi o T~ o phi^-1 near the fixed point of f, f elsewhere.
class PerturbedTorusMap {
 public:
  explicit PerturbedTorusMap(const PerturbedMap& planar, const AnosovMap& f = AnosovMap());

  TorusPoint apply(const TorusPoint& p) const;
  TorusPoint inverse(const TorusPoint& p) const;
  /// p_n = phi(u_n).
  TorusPoint fixed_point(int n) const { return chart_.to_torus(PerturbedMap::fixed_point(n)); }

  const PerturbedMap& planar() const { return planar_; }
  const AnosovMap& base() const { return f_; }
  const EigenChart& chart() const { return chart_; }

 private:
  PerturbedMap planar_;
  AnosovMap f_;
  EigenChart chart_;
};

// ---------------------------------------------------------------------------
// Area checks

struct Rect {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  double area() const { return (x1 - x0) * (y1 - y0); }
  bool contains(PlanePoint p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  Rect united(const Rect& o) const {
    return {std::min(x0, o.x0), std::max(x1, o.x1), std::min(y0, o.y0), std::max(y1, o.y1)};
  }
};

using PlaneMap = std::function<PlanePoint(PlanePoint)>;

/// Determinant of the Jacobian by fourth-order central differences with step h.
double jacobian_determinant(const PlaneMap& f, PlanePoint p, double h);

struct MassCheck {
  Rect rect;
  int level = 0;
  std::size_t samples = 0;
  double area = 0;
  double image_mass = 0;
  double image_sigma = 0;
  double preimage_mass = 0;
  double preimage_sigma = 0;

  bool image_within(double k = 3.0) const { return std::abs(image_mass - area) <= k * image_sigma; }
  bool preimage_within(double k = 3.0) const {
    return std::abs(preimage_mass - area) <= k * preimage_sigma;
  }
};

/// Hit-or-miss estimate of mu(F(A)) and mu(F^-1(A)) inside the given boxes,
/// which must contain F(A) and F^-1(A) respectively.
MassCheck monte_carlo_mass(const PlaneMap& f, const PlaneMap& f_inv, const Rect& a,
                           const Rect& image_box, const Rect& preimage_box, std::size_t samples,
                           std::uint64_t seed);

struct AreaCheckOptions {
  int jacobian_samples = 100000;
  std::size_t mc_samples = 1000000;
  int levels = 5;  ///< levels n0 .. n0 + levels - 1 are sampled
  std::uint64_t seed = 1;
  double fd_step = 1e-6;  ///< relative to the level scale 2^-n
  double exclusion = 1e-4;  ///< distance kept from non-smooth circles and edges, level-0 units
  bool monte_carlo = true;
};

struct AreaStats {
  int jacobian_evaluated = 0;
  int jacobian_excluded = 0;
  double max_jacobian_error = 0;
  std::vector<MassCheck> mass;
};

/// Jacobian of T~ over the active levels and Monte Carlo mass ratios on the
/// default test rectangles of level n0.
AreaStats verify_area(const PerturbedMap& map, const AreaCheckOptions& options);

/// Max |det DT0 - 1| over int D away from the twist circles, step 1e-6 by default.
double t0_jacobian_error(const PerturbedMap& map, int samples, std::uint64_t seed, double step = 1e-6,
                         double exclusion = 1e-4);

/// Axis-aligned rectangles inside D_n used for the mass checks; the first one
/// straddles the twist annulus.
std::vector<Rect> default_test_rectangles(const PerturbedMap& map, int level);

/// Boxes containing T~(A) and T~^-1(A) for a rectangle A inside D_level.
Rect image_bounding_box(const PerturbedMap& map, const Rect& a, int level);
Rect preimage_bounding_box(const PerturbedMap& map, const Rect& a, int level);

/// Sampled sup over D_n of |T(p) - T_n(p)|.
double sampled_level_deviation(const PerturbedMap& map, int n, int samples, std::uint64_t seed);

/// Uniform sample of D_n in hyperbolic coordinates (unit Jacobian, so uniform in area).
PlanePoint sample_level_region(const PerturbedMap& map, int n, double s_u, double s_v);

}  // namespace cwx
