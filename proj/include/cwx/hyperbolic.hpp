#pragma once

// The linear Anosov automorphism of the torus, its diagonal model on the
// plane, the canonical hyperbolic coordinates of that model, and the
// isometric eigen-chart conjugating the two near the fixed point.

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "cwx/spaces.hpp"

namespace cwx {

/// Expanding eigenvalue of [[2,1],[1,1]].
inline const double kGoldenLambda = (3.0 + std::sqrt(5.0)) / 2.0;

/// Hyperbolic toral automorphism given by a symmetric unimodular integer matrix.
/// Only [[2,1],[1,1]] is exercised by the experiments.
class AnosovMap {
 public:
  AnosovMap() : AnosovMap(2, 1, 1, 1) {}
  AnosovMap(int a, int b, int c, int d);

  TorusPoint apply(const TorusPoint& p) const;
  TorusPoint inverse(const TorusPoint& p) const;

  /// Action of the matrix on the covering plane.
  PlanePoint apply_linear(PlanePoint p) const;
  PlanePoint inverse_linear(PlanePoint p) const;

  double lambda() const { return lambda_; }
  double log_lambda() const { return log_lambda_; }
  /// Unit eigenvectors; (e_u, e_s) is a positively oriented orthonormal basis.
  PlanePoint unstable() const { return e_u_; }
  PlanePoint stable() const { return e_s_; }
  const std::array<int, 4>& entries() const { return m_; }

 private:
  std::array<int, 4> m_;
  double lambda_;
  double log_lambda_;
  PlanePoint e_u_;
  PlanePoint e_s_;
};

/// Torus point on the dyadic grid 2^-1024 Z^2. Integer matrices act exactly on
/// the grid, so orbits of several hundred steps are followed without roundoff.
class ExactTorusPoint {
 public:
  static constexpr unsigned kBits = 1024;
  using Word = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<
      kBits, kBits, boost::multiprecision::unsigned_magnitude, boost::multiprecision::unchecked, void>>;

  /// Exact for every double in [0, 1) not below 2^-1024.
  explicit ExactTorusPoint(const TorusPoint& p);
  ExactTorusPoint(Word x, Word y) : x_(std::move(x)), y_(std::move(y)) {}

  ExactTorusPoint apply(const AnosovMap& f) const;
  ExactTorusPoint inverse(const AnosovMap& f) const;
  ExactTorusPoint antipode() const { return {Word(0) - x_, Word(0) - y_}; }

  /// Nearest double point.
  TorusPoint to_torus() const;
  /// Shortest displacement from this point to p, exact up to the final rounding.
  PlanePoint delta_to(const TorusPoint& p) const;
  PlanePoint delta_to(const ExactTorusPoint& p) const;

  const Word& x_word() const { return x_; }
  const Word& y_word() const { return y_; }
  std::string hex_x() const;
  std::string hex_y() const;

  friend bool operator==(const ExactTorusPoint&, const ExactTorusPoint&) = default;

 private:
  Word x_;
  Word y_;
};

// Chain support: long linear orbits of chains stay honest only on the exact grid.
inline double distance(const ExactTorusPoint& a, const ExactTorusPoint& b) { return norm(a.delta_to(b)); }
/// Midpoint along the shortest displacement, rounded down on the grid.
ExactTorusPoint midpoint(const ExactTorusPoint& a, const ExactTorusPoint& b);
double chain_diam(const Chain<ExactTorusPoint>& c);

/// T(x, y) = (lambda x, y / lambda).
class LinearModel {
 public:
  explicit LinearModel(double lambda = kGoldenLambda);

  PlanePoint apply(PlanePoint p) const { return {lambda_ * p.x, p.y / lambda_}; }
  PlanePoint inverse(PlanePoint p) const { return {p.x / lambda_, lambda_ * p.y}; }
  double lambda() const { return lambda_; }
  double log_lambda() const { return log_lambda_; }

 private:
  double lambda_;
  double log_lambda_;
};

/// u = xy, v = (1/2) ln(y/x) on the open first quadrant. The change of
/// variables has unit Jacobian and turns T into the shear v -> v - ln(lambda).
struct HyperCoord {
  double u = 1.0;
  double v = 0.0;
};

HyperCoord to_hyper(PlanePoint p);
PlanePoint from_hyper(HyperCoord h);

/// phi(p) = R p mod 1 with R = [e_u e_s]; satisfies f o phi = phi o T.
class EigenChart {
 public:
  explicit EigenChart(const AnosovMap& f = AnosovMap(), double radius = 0.2);

  TorusPoint to_torus(PlanePoint p) const;
  PlanePoint from_torus(const TorusPoint& p) const;
  std::optional<PlanePoint> try_from_torus(const TorusPoint& p) const;

  double radius() const { return radius_; }
  const AnosovMap& map() const { return f_; }

 private:
  AnosovMap f_;
  double radius_;
};

}  // namespace cwx
