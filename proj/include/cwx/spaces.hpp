#pragma once

// Points and metrics on the covering plane, the flat torus R^2/Z^2 and the
// sphere obtained from the torus by identifying p with -p.

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "cwx/errors.hpp"

namespace cwx {

struct PlanePoint {
  double x = 0.0;
  double y = 0.0;

  friend PlanePoint operator+(PlanePoint a, PlanePoint b) { return {a.x + b.x, a.y + b.y}; }
  friend PlanePoint operator-(PlanePoint a, PlanePoint b) { return {a.x - b.x, a.y - b.y}; }
  friend PlanePoint operator*(double s, PlanePoint a) { return {s * a.x, s * a.y}; }
  friend bool operator==(PlanePoint, PlanePoint) = default;
};

inline double dot(PlanePoint a, PlanePoint b) { return a.x * b.x + a.y * b.y; }
inline double norm(PlanePoint a) { return std::hypot(a.x, a.y); }

/// Reduces v into [0, 1). A tiny negative v whose residue rounds up to 1 maps to 0.
inline double wrap_unit(double v) {
  double r = v - std::floor(v);
  if (r >= 1.0) r = 0.0;
  return r + 0.0;  // drops a negative zero
}

/// Reduces v into [-1/2, 1/2).
inline double wrap_signed(double v) {
  double r = wrap_unit(v + 0.5) - 0.5;
  return r;
}

/// Point of T^2 = R^2/Z^2, stored by its representative in [0,1)^2.
class TorusPoint {
 public:
  TorusPoint() = default;
  TorusPoint(double x, double y) : x_(wrap_unit(x)), y_(wrap_unit(y)) {}
  explicit TorusPoint(PlanePoint p) : TorusPoint(p.x, p.y) {}

  double x() const { return x_; }
  double y() const { return y_; }
  PlanePoint lift() const { return {x_, y_}; }

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;

 private:
  double x_ = 0.0;
  double y_ = 0.0;
};

inline TorusPoint antipode(const TorusPoint& p) { return TorusPoint(-p.x(), -p.y()); }

/// Shortest displacement from a to b, each component in [-1/2, 1/2).
inline PlanePoint torus_delta(const TorusPoint& a, const TorusPoint& b) {
  return {wrap_signed(b.x() - a.x()), wrap_signed(b.y() - a.y())};
}

/// Flat distance on the torus, minimized over integer translates.
inline double torus_dist(const TorusPoint& a, const TorusPoint& b) {
  double dx = std::abs(a.x() - b.x());
  double dy = std::abs(a.y() - b.y());
  dx = std::min(dx, 1.0 - dx);
  dy = std::min(dy, 1.0 - dy);
  return std::hypot(dx, dy);
}

/// Point of the antipodal quotient, represented by the lexicographically
/// smaller of its two torus lifts.
class SpherePoint {
 public:
  SpherePoint() = default;

  /// canon(p) == canon(antipode(p)) exactly. 1 - (1 - x) != x in doubles, but
  /// two antipodes land on a lift where the involution is exact.
  static SpherePoint canon(const TorusPoint& p) {
    TorusPoint p0 = antipode(antipode(p));
    TorusPoint q0 = antipode(p0);
    bool keep = p0.x() < q0.x() || (p0.x() == q0.x() && p0.y() <= q0.y());
    return SpherePoint(keep ? p0 : q0);
  }

  const TorusPoint& rep() const { return rep_; }
  TorusPoint other_lift() const { return antipode(rep_); }
  bool is_cone_point() const { return rep_ == antipode(rep_); }

  friend bool operator==(const SpherePoint&, const SpherePoint&) = default;

 private:
  explicit SpherePoint(const TorusPoint& rep) : rep_(rep) {}
  TorusPoint rep_;
};

inline SpherePoint sphere_canon(const TorusPoint& p) { return SpherePoint::canon(p); }

/// Quotient metric: distance between the closest pair of lifts. Antipodes are
/// not exact in doubles, so both mixed pairs are taken to keep it symmetric.
inline double sphere_dist(const SpherePoint& a, const SpherePoint& b) {
  return std::min({torus_dist(a.rep(), b.rep()), torus_dist(a.rep(), b.other_lift()),
                   torus_dist(a.other_lift(), b.rep())});
}

inline double plane_dist(PlanePoint a, PlanePoint b) { return norm(a - b); }

// Uniform spelling used by the generic chain algorithms.
inline double distance(PlanePoint a, PlanePoint b) { return plane_dist(a, b); }
inline double distance(const TorusPoint& a, const TorusPoint& b) { return torus_dist(a, b); }
inline double distance(const SpherePoint& a, const SpherePoint& b) { return sphere_dist(a, b); }

inline PlanePoint midpoint(PlanePoint a, PlanePoint b) { return 0.5 * (a + b); }

inline TorusPoint midpoint(const TorusPoint& a, const TorusPoint& b) {
  PlanePoint d = torus_delta(a, b);
  return TorusPoint(a.x() + 0.5 * d.x, a.y() + 0.5 * d.y);
}

inline SpherePoint midpoint(const SpherePoint& a, const SpherePoint& b) {
  const TorusPoint& r = a.rep();
  TorusPoint s = torus_dist(r, b.rep()) <= torus_dist(r, b.other_lift()) ? b.rep() : b.other_lift();
  return sphere_canon(midpoint(r, s));
}

/// Lifts a point sequence with small consecutive gaps to the covering plane,
/// starting from the representative of the first point.
std::vector<PlanePoint> unwrap_path(std::span<const TorusPoint> pts);

/// Diameter of a finite plane set (convex hull, then pairwise over hull vertices).
double plane_set_diameter(std::span<const PlanePoint> pts);

/// Finite stand-in for a continuum: an ordered point sequence whose consecutive
/// gaps are bounded by the mesh eta.
template <class P>
class Chain {
 public:
  Chain(std::vector<P> pts, double eta) : pts_(std::move(pts)), eta_(eta) {
    if (pts_.empty()) throw InvalidInput("chain must contain at least one point");
    if (!(eta_ > 0.0)) throw InvalidInput("chain mesh bound must be positive");
    for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
      if (distance(pts_[i], pts_[i + 1]) > eta_)
        throw InvalidInput("chain gap exceeds its mesh bound");
    }
  }

  /// Samples the polyline through `vertices` so that consecutive gaps are <= eta.
  static Chain from_polyline(std::span<const P> vertices, double eta) {
    if (vertices.empty()) throw InvalidInput("polyline needs at least one vertex");
    if (!(eta > 0.0)) throw InvalidInput("chain mesh bound must be positive");
    std::vector<P> out{vertices.front()};
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
      append_segment(out, vertices[i], vertices[i + 1], eta);
    }
    return Chain(std::move(out), eta);
  }

  const std::vector<P>& pts() const { return pts_; }
  double eta() const { return eta_; }
  std::size_t size() const { return pts_.size(); }

 private:
  static void append_segment(std::vector<P>& out, const P& a, const P& b, double eta) {
    // Bisection keeps the construction independent of any vector structure on P.
    if (distance(a, b) <= eta) {
      out.push_back(b);
      return;
    }
    P mid = midpoint(a, b);
    append_segment(out, a, mid, eta);
    append_segment(out, mid, b, eta);
  }

  std::vector<P> pts_;
  double eta_;
};

/// Directed-distance maximum in both directions under the ambient metric.
template <class P>
double hausdorff_dist(std::span<const P> a, std::span<const P> b) {
  if (a.empty() || b.empty()) throw InvalidInput("hausdorff_dist: empty set is not a continuum");
  auto directed = [](std::span<const P> from, std::span<const P> to) {
    double worst = 0.0;
    for (const P& p : from) {
      double best = distance(p, to.front());
      for (const P& q : to) best = std::min(best, distance(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

template <class P>
double hausdorff_dist(const std::vector<P>& a, const std::vector<P>& b) {
  return hausdorff_dist(std::span<const P>(a), std::span<const P>(b));
}

/// Maximum pairwise distance, O(n^2).
template <class P>
double pairwise_diameter(std::span<const P> pts) {
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, distance(pts[i], pts[j]));
  return d;
}

double chain_diam(const Chain<PlanePoint>& c);
double chain_diam(const Chain<TorusPoint>& c);
double chain_diam(const Chain<SpherePoint>& c);

}  // namespace cwx
