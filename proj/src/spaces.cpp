#include "cwx/spaces.hpp"

#include <algorithm>

namespace cwx {

std::vector<PlanePoint> unwrap_path(std::span<const TorusPoint> pts) {
  std::vector<PlanePoint> out;
  out.reserve(pts.size());
  if (pts.empty()) return out;
  out.push_back(pts.front().lift());
  for (std::size_t i = 1; i < pts.size(); ++i) {
    out.push_back(out.back() + torus_delta(pts[i - 1], pts[i]));
  }
  return out;
}

namespace {

double cross(PlanePoint o, PlanePoint a, PlanePoint b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew's monotone chain.
std::vector<PlanePoint> convex_hull(std::vector<PlanePoint> pts) {
  std::sort(pts.begin(), pts.end(),
            [](PlanePoint a, PlanePoint b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<PlanePoint> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0) --k;
    hull[k++] = pts[i - 1];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace

double plane_set_diameter(std::span<const PlanePoint> pts) {
  if (pts.size() < 2) return 0.0;
  std::vector<PlanePoint> hull = convex_hull({pts.begin(), pts.end()});
  return pairwise_diameter<PlanePoint>(hull);
}

double chain_diam(const Chain<PlanePoint>& c) { return plane_set_diameter(c.pts()); }

double chain_diam(const Chain<TorusPoint>& c) {
  std::vector<PlanePoint> lifted = unwrap_path(c.pts());
  auto [xmin, xmax] = std::minmax_element(lifted.begin(), lifted.end(),
                                          [](PlanePoint a, PlanePoint b) { return a.x < b.x; });
  auto [ymin, ymax] = std::minmax_element(lifted.begin(), lifted.end(),
                                          [](PlanePoint a, PlanePoint b) { return a.y < b.y; });
  // Below half a period in each direction the torus metric is the plane metric of the lift.
  if (xmax->x - xmin->x < 0.5 && ymax->y - ymin->y < 0.5) return plane_set_diameter(lifted);
  return pairwise_diameter<TorusPoint>(c.pts());
}

double chain_diam(const Chain<SpherePoint>& c) { return pairwise_diameter<SpherePoint>(c.pts()); }

}  // namespace cwx
