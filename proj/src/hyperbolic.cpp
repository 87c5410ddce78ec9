#include "cwx/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace cwx {

AnosovMap::AnosovMap(int a, int b, int c, int d) : m_{a, b, c, d} {
  if (static_cast<long long>(a) * d - static_cast<long long>(b) * c != 1)
    throw InvalidInput("AnosovMap: determinant must be 1");
  if (b != c) throw InvalidInput("AnosovMap: matrix must be symmetric");
  if (b == 0) throw InvalidInput("AnosovMap: diagonal matrices do not act hyperbolically on the torus");
  int trace = a + d;
  if (std::abs(trace) <= 2) throw InvalidInput("AnosovMap: |trace| must exceed 2");
  // Orientation-preserving with positive trace: the expanding eigenvalue is positive.
  if (trace < 0) throw InvalidInput("AnosovMap: negative trace not supported");

  double t = trace;
  lambda_ = (t + std::sqrt(t * t - 4.0)) / 2.0;
  log_lambda_ = std::log(lambda_);
  // (b, lambda - a) spans the kernel of M - lambda I.
  PlanePoint v{static_cast<double>(b), lambda_ - a};
  if (v.x < 0) v = -1.0 * v;
  e_u_ = (1.0 / norm(v)) * v;
  e_s_ = {-e_u_.y, e_u_.x};
}

TorusPoint AnosovMap::apply(const TorusPoint& p) const {
  return TorusPoint(m_[0] * p.x() + m_[1] * p.y(), m_[2] * p.x() + m_[3] * p.y());
}

TorusPoint AnosovMap::inverse(const TorusPoint& p) const {
  return TorusPoint(m_[3] * p.x() - m_[1] * p.y(), -m_[2] * p.x() + m_[0] * p.y());
}

PlanePoint AnosovMap::apply_linear(PlanePoint p) const {
  return {m_[0] * p.x + m_[1] * p.y, m_[2] * p.x + m_[3] * p.y};
}

PlanePoint AnosovMap::inverse_linear(PlanePoint p) const {
  return {m_[3] * p.x - m_[1] * p.y, -m_[2] * p.x + m_[0] * p.y};
}

namespace {

using Word = ExactTorusPoint::Word;

Word grid_word(double v) {
  // v = m 2^(e - 53) with integer m < 2^53.
  int e = 0;
  double frac = std::frexp(v, &e);
  if (frac == 0.0) return 0;
  Word m = static_cast<std::uint64_t>(std::ldexp(frac, 53));
  int shift = static_cast<int>(ExactTorusPoint::kBits) + e - 53;
  if (shift >= 0) return m << shift;
  return m >> -shift;
}

Word combine(int a, const Word& x, int b, const Word& y) {
  // Unsigned fixed-width arithmetic wraps modulo 2^kBits, i.e. modulo 1 on the grid.
  Word out = 0;
  if (a >= 0) out += Word(static_cast<unsigned>(a)) * x;
  else out -= Word(static_cast<unsigned>(-a)) * x;
  if (b >= 0) out += Word(static_cast<unsigned>(b)) * y;
  else out -= Word(static_cast<unsigned>(-b)) * y;
  return out;
}

// Signed value of w in [-1/2, 1/2) as a double.
double signed_fraction(const Word& w) {
  static const Word half = Word(1) << (ExactTorusPoint::kBits - 1);
  bool negative = w >= half;
  Word mag = negative ? Word(0) - w : w;
  unsigned msb = mag == 0 ? 0 : boost::multiprecision::msb(mag);
  // Keep the leading 64 bits; the conversion below rounds once more to 53.
  int drop = msb > 63 ? static_cast<int>(msb) - 63 : 0;
  double lead = static_cast<double>(static_cast<std::uint64_t>(mag >> drop));
  double r = std::ldexp(lead, drop - static_cast<int>(ExactTorusPoint::kBits));
  return negative ? -r : r;
}

std::string hex(const Word& w) {
  std::ostringstream os;
  os << std::hex << std::setw(ExactTorusPoint::kBits / 4) << std::setfill('0') << w;
  return os.str();
}

}  // namespace

ExactTorusPoint::ExactTorusPoint(const TorusPoint& p) : x_(grid_word(p.x())), y_(grid_word(p.y())) {}

ExactTorusPoint ExactTorusPoint::apply(const AnosovMap& f) const {
  const auto& m = f.entries();
  return {combine(m[0], x_, m[1], y_), combine(m[2], x_, m[3], y_)};
}

ExactTorusPoint ExactTorusPoint::inverse(const AnosovMap& f) const {
  const auto& m = f.entries();
  return {combine(m[3], x_, -m[1], y_), combine(-m[2], x_, m[0], y_)};
}

TorusPoint ExactTorusPoint::to_torus() const {
  return TorusPoint(signed_fraction(x_), signed_fraction(y_));
}

PlanePoint ExactTorusPoint::delta_to(const TorusPoint& p) const { return delta_to(ExactTorusPoint(p)); }

PlanePoint ExactTorusPoint::delta_to(const ExactTorusPoint& q) const {
  return {signed_fraction(q.x_ - x_), signed_fraction(q.y_ - y_)};
}

namespace {

Word half_step(const Word& from, const Word& to) {
  static const Word half = Word(1) << (ExactTorusPoint::kBits - 1);
  Word d = to - from;
  if (d < half) return from + (d >> 1);
  return from - ((Word(0) - d) >> 1);
}

}  // namespace

ExactTorusPoint midpoint(const ExactTorusPoint& a, const ExactTorusPoint& b) {
  return {half_step(a.x_word(), b.x_word()), half_step(a.y_word(), b.y_word())};
}

double chain_diam(const Chain<ExactTorusPoint>& c) {
  // Displacements from the first point keep full relative precision.
  std::vector<PlanePoint> lifted;
  lifted.reserve(c.size());
  PlanePoint pos{0, 0};
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i > 0) pos = pos + c.pts()[i - 1].delta_to(c.pts()[i]);
    lifted.push_back(pos);
  }
  auto [xmin, xmax] = std::minmax_element(lifted.begin(), lifted.end(),
                                          [](PlanePoint a, PlanePoint b) { return a.x < b.x; });
  auto [ymin, ymax] = std::minmax_element(lifted.begin(), lifted.end(),
                                          [](PlanePoint a, PlanePoint b) { return a.y < b.y; });
  if (xmax->x - xmin->x < 0.5 && ymax->y - ymin->y < 0.5) return plane_set_diameter(lifted);
  return pairwise_diameter<ExactTorusPoint>(c.pts());
}

std::string ExactTorusPoint::hex_x() const { return hex(x_); }
std::string ExactTorusPoint::hex_y() const { return hex(y_); }

LinearModel::LinearModel(double lambda) : lambda_(lambda), log_lambda_(std::log(lambda)) {
  if (!(lambda > 1.0) || !std::isfinite(lambda)) throw InvalidInput("LinearModel: lambda must exceed 1");
}

HyperCoord to_hyper(PlanePoint p) {
  if (!(p.x > 0.0) || !(p.y > 0.0)) throw DomainError("to_hyper: point outside the open first quadrant");
  return {p.x * p.y, 0.5 * std::log(p.y / p.x)};
}

PlanePoint from_hyper(HyperCoord h) {
  if (!(h.u > 0.0)) throw DomainError("from_hyper: u must be positive");
  double s = std::sqrt(h.u);
  return {s * std::exp(-h.v), s * std::exp(h.v)};
}

EigenChart::EigenChart(const AnosovMap& f, double radius) : f_(f), radius_(radius) {
  if (!(radius > 0.0) || !(radius < 0.5)) throw InvalidInput("EigenChart: radius must lie in (0, 1/2)");
}

TorusPoint EigenChart::to_torus(PlanePoint p) const {
  if (!(norm(p) < radius_)) throw DomainError("EigenChart: point outside the chart domain");
  PlanePoint eu = f_.unstable(), es = f_.stable();
  return TorusPoint(eu.x * p.x + es.x * p.y, eu.y * p.x + es.y * p.y);
}

std::optional<PlanePoint> EigenChart::try_from_torus(const TorusPoint& p) const {
  PlanePoint lift{wrap_signed(p.x()), wrap_signed(p.y())};
  if (!(norm(lift) < radius_)) return std::nullopt;
  return PlanePoint{dot(lift, f_.unstable()), dot(lift, f_.stable())};
}

PlanePoint EigenChart::from_torus(const TorusPoint& p) const {
  auto c = try_from_torus(p);
  if (!c) throw DomainError("EigenChart: torus point outside the chart image");
  return *c;
}

}  // namespace cwx
