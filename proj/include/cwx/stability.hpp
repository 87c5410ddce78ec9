#pragma once

// Finite-window iteration of chains, xi-stability reports, escape certificates
// separating the fixed points of the perturbed map, the half cw-expansivity
// constant finder and the combined metric dist3.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "cwx/perturbation.hpp"
#include "cwx/spaces.hpp"

namespace cwx {

template <class P>
struct DynamicalMap {
  std::function<P(const P&)> forward;
  std::function<P(const P&)> backward;
  std::string name;

  DynamicalMap reversed() const { return {backward, forward, name + "^-1"}; }
};

DynamicalMap<PlanePoint> perturbed_dynamics(const PerturbedMap& map);
DynamicalMap<PlanePoint> linear_dynamics(const LinearModel& model);
DynamicalMap<TorusPoint> anosov_dynamics(const AnosovMap& f);
/// Exact on the 2^-1024 grid; use for windows longer than a few dozen steps.
DynamicalMap<ExactTorusPoint> anosov_exact_dynamics(const AnosovMap& f);
DynamicalMap<TorusPoint> perturbed_torus_dynamics(const PerturbedTorusMap& g);

struct PropagationOptions {
  double eta = 1e-4;
  std::size_t budget = 1000000;
};

namespace detail {

// Parameter points are kept at step 0; an inserted point is mapped from its
// parameter so every image is an honest iterate.
template <class P>
class ChainPropagator {
 public:
  ChainPropagator(const DynamicalMap<P>& map, const Chain<P>& c, const PropagationOptions& opt)
      : map_(map), opt_(opt), src_(c.pts()), img_(c.pts()) {
    if (!(opt.eta > 0.0)) throw InvalidInput("propagation mesh eta must be positive");
    refine();
  }

  void advance() {
    ++step_;
    for (P& p : img_) p = map_.forward(p);
    refine();
  }

  int step() const { return step_; }
  Chain<P> chain() const { return Chain<P>(img_, opt_.eta); }
  const std::vector<P>& points() const { return img_; }

 private:
  P iterate(P p) const {
    for (int k = 0; k < step_; ++k) p = map_.forward(p);
    return p;
  }

  void fill(const P& s0, const P& y0, const P& s1, const P& y1, int depth, std::vector<P>& src,
            std::vector<P>& img) {
    if (distance(y0, y1) <= opt_.eta) return;
    if (depth >= 64) {
      throw ResourceError(fmt::format("chain refinement exceeded the bisection depth at step {}", step_), step_);
    }
    P sm = midpoint(s0, s1);
    if (sm == s0 || sm == s1) {
      throw ResourceError(fmt::format("chain parameter resolution exhausted at step {}", step_), step_);
    }
    P ym = iterate(sm);
    fill(s0, y0, sm, ym, depth + 1, src, img);
    src.push_back(sm);
    img.push_back(ym);
    if (src.size() > opt_.budget) {
      throw ResourceError(
          fmt::format("chain refinement exceeded the point budget of {} at step {}", opt_.budget, step_), step_);
    }
    fill(sm, ym, s1, y1, depth + 1, src, img);
  }

  void refine() {
    std::vector<P> src{src_.front()}, img{img_.front()};
    src.reserve(src_.size());
    img.reserve(img_.size());
    for (std::size_t i = 0; i + 1 < src_.size(); ++i) {
      fill(src_[i], img_[i], src_[i + 1], img_[i + 1], 0, src, img);
      src.push_back(src_[i + 1]);
      img.push_back(img_[i + 1]);
    }
    src_ = std::move(src);
    img_ = std::move(img);
  }

  const DynamicalMap<P>& map_;
  PropagationOptions opt_;
  std::vector<P> src_;
  std::vector<P> img_;
  int step_ = 0;
};

}  // namespace detail

/// Visits the images of c at steps 0..steps; the visitor returns false to stop early.
template <class P>
void propagate_until(const DynamicalMap<P>& map, const Chain<P>& c, int steps, const PropagationOptions& opt,
                     const std::function<bool(int, const Chain<P>&)>& visit) {
  if (steps < 0) throw InvalidInput("propagate: steps must be non-negative");
  detail::ChainPropagator<P> prop(map, c, opt);
  if (!visit(0, prop.chain())) return;
  for (int k = 1; k <= steps; ++k) {
    prop.advance();
    if (!visit(k, prop.chain())) return;
  }
}

/// Images of c under 0..steps forward iterates, each with mesh <= opt.eta.
template <class P>
std::vector<Chain<P>> propagate_chain(const DynamicalMap<P>& map, const Chain<P>& c, int steps,
                                      const PropagationOptions& opt = {}) {
  std::vector<Chain<P>> out;
  propagate_until<P>(map, c, steps, opt, [&out](int, const Chain<P>& ch) {
    out.push_back(ch);
    return true;
  });
  return out;
}

enum class Verdict { Stable, Violated };

struct StabilityReport {
  int horizon = 0;
  double xi = 0;
  /// Entry i is the diameter at step i - horizon. Each direction stops at its
  /// first violation; later entries are empty.
  std::vector<std::optional<double>> diams;
  Verdict verdict = Verdict::Stable;
  std::optional<int> first_violation;

  std::optional<double> diam_at(int n) const { return diams.at(static_cast<std::size_t>(n + horizon)); }
};

/// Finite-window check of diam f^n(C) <= xi for |n| <= N. A Stable verdict is
/// a necessary condition only. The reported first violation is the one with
/// the smallest |n|, forward first on ties.
template <class P>
StabilityReport xi_stability_test(const DynamicalMap<P>& map, const Chain<P>& c, double xi, int horizon,
                                  const PropagationOptions& opt = {}) {
  if (!(xi > 0.0)) throw InvalidInput("xi_stability_test: xi must be positive");
  if (horizon < 0) throw InvalidInput("xi_stability_test: horizon must be non-negative");
  StabilityReport rep;
  rep.horizon = horizon;
  rep.xi = xi;
  rep.diams.assign(static_cast<std::size_t>(2 * horizon + 1), std::nullopt);
  std::optional<int> fwd, bwd;
  auto run = [&](const DynamicalMap<P>& m, int sign, std::optional<int>& hit) {
    propagate_until<P>(m, c, horizon, opt, [&](int k, const Chain<P>& ch) {
      double d = chain_diam(ch);
      rep.diams[static_cast<std::size_t>(horizon + sign * k)] = d;
      if (d > xi) {
        hit = k;
        return false;
      }
      return true;
    });
  };
  run(map, 1, fwd);
  run(map.reversed(), -1, bwd);
  if (fwd || bwd) {
    rep.verdict = Verdict::Violated;
    if (fwd && (!bwd || *fwd <= *bwd)) rep.first_violation = *fwd;
    else rep.first_violation = -*bwd;
  }
  return rep;
}

/// N* = ceil(ln(xi^2 4^m / 2) / ln lambda), or 0 when the argument is <= 1.
/// A point of H+_m inside K has x >= 2 4^-m / xi and leaves K within N* steps.
int escape_bound(int m, double xi, double lambda = kGoldenLambda);

struct EscapeCertificate {
  int n = 0;
  int m = 0;
  int n_star = 0;
  std::optional<int> n_exit;
  double exit_diam = 0;
  /// Every point stayed in K u T(K) for steps 0..n_exit.
  bool contained = false;
  std::size_t exit_points = 0;

  bool certified(double xi) const { return contained && n_exit && *n_exit <= n_star && exit_diam > xi / 2; }
};

/// Iterates a chart-coordinate chain joining u_n to u_m under T~ until some
/// point leaves K, recording the exit step and diameter.
EscapeCertificate escape_experiment(int n, int m, const Chain<PlanePoint>& c, const PerturbedMap& map,
                                    const PropagationOptions& opt = {});

struct ClassSeparationReport {
  int n = 0;
  int m = 0;
  double xi = 0;
  std::vector<EscapeCertificate> certificates;
  bool all_certified = true;
  std::string note;
};

ClassSeparationReport class_separation(int n, int m, const std::vector<Chain<PlanePoint>>& family,
                                       const PerturbedMap& map, const PropagationOptions& opt = {});

Chain<PlanePoint> segment_chain(PlanePoint a, PlanePoint b, double eta);

/// The straight segment a -> b followed by count - 1 seeded piecewise-linear
/// paths, monotone along b - a with perpendicular offsets up to 1.5 |b - a|.
std::vector<Chain<PlanePoint>> random_path_family(PlanePoint a, PlanePoint b, int count, std::uint64_t seed,
                                                  double eta);

struct HalfCwProbe {
  double alpha = 0;
  double epsilon = 0;
  int n_max = 0;
  std::optional<int> m_found;
  std::size_t chains = 0;
  std::string note;
};

/// Smallest m <= n_max such that every sampled chain with sup_{|n|<=m} diam f^n(C) <= alpha
/// has diam C < epsilon/2. Sampled evidence only.
template <class P>
HalfCwProbe half_cw_m_finder(const DynamicalMap<P>& map, double alpha, double epsilon, double xi,
                             const std::vector<Chain<P>>& family, int n_max, const PropagationOptions& opt = {}) {
  if (!(xi < epsilon && epsilon < alpha)) throw InvalidInput("half_cw_m_finder: need xi < epsilon < alpha");
  if (family.empty()) throw InvalidInput("half_cw_m_finder: sample family is empty");
  if (n_max < 0) throw InvalidInput("half_cw_m_finder: n_max must be non-negative");
  HalfCwProbe probe{alpha, epsilon, n_max, 0, family.size(), {}};
  for (const Chain<P>& c : family) {
    if (chain_diam(c) < epsilon / 2) continue;
    // A chain with diam >= epsilon/2 forces m up to the first |n| with diam f^n(C) > alpha.
    StabilityReport r = xi_stability_test(map, c, alpha, n_max, opt);
    if (!r.first_violation) {
      probe.m_found.reset();
      break;
    }
    probe.m_found = std::max(*probe.m_found, std::abs(*r.first_violation));
  }
  probe.note = probe.m_found ? "sampled evidence over the given family; not a proof for all continua"
                             : fmt::format("no m <= {} works for the sampled family", n_max);
  return probe;
}

/// K = xi / (1 + 2 D1).
double dist3_constant(double xi, double d1_diameter);

/// dist3(x, y) = K dist1(x, y) + dist2([x], [y]).
template <class X, class C>
std::function<double(const X&, const X&)> dist3_combine(double k, std::function<double(const X&, const X&)> dist1,
                                                       std::function<C(const X&)> class_of,
                                                       std::function<double(const C&, const C&)> dist2) {
  if (!(k > 0.0)) throw InvalidInput("dist3_combine: K must be positive");
  return [=](const X& x, const X& y) {
    C cx = class_of(x), cy = class_of(y);
    if (cx == cy) return k * dist1(x, y);
    return k * dist1(x, y) + dist2(cx, cy);
  };
}

}  // namespace cwx
