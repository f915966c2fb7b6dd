#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "rtgap/errors.hpp"
#include "rtgap/quadrature.hpp"
#include "rtgap/root_system.hpp"
#include "rtgap/weyl.hpp"

namespace rtgap {

/// Euclidean volume of the unit ball in R^d.
inline double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

/// |W| Vol (2 sqrt(pi))^{-d} / Gamma(d/2 + 1) t^d
inline double leading_term_ball(const RootSystem& rs, double vol, double t) {
  if (!(vol > 0.0)) throw PreconditionViolated("leading_term_ball: vol must be positive");
  if (t < 0.0) throw PreconditionViolated("leading_term_ball: t must be nonnegative");
  const int d = dim_symmetric_space(rs);
  const double w = static_cast<double>(weyl_order(rs));
  return w * vol * std::pow(2.0 * std::sqrt(std::numbers::pi), -d) / std::tgamma(0.5 * d + 1.0) * std::pow(t, d);
}

inline double leading_term_ball(const GroupDescriptor& desc, double vol, double t) {
  return leading_term_ball(build_root_system(desc), vol, t);
}

/// Bounded region of a (identified with a* by the Killing form).
struct OmegaSpec {
  struct Ball {
    double radius = 1.0;
  };
  struct Indicator {
    std::function<bool(const AVec&)> contains;
    double bounding_radius = 1.0;
  };
  std::variant<Ball, Indicator> shape = Ball{};

  static OmegaSpec ball(double r) { return {Ball{r}}; }
  static OmegaSpec indicator(std::function<bool(const AVec&)> f, double bounding_radius) {
    return {Indicator{std::move(f), bounding_radius}};
  }
  /// Ball(radius) minus the slab |alpha_i(H)| < half_width.
  static OmegaSpec ball_minus_slab(const RootSystem& rs, double radius, int root_index, double half_width) {
    if (root_index < 0 || root_index >= rs.rank) throw IndexOutOfRange("ball_minus_slab: root index");
    const AVec a = rs.simple_roots[root_index];
    return indicator([a, radius, half_width](const AVec& h) {
      return h.norm() < radius && std::abs(a.dot(h)) >= half_width;
    }, radius);
  }
};

struct VolumeConfig {
  /// Gauss-Legendre panels per chamber-simplex axis; "refinement" doubles it.
  int angular_panels = 12;
  int nodes_per_panel = 8;
  /// Uniform probes per ray before bisecting indicator transitions.
  int radial_samples = 96;
  std::size_t weyl_cap = 10'000;
};

namespace detail {

/// Product of alpha(x)^{m_alpha} over all positive roots (the radial part of
/// the Weyl integration density, up to a global constant).
inline double weyl_density(const RootSystem& rs, const AVec& x) {
  double p = 1.0;
  for (const auto& pr : rs.positive_roots) p *= std::pow(std::max(0.0, pr.root.dot(x)), pr.multiplicity);
  return p;
}

/// Integral of 1_{W Omega}(r u) (r / bound)^{d-1} d(r / bound) for unit u.
inline double radial_indicator_moment(const std::function<bool(const AVec&)>& inside_w, const AVec& u, double bound,
                                      int d, int samples) {
  auto at = [&](double s) { return inside_w(s * bound * u); };
  if (at(1.0 + 1e-9) || at(1.5) || at(2.0))
    throw IndicatorUnbounded("vol_adk_omega: indicator true outside the bounding radius");
  double total = 0.0;
  double prev_s = 0.0;
  bool prev_in = at(1e-12);
  double start = prev_in ? 0.0 : -1.0;
  for (int k = 1; k <= samples; ++k) {
    const double s = static_cast<double>(k) / samples;
    const bool in = at(s);
    if (in != prev_in) {
      double lo = prev_s, hi = s;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (at(mid) == prev_in ? lo : hi) = mid;
      }
      const double edge = 0.5 * (lo + hi);
      if (in) {
        start = edge;
      } else {
        total += (std::pow(edge, d) - std::pow(start, d)) / d;
      }
      prev_in = in;
    }
    prev_s = s;
  }
  if (prev_in) total += (1.0 - std::pow(start, d)) / d;
  return total;
}

/// Tensor Gauss-Legendre rule on [0,1] with `panels` equal panels.
inline quad::Rule composite_unit_rule(int panels, int nodes) {
  quad::Rule out;
  for (int p = 0; p < panels; ++p) {
    const auto r = quad::gauss_legendre(nodes, static_cast<double>(p) / panels, static_cast<double>(p + 1) / panels);
    out.nodes.insert(out.nodes.end(), r.nodes.begin(), r.nodes.end());
    out.weights.insert(out.weights.end(), r.weights.begin(), r.weights.end());
  }
  return out;
}

}  // namespace detail

/// Vol(Ad(K) Omega) computed as Vol(B_1^d) I(Omega) / I(B_1), where
/// I(S) = int_{a+} 1_{WS}(H) prod alpha(H)^{m_alpha} dH. Polar coordinates over
/// the chamber simplex spanned by the fundamental coweights; the same angular
/// rule is used for Omega and the unit ball, so the unknown constant of the
/// Weyl integration formula and most of the angular error cancel.
inline double vol_adk_omega(const RootSystem& rs, const OmegaSpec& omega, const VolumeConfig& cfg = {}) {
  const int d = dim_symmetric_space(rs);
  if (const auto* b = std::get_if<OmegaSpec::Ball>(&omega.shape)) {
    if (!(b->radius >= 0.0) || !std::isfinite(b->radius)) throw PreconditionViolated("vol_adk_omega: bad radius");
    return unit_ball_volume(d) * std::pow(b->radius, d);
  }
  const auto& ind = std::get<OmegaSpec::Indicator>(omega.shape);
  if (!(ind.bounding_radius > 0.0) || !std::isfinite(ind.bounding_radius))
    throw PreconditionViolated("vol_adk_omega: bounding radius must be finite and positive");
  if (!ind.contains) throw PreconditionViolated("vol_adk_omega: empty indicator");
  if (cfg.angular_panels < 1 || cfg.nodes_per_panel < 1 || cfg.radial_samples < 2)
    throw PreconditionViolated("vol_adk_omega: bad quadrature config");

  const auto weyl = weyl_enumerate(rs, cfg.weyl_cap);
  const auto inside_w = [&](const AVec& h) {
    for (const auto& w : weyl)
      if (ind.contains(w.matrix * h)) return true;
    return false;
  };

  // Stick-breaking map from [0,1]^{n-1} onto the simplex of coweight weights.
  const int n = rs.rank;
  const int k = n - 1;
  const auto rule = detail::composite_unit_rule(cfg.angular_panels, cfg.nodes_per_panel);
  const int m = static_cast<int>(rule.nodes.size());
  std::vector<int> idx(k, 0);
  quad::CompensatedSum<double> num, den;
  while (true) {
    std::vector<double> c(n);
    double remaining = 1.0, jac = 1.0, weight = 1.0;
    for (int j = 0; j < k; ++j) {
      const double y = rule.nodes[idx[j]];
      c[j] = remaining * y;
      jac *= remaining;
      remaining *= 1.0 - y;
      weight *= rule.weights[idx[j]];
    }
    c[n - 1] = remaining;
    AVec x = AVec::Zero(rs.ambient_dim);
    for (int j = 0; j < n; ++j) x += c[j] * rs.coweights[j];
    const double xn = x.norm();
    const double g = weight * jac * detail::weyl_density(rs, x) * std::pow(xn, -d);
    if (g > 0.0) {
      num.add(g * d * detail::radial_indicator_moment(inside_w, x / xn, ind.bounding_radius, d, cfg.radial_samples));
      den.add(g);
    }
    int j = 0;
    while (j < k && ++idx[j] == m) idx[j++] = 0;
    if (j == k) break;
  }
  return unit_ball_volume(d) * std::pow(ind.bounding_radius, d) * num.value() / den.value();
}

inline double vol_adk_omega(const GroupDescriptor& desc, const OmegaSpec& omega, const VolumeConfig& cfg = {}) {
  return vol_adk_omega(build_root_system(desc), omega, cfg);
}

/// Leading term of the eigenvalue counting bound; the remainder is only
/// ever reported as O(t^{d-1}).
struct CountingBound {
  double leading = 0.0;
  int d = 0;
  std::uint64_t weyl_order = 0;
  double vol_adk_omega = 0.0;
  int remainder_exponent = 0;
};

inline CountingBound counting_lower_bound(const RootSystem& rs, double vol, const OmegaSpec& omega, double t,
                                          const VolumeConfig& cfg = {}) {
  if (!(vol > 0.0)) throw PreconditionViolated("counting_lower_bound: vol must be positive");
  if (t < 0.0) throw PreconditionViolated("counting_lower_bound: t must be nonnegative");
  CountingBound out;
  out.d = dim_symmetric_space(rs);
  out.weyl_order = weyl_order(rs);
  out.vol_adk_omega = vol_adk_omega(rs, omega, cfg);
  out.remainder_exponent = out.d - 1;
  out.leading = static_cast<double>(out.weyl_order) * vol * std::pow(2.0 * std::numbers::pi, -out.d) *
                out.vol_adk_omega * std::pow(t, out.d);
  return out;
}

inline CountingBound counting_lower_bound(const GroupDescriptor& desc, double vol, const OmegaSpec& omega, double t,
                                          const VolumeConfig& cfg = {}) {
  return counting_lower_bound(build_root_system(desc), vol, omega, t, cfg);
}

/// "N(t) >= <leading> + O(t^{d-1})"
inline std::string describe(const CountingBound& b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "N(t) >= %.15g + O(t^%d)", b.leading, b.remainder_exponent);
  return buf;
}

}  // namespace rtgap
