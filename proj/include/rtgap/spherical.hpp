#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "rtgap/errors.hpp"
#include "rtgap/quadrature.hpp"
#include "rtgap/regions.hpp"
#include "rtgap/root_system.hpp"
#include "rtgap/weyl.hpp"

namespace rtgap {

struct SphericalConfig {
  GroupDescriptor group = GroupDescriptor::sl_r(2);
  /// Controls the K-quadrature; the error estimate compares q with q/2.
  int quadrature_order = 64;
  /// Radius of the truncated Cartan integrals, Killing norm.
  double cartan_radius = 20.0;
  /// Nodes per axis of the Cartan integrals.
  int cartan_grid = 400;

  void validate() const {
    if (!(group == GroupDescriptor::sl_r(2) || group == GroupDescriptor::sl_r(3)))
      throw UnsupportedDescriptor("spherical functions are implemented for SL(2,R) and SL(3,R) only");
    if (quadrature_order < 8) throw PreconditionViolated("quadrature_order must be >= 8");
    if (!(cartan_radius > 0)) throw PreconditionViolated("cartan_radius must be > 0");
    if (cartan_grid < 16) throw PreconditionViolated("cartan_grid must be >= 16");
  }
};

struct SphericalValue {
  std::complex<double> value;
  double est_error = 0.0;
};

// ---------------------------------------------------------------------------
// Iwasawa and Cartan coordinates in SL(n,R)

struct IwasawaParts {
  Eigen::MatrixXd k;      // special orthogonal
  Eigen::VectorXd log_a;  // raw diagonal coordinates, trace zero
  Eigen::MatrixXd n;      // upper unitriangular
};

/// g = k exp(diag(log_a)) n via Householder QR with positive diagonal.
inline IwasawaParts iwasawa(const Eigen::MatrixXd& g) {
  if (g.rows() != g.cols()) throw DimensionMismatch("iwasawa: matrix must be square");
  const double det = g.determinant();
  if (!std::isfinite(det) || std::abs(det) < 1e-300) throw SingularMatrix("iwasawa: matrix is singular");
  if (std::abs(det - 1.0) > 1e-8) throw PreconditionViolated("iwasawa: determinant must be 1");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  const Eigen::Index n = g.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    if (r(i, i) < 0) {
      r.row(i) *= -1.0;
      q.col(i) *= -1.0;
    }
  IwasawaParts out;
  out.k = q;
  out.log_a = r.diagonal().array().log();
  out.n = r.diagonal().asDiagonal().inverse() * r;
  return out;
}

/// H(g) as an element of a (orthonormal coordinates).
inline AVec iwasawa_H(const RootSystem& rs, const Eigen::MatrixXd& g) {
  if (g.rows() != rs.ambient_dim) throw DimensionMismatch("iwasawa_H: matrix size does not match the group");
  return a_from_raw(rs, iwasawa(g).log_a);
}

/// Dominant H with g in K exp(H) K, from the singular values.
inline AVec cartan_projection(const RootSystem& rs, const Eigen::MatrixXd& g) {
  if (g.rows() != rs.ambient_dim || g.cols() != rs.ambient_dim) throw DimensionMismatch("cartan_projection: wrong size");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
  const Eigen::VectorXd sv = svd.singularValues();
  if (sv.minCoeff() <= 0) throw SingularMatrix("cartan_projection: matrix is singular");
  Eigen::VectorXd h = sv.array().log();
  h.array() -= h.mean();
  return dominantize(rs, a_from_raw(rs, h)).first;
}

/// exp(H) for H in a (orthonormal coordinates) as a diagonal matrix.
inline Eigen::MatrixXd exp_a(const RootSystem& rs, const AVec& H) {
  return Eigen::VectorXd(raw_from_a(rs, H).array().exp()).asDiagonal();
}

namespace detail {

/// Composite Gauss-Legendre on [0, upper] with panels [0, s0], [s0, 2 s0],
/// [2 s0, 4 s0], ... resolving features of width ~s0 at the origin.
inline quad::Rule graded_rule(double s0, double upper, int nodes_per_panel) {
  std::vector<double> cuts{0.0};
  double b = std::min(s0, upper);
  while (b < 0.5 * upper) {
    cuts.push_back(b);
    b *= 2.0;
  }
  cuts.push_back(upper);
  quad::Rule out;
  const quad::Rule ref = quad::gauss_legendre(nodes_per_panel);
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double mid = 0.5 * (cuts[p] + cuts[p + 1]), half = 0.5 * (cuts[p + 1] - cuts[p]);
    for (int i = 0; i < nodes_per_panel; ++i) {
      out.nodes.push_back(mid + half * ref.nodes[i]);
      out.weights.push_back(half * ref.weights[i]);
    }
  }
  return out;
}

using cd = std::complex<double>;

/// SL2: (2/pi) int_0^{pi/2} (e^{-2t} cos^2 + e^{2t} sin^2)^{-A} d theta,
/// with the base evaluated in log form so large t cannot overflow.
inline cd phi_sl2(cd A, double t, int m) {
  const quad::Rule r = graded_rule(std::max(0.25 * std::exp(-2.0 * t), 1e-300), 0.5 * std::numbers::pi, m);
  const double e4 = std::exp(-4.0 * t);
  quad::CompensatedSum<cd> acc;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    const double c = std::cos(r.nodes[i]), s = std::sin(r.nodes[i]);
    const double logS = 2.0 * t + std::log(e4 * c * c + s * s);
    acc.add(r.weights[i] * std::exp(-A * logS));
  }
  return acc.value() * (2.0 / std::numbers::pi);
}

/// SL3 with dominant raw h (h1 >= h2 >= h3): K = SO(3) parametrized by the
/// first column u (polar angle beta about e1, azimuth phi) and the third
/// column v on the circle orthogonal to u (angle s from the eigenvector of
/// the compressed form). Then R11^2 = sum e^{-2h_i} u_i^2 and
/// (R11 R22)^2 = lmin cos^2 s + lmax sin^2 s.
inline cd phi_sl3(cd A, cd B, const Eigen::Vector3d& h, int m) {
  const double half_pi = 0.5 * std::numbers::pi;
  const double spread = h(0) - h(2), inner = h(1) - h(2);
  const quad::Rule rb = graded_rule(std::max(0.25 * std::exp(-spread), 1e-300), half_pi, m);
  const quad::Rule rp = graded_rule(std::max(0.25 * std::exp(-inner), 1e-300), half_pi, m);
  const quad::Rule rs = graded_rule(std::max(0.25 * std::exp(-spread), 1e-300), half_pi, m);
  // scaled forms: e^{-2(h_i - h3)} for R11 and e^{2(h_i - h1)} for the compression
  const Eigen::Vector3d em = (-2.0 * (h.array() - h(2))).exp(), ep = (2.0 * (h.array() - h(0))).exp();
  std::vector<double> cs2(rs.nodes.size()), sn2(rs.nodes.size());
  for (std::size_t k = 0; k < rs.nodes.size(); ++k) {
    cs2[k] = std::cos(rs.nodes[k]) * std::cos(rs.nodes[k]);
    sn2[k] = std::sin(rs.nodes[k]) * std::sin(rs.nodes[k]);
  }
  quad::CompensatedSum<cd> acc;
  for (std::size_t i = 0; i < rb.nodes.size(); ++i) {
    const double cb = std::cos(rb.nodes[i]), sb = std::sin(rb.nodes[i]);
    for (std::size_t j = 0; j < rp.nodes.size(); ++j) {
      const double cp = std::cos(rp.nodes[j]), sp = std::sin(rp.nodes[j]);
      const Eigen::Vector3d w1(-sb, cb * cp, cb * sp), w2(0.0, -sp, cp);
      const double logS1 = -2.0 * h(2) + std::log(em(0) * cb * cb + sb * sb * (em(1) * cp * cp + em(2) * sp * sp));
      const double p11 = (ep.array() * w1.array().square()).sum();
      const double p22 = (ep.array() * w2.array().square()).sum();
      const double p12 = (ep.array() * w1.array() * w2.array()).sum();
      const double log_lmax =
          2.0 * h(0) + std::log(0.5 * (p11 + p22) + std::sqrt(0.25 * (p11 - p22) * (p11 - p22) + p12 * p12));
      // det of the compression of diag(e^{2h}) to u-perp is u^T diag(e^{-2h}) u
      const double ratio = std::exp(logS1 - 2.0 * log_lmax);
      const cd f1 = std::exp(-A * logS1);
      cd inner_sum = 0.0;
      for (std::size_t k = 0; k < rs.nodes.size(); ++k)
        inner_sum += rs.weights[k] * std::exp(-B * (log_lmax + std::log(ratio * cs2[k] + sn2[k])));
      acc.add(rb.weights[i] * rp.weights[j] * sb * f1 * inner_sum);
    }
  }
  return acc.value() * (4.0 / (std::numbers::pi * std::numbers::pi));
}

/// Coroot pairings 2<mu, alpha_i>/<alpha_i, alpha_i> of a complex covector.
inline std::vector<cd> coroot_pairings(const RootSystem& rs, const AVecC& mu) {
  std::vector<cd> out;
  for (const auto& a : rs.simple_roots) {
    const double n2 = a.squaredNorm();
    out.emplace_back(2.0 * mu.real().dot(a) / n2, 2.0 * mu.imag().dot(a) / n2);
  }
  return out;
}

inline cd phi_raw(const RootSystem& rs, const AVecC& lambda, const AVec& H_dom, int m) {
  AVecC mu = lambda;
  mu.real() += rs.rho;
  const auto a = coroot_pairings(rs, mu);
  const Eigen::VectorXd h = raw_from_a(rs, H_dom);
  if (rs.rank == 1) return phi_sl2(0.5 * a[0], h(0), m);
  return phi_sl3(0.5 * a[0], 0.5 * a[1], Eigen::Vector3d(h(0), h(1), h(2)), m);
}

}  // namespace detail

/// phi_lambda(exp H) = int_K e^{-(lambda+rho) H(exp(-H) k)} dk.
/// H may lie anywhere in a; it is moved to the closed chamber first
/// (phi is W-invariant in H).
inline SphericalValue spherical_phi(const SphericalConfig& cfg, const RootSystem& rs, const AVecC& lambda,
                                    const AVec& H) {
  cfg.validate();
  if (lambda.size() != rs.ambient_dim || H.size() != rs.ambient_dim)
    throw DimensionMismatch("spherical_phi: wrong vector length");
  const AVec Hd = dominantize(rs, H).first;
  const int q = cfg.quadrature_order;
  const int m_hi = rs.rank == 1 ? std::max(2, q / 4) : std::max(2, q / 8);
  const int m_lo = std::max(1, m_hi / 2);
  const auto hi = detail::phi_raw(rs, lambda, Hd, m_hi);
  const auto lo = detail::phi_raw(rs, lambda, Hd, m_lo);
  SphericalValue out{hi, std::abs(hi - lo)};
  if (!std::isfinite(out.est_error) || out.est_error > 1e-4 * (1.0 + std::abs(hi)))
    throw QuadratureNotConverged("spherical_phi: |phi(q) - phi(q/2)| = " + std::to_string(out.est_error));
  return out;
}

inline SphericalValue spherical_phi(const SphericalConfig& cfg, const AVecC& lambda, const AVec& H) {
  cfg.validate();
  return spherical_phi(cfg, build_root_system(cfg.group), lambda, H);
}

/// Moves Re(lambda) into the closed chamber (phi_lambda = phi_{w lambda}).
inline AVecC dominantize_re(const RootSystem& rs, const AVecC& lambda) {
  const auto [vd, w] = dominantize(rs, lambda.real());
  return w.apply(lambda);
}

/// Unit directions in the closed chamber used for ray sweeps: the coweight
/// directions and, in rank two, the rho direction.
inline std::vector<AVec> sweep_directions(const RootSystem& rs) {
  std::vector<AVec> out;
  for (const auto& w : rs.coweights) out.push_back(w.normalized());
  if (rs.rank > 1) out.push_back(regular_dominant(rs).normalized());
  return out;
}

// ---------------------------------------------------------------------------
// Pointwise bound

struct PointwiseBoundReport {
  int d = 0;               // polynomial degree cap (|W|)
  double fitted_C = 0.0;   // minimal C with |phi| <= C e^{(Re lambda - rho)H} (1 + rho(H))^d
  double max_ratio = 0.0;  // max |phi| e^{-(Re lambda - rho)H}
  double slope = 0.0;      // of log ratio against log(1 + rho(H)) over the outer half
  bool violation = false;
};

inline PointwiseBoundReport pointwise_bound_check(const SphericalConfig& cfg, const AVecC& lambda,
                                                  const std::vector<AVec>& H_samples) {
  cfg.validate();
  const RootSystem rs = build_root_system(cfg.group);
  const AVec re = lambda.real();
  if (!in_dominant_closure(rs, re, 1e-12) || !in_neg_dual_cone_closure(rs, re - rs.rho, 1e-12).inside)
    throw PreconditionViolated("pointwise_bound_check: Re(lambda) must be dominant and in rho + closure(-a*)");
  if (H_samples.size() < 2) throw PreconditionViolated("pointwise_bound_check: need at least two samples");
  PointwiseBoundReport rep;
  rep.d = static_cast<int>(weyl_order(rs));
  struct Pt {
    double x, logr;
  };
  std::vector<Pt> pts;
  for (const auto& H : H_samples) {
    const AVec Hd = dominantize(rs, H).first;
    const double phi = std::abs(spherical_phi(cfg, rs, lambda, Hd).value);
    const double rhoH = rs.rho.dot(Hd);
    const double ratio = phi * std::exp(-(re - rs.rho).dot(Hd));
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    rep.fitted_C = std::max(rep.fitted_C, ratio / std::pow(1.0 + rhoH, rep.d));
    pts.push_back({std::log1p(rhoH), std::log(std::max(ratio, 1e-300))});
  }
  std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) { return a.x < b.x; });
  const std::size_t start = pts.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size() - start);
  for (std::size_t i = start; i < pts.size(); ++i) {
    sx += pts[i].x;
    sy += pts[i].logr;
    sxx += pts[i].x * pts[i].x;
    sxy += pts[i].x * pts[i].logr;
  }
  const double den = n * sxx - sx * sx;
  rep.slope = den > 0 ? (n * sxy - sx * sy) / den : 0.0;
  rep.violation = rep.slope > rep.d + 0.5;
  return rep;
}

// ---------------------------------------------------------------------------
// Boundedness and positive definiteness

struct BoundednessVerdict {
  bool bounded = true;
  std::optional<AVec> witness;  // H where the growing |phi| exceeds 1 most
  double max_abs = 0.0;
};

/// Sweeps rays of the closed chamber up to the Cartan radius. Unbounded iff
/// |phi| > 1 + 1e-6 and nondecreasing over the last ten samples of a ray.
inline BoundednessVerdict boundedness_probe(const SphericalConfig& cfg, const AVecC& lambda) {
  cfg.validate();
  const RootSystem rs = build_root_system(cfg.group);
  const AVecC lam = dominantize_re(rs, lambda);
  constexpr int kSamples = 40, kTail = 10;
  BoundednessVerdict out;
  for (const auto& dir : sweep_directions(rs)) {
    std::vector<double> vals;
    for (int i = 1; i <= kSamples; ++i) {
      const AVec H = (cfg.cartan_radius * i / kSamples) * dir;
      vals.push_back(std::abs(spherical_phi(cfg, rs, lam, H).value));
    }
    out.max_abs = std::max(out.max_abs, *std::max_element(vals.begin(), vals.end()));
    bool increasing = true;
    for (int i = kSamples - kTail; i < kSamples; ++i) increasing = increasing && vals[i] >= vals[i - 1];
    if (vals.back() > 1.0 + 1e-6 && increasing && out.bounded) {
      out.bounded = false;
      out.witness = cfg.cartan_radius * dir;
    }
  }
  return out;
}

struct GramVerdict {
  bool consistent = true;
  double min_eigenvalue = 0.0;
  double matrix_norm = 0.0;
  std::optional<AVec> unbounded_witness;
};

/// exp(s_i X) for equally spaced s_i along the unit direction X of a.
inline std::vector<Eigen::MatrixXd> geodesic_points(const RootSystem& rs, const AVec& dir, int count, double step) {
  std::vector<Eigen::MatrixXd> out;
  for (int i = 0; i < count; ++i) out.push_back(exp_a(rs, (i * step) * dir.normalized()));
  return out;
}

/// Gram matrix (phi(x_i^{-1} x_j)), Hermitianized, plus the boundedness
/// probe (a positive definite function is bounded by its value at e).
inline GramVerdict psd_gram_test(const SphericalConfig& cfg, const AVecC& lambda,
                                 const std::vector<Eigen::MatrixXd>& points, double tol = 1e-8) {
  cfg.validate();
  const RootSystem rs = build_root_system(cfg.group);
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXcd G(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::MatrixXd g = points[i].inverse() * points[j];
      G(i, j) = spherical_phi(cfg, rs, lambda, cartan_projection(rs, g)).value;
    }
  const Eigen::MatrixXcd Gh = 0.5 * (G + G.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Gh);
  GramVerdict out;
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  out.matrix_norm = es.eigenvalues().cwiseAbs().maxCoeff();
  if (out.min_eigenvalue < -tol * out.matrix_norm) out.consistent = false;
  const auto probe = boundedness_probe(cfg, lambda);
  if (!probe.bounded) {
    out.consistent = false;
    out.unbounded_witness = probe.witness;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Truncated L^p integrals

/// int over a+ cap {|H| <= R} of |phi_lambda(exp H)|^p prod sinh(alpha(H))^{m_alpha} dH,
/// Lebesgue measure of the Killing form. Rank one integrates along the ray;
/// rank two uses polar coordinates on the chamber (exact truncation).
inline double lp_norm_truncated(const SphericalConfig& cfg, const AVecC& lambda, double p, double R,
                                double R_from = 0.0) {
  cfg.validate();
  if (!(p > 0)) throw PreconditionViolated("lp_norm_truncated: p must be > 0");
  if (!(R > 0) || R_from < 0 || R_from >= R) throw PreconditionViolated("lp_norm_truncated: need 0 <= R_from < R");
  const RootSystem rs = build_root_system(cfg.group);
  const AVecC lam = dominantize_re(rs, lambda);
  auto density = [&](const AVec& H) {
    double d = 1.0;
    for (const auto& pr : rs.positive_roots) d *= std::pow(std::sinh(pr.root.dot(H)), pr.multiplicity);
    return d;
  };
  constexpr int kPanel = 8;
  const int radial_panels = std::max(2, cfg.cartan_grid / kPanel);
  const quad::Rule ref = quad::gauss_legendre(kPanel);
  quad::CompensatedSum<double> acc;
  auto radial = [&](const AVec& dir, double weight_scale, bool polar) {
    const double h = (R - R_from) / radial_panels;
    for (int pnl = 0; pnl < radial_panels; ++pnl) {
      const double a = R_from + pnl * h;
      for (int i = 0; i < kPanel; ++i) {
        const double r = a + 0.5 * h * (ref.nodes[i] + 1.0);
        const AVec H = r * dir;
        const double phi = std::abs(spherical_phi(cfg, rs, lam, H).value);
        acc.add(weight_scale * 0.5 * h * ref.weights[i] * std::pow(phi, p) * density(H) * (polar ? r : 1.0));
      }
    }
  };
  if (rs.rank == 1) {
    radial(rs.coweights[0].normalized(), 1.0, false);
  } else {
    const AVec e1 = rs.coweights[0].normalized();
    const AVec w2 = rs.coweights[1].normalized();
    const AVec e2 = (w2 - w2.dot(e1) * e1).normalized();
    const double psi_max = std::acos(std::clamp(w2.dot(e1), -1.0, 1.0));
    const int angular = std::max(kPanel, cfg.cartan_grid / 4);
    const quad::Rule ang = quad::gauss_legendre(angular, 0.0, psi_max);
    for (int k = 0; k < angular; ++k) {
      const AVec dir = std::cos(ang.nodes[k]) * e1 + std::sin(ang.nodes[k]) * e2;
      radial(dir, ang.weights[k], true);
    }
  }
  return acc.value();
}

enum class LpTrend { Convergent, Divergent, Inconclusive };

inline std::string to_string(LpTrend t) {
  switch (t) {
    case LpTrend::Convergent: return "convergent";
    case LpTrend::Divergent: return "divergent";
    case LpTrend::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct TwoRadiusResult {
  double inner = 0.0;  // integral up to R1
  double outer = 0.0;  // integral up to R2
  LpTrend trend = LpTrend::Inconclusive;
};

/// Relative change below 1e-4 is convergent; growth by a factor >= 1.2 is
/// divergent; anything in between is inconclusive.
inline LpTrend classify_two_radius(double inner, double outer) {
  if (outer > 0 && std::abs(outer - inner) / outer < 1e-4) return LpTrend::Convergent;
  if (inner > 0 && outer / inner >= 1.2) return LpTrend::Divergent;
  return LpTrend::Inconclusive;
}

inline TwoRadiusResult lp_two_radius(const SphericalConfig& cfg, const AVecC& lambda, double p, double R1, double R2) {
  if (!(R1 > 0) || !(R2 > R1)) throw PreconditionViolated("lp_two_radius: need 0 < R1 < R2");
  TwoRadiusResult out;
  out.inner = lp_norm_truncated(cfg, lambda, p, R1);
  out.outer = out.inner + lp_norm_truncated(cfg, lambda, p, R2, R1);
  out.trend = classify_two_radius(out.inner, out.outer);
  return out;
}

/// phi_lambda in L^{p+eps} for every eps > 0 iff Re(lambda) in (1 - 2/p) conv(W rho).
inline bool lp_membership_predict(const RootSystem& rs, const AVecC& lambda, double p, double tol = kDefaultTol) {
  if (!(p >= 2)) throw PreconditionViolated("lp_membership_predict: p must be >= 2");
  return in_conv_weyl_rho(rs, lambda.real(), 1.0 - 2.0 / p, tol);
}

}  // namespace rtgap
