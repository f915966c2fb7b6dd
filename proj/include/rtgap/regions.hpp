#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rtgap/errors.hpp"
#include "rtgap/root_system.hpp"
#include "rtgap/weyl.hpp"

namespace rtgap {

inline constexpr double kDefaultTol = 1e-9;

struct ConeMembership {
  bool inside = false;
  /// v = sum coeffs_i alpha_i
  Eigen::VectorXd coeffs;
};

/// v in closure(-a*) = -R_{>=0} Pi, i.e. every simple-root coefficient <= tol.
inline ConeMembership in_neg_dual_cone_closure(const RootSystem& rs, const AVec& v, double tol = kDefaultTol) {
  ConeMembership out;
  out.coeffs = simple_coords(rs, v);
  out.inside = (out.coeffs.array() <= tol).all();
  return out;
}

/// v in the open dual cone {lambda : lambda(H) > 0 on closure(a+) \ 0},
/// i.e. every simple-root coefficient > tol.
inline bool in_pos_dual_cone_open(const RootSystem& rs, const AVec& v, double tol = kDefaultTol) {
  return (simple_coords(rs, v).array() > tol).all();
}

/// v in the closed positive Weyl chamber: <v, alpha_j> >= -tol for all j.
inline bool in_dominant_closure(const RootSystem& rs, const AVec& v, double tol = kDefaultTol) {
  for (const auto& a : rs.simple_roots)
    if (v.dot(a) < -tol) return false;
  return true;
}

/// v in c * conv(W rho), via the dominant representative:
/// v_dom - c*rho in closure(-a*).
inline bool in_conv_weyl_rho(const RootSystem& rs, const AVec& v, double scale, double tol = kDefaultTol) {
  if (scale < 0) throw PreconditionViolated("in_conv_weyl_rho: scale must be >= 0");
  const auto [vd, w] = dominantize(rs, v);
  return in_neg_dual_cone_closure(rs, vd - scale * rs.rho, tol).inside;
}

/// Distance from v to the finite set W rho.
inline double distance_to_weyl_rho(const RootSystem& rs, const AVec& v) {
  const auto [vd, w] = dominantize(rs, v);
  return (vd - rs.rho).norm();
}

struct ExceptionalWitness {
  std::size_t root_index = 0;  // into rs.positive_roots
  int k = 0;                   // 2<lambda+rho,alpha>/<alpha,alpha> = -k
  std::complex<double> value;
};

/// Membership in the exceptional set A: 2<lambda+rho,alpha>/<alpha,alpha> in
/// -N_{>0} for some positive root alpha.
inline std::optional<ExceptionalWitness> in_exceptional_A(const RootSystem& rs, const AVecC& lambda,
                                                          double tol = kDefaultTol) {
  if (lambda.size() != rs.ambient_dim) throw DimensionMismatch("in_exceptional_A: wrong length");
  const AVec re = lambda.real() + rs.rho;
  const AVec im = lambda.imag();
  for (std::size_t idx = 0; idx < rs.positive_roots.size(); ++idx) {
    const AVec& a = rs.positive_roots[idx].root;
    const double n2 = a.squaredNorm();
    const std::complex<double> z(2.0 * re.dot(a) / n2, 2.0 * im.dot(a) / n2);
    if (std::abs(z.imag()) > tol) continue;
    const double k = std::round(-z.real());
    if (k >= 1.0 && std::abs(z.real() + k) <= tol)
      return ExceptionalWitness{idx, static_cast<int>(k), z};
  }
  return std::nullopt;
}

/// Re-checks a B witness: |w Re + Re| < tol and |w Im - Im| < tol.
inline bool is_b_witness(const WeylElement& w, const AVecC& lambda, double tol) {
  const AVec re = lambda.real(), im = lambda.imag();
  return (w.apply(re) + re).norm() < tol && (w.apply(im) - im).norm() < tol;
}

/// Membership in B = {lambda : w lambda = -conj(lambda) for some w}.
///
/// Works by descent: move Im(lambda) into the dominant chamber, so that
/// its stabilizer is the parabolic subgroup W_J of the simple walls it lies
/// on; then -Re must lie in the W_J-orbit of Re, which is decided by
/// comparing J-dominant representatives. No enumeration of W is needed.
inline std::optional<WeylElement> in_set_B(const RootSystem& rs, const AVecC& lambda, double tol = kDefaultTol) {
  if (lambda.size() != rs.ambient_dim) throw DimensionMismatch("in_set_B: wrong length");
  const AVec re = lambda.real(), im = lambda.imag();

  auto [u_dom, x] = dominantize(rs, im);
  std::vector<int> stab;
  for (int j = 0; j < rs.rank; ++j) {
    const AVec& a = rs.simple_roots[j];
    if (2.0 * std::abs(u_dom.dot(a)) / a.norm() < tol) stab.push_back(j);
  }
  const AVec r = x.apply(re);
  Eigen::MatrixXd w_prime = Eigen::MatrixXd::Identity(rs.ambient_dim, rs.ambient_dim);
  if (r.norm() > 0.25 * tol) {
    if (stab.empty()) return std::nullopt;
    const auto [r1, ys] = dominantize_steps(rs, r, stab);
    const auto [r2, zs] = dominantize_steps(rs, -r, stab);
    if ((r1 - r2).norm() >= 0.5 * tol) return std::nullopt;
    // y(r) = r1 = r2 = z(-r)  =>  z^{-1} y maps r to -r.
    const Eigen::MatrixXd y = word_matrix(rs, std::vector<int>(ys.rbegin(), ys.rend()));
    const Eigen::MatrixXd z = word_matrix(rs, std::vector<int>(zs.rbegin(), zs.rend()));
    w_prime = z.transpose() * y;
  }
  const WeylElement w = weyl_from_matrix(rs, x.matrix.transpose() * w_prime * x.matrix);
  if (!is_b_witness(w, lambda, tol)) return std::nullopt;
  return w;
}

/// Brute-force B search over the full enumeration of W (first hit in BFS
/// order, hence of minimal length).
inline std::optional<WeylElement> in_set_B_enumerated(const RootSystem& rs, const AVecC& lambda,
                                                      double tol = kDefaultTol,
                                                      std::size_t cap = kDefaultEnumerationCap) {
  if (lambda.size() != rs.ambient_dim) throw DimensionMismatch("in_set_B_enumerated: wrong length");
  for (const auto& w : weyl_enumerate(rs, cap))
    if (is_b_witness(w, lambda, tol)) return w;
  return std::nullopt;
}

/// v in F: v + alpha not in closure(-a*) for every simple alpha.
inline bool in_first_band_cone_F(const RootSystem& rs, const AVec& v, double tol = kDefaultTol) {
  for (const auto& a : rs.simple_roots)
    if (in_neg_dual_cone_closure(rs, v + a, tol).inside) return false;
  return true;
}

/// sum of the simple roots.
inline AVec lambda_zero(const RootSystem& rs) {
  AVec v = AVec::Zero(rs.ambient_dim);
  for (const auto& a : rs.simple_roots) v += a;
  return v;
}

/// v in closure(-a*) intersected with (+a* - lambda_0), the open dual cone
/// shifted by the sum of simple roots.
inline bool first_band_region_alt(const RootSystem& rs, const AVec& v, double tol = kDefaultTol) {
  return in_neg_dual_cone_closure(rs, v, tol).inside && in_pos_dual_cone_open(rs, v + lambda_zero(rs), tol);
}

// ---------------------------------------------------------------------------
// Property (T) data

enum class PKKind {
  Exact,            // value stated for the family
  UpperBound,       // value bounds p_K from above (locally isomorphic group)
  FromLiterature,   // value taken from the literature on rank-one groups
  Unknown,          // has (T) but no value stored; +infinity used conservatively
  NoPropertyT       // p_K = +infinity
};

struct PKValue {
  double value = std::numeric_limits<double>::infinity();
  PKKind kind = PKKind::NoPropertyT;
  bool finite() const { return std::isfinite(value); }
};

inline PKValue p_k(const GroupDescriptor& desc) {
  validate(desc);
  constexpr double inf = std::numeric_limits<double>::infinity();
  const int n = desc.n;
  switch (desc.family) {
    case Family::SLnR:
    case Family::SLnC:
      if (n >= 3) return {2.0 * (n - 1), PKKind::Exact};
      return {inf, PKKind::NoPropertyT};
    case Family::Sp2nR: return {2.0 * n, PKKind::Exact};
    case Family::SOn1:
    case Family::SUn1: return {inf, PKKind::NoPropertyT};
    case Family::Spn1: return {2.0 * n + 1.0, PKKind::FromLiterature};
    case Family::SplitSimple: break;
  }
  switch (desc.split_type) {
    case CartanType::A:
      if (n == 1) return {inf, PKKind::NoPropertyT};
      return {2.0 * n, PKKind::Exact};
    case CartanType::C: return {2.0 * n, PKKind::Exact};
    case CartanType::B:
      if (n == 2) return {4.0, PKKind::UpperBound};  // so(2,3) = sp(4,R)
      return {inf, PKKind::Unknown};
    case CartanType::D:
      if (n == 3) return {6.0, PKKind::UpperBound};  // so(3,3) = sl(4,R)
      return {inf, PKKind::Unknown};
    default: return {inf, PKKind::Unknown};
  }
}

inline bool has_property_T(const GroupDescriptor& desc) { return p_k(desc).kind != PKKind::NoPropertyT; }

struct GroupFacts {
  PKValue p_k;
  bool has_property_T = false;
  int dim_GK = 0;
};

inline GroupFacts group_facts(const GroupDescriptor& desc, const RootSystem& rs) {
  GroupFacts f;
  f.p_k = p_k(desc);
  f.has_property_T = f.p_k.kind != PKKind::NoPropertyT;
  f.dim_GK = dim_symmetric_space(rs);
  return f;
}

/// 1 - 2/p_K, or 1 when p_K is infinite.
inline double hull_scale(const PKValue& pk) { return pk.finite() ? 1.0 - 2.0 / pk.value : 1.0; }

inline std::string to_string(PKKind k) {
  switch (k) {
    case PKKind::Exact: return "exact";
    case PKKind::UpperBound: return "upper-bound";
    case PKKind::FromLiterature: return "literature";
    case PKKind::Unknown: return "unknown";
    case PKKind::NoPropertyT: return "no-T";
  }
  return "?";
}

inline std::string describe(const PKValue& pk) {
  if (pk.kind == PKKind::NoPropertyT) return "infinity (no Property (T))";
  if (pk.kind == PKKind::Unknown) return "unknown (Property (T) holds; infinity used conservatively)";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", pk.value);
  std::string s = buf;
  if (pk.kind == PKKind::UpperBound) s += " (upper bound)";
  if (pk.kind == PKKind::FromLiterature) s += " (literature value)";
  return s;
}

// ---------------------------------------------------------------------------
// Quantum-side conditions

struct QuantumObstruction {
  std::optional<WeylElement> in_B;
  bool re_in_conv = false;
  bool orthogonal = false;
  bool norm_ok = false;
  bool all() const { return in_B.has_value() && re_in_conv && orthogonal && norm_ok; }
};

/// Necessary conditions for lambda in the quantum spectrum.
inline QuantumObstruction quantum_obstruction(const RootSystem& rs, const AVecC& lambda, double tol = kDefaultTol) {
  QuantumObstruction q;
  const AVec re = lambda.real(), im = lambda.imag();
  q.in_B = in_set_B(rs, lambda, tol);
  q.re_in_conv = in_conv_weyl_rho(rs, re, 1.0, tol);
  q.orthogonal = std::abs(re.dot(im)) < tol * (1.0 + lambda.squaredNorm());
  q.norm_ok = re.norm() <= rs.rho.norm() + tol;
  return q;
}

struct QuantumTest {
  std::optional<WeylElement> b_witness;  // for mu = lambda + rho
  double scale = 1.0;
  bool in_scaled_hull = false;
  bool in_weyl_rho = false;
  bool passes() const { return b_witness.has_value() && (in_scaled_hull || in_weyl_rho); }
};

/// Q(lambda): lambda + rho in B and Re(lambda + rho) in
/// (1 - 2/p_K) conv(W rho) union W rho.
inline QuantumTest quantum_test(const RootSystem& rs, const PKValue& pk, const AVecC& lambda, double tol) {
  QuantumTest q;
  AVecC mu = lambda;
  mu.real() += rs.rho;
  q.scale = hull_scale(pk);
  q.b_witness = in_set_B(rs, mu, tol);
  q.in_scaled_hull = in_conv_weyl_rho(rs, mu.real(), q.scale, tol);
  q.in_weyl_rho = distance_to_weyl_rho(rs, mu.real()) < tol;
  return q;
}

// ---------------------------------------------------------------------------
// Classification

enum class Verdict {
  ExcludedByCone,
  MustBeFirstBandAndExcludedByQuantum,
  PossibleFirstBand,
  PossibleHigherBandOnly,
  ExceptionalUnknown
};

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ExcludedByCone: return "ExcludedByCone";
    case Verdict::MustBeFirstBandAndExcludedByQuantum: return "MustBeFirstBandAndExcludedByQuantum";
    case Verdict::PossibleFirstBand: return "PossibleFirstBand";
    case Verdict::PossibleHigherBandOnly: return "PossibleHigherBandOnly";
    case Verdict::ExceptionalUnknown: return "ExceptionalUnknown";
  }
  return "?";
}

struct Classification {
  Verdict verdict = Verdict::PossibleHigherBandOnly;
  AVecC tested_lambda;
  /// Simple-root coefficients of Re(lambda).
  Eigen::VectorXd re_coeffs;
  /// Index of a simple-root coefficient > tol (ExcludedByCone).
  std::optional<int> cone_violation;
  std::optional<ExceptionalWitness> exceptional;
  bool in_F = false;
  std::optional<QuantumTest> quantum;
};

/// Decision tree locating a candidate Ruelle-Taylor resonance lambda.
inline Classification classify_candidate(const RootSystem& rs, const PKValue& pk, const AVecC& lambda,
                                         double tol = kDefaultTol) {
  if (lambda.size() != rs.ambient_dim) throw DimensionMismatch("classify_candidate: wrong length");
  Classification c;
  c.tested_lambda = lambda;
  const AVec re = lambda.real();
  const auto cone = in_neg_dual_cone_closure(rs, re, tol);
  c.re_coeffs = cone.coeffs;
  if (!cone.inside) {
    for (int i = 0; i < rs.rank; ++i)
      if (cone.coeffs(i) > tol) {
        c.cone_violation = i;
        break;
      }
    c.verdict = Verdict::ExcludedByCone;
    return c;
  }
  c.exceptional = in_exceptional_A(rs, lambda, tol);
  if (c.exceptional) {
    c.verdict = Verdict::ExceptionalUnknown;
    return c;
  }
  c.quantum = quantum_test(rs, pk, lambda, tol);
  c.in_F = in_first_band_cone_F(rs, re, tol);
  const bool q = c.quantum->passes();
  if (c.in_F)
    c.verdict = q ? Verdict::PossibleFirstBand : Verdict::MustBeFirstBandAndExcludedByQuantum;
  else
    c.verdict = q ? Verdict::PossibleFirstBand : Verdict::PossibleHigherBandOnly;
  return c;
}

inline Classification classify_candidate(const GroupDescriptor& desc, const AVecC& lambda,
                                         double tol = kDefaultTol) {
  const RootSystem rs = build_root_system(desc);
  return classify_candidate(rs, p_k(desc), lambda, tol);
}

/// True iff lambda is certified non-resonant by the uniform gap: lambda != 0,
/// Re(lambda) in F and closure(-a*), lambda outside A, and Q(lambda) fails.
inline bool gap_certificate(const RootSystem& rs, const PKValue& pk, const AVecC& lambda,
                            double tol = kDefaultTol) {
  if (!pk.finite())
    throw NoQuantitativeGap(pk.kind == PKKind::NoPropertyT
                                ? "no Property (T): the gap is not uniform in the lattice"
                                : "p_K is not known for this group");
  if (lambda.norm() <= tol) return false;
  const AVec re = lambda.real();
  if (!in_neg_dual_cone_closure(rs, re, tol).inside) return false;
  if (!in_first_band_cone_F(rs, re, tol)) return false;
  if (in_exceptional_A(rs, lambda, tol)) return false;
  return !quantum_test(rs, pk, lambda, tol).passes();
}

inline bool gap_certificate(const GroupDescriptor& desc, const AVecC& lambda, double tol = kDefaultTol) {
  return gap_certificate(build_root_system(desc), p_k(desc), lambda, tol);
}

}  // namespace rtgap
