#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rtgap/errors.hpp"
#include "rtgap/root_system.hpp"

namespace rtgap {

/// An element of W: its matrix on the ambient space and a reduced word.
/// word = [i1, ..., ik] means matrix = s_{i1} * ... * s_{ik}. Indices are
/// zero-based.
struct WeylElement {
  Eigen::MatrixXd matrix;
  std::vector<int> word;

  AVec apply(const AVec& v) const { return matrix * v; }
  AVecC apply(const AVecC& v) const { return matrix.cast<std::complex<double>>() * v; }
  int length() const { return static_cast<int>(word.size()); }
};

inline std::string word_string(const WeylElement& w) {
  if (w.word.empty()) return "e";
  std::string s;
  for (std::size_t k = 0; k < w.word.size(); ++k) {
    if (k) s += ' ';
    s += "s" + std::to_string(w.word[k] + 1);
  }
  return s;
}

inline Eigen::MatrixXd reflection_matrix(const AVec& alpha) {
  const Eigen::Index n = alpha.size();
  return Eigen::MatrixXd::Identity(n, n) - 2.0 * alpha * alpha.transpose() / alpha.squaredNorm();
}

inline AVec reflect(const AVec& v, const AVec& alpha) {
  return v - 2.0 * v.dot(alpha) / alpha.squaredNorm() * alpha;
}

inline WeylElement identity_element(const RootSystem& rs) {
  return {Eigen::MatrixXd::Identity(rs.ambient_dim, rs.ambient_dim), {}};
}

inline WeylElement simple_reflection(const RootSystem& rs, int i) {
  if (i < 0 || i >= rs.rank)
    throw IndexOutOfRange("simple_reflection: index " + std::to_string(i) + " outside [0, " +
                          std::to_string(rs.rank) + ")");
  return {reflection_matrix(rs.simple_roots[i]), {i}};
}

inline Eigen::MatrixXd word_matrix(const RootSystem& rs, const std::vector<int>& word) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(rs.ambient_dim, rs.ambient_dim);
  for (int i : word) m = m * reflection_matrix(rs.simple_roots.at(static_cast<std::size_t>(i)));
  return m;
}

/// Wall tolerance for <v, alpha_i>: pairings above -threshold count as >= 0.
inline double wall_threshold(const AVec& v, const AVec& alpha) {
  return 1e-12 * std::max(1.0, v.norm() * alpha.norm());
}

/// Reflection sequence moving v into the closed dominant chamber restricted
/// to the simple roots listed in `subset` (all roots when empty).
inline std::pair<AVec, std::vector<int>> dominantize_steps(const RootSystem& rs, AVec v,
                                                           const std::vector<int>& subset = {}) {
  std::vector<int> idx = subset;
  if (idx.empty())
    for (int i = 0; i < rs.rank; ++i) idx.push_back(i);
  std::vector<int> applied;
  const std::size_t guard = 4 * rs.positive_roots.size() + 16;
  for (;;) {
    bool moved = false;
    for (int i : idx) {
      const AVec& a = rs.simple_roots[i];
      if (v.dot(a) < -wall_threshold(v, a)) {
        v = reflect(v, a);
        applied.push_back(i);
        moved = true;
        break;
      }
    }
    if (!moved) break;
    if (applied.size() > guard) throw Error("dominantize: descent did not terminate");
  }
  return {v, applied};
}

/// Returns (v_dom, w) with v_dom = w(v) in the closed positive chamber.
inline std::pair<AVec, WeylElement> dominantize(const RootSystem& rs, const AVec& v) {
  if (v.size() != rs.ambient_dim) throw DimensionMismatch("dominantize: wrong length");
  auto [vd, applied] = dominantize_steps(rs, v);
  // w = s_{ik} ... s_{i1}
  std::vector<int> word(applied.rbegin(), applied.rend());
  return {vd, WeylElement{word_matrix(rs, word), word}};
}

/// A regular dominant vector: sum of the coweights.
inline AVec regular_dominant(const RootSystem& rs) {
  AVec v = AVec::Zero(rs.ambient_dim);
  for (const auto& w : rs.coweights) v += w;
  return v;
}

/// Recovers a reduced word for a matrix known to lie in W.
inline WeylElement weyl_from_matrix(const RootSystem& rs, const Eigen::MatrixXd& m) {
  const AVec reg = regular_dominant(rs);
  auto [vd, applied] = dominantize_steps(rs, m * reg);
  // y = s_{ik}..s_{i1} maps m(reg) to reg, hence y = m^{-1} and m = s_{i1}..s_{ik}.
  return {word_matrix(rs, applied), applied};
}

inline WeylElement compose(const RootSystem& rs, const WeylElement& a, const WeylElement& b) {
  return weyl_from_matrix(rs, a.matrix * b.matrix);
}

inline WeylElement inverse(const WeylElement& w) {
  return {w.matrix.transpose(), std::vector<int>(w.word.rbegin(), w.word.rend())};
}

/// The longest element w0, found by dominantizing a regular antidominant vector.
inline WeylElement longest_element(const RootSystem& rs) {
  auto [vd, w] = dominantize(rs, -regular_dominant(rs));
  return w;
}

struct W0Invariants {
  int trace = 0;
  int d_plus = 0;
  int d_minus = 0;
};

/// Trace of w0 on span(Sigma) and the dimensions of its +-1 eigenspaces.
inline W0Invariants w0_invariants(const RootSystem& rs) {
  const WeylElement w0 = longest_element(rs);
  const double tr = w0.matrix.trace() - (rs.ambient_dim - rs.rank);
  W0Invariants out;
  out.trace = static_cast<int>(std::lround(tr));
  out.d_plus = (rs.rank + out.trace) / 2;
  out.d_minus = (rs.rank - out.trace) / 2;
  return out;
}

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

namespace detail {

struct IntKeyHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= static_cast<std::size_t>(static_cast<unsigned>(x)) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

/// Simple-root coordinates of 2*rho of the reduced system; integral.
inline std::vector<int> two_rho_reduced_coords(const RootSystem& rs) {
  std::vector<int> c(rs.rank, 0);
  for (const auto& pr : rs.positive_roots)
    if (!pr.divisible)
      for (int i = 0; i < rs.rank; ++i) c[i] += pr.simple_coords(i);
  return c;
}

inline std::vector<int> apply_simple_int(const RootSystem& rs, std::vector<int> c, int j) {
  int pair = 0;
  for (int i = 0; i < rs.rank; ++i) pair += c[i] * rs.cartan(i, j);
  c[j] -= pair;
  return c;
}

/// Lexicographic order with a tolerance; adequate for well-separated points.
struct TolerantLess {
  double tol = 1e-9;
  bool operator()(const std::vector<double>& a, const std::vector<double>& b) const {
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k] < b[k] - tol) return true;
      if (a[k] > b[k] + tol) return false;
    }
    return false;
  }
};

inline std::vector<double> as_key(const AVec& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace detail

/// Complete list of W by breadth-first closure; words are reduced.
/// Elements are identified by the (integral) image of 2*rho.
inline std::vector<WeylElement> weyl_enumerate(const RootSystem& rs,
                                               std::size_t cap = kDefaultEnumerationCap) {
  std::vector<WeylElement> elems;
  std::vector<std::vector<int>> keys;
  std::unordered_map<std::vector<int>, std::size_t, detail::IntKeyHash> index;
  std::vector<Eigen::MatrixXd> refl;
  for (int j = 0; j < rs.rank; ++j) refl.push_back(reflection_matrix(rs.simple_roots[j]));

  elems.push_back(identity_element(rs));
  keys.push_back(detail::two_rho_reduced_coords(rs));
  index.emplace(keys.back(), 0);
  for (std::size_t head = 0; head < elems.size(); ++head) {
    for (int j = 0; j < rs.rank; ++j) {
      std::vector<int> k = detail::apply_simple_int(rs, keys[head], j);
      if (index.count(k)) continue;
      if (elems.size() >= cap)
        throw CapExceeded("weyl_enumerate: |W| exceeds cap " + std::to_string(cap));
      WeylElement w;
      w.matrix = refl[j] * elems[head].matrix;
      w.word.reserve(elems[head].word.size() + 1);
      w.word.push_back(j);
      w.word.insert(w.word.end(), elems[head].word.begin(), elems[head].word.end());
      index.emplace(k, elems.size());
      keys.push_back(std::move(k));
      elems.push_back(std::move(w));
    }
  }
  return elems;
}

/// Orbit of v under the parabolic subgroup generated by `subset` (all simple
/// reflections when empty), deduplicated at `tol`.
inline std::vector<AVec> parabolic_orbit(const RootSystem& rs, const AVec& v, const std::vector<int>& subset,
                                         std::size_t cap = kDefaultEnumerationCap, double tol = 1e-9) {
  std::vector<int> idx = subset;
  if (idx.empty())
    for (int i = 0; i < rs.rank; ++i) idx.push_back(i);
  const double scaled_tol = tol * std::max(1.0, v.norm());
  std::map<std::vector<double>, std::size_t, detail::TolerantLess> seen(detail::TolerantLess{scaled_tol});
  std::vector<AVec> orbit;
  orbit.push_back(v);
  seen.emplace(detail::as_key(v), 0);
  for (std::size_t head = 0; head < orbit.size(); ++head) {
    for (int j : idx) {
      const AVec& a = rs.simple_roots[j];
      if (std::abs(orbit[head].dot(a)) <= scaled_tol * a.norm()) continue;
      AVec u = reflect(orbit[head], a);
      if (seen.count(detail::as_key(u))) continue;
      if (orbit.size() >= cap) throw CapExceeded("weyl_orbit: orbit exceeds cap " + std::to_string(cap));
      seen.emplace(detail::as_key(u), orbit.size());
      orbit.push_back(std::move(u));
    }
  }
  return orbit;
}

/// The W-orbit of v, duplicate free.
inline std::vector<AVec> weyl_orbit(const RootSystem& rs, const AVec& v,
                                    std::size_t cap = kDefaultEnumerationCap) {
  if (v.size() != rs.ambient_dim) throw DimensionMismatch("weyl_orbit: wrong length");
  return parabolic_orbit(rs, v, {}, cap);
}

namespace detail {

inline std::uint64_t parabolic_order(const RootSystem& rs, std::vector<int> subset) {
  if (subset.empty()) return 1;
  if (subset.size() == 1) return 2;
  // Pick a leaf of the Dynkin subdiagram with the smallest orbit; the
  // stabilizer of omega_j in W_J is W_{J \ {j}}.
  std::size_t best_size = std::numeric_limits<std::size_t>::max();
  int best = subset.front();
  for (int j : subset) {
    int degree = 0;
    for (int i : subset)
      if (i != j && rs.cartan(i, j) != 0) ++degree;
    if (degree > 1) continue;
    try {
      const auto orbit = parabolic_orbit(rs, rs.coweights[j], subset, best_size);
      if (orbit.size() < best_size) {
        best_size = orbit.size();
        best = j;
      }
    } catch (const CapExceeded&) {
    }
  }
  std::vector<int> rest;
  for (int i : subset)
    if (i != best) rest.push_back(i);
  return static_cast<std::uint64_t>(best_size) * parabolic_order(rs, rest);
}

}  // namespace detail

/// |W| by orbit-stabilizer recursion over parabolic subgroups; needs no
/// enumeration of W, so it is cheap for E8.
inline std::uint64_t weyl_order(const RootSystem& rs) {
  std::vector<int> all;
  for (int i = 0; i < rs.rank; ++i) all.push_back(i);
  return detail::parabolic_order(rs, all);
}

}  // namespace rtgap
