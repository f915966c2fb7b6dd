#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "rtgap/errors.hpp"
#include "rtgap/group.hpp"

namespace rtgap {

/// Real covector in a* given in an orthonormal basis for the Killing-induced
/// inner product. The same coordinates are used for a via the Killing
/// identification, so alpha(H) is a plain dot product.
using AVec = Eigen::VectorXd;
/// Complexified covector in a*_C, same basis as AVec.
using AVecC = Eigen::VectorXcd;

struct PositiveRoot {
  AVec root;
  int multiplicity = 1;
  /// Coefficients in the simple-root basis (2alpha entries of BC carry 2).
  Eigen::VectorXi simple_coords;
  /// True for the 2alpha entries of a non-reduced (BC) system.
  bool divisible = false;
};

/// Restricted root system with multiplicities, realized in an orthonormal
/// basis of the Killing-induced inner product on a*.
struct RootSystem {
  GroupDescriptor group;
  CartanType type = CartanType::A;
  int rank = 0;
  int ambient_dim = 0;
  std::vector<AVec> simple_roots;
  std::vector<PositiveRoot> positive_roots;
  AVec rho;
  /// <alpha_i, alpha_j>
  Eigen::MatrixXd gram;
  /// <alpha_i, alpha_j^vee> = 2<alpha_i, alpha_j>/<alpha_j, alpha_j>
  Eigen::MatrixXi cartan;
  /// omega_j with <alpha_i, omega_j> = delta_ij.
  std::vector<AVec> coweights;
  /// Orthonormal coordinates of H in a equal raw_scale * (raw coordinates),
  /// where raw coordinates are e.g. the diagonal entries for SL(n).
  double raw_scale = 1.0;

  /// Ambient x rank matrix whose columns are the simple roots.
  Eigen::MatrixXd simple_matrix() const {
    Eigen::MatrixXd m(ambient_dim, rank);
    for (int i = 0; i < rank; ++i) m.col(i) = simple_roots[i];
    return m;
  }

  std::string label() const { return to_string(group); }
};

namespace detail {

inline Eigen::MatrixXd unit_rows(int ambient, const std::vector<std::vector<double>>& rows) {
  Eigen::MatrixXd m(rows.size(), ambient);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < ambient; ++j) m(static_cast<Eigen::Index>(i), j) = rows[i][j];
  return m;
}

/// Raw simple roots (one per row) for a reduced Cartan type.
inline Eigen::MatrixXd raw_simple_roots(CartanType t, int r) {
  auto e = [](int dim, int i) {
    std::vector<double> v(dim, 0.0);
    v[i] = 1.0;
    return v;
  };
  auto diff = [&](int dim, int i, int j) {
    auto v = e(dim, i);
    v[j] -= 1.0;
    return v;
  };
  std::vector<std::vector<double>> rows;
  int dim = r;
  switch (t) {
    case CartanType::A:
      dim = r + 1;
      for (int i = 0; i < r; ++i) rows.push_back(diff(dim, i, i + 1));
      break;
    case CartanType::B:
      for (int i = 0; i + 1 < r; ++i) rows.push_back(diff(dim, i, i + 1));
      rows.push_back(e(dim, r - 1));
      break;
    case CartanType::C: {
      for (int i = 0; i + 1 < r; ++i) rows.push_back(diff(dim, i, i + 1));
      auto v = e(dim, r - 1);
      v[r - 1] = 2.0;
      rows.push_back(v);
      break;
    }
    case CartanType::D: {
      for (int i = 0; i + 1 < r; ++i) rows.push_back(diff(dim, i, i + 1));
      auto v = e(dim, r - 2);
      v[r - 1] = 1.0;
      rows.push_back(v);
      break;
    }
    case CartanType::E: {
      // Bourbaki labelling inside R^8; E7 and E6 use the first 7 / 6 roots.
      dim = 8;
      std::vector<std::vector<double>> e8;
      e8.push_back({0.5, -0.5, -0.5, -0.5, -0.5, -0.5, -0.5, 0.5});
      {
        auto v = e(8, 0);
        v[1] = 1.0;
        e8.push_back(v);
      }
      e8.push_back(diff(8, 1, 0));
      for (int i = 2; i < 7; ++i) e8.push_back(diff(8, i, i - 1));
      rows.assign(e8.begin(), e8.begin() + r);
      break;
    }
    case CartanType::F:
      dim = 4;
      rows.push_back(diff(4, 1, 2));
      rows.push_back(diff(4, 2, 3));
      rows.push_back(e(4, 3));
      rows.push_back({0.5, -0.5, -0.5, -0.5});
      break;
    case CartanType::G:
      dim = 3;
      rows.push_back({1.0, -1.0, 0.0});
      rows.push_back({-2.0, 1.0, 1.0});
      break;
    case CartanType::BC:
      dim = 1;
      rows.push_back({1.0});
      break;
  }
  return unit_rows(dim, rows);
}

/// Positive roots of the reduced system with the given Cartan matrix, as
/// simple-root coefficient vectors, ordered by height then lexicographically.
inline std::vector<Eigen::VectorXi> positive_root_coords(const Eigen::MatrixXi& cartan) {
  const int r = static_cast<int>(cartan.rows());
  std::map<std::vector<int>, bool> seen;
  std::deque<Eigen::VectorXi> queue;
  std::vector<Eigen::VectorXi> out;
  auto key = [](const Eigen::VectorXi& v) { return std::vector<int>(v.data(), v.data() + v.size()); };
  for (int i = 0; i < r; ++i) {
    Eigen::VectorXi v = Eigen::VectorXi::Zero(r);
    v(i) = 1;
    seen[key(v)] = true;
    queue.push_back(v);
  }
  while (!queue.empty()) {
    Eigen::VectorXi b = queue.front();
    queue.pop_front();
    out.push_back(b);
    for (int j = 0; j < r; ++j) {
      int pair = 0;
      for (int i = 0; i < r; ++i) pair += b(i) * cartan(i, j);
      if (pair == 0) continue;
      Eigen::VectorXi c = b;
      c(j) -= pair;
      if ((c.array() < 0).any()) continue;
      if (seen.emplace(key(c), true).second) queue.push_back(c);
    }
  }
  std::sort(out.begin(), out.end(), [&](const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
    if (a.sum() != b.sum()) return a.sum() < b.sum();
    return key(a) > key(b);
  });
  return out;
}

struct Multiplicities {
  int reduced = 1;
  int doubled = 0;  // 0 when 2alpha is not a root
};

inline Multiplicities multiplicities(const GroupDescriptor& d) {
  switch (d.family) {
    case Family::SLnR:
    case Family::Sp2nR:
    case Family::SplitSimple: return {1, 0};
    case Family::SLnC: return {2, 0};
    case Family::SOn1: return {d.n - 1, 0};
    case Family::SUn1: return {2 * (d.n - 1), 1};
    case Family::Spn1: return {4 * (d.n - 1), 3};
  }
  return {1, 0};
}

inline std::pair<CartanType, int> cartan_type_of(const GroupDescriptor& d) {
  switch (d.family) {
    case Family::SLnR:
    case Family::SLnC: return {CartanType::A, d.n - 1};
    case Family::Sp2nR: return {CartanType::C, d.n};
    case Family::SOn1: return {CartanType::A, 1};
    case Family::SUn1:
    case Family::Spn1: return {CartanType::BC, 1};
    case Family::SplitSimple: return {d.split_type, d.n};
  }
  return {CartanType::A, 1};
}

}  // namespace detail

/// Builds the restricted root system of a catalog group.
inline RootSystem build_root_system(const GroupDescriptor& desc) {
  validate(desc);
  RootSystem rs;
  rs.group = desc;
  const auto [type, r] = detail::cartan_type_of(desc);
  rs.type = type;
  rs.rank = r;

  // SO(n,1) is rank one with a single reduced root; realize it in R^1.
  const Eigen::MatrixXd raw = (desc.family == Family::SOn1)
                                  ? detail::raw_simple_roots(CartanType::BC, 1)
                                  : detail::raw_simple_roots(type, r);
  rs.ambient_dim = static_cast<int>(raw.cols());

  Eigen::MatrixXd raw_gram = raw * raw.transpose();
  rs.cartan.resize(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      rs.cartan(i, j) = static_cast<int>(std::lround(2.0 * raw_gram(i, j) / raw_gram(j, j)));

  const auto mult = detail::multiplicities(desc);
  const auto coords = detail::positive_root_coords(rs.cartan);

  // Killing-induced form: B(H,H') = sum over all roots m_a a(H) a(H'). For an
  // irreducible system this is c times the raw Euclidean form on span(Sigma).
  double trace_m = 0.0;
  for (const auto& c : coords) {
    const Eigen::VectorXd a = raw.transpose() * c.cast<double>();
    trace_m += 2.0 * mult.reduced * a.squaredNorm();
    if (mult.doubled > 0) trace_m += 2.0 * mult.doubled * (2.0 * a).squaredNorm();
  }
  const double c_scale = trace_m / r;
  rs.raw_scale = std::sqrt(c_scale);
  const Eigen::MatrixXd simple = raw.transpose() / rs.raw_scale;  // ambient x r

  for (int i = 0; i < r; ++i) rs.simple_roots.push_back(simple.col(i));
  for (const auto& c : coords) {
    PositiveRoot pr;
    pr.root = simple * c.cast<double>();
    pr.multiplicity = mult.reduced;
    pr.simple_coords = c;
    rs.positive_roots.push_back(pr);
  }
  if (mult.doubled > 0) {
    const std::size_t n_reduced = rs.positive_roots.size();
    for (std::size_t k = 0; k < n_reduced; ++k) {
      PositiveRoot pr = rs.positive_roots[k];
      pr.root *= 2.0;
      pr.simple_coords *= 2;
      pr.multiplicity = mult.doubled;
      pr.divisible = true;
      rs.positive_roots.push_back(pr);
    }
  }

  rs.rho = AVec::Zero(rs.ambient_dim);
  for (const auto& pr : rs.positive_roots) rs.rho += 0.5 * pr.multiplicity * pr.root;

  rs.gram = simple.transpose() * simple;
  const Eigen::MatrixXd gram_inv = rs.gram.inverse();
  for (int j = 0; j < r; ++j) rs.coweights.push_back(simple * gram_inv.col(j));
  return rs;
}

/// Killing-induced inner product on a* (and on a via the identification).
inline double killing_pairing(const RootSystem& rs, const AVec& v, const AVec& w) {
  if (v.size() != rs.ambient_dim || w.size() != rs.ambient_dim)
    throw DimensionMismatch("killing_pairing: expected vectors of length " +
                            std::to_string(rs.ambient_dim));
  return v.dot(w);
}

/// Maps raw coordinates of H in a (diagonal entries for SL(n), the boost
/// parameter for rank one) to the orthonormal coordinates.
inline AVec a_from_raw(const RootSystem& rs, const Eigen::VectorXd& raw) {
  if (raw.size() != rs.ambient_dim) throw DimensionMismatch("a_from_raw: wrong length");
  return rs.raw_scale * raw;
}

inline Eigen::VectorXd raw_from_a(const RootSystem& rs, const AVec& h) { return h / rs.raw_scale; }

/// sum over all roots m_alpha alpha(H) alpha(H'), evaluated from root data.
inline double killing_form_from_roots(const RootSystem& rs, const AVec& h1, const AVec& h2) {
  if (h1.size() != rs.ambient_dim || h2.size() != rs.ambient_dim)
    throw DimensionMismatch("killing_form_from_roots: wrong length");
  double s = 0.0;
  for (const auto& pr : rs.positive_roots) s += 2.0 * pr.multiplicity * pr.root.dot(h1) * pr.root.dot(h2);
  return s;
}

inline AVec rho(const RootSystem& rs) { return rs.rho; }

/// Coefficients c with v = sum c_i alpha_i (components orthogonal to the
/// span of the roots are discarded).
inline Eigen::VectorXd simple_coords(const RootSystem& rs, const AVec& v) {
  if (v.size() != rs.ambient_dim) throw DimensionMismatch("simple_coords: wrong length");
  Eigen::VectorXd pairings(rs.rank);
  for (int i = 0; i < rs.rank; ++i) pairings(i) = rs.coweights[i].dot(v);
  return pairings;
}

inline AVec from_simple_coords(const RootSystem& rs, const Eigen::VectorXd& c) {
  if (c.size() != rs.rank) throw DimensionMismatch("from_simple_coords: wrong length");
  AVec v = AVec::Zero(rs.ambient_dim);
  for (int i = 0; i < rs.rank; ++i) v += c(i) * rs.simple_roots[i];
  return v;
}

inline AVecC from_simple_coords(const RootSystem& rs, const Eigen::VectorXd& re, const Eigen::VectorXd& im) {
  AVecC out(rs.ambient_dim);
  out.real() = from_simple_coords(rs, re);
  out.imag() = from_simple_coords(rs, im);
  return out;
}

/// Distance from v to span(Sigma).
inline double off_span_norm(const RootSystem& rs, const AVec& v) {
  return (v - from_simple_coords(rs, simple_coords(rs, v))).norm();
}

/// Positive roots with 2alpha entries filtered out.
inline std::vector<PositiveRoot> reduced_positive_roots(const RootSystem& rs) {
  std::vector<PositiveRoot> out;
  for (const auto& pr : rs.positive_roots)
    if (!pr.divisible) out.push_back(pr);
  return out;
}

/// dim G/K = rank + sum of multiplicities over positive roots.
inline int dim_symmetric_space(const RootSystem& rs) {
  int d = rs.rank;
  for (const auto& pr : rs.positive_roots) d += pr.multiplicity;
  return d;
}

inline int dim_symmetric_space(const GroupDescriptor& desc) {
  return dim_symmetric_space(build_root_system(desc));
}

}  // namespace rtgap
