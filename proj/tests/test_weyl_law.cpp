#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rtgap/weyl_law.hpp"

using namespace rtgap;

namespace {

RootSystem split(CartanType t, int r) { return build_root_system(GroupDescriptor::split(t, r)); }

// Midpoint-rule integral over a box in the plane of a rank-2 system of
// f(H) * prod |alpha(H)|^{m_alpha}; W-invariant integrands only.
template <class F>
double planar_integral(const RootSystem& rs, double half_width, int n, F inside) {
  // orthonormal basis of span(simple roots)
  AVec e1 = rs.simple_roots[0].normalized();
  AVec e2 = rs.simple_roots[1] - rs.simple_roots[1].dot(e1) * e1;
  e2.normalize();
  const double h = 2.0 * half_width / n;
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const AVec H = (-half_width + (i + 0.5) * h) * e1 + (-half_width + (j + 0.5) * h) * e2;
      if (!inside(H)) continue;
      double p = 1.0;
      for (const auto& pr : rs.positive_roots) p *= std::pow(std::abs(pr.root.dot(H)), pr.multiplicity);
      total += p;
    }
  return total * h * h;
}

}  // namespace

TEST(WeylLaw, DimensionExamples) {
  EXPECT_EQ(dim_symmetric_space(GroupDescriptor::sl_r(2)), 2);
  EXPECT_EQ(dim_symmetric_space(GroupDescriptor::sl_r(3)), 5);
  EXPECT_EQ(dim_symmetric_space(GroupDescriptor::so_n1(4)), 4);
}

TEST(WeylLaw, LeadingTermBallExamples) {
  EXPECT_NEAR(leading_term_ball(GroupDescriptor::sl_r(2), 1.0, 1.0), 1.0 / (2.0 * std::numbers::pi), 1e-15);
  EXPECT_EQ(leading_term_ball(GroupDescriptor::sl_r(3), 1.0, 0.0), 0.0);
  for (const auto& desc : {GroupDescriptor::sl_r(3), GroupDescriptor::so_n1(4), GroupDescriptor::split(CartanType::G, 2)}) {
    const int d = dim_symmetric_space(desc);
    EXPECT_NEAR(leading_term_ball(desc, 3.0, 2.6) / leading_term_ball(desc, 3.0, 1.3), std::pow(2.0, d), 1e-9 * std::pow(2.0, d));
  }
  // closed-surface example: vol = 2 pi (2g - 2), g = 2, t = 10
  const double vol = 2.0 * std::numbers::pi * 2.0;
  EXPECT_NEAR(leading_term_ball(GroupDescriptor::sl_r(2), vol, 10.0), vol * 100.0 / (2.0 * std::numbers::pi), 1e-10);
  EXPECT_THROW(leading_term_ball(GroupDescriptor::sl_r(2), 0.0, 1.0), PreconditionViolated);
  EXPECT_THROW(leading_term_ball(GroupDescriptor::sl_r(2), 1.0, -1.0), PreconditionViolated);
}

TEST(WeylLaw, BallConsistencyAcrossCatalog) {
  int checked = 0;
  for (const auto& desc : catalog_sample()) {
    const auto rs = build_root_system(desc);
    if (dim_symmetric_space(rs) > 20) continue;
    SCOPED_TRACE(to_string(desc));
    for (double t : {0.5, 1.0, 3.0}) {
      const double a = leading_term_ball(rs, 2.5, t);
      const double b = counting_lower_bound(rs, 2.5, OmegaSpec::ball(1.0), t).leading;
      EXPECT_NEAR(a, b, 1e-12 * std::abs(a));
    }
    ++checked;
  }
  EXPECT_GE(checked, 10);
}

TEST(WeylLaw, BallVolumeIsCalibrationIdentity) {
  for (int d = 1; d <= 12; ++d) {
    // recursion V_d = 2 pi / d V_{d-2}
    const double expect = d == 1 ? 2.0 : d == 2 ? std::numbers::pi : 2.0 * std::numbers::pi / d * unit_ball_volume(d - 2);
    EXPECT_NEAR(unit_ball_volume(d), expect, 1e-13);
  }
  const auto rs = build_root_system(GroupDescriptor::sl_r(3));
  EXPECT_NEAR(vol_adk_omega(rs, OmegaSpec::ball(1.0)), std::pow(std::numbers::pi, 2.5) / std::tgamma(3.5), 1e-14);
  EXPECT_NEAR(vol_adk_omega(rs, OmegaSpec::ball(1.7)), std::pow(1.7, 5) * unit_ball_volume(5), 1e-12);
}

// Running the ball through the indicator path must reproduce the closed form:
// the same angular rule is used for numerator and calibration.
TEST(WeylLaw, IndicatorBallMatchesClosedForm) {
  for (const auto& desc : {GroupDescriptor::sl_r(2), GroupDescriptor::so_n1(3), GroupDescriptor::su_n1(2),
                           GroupDescriptor::sl_r(3), GroupDescriptor::split(CartanType::B, 2),
                           GroupDescriptor::split(CartanType::G, 2), GroupDescriptor::sl_r(4)}) {
    const auto rs = build_root_system(desc);
    SCOPED_TRACE(to_string(desc));
    for (double r : {1.0, 0.6}) {
      const auto om = OmegaSpec::indicator([r](const AVec& h) { return h.norm() < r; }, 1.0);
      const double expect = vol_adk_omega(rs, OmegaSpec::ball(r));
      EXPECT_NEAR(vol_adk_omega(rs, om), expect, 1e-11 * expect);
    }
  }
}

// Rank one: Ball(1) minus the slab is the spherical shell |alpha(H)| >= w.
TEST(WeylLaw, RankOneShellExact) {
  const auto rs = build_root_system(GroupDescriptor::so_n1(3));
  const int d = dim_symmetric_space(rs);
  const double w = 0.3;
  const double inner = w / rs.simple_roots[0].norm();
  const double expect = unit_ball_volume(d) * (1.0 - std::pow(inner, d));
  EXPECT_NEAR(vol_adk_omega(rs, OmegaSpec::ball_minus_slab(rs, 1.0, 0, w)), expect, 1e-12);
}

// Ball minus a wall slab: the removed volume agrees with an independent
// Cartesian quadrature of the removed set.
TEST(WeylLaw, SlabDifferenceMatchesDirectQuadrature) {
  for (const auto& rs : {split(CartanType::A, 2), split(CartanType::B, 2)}) {
    SCOPED_TRACE(to_string(rs.group));
    const double w = 0.1;
    const int d = dim_symmetric_space(rs);
    const double full = vol_adk_omega(rs, OmegaSpec::ball(1.0));
    const double cut = vol_adk_omega(rs, OmegaSpec::ball_minus_slab(rs, 1.0, 0, w));
    EXPECT_LT(cut, full);

    // removed set: every root in the W-orbit of alpha_1 (roots of its length)
    // is small on H
    const double len = rs.simple_roots[0].norm();
    auto removed = [&](const AVec& h) {
      if (h.norm() >= 1.0) return false;
      for (const auto& pr : rs.positive_roots)
        if (std::abs(pr.root.norm() - len) < 1e-9 && std::abs(pr.root.dot(h)) >= w) return false;
      return true;
    };
    const double i_removed = planar_integral(rs, 0.25, 1200, removed);
    const double i_ball = planar_integral(rs, 1.0, 2000, [](const AVec& h) { return h.norm() < 1.0; });
    const double direct = unit_ball_volume(d) * i_removed / i_ball;
    EXPECT_GT(direct, 0.0);
    EXPECT_NEAR(full - cut, direct, 0.01 * direct);
  }
}

// Off-center disc (not W-invariant) against the Cartesian oracle of 1_{W Omega}.
TEST(WeylLaw, NonInvariantRegionMatchesDirectQuadrature) {
  const auto rs = split(CartanType::A, 2);
  const int d = dim_symmetric_space(rs);
  const AVec c = 0.35 * rs.coweights[0] / rs.coweights[0].norm() + 0.1 * rs.simple_roots[1];
  const auto om = OmegaSpec::indicator([c](const AVec& h) { return (h - c).norm() < 0.5; }, 1.0);
  const auto all = weyl_enumerate(rs);
  auto in_orbit = [&](const AVec& h) {
    for (const auto& w : all)
      if ((w.matrix * h - c).norm() < 0.5) return true;
    return false;
  };
  const double direct = unit_ball_volume(d) * planar_integral(rs, 1.0, 1500, in_orbit) /
                        planar_integral(rs, 1.0, 1500, [](const AVec& h) { return h.norm() < 1.0; });
  EXPECT_NEAR(vol_adk_omega(rs, om), direct, 0.01 * direct);
}

TEST(WeylLaw, MonotoneUnderInclusion) {
  const auto rs = split(CartanType::A, 2);
  double prev = 0.0;
  for (double r : {0.3, 0.5, 0.8, 1.0}) {
    const double v = vol_adk_omega(rs, OmegaSpec::indicator([r](const AVec& h) { return h.norm() < r; }, 1.0));
    EXPECT_GT(v, prev);
    prev = v;
  }
  double prev_cut = vol_adk_omega(rs, OmegaSpec::ball(1.0));
  for (double w : {0.05, 0.1, 0.2, 0.4}) {
    const double v = vol_adk_omega(rs, OmegaSpec::ball_minus_slab(rs, 1.0, 0, w));
    EXPECT_LT(v, prev_cut);
    prev_cut = v;
  }
}

TEST(WeylLaw, RefinementStability) {
  const auto rs = split(CartanType::A, 2);
  const AVec c = 0.4 * rs.coweights[1] / rs.coweights[1].norm();
  const std::vector<OmegaSpec> shapes = {
      OmegaSpec::ball_minus_slab(rs, 1.0, 0, 0.1), OmegaSpec::ball_minus_slab(rs, 1.0, 1, 0.3),
      OmegaSpec::indicator([c](const AVec& h) { return (h - c).norm() < 0.5; }, 1.0)};
  for (const auto& om : shapes) {
    VolumeConfig coarse, fine;
    fine.angular_panels = 2 * coarse.angular_panels;
    fine.radial_samples = 2 * coarse.radial_samples;
    const double a = vol_adk_omega(rs, om, coarse);
    const double b = vol_adk_omega(rs, om, fine);
    EXPECT_LT(std::abs(a - b), 0.005 * std::abs(b));
  }
}

TEST(WeylLaw, RejectsUnboundedIndicator) {
  const auto rs = split(CartanType::A, 2);
  EXPECT_THROW(vol_adk_omega(rs, OmegaSpec::indicator([](const AVec&) { return true; }, 1.0)), IndicatorUnbounded);
  EXPECT_THROW(vol_adk_omega(rs, OmegaSpec::indicator([](const AVec& h) { return h.norm() < 1.2; }, 1.0)),
               IndicatorUnbounded);
  EXPECT_THROW(vol_adk_omega(rs, OmegaSpec::indicator([](const AVec& h) { return h.norm() < 1.0; }, -1.0)),
               PreconditionViolated);
}

TEST(WeylLaw, CountingBoundLinearityAndZero) {
  const auto rs = split(CartanType::A, 2);
  const auto om = OmegaSpec::ball_minus_slab(rs, 1.0, 0, 0.2);
  const auto a = counting_lower_bound(rs, 1.0, om, 4.0);
  const auto b = counting_lower_bound(rs, 2.0, om, 4.0);
  EXPECT_NEAR(b.leading, 2.0 * a.leading, 1e-12 * a.leading);
  EXPECT_EQ(counting_lower_bound(rs, 1.0, om, 0.0).leading, 0.0);
  EXPECT_EQ(a.d, 5);
  EXPECT_EQ(a.remainder_exponent, 4);
  EXPECT_EQ(a.weyl_order, 6u);
  EXPECT_NE(describe(a).find("+ O(t^4)"), std::string::npos);
}
