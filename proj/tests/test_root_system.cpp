#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "oracles.hpp"
#include "rtgap/root_system.hpp"
#include "rtgap/weyl.hpp"

using namespace rtgap;

namespace {

bool is_root(const RootSystem& rs, const AVec& v) {
  for (const auto& pr : rs.positive_roots)
    if ((pr.root - v).norm() < 1e-9 || (pr.root + v).norm() < 1e-9) return true;
  return false;
}

}  // namespace

TEST(RootSystem, SL3HasThreePositiveRoots) {
  const auto rs = build_root_system(GroupDescriptor::sl_r(3));
  ASSERT_EQ(rs.rank, 2);
  ASSERT_EQ(rs.positive_roots.size(), 3u);
  for (const auto& pr : rs.positive_roots) EXPECT_EQ(pr.multiplicity, 1);
  const AVec sum = rs.simple_roots[0] + rs.simple_roots[1];
  EXPECT_TRUE(is_root(rs, sum));
}

TEST(RootSystem, RhoExamples) {
  const auto sl2 = build_root_system(GroupDescriptor::sl_r(2));
  EXPECT_LT((rho(sl2) - 0.5 * sl2.simple_roots[0]).norm(), 1e-14);

  const auto sl3 = build_root_system(GroupDescriptor::sl_r(3));
  EXPECT_LT((rho(sl3) - sl3.simple_roots[0] - sl3.simple_roots[1]).norm(), 1e-14);

  // SL4: sum the six positive roots of A3 listed by hand in epsilon coordinates.
  const auto sl4 = build_root_system(GroupDescriptor::sl_r(4));
  Eigen::VectorXd eps_sum = Eigen::VectorXd::Zero(4);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      eps_sum(i) += 1.0;
      eps_sum(j) -= 1.0;
    }
  // raw covector coordinates map to the orthonormal ones by 1/raw_scale
  const Eigen::VectorXd expect = simple_coords(sl4, 0.5 * eps_sum / sl4.raw_scale);
  const Eigen::VectorXd got = simple_coords(sl4, rho(sl4));
  EXPECT_NEAR(got(0), 1.5, 1e-12);
  EXPECT_NEAR(got(1), 2.0, 1e-12);
  EXPECT_NEAR(got(2), 1.5, 1e-12);
  EXPECT_LT((got - expect).norm(), 1e-12);
}

TEST(RootSystem, Multiplicities) {
  auto mults = [](const GroupDescriptor& d) {
    std::vector<std::pair<int, bool>> out;
    for (const auto& pr : build_root_system(d).positive_roots) out.emplace_back(pr.multiplicity, pr.divisible);
    return out;
  };
  EXPECT_EQ(mults(GroupDescriptor::so_n1(3)), (std::vector<std::pair<int, bool>>{{2, false}}));
  EXPECT_EQ(mults(GroupDescriptor::su_n1(3)), (std::vector<std::pair<int, bool>>{{4, false}, {1, true}}));
  EXPECT_EQ(mults(GroupDescriptor::sp_n1(2)), (std::vector<std::pair<int, bool>>{{4, false}, {3, true}}));
  for (const auto& pr : build_root_system(GroupDescriptor::sl_c(3)).positive_roots) EXPECT_EQ(pr.multiplicity, 2);
}

TEST(RootSystem, KillingPairingExamples) {
  const auto sl2 = build_root_system(GroupDescriptor::sl_r(2));
  Eigen::VectorXd h(2);
  h << 1, -1;
  const AVec H = a_from_raw(sl2, h);
  EXPECT_NEAR(killing_pairing(sl2, H, H), 8.0, 1e-12);
  EXPECT_NEAR(killing_form_from_roots(sl2, H, H), 8.0, 1e-12);
  EXPECT_EQ(killing_pairing(sl2, H, AVec::Zero(2)), 0.0);
  EXPECT_THROW(killing_pairing(sl2, H, AVec::Zero(3)), DimensionMismatch);

  const auto sl3 = build_root_system(GroupDescriptor::sl_r(3));
  const AVec& a1 = sl3.simple_roots[0];
  const AVec& a2 = sl3.simple_roots[1];
  EXPECT_NEAR(killing_pairing(sl3, a1, a2), -0.5 * killing_pairing(sl3, a1, a1), 1e-14);
}

// Root data form vs trace(ad H o ad H') in explicit matrix realizations.
TEST(RootSystem, KillingFormMatchesMatrixTrace) {
  auto gen = oracle::rng(20240101);
  std::normal_distribution<double> N(0.0, 1.0);

  struct Case {
    GroupDescriptor desc;
    oracle::MatrixLieAlgebra alg;
    std::function<oracle::Mat(const Eigen::VectorXd&)> embed;
    int raw_dim;
  };
  auto diag_embed = [](const Eigen::VectorXd& h) { return oracle::Mat(h.asDiagonal()); };
  std::vector<Case> cases;
  cases.push_back({GroupDescriptor::sl_r(2), oracle::sl_n(2), diag_embed, 2});
  cases.push_back({GroupDescriptor::sl_r(3), oracle::sl_n(3), diag_embed, 3});
  cases.push_back({GroupDescriptor::so_n1(2), oracle::so_p1(2), [](const Eigen::VectorXd& h) { return oracle::so_p1_boost(2, h(0)); }, 1});
  cases.push_back({GroupDescriptor::so_n1(3), oracle::so_p1(3), [](const Eigen::VectorXd& h) { return oracle::so_p1_boost(3, h(0)); }, 1});

  for (auto& c : cases) {
    const auto rs = build_root_system(c.desc);
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd h1(c.raw_dim), h2(c.raw_dim);
      for (int i = 0; i < c.raw_dim; ++i) {
        h1(i) = N(gen);
        h2(i) = N(gen);
      }
      if (c.raw_dim > 1) {  // trace zero
        h1.array() -= h1.mean();
        h2.array() -= h2.mean();
      }
      const double expect = c.alg.killing(c.embed(h1), c.embed(h2));
      const double got = killing_pairing(rs, a_from_raw(rs, h1), a_from_raw(rs, h2));
      const double via_roots = killing_form_from_roots(rs, a_from_raw(rs, h1), a_from_raw(rs, h2));
      EXPECT_NEAR(got, expect, 1e-8 * (1.0 + std::abs(expect))) << to_string(c.desc);
      EXPECT_NEAR(via_roots, expect, 1e-8 * (1.0 + std::abs(expect))) << to_string(c.desc);
    }
  }
}

// so(3,1): the single restricted root has multiplicity 2 (ad H has eigenvalue
// +s with a 2-dimensional eigenspace).
TEST(RootSystem, SO31MultiplicityFromMatrixRealization) {
  const auto alg = oracle::so_p1(3);
  const oracle::Mat H = oracle::so_p1_boost(3, 1.0);
  oracle::Mat ad(alg.basis.size(), alg.basis.size());
  for (std::size_t i = 0; i < alg.basis.size(); ++i) ad.col(static_cast<int>(i)) = alg.coords(H * alg.basis[i] - alg.basis[i] * H);
  Eigen::EigenSolver<oracle::Mat> es(ad);
  int plus = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i) - 1.0) < 1e-9) ++plus;
  const auto rs = build_root_system(GroupDescriptor::so_n1(3));
  ASSERT_EQ(rs.positive_roots.size(), 1u);
  EXPECT_EQ(rs.positive_roots[0].multiplicity, plus);
}

TEST(RootSystem, InvariantsAcrossCatalog) {
  for (const auto& d : catalog_sample()) {
    const auto rs = build_root_system(d);
    SCOPED_TRACE(to_string(d));
    ASSERT_EQ(static_cast<int>(rs.simple_roots.size()), rs.rank);
    // closure: s_a(b) is a root for all roots a, b
    for (const auto& a : rs.positive_roots)
      for (const auto& b : rs.positive_roots) ASSERT_TRUE(is_root(rs, reflect(b.root, a.root)));
    // rho
    AVec r = AVec::Zero(rs.ambient_dim);
    for (const auto& pr : rs.positive_roots) r += 0.5 * pr.multiplicity * pr.root;
    EXPECT_LT((r - rs.rho).norm(), 1e-12);
    // coweights dual to simple roots
    for (int i = 0; i < rs.rank; ++i)
      for (int j = 0; j < rs.rank; ++j)
        EXPECT_NEAR(rs.simple_roots[i].dot(rs.coweights[j]), i == j ? 1.0 : 0.0, 1e-12);
    // Killing normalization: sum over all roots of m a(H)^2 equals |H|^2 on span
    const AVec h = rs.coweights[0] + 0.3 * rs.coweights[rs.rank - 1];
    EXPECT_NEAR(killing_form_from_roots(rs, h, h), h.squaredNorm(), 1e-10 * h.squaredNorm());
  }
}

TEST(RootSystem, CoordinateRoundTrip) {
  auto gen = oracle::rng(7);
  std::uniform_real_distribution<double> U(-3, 3);
  for (const auto& d : catalog_sample()) {
    const auto rs = build_root_system(d);
    Eigen::VectorXd c(rs.rank);
    for (int i = 0; i < rs.rank; ++i) c(i) = U(gen);
    const AVec v = from_simple_coords(rs, c);
    EXPECT_LT((simple_coords(rs, v) - c).norm(), 1e-12);
    EXPECT_LT((from_simple_coords(rs, simple_coords(rs, v)) - v).norm(), 1e-12);
  }
}

TEST(RootSystem, DimensionOfSymmetricSpace) {
  EXPECT_EQ(dim_symmetric_space(GroupDescriptor::sl_r(2)), 2);
  EXPECT_EQ(dim_symmetric_space(GroupDescriptor::sl_r(3)), 5);
  EXPECT_EQ(dim_symmetric_space(GroupDescriptor::so_n1(4)), 4);
  // n(n+1)/2 - 1 for SL(n,R), n^2 - 1 for SL(n,C), 2n for SU(n,1), 4n for Sp(n,1)
  for (int n = 2; n <= 6; ++n) {
    EXPECT_EQ(dim_symmetric_space(GroupDescriptor::sl_r(n)), n * (n + 1) / 2 - 1);
    EXPECT_EQ(dim_symmetric_space(GroupDescriptor::sl_c(n)), n * n - 1);
    EXPECT_EQ(dim_symmetric_space(GroupDescriptor::su_n1(n)), 2 * n);
    EXPECT_EQ(dim_symmetric_space(GroupDescriptor::sp_n1(n)), 4 * n);
    EXPECT_EQ(dim_symmetric_space(GroupDescriptor::sp_r(n)), n * (n + 1));
  }
}
