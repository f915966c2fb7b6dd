#include <gtest/gtest.h>

#include <regex>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "rtgap/slice.hpp"

using namespace rtgap;

namespace {

const RootSystem& sl3() {
  static const RootSystem rs = build_root_system(GroupDescriptor::sl_r(3));
  return rs;
}

AVec point_of(const RootSystem& rs, const Raster& r, int row, int col) {
  const auto ax = slice_axes(rs);
  return r.x(col) * ax.ex + r.y(row) * ax.ey;
}

// simple-root coefficients by least squares against the root matrix
Eigen::VectorXd coeffs(const RootSystem& rs, const AVec& v) {
  return rs.simple_matrix().colPivHouseholderQr().solve(v);
}

std::size_t count(const Raster& r, std::size_t k) {
  std::size_t c = 0;
  for (auto b : r.masks[k]) c += b;
  return c;
}

std::pair<int, int> pixel_of(const Raster& r, const RootSystem& rs, const AVec& v) {
  const auto ax = slice_axes(rs);
  const double x = v.dot(ax.ex), y = v.dot(ax.ey);
  const int col = static_cast<int>(std::floor((x - (r.x0 - r.half_width)) / (2 * r.half_width) * r.n));
  const int row = static_cast<int>(std::floor(((r.y0 + r.half_height) - y) / (2 * r.half_height) * r.n));
  return {row, col};
}

}  // namespace

TEST(Overlay, ParseAndName) {
  const auto list = parse_overlay_list("neg_dual_cone, conv_wrho(0.5),first_band_F,quantum_B_loci");
  ASSERT_EQ(list.size(), 4u);
  EXPECT_EQ(list[1].tag, OverlayTag::ConvWeylRho);
  EXPECT_DOUBLE_EQ(list[1].scale, 0.5);
  EXPECT_EQ(overlay_name(list[1]), "conv_wrho(0.5)");
  for (const auto& o : list) EXPECT_EQ(overlay_name(parse_overlay(overlay_name(o))).size(), overlay_name(o).size());
  EXPECT_TRUE(parse_overlay_list("none").empty());
  EXPECT_TRUE(parse_overlay_list("").empty());
  EXPECT_THROW(parse_overlay("pink"), PreconditionViolated);
  EXPECT_THROW(parse_overlay("conv_wrho(x)"), PreconditionViolated);
  EXPECT_THROW(parse_overlay("conv_wrho(-1)"), PreconditionViolated);
}

TEST(SliceSpec, Validation) {
  SliceSpec s;
  EXPECT_NO_THROW(s.validate(sl3()));
  s.resolution = 16;
  EXPECT_THROW(s.validate(sl3()), PreconditionViolated);
  s.resolution = 5000;
  EXPECT_THROW(s.validate(sl3()), PreconditionViolated);
  s.resolution = 64;
  s.half_width = 0.0;
  EXPECT_THROW(s.validate(sl3()), PreconditionViolated);
  s.half_width = 1.0;
  s.plane = SliceSpec::Plane::ImagPartAtFixedRe;
  EXPECT_THROW(s.validate(sl3()), DimensionMismatch);
  EXPECT_THROW(SliceSpec{}.validate(build_root_system(GroupDescriptor::sl_r(2))), PreconditionViolated);
}

TEST(SliceAxes, OrthonormalAndSpanning) {
  for (const auto& d : {GroupDescriptor::sl_r(3), GroupDescriptor::split(CartanType::B, 2),
                        GroupDescriptor::split(CartanType::G, 2), GroupDescriptor::sl_r(4)}) {
    const auto rs = build_root_system(d);
    const auto ax = slice_axes(rs);
    EXPECT_NEAR(ax.ex.norm(), 1.0, 1e-14);
    EXPECT_NEAR(ax.ey.norm(), 1.0, 1e-14);
    EXPECT_NEAR(ax.ex.dot(ax.ey), 0.0, 1e-14);
    EXPECT_LT(off_span_norm(rs, ax.ex), 1e-12);
    EXPECT_GT(ax.ey.dot(rs.rho), 0.0);
  }
}

// Preset 3 overlays: the first-band region is F intersected with the cone, so
// it sits inside the pink cone; pointwise oracle on simple-root coefficients.
TEST(Rasterize, FirstBandRegionOracle) {
  const auto& rs = sl3();
  auto spec = figure_preset(rs, 3, 96).front();
  const auto r = rasterize(rs, p_k(rs.group), spec);
  ASSERT_EQ(r.masks.size(), 2u);
  std::size_t mismatches = 0, green = 0;
  for (int row = 0; row < r.n; ++row)
    for (int col = 0; col < r.n; ++col) {
      const AVec v = point_of(rs, r, row, col);
      const Eigen::VectorXd c = coeffs(rs, v);
      const bool cone = c.maxCoeff() <= 0.0;
      bool f = true;
      for (int j = 0; j < 2; ++j) {
        Eigen::VectorXd cj = c;
        cj(j) += 1.0;
        f = f && cj.maxCoeff() > 0.0;
      }
      if (std::abs(c(0)) < 1e-6 || std::abs(c(1)) < 1e-6 || std::abs(c(0) + 1) < 1e-6 || std::abs(c(1) + 1) < 1e-6)
        continue;
      mismatches += (r.at(0, row, col) != cone) + (r.at(1, row, col) != (cone && f));
      green += r.at(1, row, col);
      if (r.at(1, row, col)) {
        EXPECT_TRUE(r.at(0, row, col));
      }
    }
  EXPECT_EQ(mismatches, 0u);
  EXPECT_GT(green, 100u);
}

TEST(Rasterize, AltIdentityAgreesWithFirstBand) {
  for (const auto& d : {GroupDescriptor::sl_r(3), GroupDescriptor::split(CartanType::B, 2),
                        GroupDescriptor::split(CartanType::G, 2)}) {
    const auto rs = build_root_system(d);
    SliceSpec spec = figure_preset(rs, 3, 128).front();
    spec.overlays = {{OverlayTag::FirstBandF}, {OverlayTag::AltIdentity}};
    const auto r = rasterize(rs, p_k(d), spec);
    EXPECT_EQ(r.masks[0], r.masks[1]) << to_string(d);
  }
}

// Preset 2 overlay: half-space test of the explicit hull of 0.5 W rho.
TEST(Rasterize, HullOverlayMatchesHalfSpaces) {
  for (const auto& d : {GroupDescriptor::sl_r(3), GroupDescriptor::split(CartanType::B, 2),
                        GroupDescriptor::split(CartanType::G, 2)}) {
    const auto rs = build_root_system(d);
    const auto ax = slice_axes(rs);
    std::vector<Eigen::VectorXd> pts;
    for (const auto& v : weyl_orbit(rs, rs.rho)) pts.push_back(Eigen::Vector2d(0.5 * v.dot(ax.ex), 0.5 * v.dot(ax.ey)));
    const auto facets = oracle::hull_facets(pts);
    const auto r = rasterize(rs, p_k(d), figure_preset(rs, 2, 128).front());
    std::size_t mismatches = 0;
    for (int row = 0; row < r.n; ++row)
      for (int col = 0; col < r.n; ++col) {
        const double m = oracle::hull_margin(facets, Eigen::Vector2d(r.x(col), r.y(row)));
        if (std::abs(m) < 1e-8) continue;
        mismatches += r.at(0, row, col) != (m > 0);
      }
    EXPECT_EQ(mismatches, 0u) << to_string(d);
  }
}

// Preset 5: red = ((B n 1/2 conv W rho) u W rho) - rho. Points on the line
// -rho + R alpha_1 are in, a generic direction is out; every red pixel is in
// the pink cone up to the line width.
TEST(Rasterize, QuantumLociInResonanceCoordinates) {
  const auto& rs = sl3();
  const auto spec = figure_preset(rs, 5, 200).front();
  const auto r = rasterize(rs, p_k(rs.group), spec);
  const std::size_t pink = 0, red = 2, black = 3;
  ASSERT_EQ(overlay_name(r.overlays[red]), "quantum_B_loci");

  const AVec on_line = -rs.rho + 0.25 * rs.simple_roots[0];
  const AVec off_line = -rs.rho + 0.25 * (rs.simple_roots[0] - rs.simple_roots[1]);
  const AVec outside_hull = -rs.rho + 0.9 * rs.simple_roots[0];
  auto [r1, c1] = pixel_of(r, rs, on_line);
  auto [r2, c2] = pixel_of(r, rs, off_line);
  auto [r3, c3] = pixel_of(r, rs, outside_hull);
  auto [r4, c4] = pixel_of(r, rs, AVec::Zero(3));
  EXPECT_TRUE(r.at(red, r1, c1));
  EXPECT_FALSE(r.at(red, r2, c2));
  EXPECT_FALSE(r.at(red, r3, c3));
  EXPECT_TRUE(r.at(red, r4, c4));  // rho - rho

  std::size_t n_red = 0;
  for (int row = 0; row < r.n; ++row)
    for (int col = 0; col < r.n; ++col) {
      if (!r.at(red, row, col)) continue;
      ++n_red;
      EXPECT_TRUE(in_neg_dual_cone_closure(rs, point_of(rs, r, row, col), 0.05).inside);
    }
  EXPECT_GT(n_red, 50u);
  // exceptional lines: -rho - alpha_1/2 * k... the hyperplane <lambda + rho, alpha_1^vee> = -1
  const AVec on_a = -rs.rho - 0.5 * rs.simple_roots[0] + 0.3 * rs.coweights[1];
  auto [r5, c5] = pixel_of(r, rs, on_a);
  EXPECT_TRUE(r.at(black, r5, c5));
  EXPECT_GT(count(r, pink), count(r, black));
}

TEST(Rasterize, ImaginarySliceOfQuantumLoci) {
  const auto& rs = sl3();
  const auto specs = figure_preset(rs, 4, 128);
  ASSERT_EQ(specs.size(), 2u);
  const auto r = rasterize(rs, p_k(rs.group), specs[1]);
  // Re(lambda + rho) = alpha_1 / 4 forces Im(lambda) in alpha_1^perp
  // coweight 2 is orthogonal to alpha_1
  auto [r1, c1] = pixel_of(r, rs, 0.5 * rs.coweights[1].normalized());
  auto [r2, c2] = pixel_of(r, rs, 0.5 * rs.simple_roots[0].normalized());
  EXPECT_TRUE(r.at(0, r1, c1));
  EXPECT_FALSE(r.at(0, r2, c2));
}

TEST(Rasterize, GapRegionNeedsFiniteExponent) {
  const auto g2 = build_root_system(GroupDescriptor::split(CartanType::G, 2));
  SliceSpec spec;
  spec.resolution = 32;
  spec.overlays = {{OverlayTag::GapRegion}};
  EXPECT_THROW(rasterize(g2, p_k(g2.group), spec), NoQuantitativeGap);
  const auto r = rasterize(sl3(), p_k(sl3().group), [&] {
    SliceSpec s = spec;
    s.center = -0.5 * sl3().rho;
    s.half_width = s.half_height = sl3().rho.norm();
    s.resolution = 64;
    return s;
  }());
  EXPECT_GT(count(r, 0), 0u);
  // certified points are never the origin or outside the cone
  for (int row = 0; row < r.n; ++row)
    for (int col = 0; col < r.n; ++col)
      if (r.at(0, row, col)) {
        EXPECT_TRUE(in_neg_dual_cone_closure(sl3(), point_of(sl3(), r, row, col)).inside);
      }
}

TEST(Rasterize, ResolutionDoublingAgreement) {
  const auto& rs = sl3();
  // line-like overlays need a finer grid: their mismatch band scales with the pixel size
  for (auto [fig, n] : {std::pair{2, 128}, std::pair{3, 128}, std::pair{5, 512}}) {
    auto coarse = figure_preset(rs, fig, n).front();
    auto fine = figure_preset(rs, fig, 2 * n).front();
    const double a = raster_agreement(rasterize(rs, p_k(rs.group), coarse), rasterize(rs, p_k(rs.group), fine));
    EXPECT_GE(a, 0.99) << "figure " << fig;
  }
}

TEST(Csv, SchemaAndDeterminism) {
  const auto& rs = sl3();
  auto spec = figure_preset(rs, 5, 32).front();
  const auto r = rasterize(rs, p_k(rs.group), spec);
  std::ostringstream a, b;
  write_csv(a, r);
  write_csv(b, rasterize(rs, p_k(rs.group), spec));
  EXPECT_EQ(a.str(), b.str());
  std::istringstream in(a.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,y,neg_dual_cone,first_band_F,quantum_B_loci,exceptional_A_lines");
  int rows = 0;
  const std::regex row_re(R"(^-?[0-9.e+-]+,-?[0-9.e+-]+(,[01]){4}$)");
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_TRUE(std::regex_match(line, row_re)) << line;
  }
  EXPECT_EQ(rows, 32 * 32);
}

TEST(Csv, HigherRankPointDump) {
  const auto rs = build_root_system(GroupDescriptor::sl_r(4));
  SliceSpec spec;
  spec.resolution = 32;
  spec.center = -0.5 * rs.rho;
  spec.overlays = parse_overlay_list("neg_dual_cone,first_band_F,alt_identity");
  const auto r = rasterize(rs, p_k(rs.group), spec);
  EXPECT_EQ(r.masks[1], r.masks[2]);
  EXPECT_GT(count(r, 0), 0u);
  EXPECT_THROW(render_svg(rs, spec, r), PreconditionViolated);
}

TEST(Svg, MinimalSubsetAndDeterminism) {
  const auto& rs = sl3();
  for (int fig = 1; fig <= 5; ++fig)
    for (const auto& spec : figure_preset(rs, fig, 64)) {
      const std::string a = render_svg(rs, spec, rasterize(rs, p_k(rs.group), spec));
      const std::string b = render_svg(rs, spec, rasterize(rs, p_k(rs.group), spec));
      EXPECT_EQ(a, b);
      std::set<std::string> elements;
      const std::regex tag_re(R"(<([a-zA-Z]+))");
      for (auto it = std::sregex_iterator(a.begin(), a.end(), tag_re); it != std::sregex_iterator(); ++it)
        elements.insert((*it)[1]);
      for (const auto& e : elements) EXPECT_TRUE(e == "svg" || e == "path" || e == "polygon" || e == "text") << e;
      EXPECT_NE(a.find("width=\"640\""), std::string::npos);
      EXPECT_NE(a.find("&#945;1"), std::string::npos);
    }
}

TEST(Svg, EmptyOverlaysDrawOnlyAxesAndWalls) {
  const auto& rs = sl3();
  const auto spec = figure_preset(rs, 1, 64).front();
  const std::string svg = render_svg(rs, spec, rasterize(rs, p_k(rs.group), spec));
  EXPECT_EQ(svg.find("class="), std::string::npos);
  EXPECT_EQ(svg.find("<polygon"), std::string::npos);
  // three walls, dashed
  std::size_t walls = 0;
  for (std::size_t pos = svg.find("stroke-dasharray=\"4 4\""); pos != std::string::npos;
       pos = svg.find("stroke-dasharray=\"4 4\"", pos + 1))
    ++walls;
  EXPECT_EQ(walls, 3u);
}

TEST(Svg, HullOutlineIsAHexagonForSL3) {
  const auto& rs = sl3();
  const auto spec = figure_preset(rs, 2, 64).front();
  const std::string svg = render_svg(rs, spec, rasterize(rs, p_k(rs.group), spec));
  const std::string key = "<polygon points=\"";
  const auto pos = svg.find(key);
  ASSERT_NE(pos, std::string::npos);
  const auto end = svg.find('"', pos + key.size());
  const std::string pts = svg.substr(pos + key.size(), end - pos - key.size());
  EXPECT_EQ(std::count(pts.begin(), pts.end(), ','), 6);
}
