#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rtgap/errors.hpp"
#include "rtgap/regions.hpp"
#include "rtgap/root_system.hpp"
#include "rtgap/weyl.hpp"

namespace rtgap {

enum class OverlayTag {
  NegDualCone,
  ConvWeylRho,
  FirstBandF,
  AltIdentity,
  ExceptionalLines,
  QuantumLoci,
  GapRegion
};

struct Overlay {
  OverlayTag tag = OverlayTag::NegDualCone;
  /// Only used by ConvWeylRho.
  double scale = 1.0;
};

inline std::string overlay_name(const Overlay& o) {
  switch (o.tag) {
    case OverlayTag::NegDualCone: return "neg_dual_cone";
    case OverlayTag::ConvWeylRho: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "conv_wrho(%g)", o.scale);
      return buf;
    }
    case OverlayTag::FirstBandF: return "first_band_F";
    case OverlayTag::AltIdentity: return "alt_identity";
    case OverlayTag::ExceptionalLines: return "exceptional_A_lines";
    case OverlayTag::QuantumLoci: return "quantum_B_loci";
    case OverlayTag::GapRegion: return "gap_region";
  }
  return "?";
}

inline Overlay parse_overlay(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s == "neg_dual_cone") return {OverlayTag::NegDualCone};
  if (s == "first_band_F") return {OverlayTag::FirstBandF};
  if (s == "alt_identity") return {OverlayTag::AltIdentity};
  if (s == "exceptional_A_lines") return {OverlayTag::ExceptionalLines};
  if (s == "quantum_B_loci") return {OverlayTag::QuantumLoci};
  if (s == "gap_region") return {OverlayTag::GapRegion};
  if (s.rfind("conv_wrho", 0) == 0) {
    Overlay o{OverlayTag::ConvWeylRho, 1.0};
    if (s.size() > 9) {
      if (s[9] != '(' || s.back() != ')') throw PreconditionViolated("bad overlay: " + s);
      const std::string arg = s.substr(10, s.size() - 11);
      std::size_t used = 0;
      try {
        o.scale = std::stod(arg, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != arg.size() || !(o.scale >= 0.0)) throw PreconditionViolated("bad overlay: " + s);
    }
    return o;
  }
  throw PreconditionViolated("unknown overlay tag: " + s);
}

/// Comma-separated overlay list; "none" or empty means no overlays.
inline std::vector<Overlay> parse_overlay_list(const std::string& text) {
  std::vector<Overlay> out;
  if (text.empty() || text == "none") return out;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(parse_overlay(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(parse_overlay(cur));
  return out;
}

/// Orthonormal axes of the drawing plane: y along rho, x along alpha_1 made
/// orthogonal to rho. For rank 2 the plane is all of a*.
struct SliceAxes {
  AVec ex, ey;
};

inline SliceAxes slice_axes(const RootSystem& rs) {
  if (rs.rank < 2) throw PreconditionViolated("region slices need rank >= 2");
  SliceAxes ax;
  ax.ey = rs.rho.normalized();
  ax.ex = rs.simple_roots[0] - rs.simple_roots[0].dot(ax.ey) * ax.ey;
  ax.ex.normalize();
  return ax;
}

struct SliceSpec {
  enum class Plane { RealPart, ImagPartAtFixedRe };
  Plane plane = Plane::RealPart;
  /// Real part held fixed on ImagPartAtFixedRe slices.
  AVec fixed_re;
  /// Window center (ambient coordinates); empty means the origin.
  AVec center;
  double half_width = 2.0;
  double half_height = 2.0;
  int resolution = 256;
  std::vector<Overlay> overlays;
  std::string title;

  void validate(const RootSystem& rs) const {
    if (rs.rank < 2) throw PreconditionViolated("SliceSpec: rank must be at least 2");
    if (resolution < 32 || resolution > 4096) throw PreconditionViolated("SliceSpec: resolution outside [32, 4096]");
    if (!(half_width > 0.0) || !(half_height > 0.0) || !std::isfinite(half_width) || !std::isfinite(half_height))
      throw PreconditionViolated("SliceSpec: degenerate window");
    if (center.size() != 0 && center.size() != rs.ambient_dim) throw DimensionMismatch("SliceSpec: center length");
    if (plane == Plane::ImagPartAtFixedRe && fixed_re.size() != rs.ambient_dim)
      throw DimensionMismatch("SliceSpec: fixed real part length");
  }
};

/// One 0/1 mask per overlay on a resolution x resolution grid, rows from the
/// top of the window downwards.
struct Raster {
  int n = 0;
  double x0 = 0, y0 = 0, half_width = 0, half_height = 0;
  std::vector<Overlay> overlays;
  std::vector<std::vector<std::uint8_t>> masks;

  double x(int col) const { return x0 - half_width + (col + 0.5) * 2.0 * half_width / n; }
  double y(int row) const { return y0 + half_height - (row + 0.5) * 2.0 * half_height / n; }
  bool at(std::size_t layer, int row, int col) const { return masks[layer][static_cast<std::size_t>(row) * n + col]; }
};

/// Half-width of the line-like overlays (A and the B loci) in plane units;
/// fixed relative to the window so rasters at different resolutions agree.
inline double line_half_width(const SliceSpec& spec) { return 0.008 * std::max(spec.half_width, spec.half_height); }

namespace detail {

/// Distance from lambda to the exceptional hyperplanes
/// <lambda + rho, alpha^vee> = -k, k >= 1, combined with the imaginary part.
inline bool near_exceptional(const RootSystem& rs, const AVecC& lambda, double width) {
  const AVec re = lambda.real() + rs.rho;
  const AVec im = lambda.imag();
  for (const auto& pr : rs.positive_roots) {
    const double len = pr.root.norm();
    const double z = 2.0 * re.dot(pr.root) / (len * len);
    const double k = std::max(1.0, std::round(-z));
    if (std::abs(z + k) * 0.5 * len <= width && std::abs(im.dot(pr.root)) / len <= width) return true;
  }
  return false;
}

}  // namespace detail

inline Raster rasterize(const RootSystem& rs, const PKValue& pk, const SliceSpec& spec) {
  spec.validate(rs);
  const auto ax = slice_axes(rs);
  const AVec center = spec.center.size() ? spec.center : AVec(AVec::Zero(rs.ambient_dim));
  Raster r;
  r.n = spec.resolution;
  r.x0 = center.dot(ax.ex);
  r.y0 = center.dot(ax.ey);
  r.half_width = spec.half_width;
  r.half_height = spec.half_height;
  r.overlays = spec.overlays;
  r.masks.assign(spec.overlays.size(), std::vector<std::uint8_t>(static_cast<std::size_t>(r.n) * r.n, 0));
  const double width = line_half_width(spec);
  const bool needs_gap = std::any_of(spec.overlays.begin(), spec.overlays.end(),
                                     [](const Overlay& o) { return o.tag == OverlayTag::GapRegion; });
  if (needs_gap && !pk.finite()) gap_certificate(rs, pk, AVecC::Zero(rs.ambient_dim));  // throws

  for (int row = 0; row < r.n; ++row)
    for (int col = 0; col < r.n; ++col) {
      const AVec p = center + (r.x(col) - r.x0) * ax.ex + (r.y(row) - r.y0) * ax.ey;
      AVecC lambda(rs.ambient_dim);
      if (spec.plane == SliceSpec::Plane::RealPart) {
        lambda.real() = p;
        lambda.imag().setZero();
      } else {
        lambda.real() = spec.fixed_re;
        lambda.imag() = p;
      }
      const AVec re = lambda.real();
      for (std::size_t k = 0; k < spec.overlays.size(); ++k) {
        const Overlay& o = spec.overlays[k];
        bool v = false;
        switch (o.tag) {
          case OverlayTag::NegDualCone: v = in_neg_dual_cone_closure(rs, re).inside; break;
          case OverlayTag::ConvWeylRho: v = in_conv_weyl_rho(rs, re, o.scale); break;
          case OverlayTag::FirstBandF: v = in_neg_dual_cone_closure(rs, re).inside && in_first_band_cone_F(rs, re); break;
          case OverlayTag::AltIdentity: v = first_band_region_alt(rs, re); break;
          case OverlayTag::ExceptionalLines: v = detail::near_exceptional(rs, lambda, width); break;
          case OverlayTag::QuantumLoci: {
            // the B test compares against tol/4 on each side, so this gives a band
            // of roughly the same width as the A lines; the W rho dots get the
            // plain width
            auto q = quantum_test(rs, pk, lambda, 4.0 * width);
            q.in_weyl_rho = distance_to_weyl_rho(rs, re + rs.rho) < width;
            v = q.passes();
            break;
          }
          case OverlayTag::GapRegion: v = gap_certificate(rs, pk, lambda); break;
        }
        r.masks[k][static_cast<std::size_t>(row) * r.n + col] = v;
      }
    }
  return r;
}

inline Raster rasterize(const GroupDescriptor& desc, const SliceSpec& spec) {
  return rasterize(build_root_system(desc), p_k(desc), spec);
}

/// CSV point dump: x,y then one 0/1 column per overlay, in overlay order.
inline void write_csv(std::ostream& os, const Raster& r) {
  os << "x,y";
  for (const auto& o : r.overlays) os << ',' << overlay_name(o);
  os << '\n';
  char buf[64];
  for (int row = 0; row < r.n; ++row)
    for (int col = 0; col < r.n; ++col) {
      std::snprintf(buf, sizeof buf, "%.10g,%.10g", r.x(col), r.y(row));
      os << buf;
      for (std::size_t k = 0; k < r.overlays.size(); ++k) os << ',' << (r.at(k, row, col) ? '1' : '0');
      os << '\n';
    }
}

/// Fraction of fine pixels whose full tag vector equals that of the coarse
/// pixel containing them; the fine raster must have exactly twice the
/// resolution over the same window.
inline double raster_agreement(const Raster& coarse, const Raster& fine) {
  if (fine.n != 2 * coarse.n || fine.masks.size() != coarse.masks.size())
    throw PreconditionViolated("raster_agreement: incompatible rasters");
  std::size_t same = 0;
  for (int row = 0; row < fine.n; ++row)
    for (int col = 0; col < fine.n; ++col) {
      bool eq = true;
      for (std::size_t k = 0; k < fine.masks.size() && eq; ++k) eq = fine.at(k, row, col) == coarse.at(k, row / 2, col / 2);
      same += eq;
    }
  return static_cast<double>(same) / (static_cast<double>(fine.n) * fine.n);
}

// ---------------------------------------------------------------------------
// SVG

struct OverlayStyle {
  OverlayTag tag;
  const char* fill;
  double opacity;
};

/// Drawing order and colors: pink for the a-priori cone, green for the
/// first-band region, red for the quantum loci, black for A.
inline constexpr std::array<OverlayStyle, 7> kOverlayStyles = {{
    {OverlayTag::NegDualCone, "#f4a6c0", 0.55},
    {OverlayTag::ConvWeylRho, "#b8e0b8", 0.35},
    {OverlayTag::GapRegion, "#9467bd", 0.35},
    {OverlayTag::FirstBandF, "#3cb043", 0.65},
    {OverlayTag::AltIdentity, "#1f77b4", 0.30},
    {OverlayTag::QuantumLoci, "#d62728", 0.95},
    {OverlayTag::ExceptionalLines, "#000000", 0.90},
}};

inline constexpr const char* kWallColor = "#888888";
inline constexpr const char* kRootColor = "#1f3b73";
inline constexpr const char* kHullColor = "#2e8b57";
inline constexpr double kCanvas = 640.0;

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

/// Clip the line {p + s d} to the box [-hx,hx]x[-hy,hy] around (cx,cy).
inline std::optional<std::array<double, 4>> clip_line(double px, double py, double dx, double dy, double cx,
                                                      double cy, double hx, double hy) {
  double lo = -1e300, hi = 1e300;
  auto clip = [&](double p, double d, double a, double b) {
    if (std::abs(d) < 1e-15) return p >= a && p <= b;
    double s1 = (a - p) / d, s2 = (b - p) / d;
    if (s1 > s2) std::swap(s1, s2);
    lo = std::max(lo, s1);
    hi = std::min(hi, s2);
    return lo <= hi;
  };
  if (!clip(px, dx, cx - hx, cx + hx) || !clip(py, dy, cy - hy, cy + hy)) return std::nullopt;
  return std::array<double, 4>{px + lo * dx, py + lo * dy, px + hi * dx, py + hi * dy};
}

}  // namespace detail

/// Standalone SVG using only <svg>, <path>, <polygon> and <text>. Regions are
/// emitted as run-length rectangles of the raster, one path per overlay.
inline std::string render_svg(const RootSystem& rs, const SliceSpec& spec, const Raster& r) {
  if (rs.rank != 2) throw PreconditionViolated("SVG slices need a rank-2 system; use CSV for higher rank");
  const auto ax = slice_axes(rs);
  const double sx = kCanvas / (2.0 * r.half_width), sy = kCanvas / (2.0 * r.half_height);
  auto X = [&](double x) { return (x - (r.x0 - r.half_width)) * sx; };
  auto Y = [&](double y) { return ((r.y0 + r.half_height) - y) * sy; };
  const double px = kCanvas / r.n;
  using detail::fmt;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvas << "\" height=\"" << kCanvas
     << "\" viewBox=\"0 0 " << kCanvas << ' ' << kCanvas << "\">\n";
  os << "<path d=\"M0 0H" << kCanvas << "V" << kCanvas << "H0Z\" fill=\"#ffffff\"/>\n";

  for (const auto& style : kOverlayStyles)
    for (std::size_t k = 0; k < r.overlays.size(); ++k) {
      if (r.overlays[k].tag != style.tag) continue;
      std::string d;
      for (int row = 0; row < r.n; ++row) {
        int col = 0;
        while (col < r.n) {
          if (!r.at(k, row, col)) {
            ++col;
            continue;
          }
          int end = col;
          while (end < r.n && r.at(k, row, end)) ++end;
          d += "M" + fmt(col * px) + " " + fmt(row * px) + "h" + fmt((end - col) * px) + "v" + fmt(px) + "h" +
               fmt(-(end - col) * px) + "z";
          col = end;
        }
      }
      if (!d.empty())
        os << "<path class=\"" << overlay_name(r.overlays[k]) << "\" d=\"" << d << "\" fill=\"" << style.fill
           << "\" fill-opacity=\"" << style.opacity << "\"/>\n";
      if (style.tag == OverlayTag::ConvWeylRho && spec.plane == SliceSpec::Plane::RealPart) {
        // exact hull boundary, dashed
        auto verts = weyl_orbit(rs, rs.rho);
        std::vector<std::pair<double, double>> pts;
        for (const auto& v : verts) pts.emplace_back(r.overlays[k].scale * v.dot(ax.ex), r.overlays[k].scale * v.dot(ax.ey));
        std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
          return std::atan2(a.second, a.first) < std::atan2(b.second, b.first);
        });
        os << "<polygon points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i)
          os << (i ? " " : "") << fmt(X(pts[i].first)) << ',' << fmt(Y(pts[i].second));
        os << "\" fill=\"none\" stroke=\"" << kHullColor << "\" stroke-width=\"2\" stroke-dasharray=\"8 5\"/>\n";
      }
    }

  // chamber walls: the lines alpha^perp in the drawing plane
  for (const auto& pr : rs.positive_roots) {
    if (pr.divisible) continue;
    const double ax_ = pr.root.dot(ax.ex), ay_ = pr.root.dot(ax.ey);
    if (std::hypot(ax_, ay_) < 1e-12) continue;
    const auto seg = detail::clip_line(0, 0, -ay_, ax_, r.x0, r.y0, r.half_width, r.half_height);
    if (seg)
      os << "<path d=\"M" << fmt(X((*seg)[0])) << ' ' << fmt(Y((*seg)[1])) << "L" << fmt(X((*seg)[2])) << ' '
         << fmt(Y((*seg)[3])) << "\" stroke=\"" << kWallColor << "\" stroke-width=\"1\" stroke-dasharray=\"4 4\"/>\n";
  }
  // axes through the origin
  for (const auto& dir : {std::array<double, 2>{1, 0}, std::array<double, 2>{0, 1}}) {
    const auto seg = detail::clip_line(0, 0, dir[0], dir[1], r.x0, r.y0, r.half_width, r.half_height);
    if (seg)
      os << "<path d=\"M" << fmt(X((*seg)[0])) << ' ' << fmt(Y((*seg)[1])) << "L" << fmt(X((*seg)[2])) << ' '
         << fmt(Y((*seg)[3])) << "\" stroke=\"#cccccc\" stroke-width=\"0.75\"/>\n";
  }
  // simple roots and rho as arrows from the origin
  auto arrow = [&](const AVec& v, const std::string& label) {
    const double x = v.dot(ax.ex), y = v.dot(ax.ey);
    os << "<path d=\"M" << fmt(X(0)) << ' ' << fmt(Y(0)) << "L" << fmt(X(x)) << ' ' << fmt(Y(y)) << "\" stroke=\""
       << kRootColor << "\" stroke-width=\"2\" fill=\"none\"/>\n";
    os << "<text x=\"" << fmt(X(x) + 4) << "\" y=\"" << fmt(Y(y) - 4) << "\" font-family=\"sans-serif\" font-size=\"14\" fill=\""
       << kRootColor << "\">" << label << "</text>\n";
  };
  for (int i = 0; i < rs.rank; ++i) arrow(rs.simple_roots[i], "&#945;" + std::to_string(i + 1));
  arrow(rs.rho, "&#961;");

  std::string title = spec.title.empty() ? to_string(rs.group) : spec.title;
  title += spec.plane == SliceSpec::Plane::RealPart ? " (real part)" : " (imaginary part, fixed real part)";
  os << "<text x=\"8\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" fill=\"#000000\">" << title << "</text>\n";
  int line = 0;
  for (const auto& style : kOverlayStyles)
    for (const auto& o : r.overlays)
      if (o.tag == style.tag)
        os << "<text x=\"8\" y=\"" << fmt(kCanvas - 10 - 16 * line++) << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
           << style.fill << "\">" << overlay_name(o) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Figure presets for rank-2 groups

inline std::vector<SliceSpec> figure_preset(const RootSystem& rs, int figure, int resolution = 256) {
  const double s = rs.rho.norm();
  SliceSpec base;
  base.resolution = resolution;
  base.center = AVec::Zero(rs.ambient_dim);
  base.half_width = base.half_height = 1.6 * s;
  std::vector<SliceSpec> out;
  switch (figure) {
    case 1:
      base.title = "roots and chamber walls";
      out.push_back(base);
      break;
    case 2:
      base.overlays = {{OverlayTag::ConvWeylRho, 0.5}};
      base.title = "(1 - 2/p) conv(W rho), p = 4";
      out.push_back(base);
      break;
    case 3:
      base.center = -0.6 * rs.rho;
      base.overlays = {{OverlayTag::NegDualCone}, {OverlayTag::FirstBandF}};
      base.title = "first band region";
      out.push_back(base);
      break;
    case 4: {
      base.center = -rs.rho;
      base.overlays = {{OverlayTag::NegDualCone}, {OverlayTag::QuantumLoci}};
      base.title = "quantum loci, real parts";
      out.push_back(base);
      SliceSpec im = base;
      im.plane = SliceSpec::Plane::ImagPartAtFixedRe;
      im.fixed_re = -rs.rho + 0.25 * rs.simple_roots[0];
      im.center = AVec::Zero(rs.ambient_dim);
      im.overlays = {{OverlayTag::QuantumLoci}};
      im.title = "quantum loci, imaginary parts at Re = -rho + alpha1/4";
      out.push_back(im);
      break;
    }
    case 5:
      base.center = -0.6 * rs.rho;
      base.overlays = {{OverlayTag::NegDualCone}, {OverlayTag::FirstBandF}, {OverlayTag::QuantumLoci},
                       {OverlayTag::ExceptionalLines}};
      base.title = "resonance regions";
      out.push_back(base);
      break;
    default:
      throw PreconditionViolated("figure preset must be 1..5");
  }
  return out;
}

}  // namespace rtgap
