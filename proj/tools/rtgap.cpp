// Command-line front end: group facts, candidate classification, region
// slices, spherical function grids, L^p checks and Weyl-law leading terms.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rtgap/regions.hpp"
#include "rtgap/slice.hpp"
#include "rtgap/spherical.hpp"
#include "rtgap/weyl_law.hpp"

using namespace rtgap;

namespace {

enum Exit { kOk = 0, kUsage = 1, kRefused = 2, kIo = 3 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  std::string s = buf;
  return s == "-0" ? "0" : s;
}

std::string precise(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string vec(const Eigen::VectorXd& v) {
  std::string s = "[";
  for (int i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v(i));
  return s + "]";
}

std::string vec(const Eigen::VectorXi& v) {
  std::string s = "[";
  for (int i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v(i));
  return s + "]";
}

std::string cvec(const AVecC& v) {
  std::string s = "[";
  for (int i = 0; i < v.size(); ++i) {
    s += i ? ", " : "";
    s += num(v(i).real());
    if (v(i).imag() != 0.0) s += (v(i).imag() < 0 ? " - " : " + ") + num(std::abs(v(i).imag())) + "i";
  }
  return s + "]";
}

/// Covector from user coordinates: simple-root coefficients, the library's
/// orthonormal coordinates, or raw coordinates (e.g. diagonal entries for SL(n)).
AVec to_avec(const RootSystem& rs, const std::vector<double>& c, const std::string& basis, const char* what) {
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
  if (basis == "simple") {
    if (v.size() != rs.rank)
      throw DimensionMismatch(std::string(what) + ": expected " + std::to_string(rs.rank) + " simple-root coefficients");
    return from_simple_coords(rs, v);
  }
  if (v.size() != rs.ambient_dim)
    throw DimensionMismatch(std::string(what) + ": expected " + std::to_string(rs.ambient_dim) + " coordinates");
  const AVec a = basis == "raw" ? AVec(v / rs.raw_scale) : AVec(v);
  if (off_span_norm(rs, a) > 1e-9 * (1.0 + a.norm()))
    throw DimensionMismatch(std::string(what) + ": vector is not in the span of the roots");
  return a;
}

AVecC to_lambda(const RootSystem& rs, const std::vector<double>& re, const std::vector<double>& im,
                const std::string& basis) {
  AVecC lam(rs.ambient_dim);
  lam.real() = re.empty() ? AVec(AVec::Zero(rs.ambient_dim)) : to_avec(rs, re, basis, "real part");
  lam.imag() = im.empty() ? AVec(AVec::Zero(rs.ambient_dim)) : to_avec(rs, im, basis, "imaginary part");
  return lam;
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path + " for writing");
  return file;
}

void check_written(const std::string& path, std::ofstream& file) {
  if (!path.empty() && path != "-") {
    file.flush();
    if (!file) throw IoError("write to " + path + " failed");
  }
}

// ---------------------------------------------------------------------------

void cmd_info(const std::string& group) {
  const auto desc = parse_group(group);
  const auto rs = build_root_system(desc);
  const auto facts = group_facts(desc, rs);
  std::cout << "group: " << to_string(desc) << "\n";
  std::cout << "root system: " << cartan_letter(rs.type) << rs.rank << "\n";
  std::cout << "rank = " << rs.rank << "\n";
  std::cout << "positive roots (simple-root coefficients, multiplicity):\n";
  for (const auto& pr : rs.positive_roots)
    std::cout << "  " << vec(pr.simple_coords) << "  m = " << pr.multiplicity << (pr.divisible ? "  (doubled)" : "")
              << "\n";
  std::cout << "rho (simple basis) = " << vec(simple_coords(rs, rs.rho)) << "\n";
  std::cout << "rho (orthonormal) = " << vec(rs.rho) << "\n";
  std::cout << "|W| = " << weyl_order(rs) << "\n";
  const auto w0 = w0_invariants(rs);
  std::cout << "w0: -Tr = " << -w0.trace << ", d+ = " << w0.d_plus << ", d- = " << w0.d_minus << "\n";
  std::cout << "d = " << facts.dim_GK << "\n";
  std::cout << "p_K = " << describe(facts.p_k) << "\n";
  std::cout << "Property (T): " << (facts.has_property_T ? "yes" : "no") << "\n";
  std::cout << "normalization: Killing form; orthonormal coordinate = " << num(rs.raw_scale)
            << " * raw coordinate\n";
}

void cmd_w0_table() {
  struct Row {
    CartanType t;
    int lo, hi;
  };
  std::cout << "type  -Tr(w0)  d+\n";
  for (const Row& row : {Row{CartanType::A, 1, 8}, Row{CartanType::B, 2, 8}, Row{CartanType::C, 2, 8},
                         Row{CartanType::D, 3, 8}, Row{CartanType::E, 6, 8}, Row{CartanType::F, 4, 4},
                         Row{CartanType::G, 2, 2}}) {
    for (int n = row.lo; n <= row.hi; ++n) {
      const auto inv = w0_invariants(build_root_system(GroupDescriptor::split(row.t, n)));
      char buf[64];
      std::snprintf(buf, sizeof buf, "%c%-4d %7d  %2d\n", cartan_letter(row.t), n, -inv.trace, inv.d_plus);
      std::cout << buf;
    }
  }
}

struct ClassifyArgs {
  std::string group;
  std::vector<double> re, im;
  std::string basis = "simple";
  bool gap = false;
};

void cmd_classify(const ClassifyArgs& a, double tol) {
  const auto desc = parse_group(a.group);
  const auto rs = build_root_system(desc);
  const auto pk = p_k(desc);
  const AVecC lam = to_lambda(rs, a.re, a.im, a.basis);
  const auto c = classify_candidate(rs, pk, lam, tol);
  std::cout << "group: " << to_string(desc) << "\n";
  std::cout << "lambda (orthonormal) = " << cvec(lam) << "\n";
  std::cout << "Re(lambda) simple-root coefficients = " << vec(c.re_coeffs) << "\n";
  std::cout << "verdict: " << to_string(c.verdict) << "\n";
  if (c.cone_violation)
    std::cout << "witness: coefficient " << *c.cone_violation + 1 << " of Re(lambda) is positive\n";
  if (c.exceptional) {
    const auto& pr = rs.positive_roots[c.exceptional->root_index];
    std::cout << "witness: 2<lambda+rho,alpha>/<alpha,alpha> = -" << c.exceptional->k << " for alpha = "
              << vec(pr.simple_coords) << "\n";
  }
  if (c.quantum) {
    std::cout << "Re(lambda) in F: " << (c.in_F ? "yes" : "no") << "\n";
    std::cout << "p_K = " << describe(pk) << ", hull scale = " << num(c.quantum->scale) << "\n";
    if (c.quantum->b_witness)
      std::cout << "B witness for lambda + rho: w = " << word_string(*c.quantum->b_witness) << "\n";
    else
      std::cout << "B witness for lambda + rho: none\n";
    std::cout << "Re(lambda + rho) in scaled hull: " << (c.quantum->in_scaled_hull ? "yes" : "no")
              << ", in W rho: " << (c.quantum->in_weyl_rho ? "yes" : "no") << "\n";
  }
  if (a.gap) {
    const bool cert = gap_certificate(rs, pk, lam, tol);
    std::cout << "gap certificate: " << (cert ? "lambda is not a resonance" : "not certified") << "\n";
  }
}

struct SliceArgs {
  std::string group;
  int figure = 0;
  std::string plane = "re";
  std::vector<double> fixed_re, center;
  std::string basis = "simple";
  double half_width = 0.0, half_height = 0.0;
  std::string overlays;
  std::string out;
  std::string format;
};

void cmd_slice(const SliceArgs& a, int resolution) {
  const auto desc = parse_group(a.group);
  const auto rs = build_root_system(desc);
  const auto pk = p_k(desc);
  std::vector<SliceSpec> specs;
  if (a.figure) {
    specs = figure_preset(rs, a.figure, resolution);
  } else {
    SliceSpec s;
    s.resolution = resolution;
    s.center = a.center.empty() ? AVec(AVec::Zero(rs.ambient_dim)) : to_avec(rs, a.center, a.basis, "center");
    s.half_width = s.half_height = 1.6 * rs.rho.norm();
    if (a.plane == "im") {
      s.plane = SliceSpec::Plane::ImagPartAtFixedRe;
      if (a.fixed_re.empty()) throw PreconditionViolated("--plane im needs --fixed-re");
      s.fixed_re = to_avec(rs, a.fixed_re, a.basis, "fixed real part");
    }
    s.overlays = parse_overlay_list(a.overlays);
    specs.push_back(s);
  }
  for (auto& s : specs) {
    if (a.half_width > 0) s.half_width = a.half_width;
    if (a.half_height > 0) s.half_height = a.half_height;
    else if (a.half_width > 0) s.half_height = a.half_width;
  }
  std::string fmt = a.format;
  if (fmt.empty()) fmt = a.out.size() >= 4 && a.out.substr(a.out.size() - 4) == ".csv" ? "csv" : "svg";
  if (fmt != "svg" && fmt != "csv") throw PreconditionViolated("--format must be svg or csv");

  for (std::size_t i = 0; i < specs.size(); ++i) {
    std::string path = a.out;
    if (specs.size() > 1 && !path.empty() && path != "-") {
      const auto dot = path.rfind('.');
      const std::string suffix = "." + std::to_string(i + 1);
      path = dot == std::string::npos ? path + suffix : path.substr(0, dot) + suffix + path.substr(dot);
    }
    const Raster r = rasterize(rs, pk, specs[i]);
    std::string text;
    if (fmt == "svg") {
      text = render_svg(rs, specs[i], r);
    } else {
      std::ostringstream os;
      write_csv(os, r);
      text = os.str();
    }
    std::ofstream file;
    open_out(path, file) << text;
    check_written(path, file);
    if (path != "-" && !path.empty()) std::cerr << "wrote " << path << "\n";
  }
}

struct SphericalArgs {
  std::string group;
  std::vector<double> re, im;
  std::string basis = "simple";
  double hmax = 5.0;
  int grid = 11;
  std::string out;
};

void cmd_spherical(const SphericalArgs& a, int order) {
  const auto desc = parse_group(a.group);
  SphericalConfig cfg;
  cfg.group = desc;
  cfg.quadrature_order = order;
  cfg.validate();
  if (a.grid < 2) throw PreconditionViolated("--grid must be >= 2");
  if (!(a.hmax > 0)) throw PreconditionViolated("--hmax must be > 0");
  const auto rs = build_root_system(desc);
  const AVecC lam = to_lambda(rs, a.re, a.im, a.basis);

  std::vector<AVec> points;
  const int g = a.grid;
  if (rs.rank == 1) {
    const AVec dir = rs.coweights[0].normalized();
    for (int k = 0; k < g; ++k) points.push_back(a.hmax * k / (g - 1) * dir);
  } else {
    // H = s e1 + t e2 over [0, hmax]^2 in the coweight directions
    const AVec e1 = rs.coweights[0].normalized(), e2 = rs.coweights[1].normalized();
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) points.push_back(a.hmax * (i * e1 + j * e2) / (g - 1));
  }
  std::ostringstream os;
  for (int i = 0; i < rs.ambient_dim; ++i) os << "H" << i + 1 << ",";
  os << "re_phi,im_phi,est_error\n";
  char buf[128];
  for (const auto& H : points) {
    const auto v = spherical_phi(cfg, rs, lam, H);
    for (int i = 0; i < H.size(); ++i) os << num(H(i)) << ",";
    std::snprintf(buf, sizeof buf, "%.15g,%.15g,%.3g\n", v.value.real(), v.value.imag(), v.est_error);
    os << buf;
  }
  std::ofstream file;
  open_out(a.out, file) << os.str();
  check_written(a.out, file);
}

struct LpArgs {
  std::string group;
  std::vector<double> re, im;
  std::string basis = "simple";
  double p = 2.5;
};

void cmd_lp_check(const LpArgs& a, std::vector<double> radii, int order, int cartan_grid) {
  const auto desc = parse_group(a.group);
  SphericalConfig cfg;
  cfg.group = desc;
  cfg.quadrature_order = order;
  cfg.cartan_grid = cartan_grid;
  cfg.validate();
  if (radii.size() != 2) throw PreconditionViolated("--radii needs two values R1,R2");
  const auto rs = build_root_system(desc);
  const AVecC lam = to_lambda(rs, a.re, a.im, a.basis);
  if (!(a.p > 0)) throw PreconditionViolated("--p must be > 0");
  std::cout << "group: " << to_string(desc) << "\n";
  std::cout << "lambda (orthonormal) = " << cvec(lam) << "\n";
  std::optional<bool> predicted;
  if (a.p >= 2) {
    predicted = lp_membership_predict(rs, lam, a.p);
    std::cout << "p = " << num(a.p) << ", hull scale 1 - 2/p = " << num(1.0 - 2.0 / a.p) << "\n";
    std::cout << "prediction: phi_lambda " << (*predicted ? "is" : "is not") << " in L^(p+eps) for every eps > 0\n";
  } else {
    std::cout << "p = " << num(a.p) << "\n";
    std::cout << "prediction: not available, the hull criterion covers p >= 2 only\n";
  }
  const auto res = lp_two_radius(cfg, lam, a.p, radii[0], radii[1]);
  std::cout << "integral to R1 = " << num(radii[0]) << ": " << num(res.inner) << "\n";
  std::cout << "integral to R2 = " << num(radii[1]) << ": " << num(res.outer) << "\n";
  std::cout << "ratio = " << num(res.inner > 0 ? res.outer / res.inner : 0.0) << "\n";
  std::cout << "numeric verdict: " << to_string(res.trend) << "\n";
  if (res.trend == LpTrend::Inconclusive)
    std::cout << "note: growth between the radii is below the divergence threshold but the tail has not "
                 "settled; retry with larger radii\n";
  else if (predicted && (res.trend == LpTrend::Convergent) != *predicted)
    std::cout << "note: the numeric verdict disagrees with the prediction at these radii\n";
}

struct WeylLawArgs {
  std::string group;
  double vol = 1.0;
  double t = 1.0;
  std::string omega;
};

OmegaSpec parse_omega(const RootSystem& rs, const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw PreconditionViolated("--omega must be ball:r or slab:r,i,w");
  const std::string kind = text.substr(0, colon);
  std::vector<double> vals;
  std::stringstream ss(text.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw PreconditionViolated("--omega: bad number '" + item + "'");
    vals.push_back(v);
  }
  if (kind == "ball" && vals.size() == 1) {
    if (!(vals[0] > 0)) throw PreconditionViolated("--omega: radius must be > 0");
    return OmegaSpec::ball(vals[0]);
  }
  if (kind == "slab" && vals.size() == 3) {
    const int idx = static_cast<int>(vals[1]);
    if (idx != vals[1] || idx < 1 || idx > rs.rank) throw PreconditionViolated("--omega: slab root index out of range");
    return OmegaSpec::ball_minus_slab(rs, vals[0], idx - 1, vals[2]);
  }
  throw PreconditionViolated("--omega must be ball:r or slab:r,i,w");
}

void cmd_weyl_law(const WeylLawArgs& a) {
  const auto desc = parse_group(a.group);
  const auto rs = build_root_system(desc);
  if (!(a.vol > 0)) throw PreconditionViolated("--vol must be > 0");
  if (a.t < 0) throw PreconditionViolated("--t must be >= 0");
  const int d = dim_symmetric_space(rs);
  std::cout << "group: " << to_string(desc) << "\n";
  std::cout << "d = " << d << "\n";
  std::cout << "|W| = " << weyl_order(rs) << "\n";
  std::cout << "vol = " << num(a.vol) << " (Riemannian volume of the Killing metric; rescale vol for other normalizations)\n";
  if (a.omega.empty()) {
    const double lead = leading_term_ball(rs, a.vol, a.t);
    std::cout << "leading term = " << precise(lead) << "\n";
    std::cout << "N(t) >= " << precise(lead) << " + O(t^" << d - 1 << ")  at t = " << num(a.t) << "\n";
  } else {
    const auto b = counting_lower_bound(rs, a.vol, parse_omega(rs, a.omega), a.t);
    std::cout << "omega = " << a.omega << "\n";
    std::cout << "Vol(Ad(K) omega) = " << precise(b.vol_adk_omega) << "\n";
    std::cout << "leading term = " << precise(b.leading) << "\n";
    std::cout << describe(b) << "  at t = " << num(a.t) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ruelle-Taylor resonance regions, spherical functions and Weyl-law terms for symmetric spaces"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key = value file presetting the shared options below");
  app.allow_config_extras(CLI::config_extras_mode::error);

  double tol = kDefaultTol;
  int order = 64;
  int cartan_grid = 400;
  int resolution = 256;
  std::vector<double> radii = {10.0, 20.0};
  app.add_option("--tol", tol, "Tolerance for region membership")->capture_default_str();
  app.add_option("--quadrature-order", order, "K-quadrature order of the spherical functions")->capture_default_str();
  app.add_option("--cartan-grid", cartan_grid, "Nodes per axis of the Cartan L^p integrals")->capture_default_str();
  app.add_option("--resolution", resolution, "Pixels per axis of region slices")->capture_default_str();
  app.add_option("--radii", radii, "Two truncation radii R1,R2 for L^p checks")->delimiter(',')->expected(2);

  auto* info = app.add_subcommand("info", "Root data, |W|, w0, dim G/K and p_K of a group");
  std::string info_group;
  info->add_option("group", info_group, "e.g. SL(3,R), SO(4,1), split:G2")->required();

  auto* w0 = app.add_subcommand("w0-table", "-Tr(w0) and d+ for the irreducible root systems");

  auto* classify = app.add_subcommand("classify", "Locate a candidate resonance lambda");
  ClassifyArgs ca;
  classify->add_option("group", ca.group)->required();
  classify->add_option("--re", ca.re, "Re(lambda) coordinates")->delimiter(',');
  classify->add_option("--im", ca.im, "Im(lambda) coordinates")->delimiter(',');
  classify->add_option("--basis", ca.basis, "simple | ortho | raw")->check(CLI::IsMember({"simple", "ortho", "raw"}));
  classify->add_flag("--gap", ca.gap, "Also run the uniform-gap certificate");

  auto* slice = app.add_subcommand("slice", "Rasterize region overlays on a plane (SVG or CSV)");
  SliceArgs sa;
  slice->add_option("group", sa.group)->required();
  slice->add_option("--figure", sa.figure, "Preset 1..5 for rank-2 groups")->check(CLI::Range(1, 5));
  slice->add_option("--plane", sa.plane, "re | im")->check(CLI::IsMember({"re", "im"}));
  slice->add_option("--fixed-re", sa.fixed_re, "Real part held fixed on --plane im")->delimiter(',');
  slice->add_option("--center", sa.center, "Window center")->delimiter(',');
  slice->add_option("--basis", sa.basis, "simple | ortho | raw")->check(CLI::IsMember({"simple", "ortho", "raw"}));
  slice->add_option("--half-width", sa.half_width, "Half width of the window");
  slice->add_option("--half-height", sa.half_height, "Half height of the window");
  slice->add_option("--overlays", sa.overlays,
                    "neg_dual_cone, conv_wrho(s), first_band_F, alt_identity, exceptional_A_lines, quantum_B_loci, "
                    "gap_region");
  slice->add_option("--format", sa.format, "svg | csv (default from --out)");
  slice->add_option("--out", sa.out, "Output path, '-' for stdout")->required();

  auto* sph = app.add_subcommand("spherical", "Tabulate phi_lambda on a ray (rank 1) or grid (rank 2)");
  SphericalArgs sp;
  sph->add_option("group", sp.group)->required();
  sph->add_option("--lambda-re", sp.re)->delimiter(',');
  sph->add_option("--lambda-im", sp.im)->delimiter(',');
  sph->add_option("--basis", sp.basis)->check(CLI::IsMember({"simple", "ortho", "raw"}));
  sph->add_option("--hmax", sp.hmax, "Largest |H| coordinate")->capture_default_str();
  sph->add_option("--grid", sp.grid, "Points per axis")->capture_default_str();
  sph->add_option("--out", sp.out, "CSV path, '-' for stdout");

  auto* lp = app.add_subcommand("lp-check", "Analytic and numeric L^p membership of phi_lambda");
  LpArgs la;
  lp->add_option("group", la.group)->required();
  lp->add_option("--lambda-re", la.re)->delimiter(',');
  lp->add_option("--lambda-im", la.im)->delimiter(',');
  lp->add_option("--basis", la.basis)->check(CLI::IsMember({"simple", "ortho", "raw"}));
  lp->add_option("--p", la.p, "Exponent p > 0 (the analytic prediction needs p >= 2)")->capture_default_str();

  auto* wl = app.add_subcommand("weyl-law", "Leading term of the eigenvalue counting lower bound");
  WeylLawArgs wa;
  wl->add_option("group", wa.group)->required();
  wl->add_option("--vol", wa.vol, "Vol of the compact quotient")->required();
  wl->add_option("--t", wa.t, "Spectral parameter t")->required();
  wl->add_option("--omega", wa.omega, "ball:r | slab:r,i,w (ball of radius r minus |alpha_i| < w)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::FileError& e) {
    app.exit(e);
    return kIo;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*info) cmd_info(info_group);
    else if (*w0) cmd_w0_table();
    else if (*classify) cmd_classify(ca, tol);
    else if (*slice) cmd_slice(sa, resolution);
    else if (*sph) cmd_spherical(sp, order);
    else if (*lp) cmd_lp_check(la, radii, order, cartan_grid);
    else if (*wl) cmd_weyl_law(wa);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const CapExceeded& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kRefused;
  } catch (const NoQuantitativeGap& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kRefused;
  } catch (const QuadratureNotConverged& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kRefused;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}
