#include "crtool/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "crtool/invariants.hpp"
#include "crtool/rng.hpp"
#include "crtool/scanner.hpp"

namespace crtool {

namespace {

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

// ---------------------------------------------------------------------------
// Flat-tube finite-difference oracle (independent of the jet code).
//
// Lbar only differentiates the barred variables, so its flow moves
// (zeta, omega) with (z, w) frozen. For the flat tube the flow linearizes in
// u = (z - zeta)/2, v = (w - omega)/2:
//   du/dt = v/2, dv/dt = -u/2  =>  a rotation at angular velocity 1/2.
// Iterated applications of a field equal successive t-derivatives along its
// own flow, so Lbar^k g(p) = d^k/dt^k [g(flow_t(p))] at t = 0, which a
// Romberg-extrapolated central difference evaluates from closed forms alone.
// ---------------------------------------------------------------------------

struct FlatFlow {
  Complex u0, v0;
  static FlatFlow at(Complex z, Complex w) {
    return {(z - std::conj(z)) / 2.0, (w - std::conj(w)) / 2.0};
  }
  std::pair<Complex, Complex> uv(double t) const {
    const double c = std::cos(t / 2), s = std::sin(t / 2);
    return {u0 * c + v0 * s, -u0 * s + v0 * c};
  }
};

// Row generators as closed forms in (u, v): rho_z = -u, rho_w = -v.
Complex flat_generator(int row, Complex u, Complex v) {
  switch (row) {
    case 0: return -(v * v * v);
    case 1: return -(u * v * v);
    case 2: return -(u * u * v);
    case 3: return -(u * u * u);
    case 4: return -(u * u + v * v) / 2.0;  // rho_{Z^2}(L,L) = rho/2
  }
  return 0.0;
}

// k-th derivative at t = 0 via central stencils at h0/2^i, Romberg table.
Complex flow_derivative(const std::function<Complex(double)>& g, int k,
                        double h0 = 0.4) {
  auto stencil = [&](double h) -> Complex {
    switch (k) {
      case 0: return g(0);
      case 1: return (g(h) - g(-h)) / (2 * h);
      case 2: return (g(h) - 2.0 * g(0) + g(-h)) / (h * h);
      case 3:
        return (g(2 * h) - 2.0 * g(h) + 2.0 * g(-h) - g(-2 * h)) /
               (2 * h * h * h);
      case 4:
        return (g(2 * h) - 4.0 * g(h) + 6.0 * g(0) - 4.0 * g(-h) + g(-2 * h)) /
               (h * h * h * h);
    }
    throw std::invalid_argument("flow_derivative: order 0..4 only");
  };
  std::array<Complex, 4> row;
  for (int i = 0; i < 4; ++i) row[i] = stencil(h0 / (1 << i));
  for (int lev = 1; lev < 4; ++lev) {
    const double f = std::pow(4.0, lev);
    for (int i = 3; i >= lev; --i) row[i] = (f * row[i] - row[i - 1]) / (f - 1.0);
  }
  return row[3];
}

// ---------------------------------------------------------------------------
// Criteria. Tolerances are pinned here; `tol` replaces only the headline one.
// ---------------------------------------------------------------------------

using Criterion =
    std::function<CriterionResult(std::optional<double> tol, int threads)>;

CriterionResult flat_tube_criterion(std::optional<double> tol, int threads) {
  const double nr_floor = tol.value_or(1e-6);
  double min_nr = 1e300, min_levi = 1e300;
  bool poisoned = false;
  for (double eps : {0.5, 1.0, 2.0}) {
    const auto recs = scan_surface(FamilyDescriptor::flat_tube(eps), eps * eps,
                                   1000, 1001, Thresholds{}, 6, threads);
    for (const auto& r : recs) {
      if (r.flag == UmbilicFlag::Poisoned) poisoned = true;
      min_nr = std::min(min_nr, r.norm_resid);
      min_levi = std::min(min_levi, r.levi);
    }
  }
  CriterionResult c;
  c.suite = "flat-tube";
  c.title = "flat tube non-umbilical: 3x1000 points, nr > 1e-6, Levi > 0";
  c.pass = !poisoned && min_nr > nr_floor && min_levi > 0.0;
  c.detail = fmt("min nr = %.3e (floor %.0e), min Levi = %.3e", min_nr,
                 nr_floor, min_levi);
  return c;
}

CriterionResult scaling_criterion(std::optional<double> tol, int threads) {
  const double slope_tol = tol.value_or(1e-6);
  const double eps_list[] = {0.25, 0.5, 1.0, 2.0, 4.0};
  const auto fit = fit_scaling(FamilyDescriptor::flat_tube(1.0), eps_list, 100,
                               1002, 6, threads);
  const double max_spread =
      *std::max_element(fit.rel_spread.begin(), fit.rel_spread.end());
  CriterionResult c;
  c.suite = "scaling";
  c.title = "|det A3| scales as eps^14 (slope 14, per-eps spread <= 1e-9)";
  c.pass = std::abs(fit.slope - 14.0) <= slope_tol && max_spread <= 1e-9;
  c.detail = fmt("slope = %.12f (|slope-14| = %.2e, tol %.0e), "
                 "max spread = %.2e, measured constant = %.9f",
                 fit.slope, std::abs(fit.slope - 14.0), slope_tol, max_spread,
                 std::exp(fit.intercept));
  return c;
}

CriterionResult reduction_criterion(std::optional<double> tol, int threads) {
  const double red_tol = tol.value_or(1e-10);
  double max_red = 0.0, max_last_row = 0.0;
  for (double eps : {0.5, 1.0, 2.0}) {
    const auto fam = FamilyDescriptor::flat_tube(eps);
    const auto pts = sample_points(fam, eps * eps, 100, 1003);
    std::vector<double> red(pts.size()), last(pts.size());
    // cheap enough to keep serial; threads matter only for the big scans
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const A3Matrix a3 = a3_matrix(fam, pts[i].z, pts[i].w);
      const BMatrix b = b_matrix(fam, pts[i].z, pts[i].w);
      const Complex da = det_a3(a3);
      const Complex db = det_b(b);
      red[i] = std::abs(da - 0.5 * eps * eps * db) / std::abs(da);
      double lr = 0.0;
      for (int k = 1; k <= 4; ++k) lr = std::max(lr, std::abs(a3.at(4, k)));
      last[i] = lr;
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      max_red = std::max(max_red, red[i]);
      max_last_row = std::max(max_last_row, last[i]);
    }
  }
  (void)threads;
  CriterionResult c;
  c.suite = "reduction";
  c.title = "det A3 = (eps^2/2) det B and last row collapses (flat tube)";
  c.pass = max_red <= red_tol && max_last_row <= 1e-12;
  c.detail = fmt("max identity residual = %.2e (tol %.0e), "
                 "max |A3(4,k>=1)| = %.2e (tol 1e-12)",
                 max_red, red_tol, max_last_row);
  return c;
}

CriterionResult log_tube_criterion(std::optional<double> tol, int threads) {
  const double nr_floor = tol.value_or(1e-7);
  CriterionResult c;
  c.suite = "log-tube";
  c.title = "log tube non-umbilical: 3x1000 points, nr > 1e-7, Levi > 0, "
            "flags nonumbilic";
  c.pass = true;
  std::string detail;
  for (double eps : {0.1, 0.5, 1.0}) {
    const auto recs = scan_surface(FamilyDescriptor::log_tube(eps), eps * eps,
                                   1000, 1004, Thresholds{}, 6, threads);
    double min_nr = 1e300, min_levi = 1e300, min_det = 1e300;
    int off_flags = 0;
    for (const auto& r : recs) {
      if (r.flag == UmbilicFlag::Poisoned) {
        c.pass = false;
        ++off_flags;
        continue;
      }
      min_nr = std::min(min_nr, r.norm_resid);
      min_levi = std::min(min_levi, r.levi);
      min_det = std::min(min_det, std::abs(r.det));
      if (r.flag != UmbilicFlag::NonUmbilic) ++off_flags;
    }
    const bool ok = min_nr > nr_floor && min_levi > 0.0 && off_flags == 0;
    c.pass = c.pass && ok;
    detail += fmt("%seps=%.1f: min nr = %.3e, min Levi = %.3e, "
                  "non-'nonumbilic' flags = %d/1000, min |det A3| = %.3e",
                  detail.empty() ? "" : "; ", eps, min_nr, min_levi, off_flags,
                  min_det);
  }
  c.detail = detail;
  return c;
}

CriterionResult sphere_criterion(std::optional<double> tol, int threads) {
  const double nr_ceiling = tol.value_or(1e-9);
  const auto recs = scan_surface(FamilyDescriptor::sphere(1.0), 0.0, 1000,
                                 1005, Thresholds{}, 6, threads);
  double max_nr = 0.0;
  int off_flags = 0;
  for (const auto& r : recs) {
    max_nr = std::max(max_nr, r.norm_resid);
    if (r.flag != UmbilicFlag::Candidate) ++off_flags;
  }
  CriterionResult c;
  c.suite = "sphere";
  c.title = "sphere control: 1000 points, nr < 1e-9, all flags candidate";
  c.pass = max_nr < nr_ceiling && off_flags == 0;
  c.detail = fmt("max nr = %.3e (ceiling %.0e), non-candidate flags = %d",
                 max_nr, nr_ceiling, off_flags);
  return c;
}

CriterionResult ellipsoid_criterion(std::optional<double> tol, int threads) {
  const double res_tol = tol.value_or(1e-7);
  CriterionResult c;
  c.suite = "ellipsoid";
  c.title = "ellipsoids have umbilical candidates (200 starts, nr < 1e-7)";
  c.pass = true;
  std::string detail;
  const std::array<std::array<double, 4>, 2> sets = {
      {{1.0, 2.0, 1.0, 3.0}, {1.0, 1.5, 2.0, 1.0}}};
  for (const auto& p : sets) {
    const auto fam = FamilyDescriptor::ellipsoid(p[0], p[1], p[2], p[3]);
    const auto found =
        find_umbilics(fam, 0.0, 200, 1006, res_tol, 6, threads);
    c.pass = c.pass && !found.empty();
    detail += fmt("%s(%g,%g,%g,%g): %zu candidates%s", detail.empty() ? "" : "; ",
                  p[0], p[1], p[2], p[3], found.size(),
                  found.empty() ? ""
                                : fmt(", best nr = %.2e", found[0].residual).c_str());
  }
  c.detail = detail;
  return c;
}

CriterionResult invariants_criterion(std::optional<double> tol, int threads) {
  const double coeff_tol = tol.value_or(1e-13);
  (void)threads;
  const std::vector<FamilyDescriptor> fams = {
      FamilyDescriptor::flat_tube(1.0), FamilyDescriptor::log_tube(0.5),
      FamilyDescriptor::sphere(1.0), FamilyDescriptor::ellipsoid(1, 2, 1, 3),
      FamilyDescriptor::cartan_mu(2.0)};
  double max_coeff = 0.0, max_im_rho = 0.0;
  bool rhoder_exact = true;
  for (const auto& fam : fams) {
    const auto pts = sample_points(fam, fam.default_level(), 100, 1007);
    for (const auto& p : pts) {
      const Jet rho = rho_jet(fam, p.z, p.w, 6);
      max_im_rho = std::max(max_im_rho, std::abs(rho.value().imag()));
      const Jet lbar_rho = lbar_apply(truncated(rho, 5), rho);
      for (const Complex& co : lbar_rho.coeffs())
        max_coeff = std::max(max_coeff, std::abs(co));
      if (fam.kind == FamilyKind::FlatTube) {
        const Jet rz = pderiv(rho, Var::Z);
        const Jet rw = pderiv(rho, Var::W);
        rhoder_exact = rhoder_exact &&
                       pderiv(rz, Var::Zeta).value() == Complex(0.5) &&
                       pderiv(rz, Var::Omega).value() == Complex(0.0) &&
                       pderiv(rw, Var::Zeta).value() == Complex(0.0) &&
                       pderiv(rw, Var::Omega).value() == Complex(0.5);
      }
    }
  }
  CriterionResult c;
  c.suite = "invariants";
  c.title = "tangency (Lbar rho = 0 as a jet), reality of rho, and the flat "
            "first-derivative identities";
  c.pass = max_coeff <= coeff_tol && max_im_rho <= 1e-13 && rhoder_exact;
  c.detail = fmt("max |coeff of Lbar rho| = %.2e (tol %.0e), max |Im rho| = "
                 "%.2e, derivative identities exact: %s",
                 max_coeff, coeff_tol, max_im_rho, rhoder_exact ? "yes" : "no");
  return c;
}

CriterionResult monge_ampere_criterion(std::optional<double> tol, int threads) {
  const double ma_tol = tol.value_or(1e-10);
  (void)threads;
  const auto fam = FamilyDescriptor::flat_tube(1.0);
  double max_ma = 0.0;
  for (int i = 0; i < 100; ++i) {
    SplitMix64 g = point_stream(1008, i);
    const double eps = g.uniform(0.2, 2.0);
    const double params[3] = {g.uniform(0, 2 * std::numbers::pi),
                              g.uniform(-std::numbers::pi, std::numbers::pi),
                              g.uniform(-std::numbers::pi, std::numbers::pi)};
    const SurfacePoint p = point_from_params(fam, eps * eps, params);
    max_ma = std::max(max_ma, monge_ampere_sqrt(fam, p.z, p.w));
  }
  const double sphere_ctrl =
      monge_ampere_sqrt(FamilyDescriptor::sphere(1.0), 0.0, Complex(1.2, 0.0));
  CriterionResult c;
  c.suite = "monge-ampere";
  c.title = "(d dbar sqrt(rho))^2 = 0 on the flat tube; positive on the sphere";
  c.pass = max_ma <= ma_tol && sphere_ctrl > 1e-3;
  c.detail = fmt("max |det| = %.2e (tol %.0e), sphere control = %.4f", max_ma,
                 ma_tol, sphere_ctrl);
  return c;
}

CriterionResult consistency_criterion(std::optional<double> tol, int threads) {
  const double fd_tol = tol.value_or(1e-5);
  (void)threads;
  const auto fam = FamilyDescriptor::flat_tube(1.0);
  const auto pts = sample_points(fam, 1.0, 10, 1009);
  double max_degree_diff = 0.0, max_fd_rel = 0.0;
  for (const auto& p : pts) {
    const Complex d6 = det_a3(a3_matrix(fam, p.z, p.w, 6));
    const Complex d7 = det_a3(a3_matrix(fam, p.z, p.w, 7));
    max_degree_diff = std::max(max_degree_diff, std::abs(d6 - d7) / std::abs(d6));

    const A3Matrix m = a3_matrix(fam, p.z, p.w, 6);
    double scale = 0.0;
    for (const Complex& e : m.entries) scale = std::max(scale, std::abs(e));
    const FlatFlow flow = FlatFlow::at(p.z, p.w);
    for (int r = 0; r < 5; ++r)
      for (int k = 0; k <= 4; ++k) {
        auto g = [&](double t) {
          const auto [u, v] = flow.uv(t);
          return flat_generator(r, u, v);
        };
        const Complex fd = flow_derivative(g, k);
        const double rel = std::abs(m.at(r, k) - fd) /
                           std::max({std::abs(m.at(r, k)), std::abs(fd),
                                     1e-8 * scale});
        max_fd_rel = std::max(max_fd_rel, rel);
      }
  }
  CriterionResult c;
  c.suite = "consistency";
  c.title = "degree-6 vs degree-7 dets agree; entries match the "
            "finite-difference flow oracle";
  c.pass = max_degree_diff <= 1e-12 && max_fd_rel <= fd_tol;
  c.detail = fmt("max degree-6/7 rel diff = %.2e (tol 1e-12), max FD rel "
                 "diff = %.2e (tol %.0e)",
                 max_degree_diff, max_fd_rel, fd_tol);
  return c;
}

CriterionResult symmetry_criterion(std::optional<double> tol, int threads) {
  const double inv_tol = tol.value_or(1e-11);
  (void)threads;
  double max_rel = 0.0;
  for (int i = 0; i < 50; ++i) {
    SplitMix64 g = point_stream(1010, i);
    const double eps = g.uniform(0.4, 2.5);
    const auto fam = FamilyDescriptor::flat_tube(eps);
    const double params[3] = {g.uniform(0, 2 * std::numbers::pi),
                              g.uniform(-std::numbers::pi, std::numbers::pi),
                              g.uniform(-std::numbers::pi, std::numbers::pi)};
    const SurfacePoint p = point_from_params(fam, eps * eps, params);

    // rigid motion (z, w) -> (z, w) A + (a, b), A in O(2, R)
    const double th = g.uniform(0, 2 * std::numbers::pi);
    const bool reflect = g.next() & 1;
    const double a11 = std::cos(th), a12 = std::sin(th);
    const double a21 = reflect ? std::sin(th) : -std::sin(th);
    const double a22 = reflect ? -std::cos(th) : std::cos(th);
    const Complex ta(g.uniform(-3, 3), 0.0), tb(g.uniform(-3, 3), 0.0);
    const Complex z2 = p.z * a11 + p.w * a21 + ta;
    const Complex w2 = p.z * a12 + p.w * a22 + tb;

    const Complex d1 = det_a3(a3_matrix(fam, p.z, p.w));
    const Complex d2 = det_a3(a3_matrix(fam, z2, w2));
    max_rel = std::max(max_rel, std::abs(d1 - d2) / std::abs(d1));
  }
  CriterionResult c;
  c.suite = "symmetry";
  c.title = "det A3 invariant under the flat tube's rigid motions";
  c.pass = max_rel <= inv_tol;
  c.detail = fmt("max relative change over 50 motions = %.2e (tol %.0e)",
                 max_rel, inv_tol);
  return c;
}

const std::vector<std::pair<std::string, Criterion>>& criteria() {
  static const std::vector<std::pair<std::string, Criterion>> table = {
      {"flat-tube", flat_tube_criterion},
      {"scaling", scaling_criterion},
      {"reduction", reduction_criterion},
      {"log-tube", log_tube_criterion},
      {"sphere", sphere_criterion},
      {"ellipsoid", ellipsoid_criterion},
      {"invariants", invariants_criterion},
      {"monge-ampere", monge_ampere_criterion},
      {"consistency", consistency_criterion},
      {"symmetry", symmetry_criterion},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& verification_suites() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : criteria()) n.push_back(name);
    return n;
  }();
  return names;
}

std::vector<CriterionResult> run_verification(
    const std::vector<std::string>& suites, std::optional<double> tol,
    int threads) {
  std::vector<std::string> wanted = suites;
  if (wanted.empty()) wanted = {"all"};
  const bool all =
      std::find(wanted.begin(), wanted.end(), "all") != wanted.end();
  if (!all) {
    for (const auto& s : wanted) {
      const auto& names = verification_suites();
      if (std::find(names.begin(), names.end(), s) == names.end())
        throw std::invalid_argument("unknown verification suite: " + s);
    }
  }
  std::vector<CriterionResult> out;
  for (const auto& [name, fn] : criteria()) {
    if (all || std::find(wanted.begin(), wanted.end(), name) != wanted.end())
      out.push_back(fn(tol, threads));
  }
  return out;
}

}  // namespace crtool
