// crtool — evaluates the order-6 CR umbilical obstruction det A3(rho) on
// hypersurface families in C^2 and runs the claim-verification battery.
//
// Exit codes: 0 success, 1 computational failure (violated claim, poisoned
// records, non-convergence), 2 usage or domain error.

#include <complex>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crtool/invariants.hpp"
#include "crtool/report.hpp"
#include "crtool/scanner.hpp"
#include "crtool/verify.hpp"

namespace {

using namespace crtool;

struct FamilyOptions {
  std::string family;
  double eps = 1.0;
  double r = 1.0;
  double alpha = 2.0;
  std::vector<double> params;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--family", family,
                   "flat-tube|log-tube|sphere|ellipsoid|cartan-mu")
        ->required();
    cmd.add_option("--eps", eps, "tube radius parameter (level is eps^2)");
    cmd.add_option("--r", r, "sphere radius");
    cmd.add_option("--alpha", alpha, "cartan-mu parameter (> 1)");
    cmd.add_option("--params", params, "ellipsoid coefficients A,B,C,D")
        ->delimiter(',');
  }

  FamilyDescriptor resolve() const {
    if (family == "flat-tube") return FamilyDescriptor::flat_tube(eps);
    if (family == "log-tube") return FamilyDescriptor::log_tube(eps);
    if (family == "sphere") return FamilyDescriptor::sphere(r);
    if (family == "ellipsoid") {
      if (params.size() != 4)
        throw std::invalid_argument(
            "ellipsoid needs --params a,b,c,d (four positive reals)");
      return FamilyDescriptor::ellipsoid(params[0], params[1], params[2],
                                         params[3]);
    }
    if (family == "cartan-mu") return FamilyDescriptor::cartan_mu(alpha);
    throw std::invalid_argument("unknown family: " + family);
  }
};

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  if (const char* env = std::getenv("CRTOOL_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
      throw std::invalid_argument("CRTOOL_THREADS is not a positive integer");
    }
  }
  return 0;  // library default: all cores
}

std::pair<Complex, Complex> parse_point(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double x;
    try {
      x = std::stod(item, &pos);
    } catch (...) {
      pos = 0;
    }
    if (pos != item.size())
      throw std::invalid_argument("bad --point component: '" + item + "'");
    v.push_back(x);
  }
  if (v.size() != 4)
    throw std::invalid_argument(
        "--point needs four comma-separated reals: re_z,im_z,re_w,im_w");
  return {Complex(v[0], v[1]), Complex(v[2], v[3])};
}

void write_output(const std::string& path, const std::string& body) {
  if (path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << body;
}

int cmd_check(const FamilyOptions& fopts, const std::string& point_str,
              int degree) {
  const FamilyDescriptor fam = fopts.resolve();
  const auto [z, w] = parse_point(point_str);
  const double level = fam.default_level();

  const CRFrame frame = cr_frame(fam, z, w, std::max(degree, 4));
  A3Matrix m = a3_matrix(fam, z, w, degree);
  const Complex det = det_a3(m);
  const double nr = normalized_residual(m);
  const Thresholds thr;

  std::cout << "family:        " << fam.name() << "\n";
  std::cout << "point:         z = " << format_double(z.real()) << " + "
            << format_double(z.imag()) << "i, w = " << format_double(w.real())
            << " + " << format_double(w.imag()) << "i\n";
  std::cout << "rho:           " << format_double(frame.rho)
            << "  (level " << format_double(level) << ", residual "
            << format_double(frame.rho - level) << ")\n";
  std::cout << "levi:          " << format_double(frame.levi) << "\n";
  std::cout << "hess_LL:       " << format_double(frame.hess_ll.real()) << " + "
            << format_double(frame.hess_ll.imag()) << "i\n";
  std::cout << "det_a3:        " << format_double(det.real()) << " + "
            << format_double(det.imag()) << "i\n";
  if (fam.kind == FamilyKind::FlatTube) {
    const Complex db = det_b(b_matrix(fam, z, w, degree));
    std::cout << "det_b:         " << format_double(db.real()) << " + "
              << format_double(db.imag()) << "i\n";
    std::cout << "reduction:     " << format_double(reduction_check(fam, z, w, degree))
              << "\n";
  }
  std::cout << "norm_resid:    " << format_double(nr) << "\n";
  std::cout << "flag:          " << to_string(classify(nr, thr)) << "\n";
  return 0;
}

int cmd_scan(const FamilyOptions& fopts, int count, std::uint64_t seed,
             int degree, int threads, const std::string& out,
             const std::string& format) {
  const FamilyDescriptor fam = fopts.resolve();
  const auto records = scan_surface(fam, fam.default_level(), count, seed,
                                    Thresholds{}, degree, threads);
  write_output(out, format == "json" ? records_to_json(fam, records)
                                     : records_to_csv(fam, records));
  for (const auto& r : records)
    if (r.flag == UmbilicFlag::Poisoned) {
      std::cerr << "scan: poisoned record(s); first error: " << r.error << "\n";
      return 1;
    }
  return 0;
}

int cmd_verify(const std::vector<std::string>& suites,
               std::optional<double> tol, int threads) {
  const auto results = run_verification(suites, tol, threads);
  bool all_pass = true;
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    std::cout << (r.pass ? "PASS" : "FAIL") << "  [" << r.suite << "] "
              << r.title << "\n      " << r.detail << "\n";
  }
  std::cout << (all_pass ? "all criteria passed" : "criteria FAILED") << "\n";
  return all_pass ? 0 : 1;
}

int cmd_find_umbilics(const FamilyOptions& fopts, int starts,
                      std::uint64_t seed, double tol, int degree,
                      int threads) {
  const FamilyDescriptor fam = fopts.resolve();
  const auto found =
      find_umbilics(fam, fam.default_level(), starts, seed, tol, degree, threads);
  std::cout << found.size() << " candidate(s) with normalized residual <= "
            << format_double(tol) << "\n";
  if (found.size() <= 25) {
    for (const auto& c : found)
      std::cout << "  z = " << format_double(c.point.z.real()) << " + "
                << format_double(c.point.z.imag())
                << "i, w = " << format_double(c.point.w.real()) << " + "
                << format_double(c.point.w.imag())
                << "i, nr = " << format_double(c.residual) << "\n";
  }
  return 0;
}

int cmd_scaling(const FamilyOptions& fopts, const std::vector<double>& eps_list,
                int points, std::uint64_t seed, int degree, int threads) {
  const FamilyDescriptor fam = fopts.resolve();
  const auto fit = fit_scaling(fam, eps_list, points, seed, degree, threads);
  std::cout << "slope:     " << format_double(fit.slope) << "\n";
  std::cout << "intercept: " << format_double(fit.intercept)
            << "  (constant " << format_double(std::exp(fit.intercept))
            << ")\n";
  for (std::size_t i = 0; i < fit.eps.size(); ++i)
    std::cout << "  eps = " << format_double(fit.eps[i])
              << ": log mean |det| = " << format_double(fit.log_det_mean[i])
              << ", rel spread = " << format_double(fit.rel_spread[i]) << "\n";
  std::cout << "max fit residual: " << format_double(fit.max_fit_residual)
            << "\n";
  if (!fit.spread_ok) {
    std::cerr << "scaling: per-eps spread exceeds 1e-8 — fit is unreliable\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"order-6 CR umbilical obstruction toolkit"};
  app.require_subcommand(1);

  // check
  auto* check = app.add_subcommand("check", "one-point report");
  FamilyOptions check_fam;
  check_fam.add_to(*check);
  std::string point_str;
  int check_degree = 6;
  check->add_option("--point", point_str, "re_z,im_z,re_w,im_w")->required();
  check->add_option("--degree", check_degree, "jet degree (default 6)");

  // scan
  auto* scan = app.add_subcommand("scan", "batch surface scan");
  FamilyOptions scan_fam;
  scan_fam.add_to(*scan);
  int scan_count = 1000, scan_degree = 6, scan_threads = 0;
  std::uint64_t scan_seed = 0;
  std::string scan_out, scan_format = "csv";
  scan->add_option("--count", scan_count, "points to sample");
  scan->add_option("--seed", scan_seed, "RNG seed (default 0)");
  scan->add_option("--degree", scan_degree, "jet degree (default 6)");
  scan->add_option("--threads", scan_threads, "worker threads (default: all)");
  scan->add_option("--out", scan_out, "output path (default: stdout)");
  scan->add_option("--format", scan_format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  // verify
  auto* verify = app.add_subcommand("verify", "run the claim battery");
  std::vector<std::string> suites;
  double verify_tol = -1.0;
  int verify_threads = 0;
  verify->add_option("--suite", suites,
                     "all or any of: flat-tube scaling reduction log-tube "
                     "sphere ellipsoid invariants monge-ampere consistency "
                     "symmetry")
      ->delimiter(',');
  verify->add_option("--tol", verify_tol,
                     "override the headline tolerance of the chosen suites");
  verify->add_option("--threads", verify_threads, "worker threads");

  // find-umbilics
  auto* findu = app.add_subcommand("find-umbilics",
                                   "multistart minimization of the residual");
  FamilyOptions find_fam;
  find_fam.add_to(*findu);
  int find_starts = 200, find_degree = 6, find_threads = 0;
  std::uint64_t find_seed = 0;
  double find_tol = 1e-7;
  findu->add_option("--starts", find_starts, "Nelder-Mead starts");
  findu->add_option("--seed", find_seed, "RNG seed");
  findu->add_option("--tol", find_tol, "acceptance residual (default 1e-7)");
  findu->add_option("--degree", find_degree, "jet degree");
  findu->add_option("--threads", find_threads, "worker threads");

  // scaling
  auto* scaling = app.add_subcommand("scaling", "log-log scaling fit");
  FamilyOptions scaling_fam;
  scaling_fam.add_to(*scaling);
  std::vector<double> eps_list;
  int scaling_points = 100, scaling_degree = 6, scaling_threads = 0;
  std::uint64_t scaling_seed = 0;
  scaling->add_option("--eps-list", eps_list, "strictly increasing eps values")
      ->delimiter(',')
      ->required();
  scaling->add_option("--points", scaling_points, "points per eps");
  scaling->add_option("--seed", scaling_seed, "RNG seed");
  scaling->add_option("--degree", scaling_degree, "jet degree");
  scaling->add_option("--threads", scaling_threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*check) return cmd_check(check_fam, point_str, check_degree);
    if (*scan)
      return cmd_scan(scan_fam, scan_count, scan_seed, scan_degree,
                      resolve_threads(scan_threads), scan_out, scan_format);
    if (*verify)
      return cmd_verify(suites,
                        verify_tol > 0 ? std::optional<double>(verify_tol)
                                       : std::nullopt,
                        resolve_threads(verify_threads));
    if (*findu)
      return cmd_find_umbilics(find_fam, find_starts, find_seed, find_tol,
                               find_degree, resolve_threads(find_threads));
    if (*scaling)
      return cmd_scaling(scaling_fam, eps_list, scaling_points, scaling_seed,
                         scaling_degree, resolve_threads(scaling_threads));
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
