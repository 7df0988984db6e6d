#include "crtool/scanner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "crtool/rng.hpp"

namespace crtool {

const char* to_string(UmbilicFlag flag) {
  switch (flag) {
    case UmbilicFlag::Candidate: return "candidate";
    case UmbilicFlag::Indeterminate: return "indeterminate";
    case UmbilicFlag::NonUmbilic: return "nonumbilic";
    case UmbilicFlag::Poisoned: return "poisoned";
  }
  return "?";
}

UmbilicFlag classify(double normalized_residual, const Thresholds& t) {
  if (normalized_residual < t.candidate) return UmbilicFlag::Candidate;
  if (normalized_residual < t.nonumbilic) return UmbilicFlag::Indeterminate;
  return UmbilicFlag::NonUmbilic;
}

namespace {

int resolve_threads(int threads, int jobs) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  return std::min(threads, jobs);
}

// Run fn(i) for i in [0, jobs), partitioned contiguously across workers.
// Results must be written into index-addressed slots so ordering does not
// depend on the partition.
void parallel_for(int jobs, int threads, const std::function<void(int)>& fn) {
  threads = resolve_threads(threads, jobs);
  if (threads == 1) {
    for (int i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const int chunk = (jobs + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int lo = t * chunk;
    const int hi = std::min(jobs, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

ScanRecord evaluate_point(const FamilyDescriptor& family, double level,
                          const SurfacePoint& p, const Thresholds& thresholds,
                          int degree) {
  ScanRecord rec;
  rec.point = p;
  try {
    rec.levi = levi_form(rho_jet(family, p.z, p.w, 2));
    A3Matrix m = a3_matrix(family, p.z, p.w, degree);
    m.point = p;
    rec.det = det_a3(m);
    rec.norm_resid = normalized_residual(m);
    rec.flag = classify(rec.norm_resid, thresholds);
  } catch (const std::exception& e) {
    rec.flag = UmbilicFlag::Poisoned;
    rec.error = e.what();
  }
  (void)level;
  return rec;
}

}  // namespace

std::vector<ScanRecord> scan_surface(const FamilyDescriptor& family,
                                     double level, int count,
                                     std::uint64_t seed,
                                     const Thresholds& thresholds, int degree,
                                     int threads) {
  if (count < 1) throw std::invalid_argument("scan_surface: count >= 1");
  const std::vector<SurfacePoint> points =
      sample_points(family, level, count, seed);
  std::vector<ScanRecord> records(count);
  parallel_for(count, threads, [&](int i) {
    records[i] = evaluate_point(family, level, points[i], thresholds, degree);
  });
  return records;
}

namespace {

// Nelder-Mead with the usual coefficients (reflect 1, expand 2, contract
// 0.5, shrink 0.5) and a hard iteration cap; the objective is non-smooth at
// its zeros, which is exactly where gradient methods would stall.
struct NelderMead {
  double reflect = 1.0, expand = 2.0, contract = 0.5, shrink = 0.5;
  int max_iter = 500;

  std::pair<std::vector<double>, double> minimize(
      const std::function<double(std::span<const double>)>& f,
      std::vector<std::vector<double>> simplex) const {
    const int n = static_cast<int>(simplex[0].size());
    std::vector<double> fv(simplex.size());
    for (std::size_t i = 0; i < simplex.size(); ++i) fv[i] = f(simplex[i]);

    auto order = [&] {
      std::vector<int> idx(simplex.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
      std::sort(idx.begin(), idx.end(),
                [&](int a, int b) { return fv[a] < fv[b]; });
      std::vector<std::vector<double>> s2;
      std::vector<double> f2;
      for (int i : idx) {
        s2.push_back(simplex[i]);
        f2.push_back(fv[i]);
      }
      simplex.swap(s2);
      fv.swap(f2);
    };

    for (int it = 0; it < max_iter; ++it) {
      order();
      if (fv[0] < 1e-18) break;  // as good as zero in double precision
      double diam2 = 0.0;
      for (int i = 1; i <= n; ++i) {
        double d2 = 0.0;
        for (int k = 0; k < n; ++k) {
          const double d = simplex[i][k] - simplex[0][k];
          d2 += d * d;
        }
        diam2 = std::max(diam2, d2);
      }
      if (diam2 < 1e-26) break;  // simplex collapsed
      // centroid of all but the worst
      std::vector<double> c(n, 0.0);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) c[k] += simplex[i][k] / n;
      const int worst = n;
      auto blend = [&](double t) {
        std::vector<double> p(n);
        for (int k = 0; k < n; ++k) p[k] = c[k] + t * (c[k] - simplex[worst][k]);
        return p;
      };
      const auto xr = blend(reflect);
      const double fr = f(xr);
      if (fr < fv[0]) {
        const auto xe = blend(expand);
        const double fe = f(xe);
        if (fe < fr) {
          simplex[worst] = xe;
          fv[worst] = fe;
        } else {
          simplex[worst] = xr;
          fv[worst] = fr;
        }
      } else if (fr < fv[n - 1]) {
        simplex[worst] = xr;
        fv[worst] = fr;
      } else {
        const auto xc = blend(fr < fv[worst] ? contract : -contract);
        const double fc = f(xc);
        if (fc < std::min(fr, fv[worst])) {
          simplex[worst] = xc;
          fv[worst] = fc;
        } else {
          for (int i = 1; i <= n; ++i) {
            for (int k = 0; k < n; ++k)
              simplex[i][k] =
                  simplex[0][k] + shrink * (simplex[i][k] - simplex[0][k]);
            fv[i] = f(simplex[i]);
          }
        }
      }
    }
    order();
    return {simplex[0], fv[0]};
  }
};

std::vector<double> random_params(const FamilyDescriptor& family,
                                  SplitMix64& g) {
  constexpr double pi = std::numbers::pi;
  switch (family.kind) {
    case FamilyKind::FlatTube:
      return {g.uniform(0, 2 * pi), g.uniform(-pi, pi), g.uniform(-pi, pi)};
    case FamilyKind::LogTube:
      return {g.uniform(0, 2 * pi), g.uniform(0, 2 * pi), g.uniform(0, 2 * pi)};
    case FamilyKind::Sphere:
      return {g.uniform(0, pi / 2), g.uniform(0, 2 * pi), g.uniform(0, 2 * pi)};
    case FamilyKind::Ellipsoid:
      return {g.uniform(0, pi), g.uniform(0, pi), g.uniform(0, 2 * pi)};
    case FamilyKind::CartanMu: {
      const double t = std::sqrt((family.alpha - 1) / (family.alpha + 1));
      const double box = 2.0 * t + 0.5;
      return {g.uniform(-box, box), g.uniform(-box, box), g.uniform(-box, box),
              g.uniform(-box, box)};
    }
  }
  return {};
}

}  // namespace

std::vector<UmbilicCandidate> find_umbilics(const FamilyDescriptor& family,
                                            double level, int starts,
                                            std::uint64_t seed, double tol,
                                            int degree, int threads) {
  if (starts < 1) throw std::invalid_argument("find_umbilics: starts >= 1");

  auto objective = [&](std::span<const double> params) -> double {
    try {
      const SurfacePoint p = point_from_params(family, level, params);
      const A3Matrix m = a3_matrix(family, p.z, p.w, degree);
      return normalized_residual(m);
    } catch (const std::exception&) {
      return 1.0;  // worst possible value steers the simplex back in-domain
    }
  };

  struct StartResult {
    std::vector<double> params;
    double value = 1.0;
  };
  std::vector<StartResult> results(starts);
  parallel_for(starts, threads, [&](int i) {
    SplitMix64 g = point_stream(seed, static_cast<std::uint64_t>(i));
    const std::vector<double> x0 = random_params(family, g);
    std::vector<std::vector<double>> simplex{x0};
    for (std::size_t k = 0; k < x0.size(); ++k) {
      auto v = x0;
      v[k] += 0.25;
      simplex.push_back(v);
    }
    NelderMead nm;
    auto [best, fbest] = nm.minimize(objective, std::move(simplex));
    results[i] = {std::move(best), fbest};
  });

  std::vector<UmbilicCandidate> found;
  for (const auto& r : results) {
    if (r.value > tol) continue;
    UmbilicCandidate c;
    c.point = point_from_params(family, level, r.params);
    c.residual = r.value;
    found.push_back(std::move(c));
  }
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.residual < b.residual; });

  // dedupe by distance in (Re z, Im z, Re w, Im w)
  std::vector<UmbilicCandidate> kept;
  for (const auto& c : found) {
    bool dup = false;
    for (const auto& k : kept) {
      const double d2 = std::norm(c.point.z - k.point.z) +
                        std::norm(c.point.w - k.point.w);
      if (d2 < 1e-4 * 1e-4) {
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(c);
  }
  return kept;
}

ScalingFit fit_scaling(const FamilyDescriptor& family,
                       std::span<const double> eps_list, int points_per_eps,
                       std::uint64_t seed, int degree, int threads) {
  if (eps_list.size() < 3)
    throw std::invalid_argument("fit_scaling: need at least 3 eps values");
  for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i + 1]))
      throw std::invalid_argument("fit_scaling: eps list must be strictly increasing");
  if (points_per_eps < 1)
    throw std::invalid_argument("fit_scaling: points_per_eps >= 1");

  ScalingFit fit;
  fit.eps.assign(eps_list.begin(), eps_list.end());
  for (std::size_t e = 0; e < eps_list.size(); ++e) {
    const double eps = eps_list[e];
    const auto records =
        scan_surface(family, eps * eps, points_per_eps,
                     seed + static_cast<std::uint64_t>(e), Thresholds{}, degree,
                     threads);
    double sum = 0.0, lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto& r : records) {
      if (r.flag == UmbilicFlag::Poisoned)
        throw std::runtime_error("fit_scaling: poisoned record at eps=" +
                                 std::to_string(eps) + ": " + r.error);
      const double d = std::abs(r.det);
      sum += d;
      lo = first ? d : std::min(lo, d);
      hi = first ? d : std::max(hi, d);
      first = false;
    }
    const double mean = sum / points_per_eps;
    fit.log_det_mean.push_back(std::log(mean));
    fit.rel_spread.push_back(mean > 0 ? (hi - lo) / mean : 0.0);
  }
  fit.spread_ok = std::all_of(fit.rel_spread.begin(), fit.rel_spread.end(),
                              [](double s) { return s <= 1e-8; });

  // least squares on (log eps, log mean)
  const auto n = static_cast<double>(fit.eps.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < fit.eps.size(); ++i) {
    const double x = std::log(fit.eps[i]);
    const double y = fit.log_det_mean[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  for (std::size_t i = 0; i < fit.eps.size(); ++i) {
    const double pred = fit.intercept + fit.slope * std::log(fit.eps[i]);
    fit.max_fit_residual =
        std::max(fit.max_fit_residual, std::abs(fit.log_det_mean[i] - pred));
  }
  return fit;
}

}  // namespace crtool
