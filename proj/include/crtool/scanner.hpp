#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "crtool/families.hpp"
#include "crtool/invariants.hpp"

namespace crtool {

/// Decision thresholds on the normalized residual.
struct Thresholds {
  double candidate = 1e-7;    // below: umbilical candidate
  double nonumbilic = 1e-5;   // at or above: non-umbilical; between: indeterminate
};

enum class UmbilicFlag { Candidate, Indeterminate, NonUmbilic, Poisoned };

const char* to_string(UmbilicFlag flag);
UmbilicFlag classify(double normalized_residual, const Thresholds& t);

/// One row of scan output.
struct ScanRecord {
  SurfacePoint point;
  double levi = 0.0;
  Complex det{};
  double norm_resid = 0.0;
  UmbilicFlag flag = UmbilicFlag::Poisoned;
  std::string error;  // set only on poisoned records
};

/// Evaluate the obstruction at `count` sampled points of {rho = level}.
/// Deterministic for a fixed (family, level, count, seed) whatever the
/// thread count; per-point domain errors poison that record instead of
/// aborting the scan. threads <= 0 means all hardware threads.
std::vector<ScanRecord> scan_surface(const FamilyDescriptor& family,
                                     double level, int count,
                                     std::uint64_t seed,
                                     const Thresholds& thresholds = {},
                                     int degree = 6, int threads = 0);

struct UmbilicCandidate {
  SurfacePoint point;
  double residual = 0.0;  // normalized residual at the minimum
};

/// Multistart Nelder-Mead minimization of the normalized residual over the
/// family's sampling parameterization; returns minima with residual <= tol,
/// deduplicated by Euclidean distance 1e-4 in (Re z, Im z, Re w, Im w) and
/// ordered by residual. An empty result is a valid outcome.
std::vector<UmbilicCandidate> find_umbilics(const FamilyDescriptor& family,
                                            double level, int starts,
                                            std::uint64_t seed,
                                            double tol = 1e-7, int degree = 6,
                                            int threads = 0);

/// Least-squares slope of log|det A3| against log(eps) over flat-tube levels
/// eps^2, using the per-eps mean of |det A3|.
struct ScalingFit {
  std::vector<double> eps;
  std::vector<double> log_det_mean;  // log of per-eps mean |det A3|
  std::vector<double> rel_spread;    // per-eps (max - min)/mean of |det A3|
  double slope = 0.0;
  double intercept = 0.0;
  double max_fit_residual = 0.0;
  bool spread_ok = true;  // false if any rel_spread > 1e-8 (fit is suspect)
};

ScalingFit fit_scaling(const FamilyDescriptor& family,
                       std::span<const double> eps_list, int points_per_eps,
                       std::uint64_t seed, int degree = 6, int threads = 0);

}  // namespace crtool
