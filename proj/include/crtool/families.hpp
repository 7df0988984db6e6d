#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "crtool/jet.hpp"

namespace crtool {

enum class FamilyKind { FlatTube, LogTube, Sphere, Ellipsoid, CartanMu };

/// A hypersurface family together with its real parameters. The defining
/// function rho is exposed raw; callers choose the level (eps^2 for the
/// tubes, 0 for the others, whose constants are folded into rho).
struct FamilyDescriptor {
  FamilyKind kind = FamilyKind::FlatTube;
  double eps = 0.0;                  // tubes
  double radius = 0.0;               // sphere
  std::array<double, 4> ell{};       // ellipsoid A,B,C,D in Ax^2+Bx'^2+Cy^2+Dy'^2=1
  double alpha = 0.0;                // CartanMu, requires alpha > 1

  static FamilyDescriptor flat_tube(double eps);
  static FamilyDescriptor log_tube(double eps);
  static FamilyDescriptor sphere(double radius);
  static FamilyDescriptor ellipsoid(double a, double b, double c, double d);
  static FamilyDescriptor cartan_mu(double alpha);

  /// Level of the surface the descriptor's parameters name: eps^2 or 0.
  double default_level() const;
  std::string name() const;
};

/// A point of C^2 with its on-surface residual (rho(p) - level) and the
/// parameterization coordinates that generated it (empty if projected from
/// an arbitrary start).
struct SurfacePoint {
  Complex z;
  Complex w;
  double residual = 0.0;
  std::vector<double> param;
};

/// Jet of the polarized defining function at (z, w), to the given degree.
/// Throws std::domain_error outside the family's domain of analyticity
/// (LogTube: z != 0, w != 0; CartanMu: 1 + z1^2 + z2^2 != 0).
Jet rho_jet(const FamilyDescriptor& family, Complex z, Complex w, int degree);

/// rho(z, w) as a plain value.
double rho_value(const FamilyDescriptor& family, Complex z, Complex w);

/// Dimension of the sampling parameterization used by sample_points and the
/// umbilic search (3 angles/reals for most families, 4 box coordinates for
/// CartanMu which is sampled by Newton projection).
int param_count(const FamilyDescriptor& family);

/// Point on {rho = level} from parameterization coordinates. Closed-form
/// (exact) for FlatTube, LogTube and Sphere; parameterize-then-Newton for
/// Ellipsoid and CartanMu. Residuals come out <= 1e-12.
SurfacePoint point_from_params(const FamilyDescriptor& family, double level,
                               std::span<const double> params);

/// Deterministic pseudo-random sample of {rho = level}; identical output for
/// identical (seed, count) regardless of how callers partition the work.
std::vector<SurfacePoint> sample_points(const FamilyDescriptor& family,
                                        double level, int count,
                                        std::uint64_t seed);

/// Newton iteration along the real gradient of rho until |rho - level| <= tol.
/// Throws std::domain_error on a vanishing gradient and std::runtime_error if
/// max_iter steps do not converge.
SurfacePoint project_to_level(const FamilyDescriptor& family, double level,
                              Complex z, Complex w, double tol = 1e-12,
                              int max_iter = 50);

}  // namespace crtool
