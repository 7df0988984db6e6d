#include "crtool/families.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "crtool/rng.hpp"

namespace crtool {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

[[noreturn]] void bad_params(const std::string& msg) {
  throw std::invalid_argument("family: " + msg);
}

}  // namespace

FamilyDescriptor FamilyDescriptor::flat_tube(double eps) {
  if (!(eps > 0)) bad_params("flat-tube needs eps > 0");
  FamilyDescriptor f;
  f.kind = FamilyKind::FlatTube;
  f.eps = eps;
  return f;
}

FamilyDescriptor FamilyDescriptor::log_tube(double eps) {
  if (!(eps > 0)) bad_params("log-tube needs eps > 0");
  FamilyDescriptor f;
  f.kind = FamilyKind::LogTube;
  f.eps = eps;
  return f;
}

FamilyDescriptor FamilyDescriptor::sphere(double radius) {
  if (!(radius > 0)) bad_params("sphere needs r > 0");
  FamilyDescriptor f;
  f.kind = FamilyKind::Sphere;
  f.radius = radius;
  return f;
}

FamilyDescriptor FamilyDescriptor::ellipsoid(double a, double b, double c,
                                             double d) {
  if (!(a > 0 && b > 0 && c > 0 && d > 0))
    bad_params("ellipsoid needs four positive coefficients");
  FamilyDescriptor f;
  f.kind = FamilyKind::Ellipsoid;
  f.ell = {a, b, c, d};
  return f;
}

FamilyDescriptor FamilyDescriptor::cartan_mu(double alpha) {
  if (!(alpha > 1)) bad_params("cartan-mu needs alpha > 1");
  FamilyDescriptor f;
  f.kind = FamilyKind::CartanMu;
  f.alpha = alpha;
  return f;
}

double FamilyDescriptor::default_level() const {
  switch (kind) {
    case FamilyKind::FlatTube:
    case FamilyKind::LogTube:
      return eps * eps;
    default:
      return 0.0;
  }
}

std::string FamilyDescriptor::name() const {
  switch (kind) {
    case FamilyKind::FlatTube: return "flat-tube";
    case FamilyKind::LogTube: return "log-tube";
    case FamilyKind::Sphere: return "sphere";
    case FamilyKind::Ellipsoid: return "ellipsoid";
    case FamilyKind::CartanMu: return "cartan-mu";
  }
  return "?";
}

Jet rho_jet(const FamilyDescriptor& family, Complex z, Complex w, int degree) {
  if (degree < 1) throw std::invalid_argument("rho_jet: degree must be >= 1");
  const Jet jz = Jet::variable(Var::Z, z, degree);
  const Jet jw = Jet::variable(Var::W, w, degree);
  const Jet jzeta = Jet::variable(Var::Zeta, std::conj(z), degree);
  const Jet jomega = Jet::variable(Var::Omega, std::conj(w), degree);

  Jet r(degree);
  switch (family.kind) {
    case FamilyKind::FlatTube: {
      // (Im z)^2 + (Im w)^2 polarized: -((z - zeta)^2 + (w - omega)^2)/4
      const Jet du = jz - jzeta;
      const Jet dv = jw - jomega;
      r = (du * du + dv * dv) * (-0.25);
      break;
    }
    case FamilyKind::LogTube: {
      if (z == 0.0 || w == 0.0) {
        std::ostringstream os;
        os << "log-tube rho is undefined on the axes (z=" << z << ", w=" << w
           << ")";
        throw std::domain_error(os.str());
      }
      const Jet lz = log(jz * jzeta) * 0.5;  // log|z| polarized
      const Jet lw = log(jw * jomega) * 0.5;
      r = lz * lz + lw * lw;
      break;
    }
    case FamilyKind::Sphere:
      r = jz * jzeta + jw * jomega - Complex(family.radius * family.radius);
      break;
    case FamilyKind::Ellipsoid: {
      const Jet x = (jz + jzeta) * 0.5;
      const Jet xp = (jz - jzeta) * Complex(0.0, -0.5);  // (z - zeta)/(2i)
      const Jet y = (jw + jomega) * 0.5;
      const Jet yp = (jw - jomega) * Complex(0.0, -0.5);
      r = family.ell[0] * (x * x) + family.ell[1] * (xp * xp) +
          family.ell[2] * (y * y) + family.ell[3] * (yp * yp) - Complex(1.0);
      break;
    }
    case FamilyKind::CartanMu: {
      // mu_alpha in the chart z0 = 1; (z, w) play (z1, z2).
      const Complex q0 = 1.0 + z * z + w * w;
      if (std::abs(q0) < 1e-14) {
        std::ostringstream os;
        os << "cartan-mu rho is undefined where 1 + z1^2 + z2^2 = 0 (z=" << z
           << ", w=" << w << ")";
        throw std::domain_error(os.str());
      }
      const Jet q = jz * jz + jw * jw + Complex(1.0);
      const Jet qt = jzeta * jzeta + jomega * jomega + Complex(1.0);
      r = family.alpha * sqrt(q * qt) -
          (jz * jzeta + jw * jomega + Complex(1.0));
      break;
    }
  }
  r.set_base_point(z, w);
  return r;
}

double rho_value(const FamilyDescriptor& family, Complex z, Complex w) {
  return rho_jet(family, z, w, 1).value().real();
}

int param_count(const FamilyDescriptor& family) {
  return family.kind == FamilyKind::CartanMu ? 4 : 3;
}

namespace {

double require_tube_level(double level) {
  if (!(level > 0))
    throw std::invalid_argument("tube families need a level > 0 (eps^2)");
  return std::sqrt(level);
}

}  // namespace

SurfacePoint point_from_params(const FamilyDescriptor& family, double level,
                               std::span<const double> params) {
  if (static_cast<int>(params.size()) != param_count(family))
    throw std::invalid_argument("point_from_params: wrong parameter count");

  SurfacePoint p;
  p.param.assign(params.begin(), params.end());
  switch (family.kind) {
    case FamilyKind::FlatTube: {
      // params: theta, Re z, Re w
      const double eps = require_tube_level(level);
      p.z = Complex(params[1], eps * std::cos(params[0]));
      p.w = Complex(params[2], eps * std::sin(params[0]));
      break;
    }
    case FamilyKind::LogTube: {
      // params: theta, arg z, arg w
      const double eps = require_tube_level(level);
      p.z = std::polar(std::exp(eps * std::cos(params[0])), params[1]);
      p.w = std::polar(std::exp(eps * std::sin(params[0])), params[2]);
      break;
    }
    case FamilyKind::Sphere: {
      // params: t in [0, pi/2], arg z, arg w; exact at level 0
      const double r = family.radius;
      p.z = std::polar(r * std::cos(params[0]), params[1]);
      p.w = std::polar(r * std::sin(params[0]), params[2]);
      if (level != 0.0) {
        SurfacePoint q = project_to_level(family, level, p.z, p.w);
        q.param = p.param;
        return q;
      }
      break;
    }
    case FamilyKind::Ellipsoid: {
      // params: hyperspherical chi, theta, phi; then a Newton polish
      const double chi = params[0], th = params[1], ph = params[2];
      const double u0 = std::cos(chi);
      const double u1 = std::sin(chi) * std::cos(th);
      const double u2 = std::sin(chi) * std::sin(th) * std::cos(ph);
      const double u3 = std::sin(chi) * std::sin(th) * std::sin(ph);
      const Complex z0(u0 / std::sqrt(family.ell[0]),
                       u1 / std::sqrt(family.ell[1]));
      const Complex w0(u2 / std::sqrt(family.ell[2]),
                       u3 / std::sqrt(family.ell[3]));
      SurfacePoint q = project_to_level(family, level, z0, w0);
      q.param = p.param;
      return q;
    }
    case FamilyKind::CartanMu: {
      const Complex z0(params[0], params[1]);
      const Complex w0(params[2], params[3]);
      SurfacePoint q = project_to_level(family, level, z0, w0);
      q.param = p.param;
      return q;
    }
  }
  p.residual = rho_value(family, p.z, p.w) - level;
  return p;
}

std::vector<SurfacePoint> sample_points(const FamilyDescriptor& family,
                                        double level, int count,
                                        std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_points: count >= 1");
  std::vector<SurfacePoint> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    SplitMix64 g = point_stream(seed, static_cast<std::uint64_t>(i));
    std::vector<double> ps;
    switch (family.kind) {
      case FamilyKind::FlatTube:
        ps = {g.uniform(0, kTwoPi), g.uniform(-std::numbers::pi, std::numbers::pi),
              g.uniform(-std::numbers::pi, std::numbers::pi)};
        break;
      case FamilyKind::LogTube:
        ps = {g.uniform(0, kTwoPi), g.uniform(0, kTwoPi), g.uniform(0, kTwoPi)};
        break;
      case FamilyKind::Sphere:
        ps = {g.uniform(0, std::numbers::pi / 2), g.uniform(0, kTwoPi),
              g.uniform(0, kTwoPi)};
        break;
      case FamilyKind::Ellipsoid:
        ps = {g.uniform(0, std::numbers::pi), g.uniform(0, std::numbers::pi),
              g.uniform(0, kTwoPi)};
        break;
      case FamilyKind::CartanMu: {
        // Draw starts in a box sized to the surface scale and project;
        // rejection-retry on the rare non-convergent start.
        const double t = std::sqrt((family.alpha - 1) / (family.alpha + 1));
        const double box = 2.0 * t + 0.5;
        for (int attempt = 0;; ++attempt) {
          if (attempt > 200)
            throw std::runtime_error(
                "sample_points: cartan-mu projection kept failing");
          ps = {g.uniform(-box, box), g.uniform(-box, box),
                g.uniform(-box, box), g.uniform(-box, box)};
          try {
            out.push_back(point_from_params(family, level, ps));
          } catch (const std::exception&) {
            continue;
          }
          break;
        }
        continue;
      }
    }
    out.push_back(point_from_params(family, level, ps));
  }
  return out;
}

SurfacePoint project_to_level(const FamilyDescriptor& family, double level,
                              Complex z, Complex w, double tol, int max_iter) {
  double resid = rho_value(family, z, w) - level;
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(resid) <= tol) {
      SurfacePoint p;
      p.z = z;
      p.w = w;
      p.residual = resid;
      return p;
    }
    const Jet r = rho_jet(family, z, w, 1);
    const Complex rz = pderiv(r, Var::Z).value();
    const Complex rw = pderiv(r, Var::W).value();
    const double grad2 = std::norm(rz) + std::norm(rw);
    if (grad2 < 1e-24) {
      std::ostringstream os;
      os << "project_to_level: vanishing gradient at (z=" << z << ", w=" << w
         << ")";
      throw std::domain_error(os.str());
    }
    // Step along (rho_zbar, rho_wbar) = (conj rz, conj rw); the first-order
    // change of rho is then 2*lambda*|grad|^2.
    const double lambda = -resid / (2.0 * grad2);
    z += lambda * std::conj(rz);
    w += lambda * std::conj(rw);
    resid = rho_value(family, z, w) - level;
  }
  std::ostringstream os;
  os << "project_to_level: no convergence after " << max_iter
     << " iterations (|rho - level| = " << std::abs(resid) << ")";
  throw std::runtime_error(os.str());
}

}  // namespace crtool
