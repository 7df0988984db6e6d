#include "crtool/invariants.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace crtool {

std::pair<Jet, Jet> tangent_field(const Jet& rho) {
  if (rho.degree() < 2)
    throw std::invalid_argument("tangent_field: rho degree must be >= 2");
  return {-pderiv(rho, Var::W), pderiv(rho, Var::Z)};
}

Jet lbar_apply(const Jet& g, const Jet& rho) {
  if (g.degree() < 1)
    throw std::invalid_argument("lbar_apply: g needs degree >= 1");
  if (rho.degree() < g.degree() + 1)
    throw std::invalid_argument(
        "lbar_apply: rho degree must exceed g degree (insufficient depth)");
  const int d = g.degree() - 1;
  const Jet rzbar = truncated(pderiv(rho, Var::Zeta), d);
  const Jet rwbar = truncated(pderiv(rho, Var::Omega), d);
  return rzbar * pderiv(g, Var::Omega) - rwbar * pderiv(g, Var::Zeta);
}

double levi_form(const Jet& rho) {
  if (rho.degree() < 2)
    throw std::invalid_argument("levi_form: rho degree must be >= 2");
  const Complex rzz = pderiv(pderiv(rho, Var::Z), Var::Zeta).value();
  const Complex rzw = pderiv(pderiv(rho, Var::Z), Var::Omega).value();
  const Complex rwz = pderiv(pderiv(rho, Var::W), Var::Zeta).value();
  const Complex rww = pderiv(pderiv(rho, Var::W), Var::Omega).value();
  const Complex l1 = -pderiv(rho, Var::W).value();
  const Complex l2 = pderiv(rho, Var::Z).value();
  const Complex levi = rzz * l1 * std::conj(l1) + rzw * l1 * std::conj(l2) +
                       rwz * l2 * std::conj(l1) + rww * l2 * std::conj(l2);
  return levi.real();
}

Jet hessian_form(const Jet& rho) {
  if (rho.degree() < 2)
    throw std::invalid_argument("hessian_form: rho degree must be >= 2");
  const int d = rho.degree() - 2;
  const Jet rzz = pderiv(pderiv(rho, Var::Z), Var::Z);
  const Jet rzw = pderiv(pderiv(rho, Var::Z), Var::W);
  const Jet rww = pderiv(pderiv(rho, Var::W), Var::W);
  const Jet l1 = truncated(-pderiv(rho, Var::W), d);
  const Jet l2 = truncated(pderiv(rho, Var::Z), d);
  return rzz * (l1 * l1) + 2.0 * (rzw * (l1 * l2)) + rww * (l2 * l2);
}

CRFrame cr_frame(const FamilyDescriptor& family, Complex z, Complex w,
                 int degree) {
  const Jet rho = rho_jet(family, z, w, degree);
  CRFrame f;
  f.rho = rho.value().real();
  f.grad = {pderiv(rho, Var::Z).value(), pderiv(rho, Var::W).value(),
            pderiv(rho, Var::Zeta).value(), pderiv(rho, Var::Omega).value()};
  f.l_coeffs = {-f.grad[1], f.grad[0]};
  f.levi = levi_form(rho);
  f.hess_ll = hessian_form(rho).value();
  return f;
}

namespace {

// Row generator jets at one degree below rho (the hessian row two below);
// each admits four exact Lbar applications when rho has degree >= 6.
std::array<Jet, 5> row_generators(const Jet& rho) {
  const Jet rz = pderiv(rho, Var::Z);
  const Jet rw = pderiv(rho, Var::W);
  const Jet rw2 = rw * rw;
  const Jet rz2 = rz * rz;
  return {rw2 * rw, rz * rw2, rz2 * rw, rz2 * rz, hessian_form(rho)};
}

}  // namespace

A3Matrix a3_matrix(const FamilyDescriptor& family, Complex z, Complex w,
                   int degree) {
  if (degree < 6)
    throw std::invalid_argument(
        "a3_matrix: degree >= 6 required for four Lbar applications");
  const Jet rho = rho_jet(family, z, w, degree);
  A3Matrix m;
  m.point.z = z;
  m.point.w = w;
  auto gens = row_generators(rho);
  for (int r = 0; r < 5; ++r) {
    Jet cur = gens[r];
    m.row_generators[r] = cur.value();
    m.entries[5 * r + 0] = cur.value();
    for (int k = 1; k <= 4; ++k) {
      cur = lbar_apply(cur, rho);
      m.entries[5 * r + k] = cur.value();
    }
  }
  return m;
}

Complex lu_determinant(std::span<Complex> a, int n) {
  Complex det = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(a[col * n + col]);
    for (int r = col + 1; r < n; ++r) {
      const double v = std::abs(a[r * n + col]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(a[piv * n + c], a[col * n + c]);
      det = -det;
    }
    det *= a[col * n + col];
    for (int r = col + 1; r < n; ++r) {
      const Complex f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (int c = col + 1; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
    }
  }
  return det;
}

Complex det_a3(const A3Matrix& m) {
  std::array<Complex, 25> a = m.entries;
  return lu_determinant(a, 5);
}

double normalized_residual(const A3Matrix& m) {
  double norms = 1.0;
  for (int r = 0; r < 5; ++r) {
    double s = 0.0;
    for (int c = 0; c < 5; ++c) s += std::norm(m.entries[5 * r + c]);
    if (s == 0.0) return 0.0;
    norms *= std::sqrt(s);
  }
  return std::abs(det_a3(m)) / norms;
}

BMatrix b_matrix(const FamilyDescriptor& family, Complex z, Complex w,
                 int degree) {
  if (family.kind != FamilyKind::FlatTube)
    throw std::invalid_argument("b_matrix: defined for the flat tube only");
  const A3Matrix a3 = a3_matrix(family, z, w, degree);
  BMatrix b;
  b.point = a3.point;
  for (int r = 0; r < 4; ++r)
    for (int k = 0; k < 4; ++k) b.entries[4 * r + k] = a3.at(r, k + 1);
  return b;
}

Complex det_b(const BMatrix& m) {
  std::array<Complex, 16> a = m.entries;
  return lu_determinant(a, 4);
}

double reduction_check(const FamilyDescriptor& family, Complex z, Complex w,
                       int degree) {
  const A3Matrix a3 = a3_matrix(family, z, w, degree);
  const BMatrix b = b_matrix(family, z, w, degree);
  const Complex da = det_a3(a3);
  const Complex db = det_b(b);
  const double rho = rho_value(family, z, w);
  if (da == 0.0) return std::abs(0.5 * rho * db);
  return std::abs(da - 0.5 * rho * db) / std::abs(da);
}

double monge_ampere_sqrt(const FamilyDescriptor& family, Complex z, Complex w,
                         int degree) {
  const Jet rho = rho_jet(family, z, w, degree);
  if (!(rho.value().real() > 0.0)) {
    std::ostringstream os;
    os << "monge_ampere_sqrt: rho(" << z << ", " << w << ") = "
       << rho.value().real() << " is not positive (sqrt not smooth there)";
    throw std::domain_error(os.str());
  }
  const Jet s = sqrt(rho);
  const Jet sz = pderiv(s, Var::Z);
  const Jet sw = pderiv(s, Var::W);
  const Complex h00 = pderiv(sz, Var::Zeta).value();
  const Complex h01 = pderiv(sz, Var::Omega).value();
  const Complex h10 = pderiv(sw, Var::Zeta).value();
  const Complex h11 = pderiv(sw, Var::Omega).value();
  return std::abs(h00 * h11 - h01 * h10);
}

}  // namespace crtool
