#pragma once

#include <array>
#include <span>
#include <utility>

#include "crtool/families.hpp"
#include "crtool/jet.hpp"

namespace crtool {

/// First- and second-order CR data of a defining function at a point.
struct CRFrame {
  double rho = 0.0;
  std::array<Complex, 4> grad{};     // rho_z, rho_w, rho_zbar, rho_wbar
  std::array<Complex, 2> l_coeffs{}; // L = l0 d/dz + l1 d/dw = (-rho_w, rho_z)
  double levi = 0.0;                 // Levi form on (L, Lbar)
  Complex hess_ll{};                 // rho_{Z^2}(L, L)
};

CRFrame cr_frame(const FamilyDescriptor& family, Complex z, Complex w,
                 int degree = 4);

/// Jets of the tangent (1,0) field coefficients (L1, L2) = (-rho_w, rho_z).
std::pair<Jet, Jet> tangent_field(const Jet& rho);

/// One application of Lbar = -rho_wbar d/dzeta + rho_zbar d/domega as a
/// derivation on jets; the result degree drops by one. rho must be at least
/// one degree deeper than g so the variable coefficients stay exact.
Jet lbar_apply(const Jet& g, const Jet& rho);

/// Levi form evaluated on (L, Lbar); real for a real defining function.
double levi_form(const Jet& rho);

/// Jet of rho_{Z^2}(L, L) = rho_zz L1^2 + 2 rho_zw L1 L2 + rho_ww L2^2,
/// degree rho.degree() - 2.
Jet hessian_form(const Jet& rho);

/// The 5x5 order-6 umbilical obstruction matrix: rows generated by
/// (rho_w^3, rho_z rho_w^2, rho_z^2 rho_w, rho_z^3, rho_{Z^2}(L,L)), columns
/// by 0..4 applications of Lbar.
struct A3Matrix {
  std::array<Complex, 25> entries{};
  std::array<Complex, 5> row_generators{};
  SurfacePoint point;

  Complex at(int row, int col) const { return entries[5 * row + col]; }
};

A3Matrix a3_matrix(const FamilyDescriptor& family, Complex z, Complex w,
                   int degree = 6);

/// Determinant via LU with partial pivoting.
Complex det_a3(const A3Matrix& m);

/// |det| / product of row norms (Hadamard bound) — a scale-free zero
/// detector in [0, 1]; defined as 0 when a row vanishes.
double normalized_residual(const A3Matrix& m);

/// Flat-tube reduction: the 4x4 matrix of Lbar^k (k = 1..4) applied to the
/// first four row generators. Rejects other families.
struct BMatrix {
  std::array<Complex, 16> entries{};
  SurfacePoint point;

  Complex at(int row, int col) const { return entries[4 * row + col]; }
};

BMatrix b_matrix(const FamilyDescriptor& family, Complex z, Complex w,
                 int degree = 6);
Complex det_b(const BMatrix& m);

/// |det A3 - (rho/2) det B| / |det A3| at the point (flat tube only). On the
/// level set rho = eps^2 this is the eps^2/2 reduction identity.
double reduction_check(const FamilyDescriptor& family, Complex z, Complex w,
                       int degree = 6);

/// |det of the complex Hessian of sqrt(rho)|; zero characterizes the tube
/// solutions of the homogeneous Monge-Ampere equation away from the center.
/// Requires rho(z, w) > 0.
double monge_ampere_sqrt(const FamilyDescriptor& family, Complex z, Complex w,
                         int degree = 6);

/// In-place LU determinant of a dense n x n complex matrix (row-major).
Complex lu_determinant(std::span<Complex> a, int n);

}  // namespace crtool
