#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace crtool {

using Complex = std::complex<double>;

/// The four polarized coordinates. Zeta and Omega stand for conj(z) and
/// conj(w) treated as independent holomorphic variables, so formal
/// differentiation in all four directions is available.
enum class Var : int { Z = 0, W = 1, Zeta = 2, Omega = 3 };

/// Ranked multi-index layout shared by every jet of one degree.
///
/// Ranks enumerate the multi-indices (a,b,c,d) with a+b+c+d <= degree in
/// graded lexicographic order: degree blocks first, lexicographic within a
/// block. Rank 0 is the constant term. Because the order is graded, the
/// leading choose(d+4,4) ranks of a higher-degree layout coincide with the
/// complete layout of degree d, which makes truncation a prefix copy.
class JetLayout {
 public:
  static constexpr int kMaxDegree = 16;

  /// Shared, lazily built, thread-safe layout cache.
  static const JetLayout& of(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exponent_.size()); }
  /// Number of ranks with total degree <= d.
  int size_up_to(int d) const { return degree_end_[d]; }

  const std::array<std::uint8_t, 4>& exponent(int rank) const {
    return exponent_[rank];
  }
  int total_degree(int rank) const { return degree_of_[rank]; }

  /// Rank of an explicit multi-index (must have total degree <= degree()).
  int rank(const std::array<std::uint8_t, 4>& m) const {
    return rank_of_packed_[pack(m)];
  }

  // Packed base-(degree+1) indices: pack(m1) + pack(m2) = pack(m1 + m2)
  // whenever |m1| + |m2| <= degree, which is all the multiply kernel needs.
  std::int32_t packed(int rank) const { return packed_[rank]; }
  int rank_of_packed(std::int32_t p) const { return rank_of_packed_[p]; }

 private:
  explicit JetLayout(int degree);
  std::int32_t pack(const std::array<std::uint8_t, 4>& m) const {
    const std::int32_t s = degree_ + 1;
    return ((m[0] * s + m[1]) * s + m[2]) * s + m[3];
  }

  int degree_;
  std::vector<std::array<std::uint8_t, 4>> exponent_;
  std::vector<std::uint8_t> degree_of_;
  std::vector<std::int32_t> degree_end_;
  std::vector<std::int32_t> packed_;
  std::vector<std::int32_t> rank_of_packed_;
};

namespace detail {
struct JetAccess;
}

/// Truncated Taylor polynomial in the four polarized variables at a base
/// point, with complex coefficients and total degree capped at degree().
///
/// Jets are immutable values; every operation returns a fresh jet and the
/// truncation degree is closed under all of them. The base point is carried
/// for diagnostics only — arithmetic never reads it.
class Jet {
 public:
  /// Zero jet of the given degree (>= 0).
  explicit Jet(int degree);

  static Jet constant(Complex value, int degree);
  /// Coordinate jet: constant term = base_value, unit linear coefficient in
  /// v. Degree must be >= 1 (a degree-0 jet cannot hold the linear part).
  static Jet variable(Var v, Complex base_value, int degree);

  int degree() const { return degree_; }
  const JetLayout& layout() const { return JetLayout::of(degree_); }

  /// Value of the underlying function at the base point (constant term).
  Complex value() const { return c_[0]; }
  Complex coeff(int a, int b, int c, int d) const;
  std::span<const Complex> coeffs() const { return c_; }

  void set_base_point(Complex z0, Complex w0) { base_ = {z0, w0}; }
  const std::array<Complex, 2>& base_point() const { return base_; }

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(Complex s);
  Jet& operator+=(Complex s) { c_[0] += s; return *this; }
  Jet& operator-=(Complex s) { c_[0] -= s; return *this; }

  friend Jet operator+(Jet a, const Jet& b) { a += b; return a; }
  friend Jet operator-(Jet a, const Jet& b) { a -= b; return a; }
  friend Jet operator-(Jet a) { a *= -1.0; return a; }
  friend Jet operator*(Jet a, Complex s) { a *= s; return a; }
  friend Jet operator*(Complex s, Jet a) { a *= s; return a; }
  friend Jet operator*(Jet a, double s) { a *= Complex(s); return a; }
  friend Jet operator*(double s, Jet a) { a *= Complex(s); return a; }
  friend Jet operator+(Jet a, Complex s) { a += s; return a; }
  friend Jet operator+(Complex s, Jet a) { a += s; return a; }
  friend Jet operator-(Jet a, Complex s) { a -= s; return a; }

  /// Truncated Cauchy product; operands must share a degree.
  friend Jet operator*(const Jet& a, const Jet& b);

 private:
  friend struct detail::JetAccess;
  int degree_;
  std::vector<Complex> c_;
  std::array<Complex, 2> base_{};
};

/// Copy of a, truncated to a lower (or equal) degree.
Jet truncated(const Jet& a, int degree);

/// Formal partial derivative; result degree is a.degree() - 1.
/// Degree-0 input is rejected.
Jet pderiv(const Jet& a, Var v);

/// Repeated truncated product, n >= 0.
Jet pow(const Jet& a, int n);

// Analytic functions, exact to the truncation degree. log and sqrt use the
// principal branch and accept only positive real constant terms (the
// hypersurface families guarantee positive moduli there); anything else is
// rejected rather than silently picking a branch.
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);

}  // namespace crtool
