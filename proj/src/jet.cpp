#include "crtool/jet.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace crtool {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("jet: " + msg);
}

void require_same_degree(const Jet& a, const Jet& b, const char* op) {
  if (a.degree() != b.degree()) {
    std::ostringstream os;
    os << "jet: degree mismatch in " << op << " (" << a.degree() << " vs "
       << b.degree() << ")";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

namespace detail {
struct JetAccess {
  static std::vector<Complex>& c(Jet& j) { return j.c_; }
  static const std::vector<Complex>& c(const Jet& j) { return j.c_; }
};
}  // namespace detail

using detail::JetAccess;

JetLayout::JetLayout(int degree) : degree_(degree) {
  const int s = degree + 1;
  degree_end_.assign(degree + 1, 0);
  rank_of_packed_.assign(static_cast<std::size_t>(s) * s * s * s, -1);
  for (int t = 0; t <= degree; ++t) {
    for (int a = t; a >= 0; --a)
      for (int b = t - a; b >= 0; --b)
        for (int c = t - a - b; c >= 0; --c) {
          const int d = t - a - b - c;
          std::array<std::uint8_t, 4> m = {
              static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
              static_cast<std::uint8_t>(c), static_cast<std::uint8_t>(d)};
          const auto rank = static_cast<std::int32_t>(exponent_.size());
          exponent_.push_back(m);
          degree_of_.push_back(static_cast<std::uint8_t>(t));
          packed_.push_back(pack(m));
          rank_of_packed_[pack(m)] = rank;
        }
    degree_end_[t] = static_cast<std::int32_t>(exponent_.size());
  }
}

const JetLayout& JetLayout::of(int degree) {
  if (degree < 0 || degree > kMaxDegree)
    fail("degree out of range [0, " + std::to_string(kMaxDegree) + "]");
  static std::array<std::once_flag, kMaxDegree + 1> flags;
  static std::array<std::unique_ptr<const JetLayout>, kMaxDegree + 1> cache;
  std::call_once(flags[degree],
                 [degree] { cache[degree].reset(new JetLayout(degree)); });
  return *cache[degree];
}

Jet::Jet(int degree) : degree_(degree) {
  c_.assign(JetLayout::of(degree).size(), Complex(0.0));
}

Jet Jet::constant(Complex value, int degree) {
  Jet j(degree);
  j.c_[0] = value;
  return j;
}

Jet Jet::variable(Var v, Complex base_value, int degree) {
  if (degree < 1) fail("variable jet needs degree >= 1");
  Jet j(degree);
  j.c_[0] = base_value;
  std::array<std::uint8_t, 4> m{};
  m[static_cast<int>(v)] = 1;
  j.c_[j.layout().rank(m)] = 1.0;
  return j;
}

Complex Jet::coeff(int a, int b, int c, int d) const {
  if (a < 0 || b < 0 || c < 0 || d < 0 || a + b + c + d > degree_)
    fail("coeff: multi-index outside layout");
  return c_[layout().rank({static_cast<std::uint8_t>(a),
                           static_cast<std::uint8_t>(b),
                           static_cast<std::uint8_t>(c),
                           static_cast<std::uint8_t>(d)})];
}

Jet& Jet::operator+=(const Jet& rhs) {
  require_same_degree(*this, rhs, "add");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += rhs.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  require_same_degree(*this, rhs, "sub");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= rhs.c_[i];
  return *this;
}

Jet& Jet::operator*=(Complex s) {
  for (auto& x : c_) x *= s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  require_same_degree(a, b, "mul");
  const int deg = a.degree();
  const JetLayout& lay = a.layout();
  Jet out(deg);
  out.set_base_point(a.base_point()[0], a.base_point()[1]);

  // Exact zeros are common (the defining functions are sparse polynomials in
  // a handful of monomials), so gather nonzeros first. Both lists come out
  // sorted by rank, hence nondecreasing in total degree, which lets the inner
  // loop stop at the truncation boundary.
  struct Term {
    std::int32_t packed;
    int deg;
    Complex c;
  };
  std::vector<Term> ta, tb;
  ta.reserve(a.c_.size());
  tb.reserve(b.c_.size());
  for (int r = 0; r < lay.size(); ++r)
    if (a.c_[r] != 0.0) ta.push_back({lay.packed(r), lay.total_degree(r), a.c_[r]});
  for (int r = 0; r < lay.size(); ++r)
    if (b.c_[r] != 0.0) tb.push_back({lay.packed(r), lay.total_degree(r), b.c_[r]});

  for (const Term& x : ta) {
    const int budget = deg - x.deg;
    for (const Term& y : tb) {
      if (y.deg > budget) break;
      out.c_[lay.rank_of_packed(x.packed + y.packed)] += x.c * y.c;
    }
  }
  return out;
}

Jet truncated(const Jet& a, int degree) {
  if (degree < 0 || degree > a.degree()) fail("truncated: bad target degree");
  Jet out(degree);
  const auto& src = JetAccess::c(a);
  auto& dst = JetAccess::c(out);
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i];
  out.set_base_point(a.base_point()[0], a.base_point()[1]);
  return out;
}

Jet pderiv(const Jet& a, Var v) {
  if (a.degree() < 1) fail("pderiv: degree-0 jet");
  const JetLayout& lay = a.layout();
  const int vi = static_cast<int>(v);
  Jet out(a.degree() - 1);
  const JetLayout& lo = out.layout();
  const auto& src = JetAccess::c(a);
  auto& dst = JetAccess::c(out);
  for (int r = 0; r < lay.size(); ++r) {
    auto m = lay.exponent(r);
    if (m[vi] == 0 || src[r] == 0.0) continue;
    const double e = m[vi];
    --m[vi];
    dst[lo.rank(m)] += e * src[r];
  }
  out.set_base_point(a.base_point()[0], a.base_point()[1]);
  return out;
}

Jet pow(const Jet& a, int n) {
  if (n < 0) fail("pow: negative exponent");
  Jet out = Jet::constant(1.0, a.degree());
  out.set_base_point(a.base_point()[0], a.base_point()[1]);
  for (int i = 0; i < n; ++i) out = out * a;
  return out;
}

namespace {

// f(c + N) = sum_k s[k] N^k with N the nilpotent part, evaluated by Horner.
// s[k] must equal f^(k)(c)/k!; exact to the truncation degree.
Jet apply_series(const Jet& a, std::span<const Complex> s) {
  const int deg = a.degree();
  Jet n = a;
  JetAccess::c(n)[0] = 0.0;
  Jet r = Jet::constant(s[deg], deg);
  for (int k = deg - 1; k >= 0; --k) {
    r = r * n;
    JetAccess::c(r)[0] += s[k];
  }
  r.set_base_point(a.base_point()[0], a.base_point()[1]);
  return r;
}

// log/sqrt branch policy: insist on a positive real constant term.
double positive_real_constant(const Jet& a, const char* op) {
  const Complex c = a.value();
  const bool ok = c.real() > 0.0 && std::abs(c.imag()) <= 1e-12 * c.real();
  if (!ok) {
    std::ostringstream os;
    os << "jet " << op << ": constant term " << c
       << " is not a positive real (base point z=" << a.base_point()[0]
       << ", w=" << a.base_point()[1] << ")";
    throw std::domain_error(os.str());
  }
  return c.real();
}

}  // namespace

Jet exp(const Jet& a) {
  const int deg = a.degree();
  std::vector<Complex> s(deg + 1);
  s[0] = std::exp(a.value());
  for (int k = 1; k <= deg; ++k) s[k] = s[k - 1] / static_cast<double>(k);
  return apply_series(a, s);
}

Jet log(const Jet& a) {
  const double c = positive_real_constant(a, "log");
  const int deg = a.degree();
  std::vector<Complex> s(deg + 1);
  s[0] = std::log(c);
  double ck = 1.0;
  for (int k = 1; k <= deg; ++k) {
    ck *= c;
    s[k] = ((k % 2) ? 1.0 : -1.0) / (k * ck);
  }
  return apply_series(a, s);
}

Jet sqrt(const Jet& a) {
  const double c = positive_real_constant(a, "sqrt");
  const int deg = a.degree();
  std::vector<Complex> s(deg + 1);
  // s[k] = binom(1/2, k) c^(1/2 - k)
  s[0] = std::sqrt(c);
  for (int k = 1; k <= deg; ++k)
    s[k] = s[k - 1] * (0.5 - (k - 1)) / (static_cast<double>(k) * c);
  return apply_series(a, s);
}

}  // namespace crtool
