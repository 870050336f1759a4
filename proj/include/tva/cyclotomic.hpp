// Exact arithmetic in the cyclotomic field Q(eps) where eps is a primitive
// N-th root of unity.  Elements are represented by their coefficient vector in
// the power basis 1, x, ..., x^{phi(N)-1} of Q[x]/Phi_N(x), with Phi_N the
// N-th cyclotomic polynomial.  For N in {1,2} this degenerates to a single
// rational number.
#pragma once

#include <cassert>
#include <cstddef>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace tva {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

namespace detail {

// Dense univariate polynomial over Q, little-endian coefficients.
using QPoly = std::vector<Rational>;

inline QPoly qpoly_trim(QPoly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

inline QPoly qpoly_mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return qpoly_trim(out);
}

// Exact division a / b; asserts zero remainder.
inline QPoly qpoly_div_exact(QPoly a, const QPoly& b) {
  a = qpoly_trim(a);
  QPoly bb = qpoly_trim(b);
  if (bb.empty()) throw std::domain_error("division by zero polynomial");
  if (a.empty()) return {};
  QPoly q(a.size() - bb.size() + 1, Rational(0));
  while (a.size() >= bb.size()) {
    Rational c = a.back() / bb.back();
    std::size_t shift = a.size() - bb.size();
    q[shift] = c;
    for (std::size_t i = 0; i < bb.size(); ++i) a[shift + i] -= c * bb[i];
    a = qpoly_trim(a);
    if (a.empty()) break;
    if (a.size() < bb.size()) throw std::domain_error("non-exact polynomial division");
  }
  return qpoly_trim(q);
}

// Remainder of a modulo b (b monic not required).
inline QPoly qpoly_mod(QPoly a, const QPoly& b) {
  a = qpoly_trim(a);
  QPoly bb = qpoly_trim(b);
  while (a.size() >= bb.size() && !a.empty()) {
    Rational c = a.back() / bb.back();
    std::size_t shift = a.size() - bb.size();
    for (std::size_t i = 0; i < bb.size(); ++i) a[shift + i] -= c * bb[i];
    a = qpoly_trim(a);
  }
  return a;
}

// N-th cyclotomic polynomial by the recursion
// Phi_N = (x^N - 1) / prod_{d | N, d < N} Phi_d, cached per order.
inline const QPoly& cyclotomic_poly(int n) {
  static std::map<int, QPoly> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  QPoly xn_minus_1(static_cast<std::size_t>(n) + 1, Rational(0));
  xn_minus_1[0] = -1;
  xn_minus_1[static_cast<std::size_t>(n)] = 1;
  QPoly acc = xn_minus_1;
  for (int d = 1; d < n; ++d)
    if (n % d == 0) acc = qpoly_div_exact(acc, cyclotomic_poly(d));
  return cache.emplace(n, qpoly_trim(acc)).first->second;
}

inline int euler_phi(int n) {
  return static_cast<int>(cyclotomic_poly(n).size()) - 1;
}

// Extended Euclid in Q[x]: returns (g, s, t) with s*a + t*b = g, g monic.
struct XgcdResult {
  QPoly g, s, t;
};
inline XgcdResult qpoly_xgcd(QPoly a, QPoly b) {
  QPoly s0 = {Rational(1)}, s1 = {};
  QPoly t0 = {}, t1 = {Rational(1)};
  a = qpoly_trim(a);
  b = qpoly_trim(b);
  auto sub_mul = [](const QPoly& x, const QPoly& q, const QPoly& y) {
    QPoly qy = qpoly_mul(q, y);
    QPoly out = x;
    if (out.size() < qy.size()) out.resize(qy.size(), Rational(0));
    for (std::size_t i = 0; i < qy.size(); ++i) out[i] -= qy[i];
    return qpoly_trim(out);
  };
  while (!b.empty()) {
    // quotient of a by b
    QPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rational(0));
    QPoly r = a;
    while (r.size() >= b.size() && !r.empty()) {
      Rational c = r.back() / b.back();
      std::size_t shift = r.size() - b.size();
      q[shift] = c;
      for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] -= c * b[i];
      r = qpoly_trim(r);
    }
    QPoly s2 = sub_mul(s0, q, s1);
    QPoly t2 = sub_mul(t0, q, t1);
    a = b;
    b = r;
    s0 = s1; s1 = s2;
    t0 = t1; t1 = t2;
  }
  // make g monic
  if (!a.empty() && a.back() != 1) {
    Rational lead = a.back();
    for (auto& c : a) c /= lead;
    for (auto& c : s0) c /= lead;
    for (auto& c : t0) c /= lead;
  }
  return {a, s0, t0};
}

}  // namespace detail

// An element of Q(eps_N).
class Cyclo {
 public:
  Cyclo() : order_(1), coeff_(1, Rational(0)) {}
  explicit Cyclo(int order) : order_(order), coeff_(static_cast<std::size_t>(detail::euler_phi(order)), Rational(0)) {}
  Cyclo(int order, const Rational& r) : Cyclo(order) { coeff_[0] = r; }
  Cyclo(int order, long v) : Cyclo(order, Rational(v)) {}

  static Cyclo zero(int order) { return Cyclo(order); }
  static Cyclo one(int order) { return Cyclo(order, Rational(1)); }

  // eps^k as an element of Q(eps_N).
  static Cyclo eps_pow(int order, long k) {
    k %= order;
    if (k < 0) k += order;
    Cyclo out(order);
    // x^k reduced mod Phi_N
    detail::QPoly xk(static_cast<std::size_t>(k) + 1, Rational(0));
    xk.back() = 1;
    out.set_from_poly(xk);
    return out;
  }

  int order() const { return order_; }
  int degree() const { return static_cast<int>(coeff_.size()); }
  const std::vector<Rational>& coeffs() const { return coeff_; }

  bool is_zero() const {
    for (const auto& c : coeff_)
      if (c != 0) return false;
    return true;
  }
  bool is_rational() const {
    for (std::size_t i = 1; i < coeff_.size(); ++i)
      if (coeff_[i] != 0) return false;
    return true;
  }
  const Rational& rational_part() const { return coeff_[0]; }

  friend Cyclo operator+(const Cyclo& a, const Cyclo& b) {
    Cyclo r = a.promote_match(b);
    Cyclo s = b.promote_match(a);
    for (std::size_t i = 0; i < r.coeff_.size(); ++i) r.coeff_[i] += s.coeff_[i];
    return r;
  }
  friend Cyclo operator-(const Cyclo& a, const Cyclo& b) { return a + (-b); }
  Cyclo operator-() const {
    Cyclo r = *this;
    for (auto& c : r.coeff_) c = -c;
    return r;
  }
  friend Cyclo operator*(const Cyclo& a, const Cyclo& b) {
    Cyclo r = a.promote_match(b);
    Cyclo s = b.promote_match(a);
    detail::QPoly prod = detail::qpoly_mul(r.as_poly(), s.as_poly());
    Cyclo out(r.order_);
    out.set_from_poly(prod);
    return out;
  }
  Cyclo inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero in Q(eps)");
    if (order_ <= 2 || is_rational()) {
      if (rational_part() == 0) throw std::domain_error("inverse of zero in Q(eps)");
      Cyclo out(order_);
      out.coeff_[0] = Rational(1) / rational_part();
      return out;
    }
    auto x = detail::qpoly_xgcd(as_poly(), detail::cyclotomic_poly(order_));
    // gcd must be 1 since Phi_N is irreducible over Q
    assert(x.g.size() == 1 && x.g[0] == 1);
    Cyclo out(order_);
    out.set_from_poly(x.s);
    return out;
  }
  friend Cyclo operator/(const Cyclo& a, const Cyclo& b) { return a * b.inverse(); }

  Cyclo& operator+=(const Cyclo& b) { return *this = *this + b; }
  Cyclo& operator-=(const Cyclo& b) { return *this = *this - b; }
  Cyclo& operator*=(const Cyclo& b) { return *this = *this * b; }

  friend bool operator==(const Cyclo& a, const Cyclo& b) { return (a - b).is_zero(); }
  friend bool operator!=(const Cyclo& a, const Cyclo& b) { return !(a == b); }

  // Total order for use as a map key / canonical term ordering.
  friend bool cyclo_less(const Cyclo& a, const Cyclo& b) {
    Cyclo r = a.promote_match(b), s = b.promote_match(a);
    return r.coeff_ < s.coeff_;
  }

  // Integer power (k may be negative).
  Cyclo pow(long k) const {
    if (k < 0) return inverse().pow(-k);
    Cyclo acc = Cyclo::one(order_);
    Cyclo base = *this;
    while (k > 0) {
      if (k & 1) acc *= base;
      base *= base;
      k >>= 1;
    }
    return acc;
  }

  // Renders as `p/q` or a sum of `p/q eps^k` terms over the power basis.
  std::string to_string() const {
    std::ostringstream os;
    bool any = false;
    for (std::size_t i = 0; i < coeff_.size(); ++i) {
      if (coeff_[i] == 0) continue;
      if (any) os << (coeff_[i] > 0 ? " + " : " - ");
      else if (coeff_[i] < 0) os << "-";
      Rational mag = boost::multiprecision::abs(coeff_[i]);
      if (mag != 1 || i == 0) os << mag;
      if (i > 0) {
        if (mag != 1) os << "*";
        os << "eps";
        if (i > 1) os << "^" << i;
      }
      any = true;
    }
    if (!any) os << "0";
    return os.str();
  }

 private:
  detail::QPoly as_poly() const {
    return detail::qpoly_trim(detail::QPoly(coeff_.begin(), coeff_.end()));
  }
  void set_from_poly(const detail::QPoly& p) {
    detail::QPoly r = detail::qpoly_mod(p, detail::cyclotomic_poly(order_));
    std::fill(coeff_.begin(), coeff_.end(), Rational(0));
    for (std::size_t i = 0; i < r.size(); ++i) coeff_[i] = r[i];
  }
  // Promote an order-1/order-2 (purely rational) value to a common order so
  // that mixed-order arithmetic on rationals works; genuinely different
  // cyclotomic orders are a caller error.
  Cyclo promote_match(const Cyclo& other) const {
    if (order_ == other.order_) return *this;
    if (is_rational()) {
      Cyclo out(other.order_);
      out.coeff_[0] = coeff_[0];
      return out;
    }
    if (other.is_rational()) return *this;
    throw std::domain_error("mixed cyclotomic orders");
  }

  int order_;
  std::vector<Rational> coeff_;  // length phi(order_)
};

}  // namespace tva
