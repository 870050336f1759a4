// Finitely supported Laurent polynomials in several variables over Q(eps_N),
// plus the truncated two-sided Laurent series used for region expansions.
#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tva/cyclotomic.hpp"

namespace tva {

using Expo = std::vector<int>;  // one exponent slot per variable

// ---------------------------------------------------------------------------
// LaurentPoly: map exponent-vector -> Cyclo, no stored zeros.
// ---------------------------------------------------------------------------
struct LaurentPoly {
  int nvars = 0;
  int order = 1;  // cyclotomic order N of the coefficient field
  std::map<Expo, Cyclo> terms;

  LaurentPoly() = default;
  LaurentPoly(int nv, int n) : nvars(nv), order(n) {}

  static LaurentPoly zero(int nv, int n) { return LaurentPoly(nv, n); }
  static LaurentPoly constant(int nv, int n, const Cyclo& c) {
    LaurentPoly p(nv, n);
    if (!c.is_zero()) p.terms[Expo(static_cast<std::size_t>(nv), 0)] = c;
    return p;
  }
  // c * z_i^e
  static LaurentPoly monomial(int nv, int n, int var, int e, const Cyclo& c) {
    LaurentPoly p(nv, n);
    if (!c.is_zero()) {
      Expo ex(static_cast<std::size_t>(nv), 0);
      ex[static_cast<std::size_t>(var)] = e;
      p.terms[ex] = c;
    }
    return p;
  }

  bool is_zero() const { return terms.empty(); }

  void add_term(const Expo& e, const Cyclo& c) {
    if (c.is_zero()) return;
    auto it = terms.find(e);
    if (it == terms.end()) {
      terms.emplace(e, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }

  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    check_compat(a, b);
    LaurentPoly out = a;
    for (const auto& [e, c] : b.terms) out.add_term(e, c);
    return out;
  }
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
    check_compat(a, b);
    LaurentPoly out = a;
    for (const auto& [e, c] : b.terms) out.add_term(e, -c);
    return out;
  }
  LaurentPoly operator-() const {
    LaurentPoly out(nvars, order);
    for (const auto& [e, c] : terms) out.terms.emplace(e, -c);
    return out;
  }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    check_compat(a, b);
    LaurentPoly out(a.nvars, std::max(a.order, b.order));
    for (const auto& [ea, ca] : a.terms)
      for (const auto& [eb, cb] : b.terms) {
        Expo e = ea;
        for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
        out.add_term(e, ca * cb);
      }
    return out;
  }
  LaurentPoly scaled(const Cyclo& c) const {
    LaurentPoly out(nvars, order);
    if (c.is_zero()) return out;
    for (const auto& [e, k] : terms) out.add_term(e, k * c);
    return out;
  }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return (a - b).is_zero();
  }
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

  int min_exponent(int var) const {
    if (terms.empty()) return 0;
    int m = terms.begin()->first[static_cast<std::size_t>(var)];
    for (const auto& [e, c] : terms) m = std::min(m, e[static_cast<std::size_t>(var)]);
    return m;
  }
  int max_exponent(int var) const {
    if (terms.empty()) return 0;
    int m = terms.begin()->first[static_cast<std::size_t>(var)];
    for (const auto& [e, c] : terms) m = std::max(m, e[static_cast<std::size_t>(var)]);
    return m;
  }

  // Multiply by z_var^shift.
  LaurentPoly shifted(int var, int shift) const {
    LaurentPoly out(nvars, order);
    for (const auto& [e, c] : terms) {
      Expo e2 = e;
      e2[static_cast<std::size_t>(var)] += shift;
      out.terms.emplace(e2, c);
    }
    return out;
  }

  // Substitute z_i := eps^k * z_j (i != j); used for divisibility tests.
  LaurentPoly subst_var_root(int i, int j, int k) const {
    LaurentPoly out(nvars, order);
    for (const auto& [e, c] : terms) {
      int ei = e[static_cast<std::size_t>(i)];
      Expo e2 = e;
      e2[static_cast<std::size_t>(i)] = 0;
      e2[static_cast<std::size_t>(j)] += ei;
      out.add_term(e2, c * Cyclo::eps_pow(order, static_cast<long>(k) * ei));
    }
    return out;
  }

  // Substitute z_var := 0.  Requires min exponent >= 0 in that variable.
  LaurentPoly subst_zero(int var) const {
    LaurentPoly out(nvars, order);
    for (const auto& [e, c] : terms) {
      int ev = e[static_cast<std::size_t>(var)];
      if (ev < 0) throw std::domain_error("substituting 0 into a negative power");
      if (ev == 0) out.add_term(e, c);
    }
    return out;
  }

  // z_var -> eps^k z_var.
  LaurentPoly twist(int var, int k) const {
    LaurentPoly out(nvars, order);
    for (const auto& [e, c] : terms)
      out.add_term(e, c * Cyclo::eps_pow(order, static_cast<long>(k) * e[static_cast<std::size_t>(var)]));
    return out;
  }

  // Divided-power derivative (1/n!) d^n/dz_var^n.
  LaurentPoly dpow(int var, int n) const {
    LaurentPoly out = *this;
    for (int s = 0; s < n; ++s) {
      LaurentPoly next(nvars, order);
      for (const auto& [e, c] : out.terms) {
        int ev = e[static_cast<std::size_t>(var)];
        if (ev == 0) continue;
        Expo e2 = e;
        e2[static_cast<std::size_t>(var)] -= 1;
        next.add_term(e2, c * Cyclo(order, Rational(ev)));
      }
      out = next;
    }
    if (n > 1) {
      Rational fact(1);
      for (int s = 2; s <= n; ++s) fact *= s;
      out = out.scaled(Cyclo(order, Rational(1) / fact));
    }
    return out;
  }

  // Exact division by the monic linear factor z_i - eps^k z_j (i != j).
  // Returns false if not divisible.  Negative exponents in z_i are first
  // cleared by the caller (requires min_exponent(i) >= 0).
  bool divide_linear(int i, int j, int k, LaurentPoly* quotient) const {
    if (is_zero()) {
      *quotient = LaurentPoly(nvars, order);
      return true;
    }
    if (min_exponent(i) < 0) throw std::domain_error("divide_linear needs polynomial exponents in the main variable");
    // Collect coefficients of powers of z_i.
    int deg = max_exponent(i);
    std::vector<LaurentPoly> coef(static_cast<std::size_t>(deg) + 1, LaurentPoly(nvars, order));
    for (const auto& [e, c] : terms) {
      Expo e2 = e;
      int ei = e2[static_cast<std::size_t>(i)];
      e2[static_cast<std::size_t>(i)] = 0;
      coef[static_cast<std::size_t>(ei)].add_term(e2, c);
    }
    // Synthetic division by (z_i - r) with r = eps^k z_j.
    Cyclo eps = Cyclo::eps_pow(order, k);
    std::vector<LaurentPoly> q(static_cast<std::size_t>(std::max(deg, 1)), LaurentPoly(nvars, order));
    LaurentPoly carry(nvars, order);
    for (int d = deg; d >= 1; --d) {
      LaurentPoly qd = coef[static_cast<std::size_t>(d)] + carry;
      q[static_cast<std::size_t>(d - 1)] = qd;
      carry = qd.shifted(j, 1).scaled(eps);  // r * q_d
    }
    LaurentPoly rem = coef[0] + carry;
    if (!rem.is_zero()) return false;
    LaurentPoly out(nvars, order);
    for (int d = 0; d < deg; ++d)
      out = out + q[static_cast<std::size_t>(d)].shifted(i, d);
    *quotient = out;
    return true;
  }

  // Evaluate at a full point (one Cyclo per variable); negative exponents use
  // field inverses.  Point entries must be nonzero wherever needed.
  Cyclo evaluate(const std::vector<Cyclo>& point) const {
    Cyclo acc = Cyclo::zero(order);
    for (const auto& [e, c] : terms) {
      Cyclo t = c;
      for (std::size_t v = 0; v < e.size(); ++v)
        if (e[v] != 0) t *= point[v].pow(e[v]);
      acc += t;
    }
    return acc;
  }

  std::string to_string(const std::vector<std::string>& names) const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms) {
      if (!first) os << " + ";
      first = false;
      os << "(" << c.to_string() << ")";
      for (std::size_t v = 0; v < e.size(); ++v)
        if (e[v] != 0) os << "*" << names[v] << "^" << e[v];
    }
    return os.str();
  }

 private:
  static void check_compat(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.nvars != b.nvars) throw std::domain_error("variable roster mismatch");
  }
};

// ---------------------------------------------------------------------------
// LaurentSeries: truncated two-sided series with a per-variable symmetric
// exponent window [-C, C] and the region order it was produced under.
// ---------------------------------------------------------------------------
struct LaurentSeries {
  int nvars = 0;
  int order = 1;
  int window = 0;                 // C
  std::vector<int> region;        // permutation of 0..nvars-1, outermost first
  std::map<Expo, Cyclo> terms;

  LaurentSeries() = default;
  LaurentSeries(int nv, int n, int c, std::vector<int> reg)
      : nvars(nv), order(n), window(c), region(std::move(reg)) {}

  bool in_window(const Expo& e) const {
    for (int ev : e)
      if (ev < -window || ev > window) return false;
    return true;
  }

  void add_term(const Expo& e, const Cyclo& c) {
    if (c.is_zero() || !in_window(e)) return;
    auto it = terms.find(e);
    if (it == terms.end()) {
      terms.emplace(e, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }

  static LaurentSeries from_poly(const LaurentPoly& p, int window, std::vector<int> region) {
    LaurentSeries s(p.nvars, p.order, window, std::move(region));
    for (const auto& [e, c] : p.terms) s.add_term(e, c);
    return s;
  }

  friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
    LaurentSeries out = combine_frame(a, b);
    for (const auto& [e, c] : a.terms) out.add_term(e, c);
    for (const auto& [e, c] : b.terms) out.add_term(e, c);
    return out;
  }
  friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) {
    LaurentSeries out = combine_frame(a, b);
    for (const auto& [e, c] : a.terms) out.add_term(e, c);
    for (const auto& [e, c] : b.terms) out.add_term(e, -c);
    return out;
  }
  friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
    LaurentSeries out = combine_frame(a, b);
    for (const auto& [ea, ca] : a.terms)
      for (const auto& [eb, cb] : b.terms) {
        Expo e = ea;
        for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
        out.add_term(e, ca * cb);
      }
    return out;
  }
  LaurentSeries scaled(const Cyclo& c) const {
    LaurentSeries out(nvars, order, window, region);
    if (c.is_zero()) return out;
    for (const auto& [e, k] : terms) out.add_term(e, k * c);
    return out;
  }
  bool is_zero() const { return terms.empty(); }

  // Restrict to a smaller window (used when comparing series whose producers
  // had different truncation budgets).
  LaurentSeries restricted(int new_window) const {
    LaurentSeries out(nvars, order, std::min(window, new_window), region);
    for (const auto& [e, c] : terms)
      if (out.in_window(e)) out.terms.emplace(e, c);
    return out;
  }

  friend bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
    int w = std::min(a.window, b.window);
    return a.restricted(w).terms == b.restricted(w).terms;
  }

  std::string to_string(const std::vector<std::string>& names) const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms) {
      if (!first) os << " + ";
      first = false;
      os << "(" << c.to_string() << ")";
      for (std::size_t v = 0; v < e.size(); ++v)
        if (e[v] != 0) os << "*" << names[v] << "^" << e[v];
    }
    return os.str();
  }

 private:
  static LaurentSeries combine_frame(const LaurentSeries& a, const LaurentSeries& b) {
    if (a.nvars != b.nvars) throw std::domain_error("variable roster mismatch");
    if (!a.region.empty() && !b.region.empty() && a.region != b.region)
      throw std::domain_error("region order mismatch");
    LaurentSeries out(a.nvars, std::max(a.order, b.order), std::min(a.window, b.window),
                      a.region.empty() ? b.region : a.region);
    return out;
  }
};

}  // namespace tva
