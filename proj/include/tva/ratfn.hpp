// Exact rational functions in variables z_1..z_k over Q(eps_N) whose
// denominators are restricted to the pole set { z_i } and
// { z_i - eps^k z_j : i < j }.  Provides normalization, arithmetic, region
// expansions (|z_a| >> |z_b| >> ...), Laurent expansion along a diagonal
// z_i = eps^k z_j, residues, twist/derivative actions and mixed log
// derivatives.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "tva/laurent.hpp"

namespace tva {

// A monic denominator factor: j < 0 means the factor z_i, otherwise the
// factor z_i - eps^k z_j with i < j enforced by make().
struct PoleFactor {
  int i = 0;
  int j = -1;
  int k = 0;

  bool is_var() const { return j < 0; }

  friend bool operator<(const PoleFactor& a, const PoleFactor& b) {
    // Var factors sort before Lin factors; Lin factors by (i, j, k).
    return std::tuple(!a.is_var(), a.i, a.j, a.k) < std::tuple(!b.is_var(), b.i, b.j, b.k);
  }
  friend bool operator==(const PoleFactor& a, const PoleFactor& b) {
    return a.i == b.i && a.j == b.j && a.k == b.k;
  }

  static PoleFactor var(int i) { return {i, -1, 0}; }

  // Canonicalize the factor z_i - eps^k z_j.  If i > j it is rewritten as
  // -eps^k (z_j - eps^{N-k} z_i); the returned unit u satisfies
  //   (z_i - eps^k z_j) = u * canonical_factor.
  static std::pair<PoleFactor, Cyclo> lin(int i, int j, int k, int order) {
    k %= order;
    if (k < 0) k += order;
    if (i < j) return {{i, j, k}, Cyclo::one(order)};
    if (i == j) throw std::domain_error("degenerate pole factor");
    int k2 = (order - k) % order;
    return {{j, i, k2}, -Cyclo::eps_pow(order, k)};
  }

  LaurentPoly as_poly(int nvars, int order) const {
    if (is_var()) return LaurentPoly::monomial(nvars, order, i, 1, Cyclo::one(order));
    LaurentPoly p = LaurentPoly::monomial(nvars, order, i, 1, Cyclo::one(order));
    p.add_term([&] { Expo e(static_cast<std::size_t>(nvars), 0); e[static_cast<std::size_t>(j)] = 1; return e; }(),
               -Cyclo::eps_pow(order, k));
    return p;
  }
};

class RatFn {
 public:
  RatFn() = default;
  RatFn(int nvars, int order) : nvars_(nvars), order_(order), num_(nvars, order) {}
  RatFn(LaurentPoly num, std::vector<PoleFactor> den)
      : nvars_(num.nvars), order_(num.order), num_(std::move(num)), den_(std::move(den)) {
    normalize();
  }

  static RatFn zero(int nvars, int order) { return RatFn(nvars, order); }
  static RatFn constant(int nvars, int order, const Cyclo& c) {
    return RatFn(LaurentPoly::constant(nvars, order, c), {});
  }
  static RatFn one(int nvars, int order) { return constant(nvars, order, Cyclo::one(order)); }
  static RatFn from_poly(LaurentPoly p) { return RatFn(std::move(p), {}); }
  // z_var
  static RatFn variable(int nvars, int order, int var) {
    return RatFn(LaurentPoly::monomial(nvars, order, var, 1, Cyclo::one(order)), {});
  }
  // z_i - eps^k z_j as a polynomial
  static RatFn linear(int nvars, int order, int i, int j, int k) {
    auto [pf, unit] = PoleFactor::lin(i, j, k, order);
    return from_poly(pf.as_poly(nvars, order).scaled(unit));
  }
  // 1 / (z_i - eps^k z_j)
  static RatFn inv_linear(int nvars, int order, int i, int j, int k) {
    auto [pf, unit] = PoleFactor::lin(i, j, k, order);
    return RatFn(LaurentPoly::constant(nvars, order, unit.inverse()), {pf});
  }

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  const LaurentPoly& num() const { return num_; }
  const std::vector<PoleFactor>& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const {
    return den_.empty() &&
           (num_.is_zero() ||
            (num_.terms.size() == 1 && num_.terms.begin()->first == Expo(static_cast<std::size_t>(nvars_), 0)));
  }
  Cyclo constant_value() const {
    if (num_.is_zero()) return Cyclo::zero(order_);
    if (!is_constant()) throw std::domain_error("not a constant");
    return num_.terms.begin()->second;
  }

  // No z_var pole at 0 and the numerator is polynomial in z_var (true by
  // normal form): membership in F^{+, z_var}.
  bool regular_at_zero(int var) const {
    for (const auto& f : den_)
      if (f.is_var() && f.i == var) return false;
    return true;
  }

  friend RatFn operator+(const RatFn& a, const RatFn& b) {
    check_compat(a, b);
    // common denominator: multiset max of the two denominators
    std::vector<PoleFactor> common = multiset_union(a.den_, b.den_);
    LaurentPoly na = a.num_ * missing_product(common, a.den_, a.nvars_, a.order_);
    LaurentPoly nb = b.num_ * missing_product(common, b.den_, a.nvars_, a.order_);
    return RatFn(na + nb, common);
  }
  friend RatFn operator-(const RatFn& a, const RatFn& b) { return a + (-b); }
  RatFn operator-() const {
    RatFn out = *this;
    out.num_ = -out.num_;
    return out;
  }
  friend RatFn operator*(const RatFn& a, const RatFn& b) {
    check_compat(a, b);
    std::vector<PoleFactor> den = a.den_;
    den.insert(den.end(), b.den_.begin(), b.den_.end());
    std::sort(den.begin(), den.end());
    return RatFn(a.num_ * b.num_, den);
  }
  RatFn scaled(const Cyclo& c) const {
    if (c.is_zero()) return zero(nvars_, order_);
    RatFn out = *this;
    out.num_ = out.num_.scaled(c);
    return out;
  }
  RatFn& operator+=(const RatFn& b) { return *this = *this + b; }
  RatFn& operator-=(const RatFn& b) { return *this = *this - b; }
  RatFn& operator*=(const RatFn& b) { return *this = *this * b; }

  friend bool operator==(const RatFn& a, const RatFn& b) { return (a - b).is_zero(); }
  friend bool operator!=(const RatFn& a, const RatFn& b) { return !(a == b); }

  // Multiplicative inverse; requires the numerator to factor over the pole
  // set (monomial times linear factors).
  RatFn inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero rational function");
    auto fac = factor_numerator();
    if (!fac) throw std::domain_error("numerator does not factor over the admissible pole set");
    auto [unit, mono, lins] = *fac;
    LaurentPoly newnum = LaurentPoly::constant(nvars_, order_, unit.inverse());
    for (const auto& f : den_) newnum = newnum * f.as_poly(nvars_, order_);
    std::vector<PoleFactor> newden;
    // monomial part: positive exponents become Var pole factors, negative
    // exponents multiply the numerator
    for (int v = 0; v < nvars_; ++v) {
      int e = mono[static_cast<std::size_t>(v)];
      for (int s = 0; s < e; ++s) newden.push_back(PoleFactor::var(v));
      if (e < 0) newnum = newnum.shifted(v, -e);
    }
    newden.insert(newden.end(), lins.begin(), lins.end());
    std::sort(newden.begin(), newden.end());
    return RatFn(std::move(newnum), std::move(newden));
  }

  RatFn pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    RatFn acc = one(nvars_, order_);
    RatFn base = *this;
    while (e > 0) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }

  // Factor the numerator as unit * prod z_v^{mono_v} * prod linear-factors.
  // Returns nullopt when a non-factorable part remains.
  std::optional<std::tuple<Cyclo, Expo, std::vector<PoleFactor>>> factor_numerator() const {
    if (is_zero()) return std::nullopt;
    LaurentPoly p = num_;
    Expo mono(static_cast<std::size_t>(nvars_), 0);
    for (int v = 0; v < nvars_; ++v) {
      int m = p.min_exponent(v);
      if (m != 0) {
        mono[static_cast<std::size_t>(v)] = m;
        p = p.shifted(v, -m);
      }
    }
    std::vector<PoleFactor> lins;
    bool progress = true;
    while (progress && p.terms.size() > 1) {
      progress = false;
      for (int i = 0; i < nvars_ && !progress; ++i)
        for (int j = i + 1; j < nvars_ && !progress; ++j)
          for (int k = 0; k < order_ && !progress; ++k) {
            if (!p.subst_var_root(i, j, k).is_zero()) continue;
            LaurentPoly q;
            if (p.divide_linear(i, j, k, &q)) {
              p = q;
              lins.push_back(PoleFactor{i, j, k});
              // dividing may expose a new monomial content
              for (int v = 0; v < nvars_; ++v) {
                int m = p.min_exponent(v);
                if (m != 0) {
                  mono[static_cast<std::size_t>(v)] += m;
                  p = p.shifted(v, -m);
                }
              }
              progress = true;
            }
          }
    }
    if (p.terms.size() != 1) return std::nullopt;
    const auto& [e, c] = *p.terms.begin();
    Expo mono2 = mono;
    for (std::size_t v = 0; v < mono2.size(); ++v) mono2[v] += e[v];
    std::sort(lins.begin(), lins.end());
    return std::tuple(c, mono2, lins);
  }

  // --- Hopf-operator actions on a single variable ---------------------------

  // z_var -> eps^k z_var
  RatFn twist(int var, int k) const {
    k %= order_;
    if (k < 0) k += order_;
    LaurentPoly n = num_.twist(var, k);
    std::vector<PoleFactor> den;
    Cyclo unit = Cyclo::one(order_);
    for (const auto& f : den_) {
      if (f.is_var()) {
        if (f.i == var) unit *= Cyclo::eps_pow(order_, -k);  // 1/(eps^k z) = eps^{-k}/z
        den.push_back(f);
      } else if (f.i == var) {
        // eps^k z_i - eps^{k'} z_j = eps^k (z_i - eps^{k'-k} z_j)
        auto [pf, u] = PoleFactor::lin(f.i, f.j, f.k - k, order_);
        unit *= (Cyclo::eps_pow(order_, k) * u).inverse();
        den.push_back(pf);
      } else if (f.j == var) {
        auto [pf, u] = PoleFactor::lin(f.i, f.j, f.k + k, order_);
        unit *= u.inverse();
        den.push_back(pf);
      } else {
        den.push_back(f);
      }
    }
    std::sort(den.begin(), den.end());
    return RatFn(n.scaled(unit), den);
  }

  // d/dz_var
  RatFn derivative(int var) const {
    RatFn out(LaurentPoly(num_.dpow(var, 1)), den_);
    for (std::size_t idx = 0; idx < den_.size(); ++idx) {
      const PoleFactor& f = den_[idx];
      // derivative of the factor w.r.t. z_var
      Cyclo d = Cyclo::zero(order_);
      if (f.is_var()) {
        if (f.i == var) d = Cyclo::one(order_);
      } else {
        if (f.i == var) d = Cyclo::one(order_);
        else if (f.j == var) d = -Cyclo::eps_pow(order_, f.k);
      }
      if (d.is_zero()) continue;
      std::vector<PoleFactor> den = den_;
      den.push_back(f);
      std::sort(den.begin(), den.end());
      out += RatFn(num_.scaled(-d), den);
    }
    return out;
  }

  // Divided power D^{(n)} = (1/n!) d^n/dz_var^n
  RatFn dpow(int var, int n) const {
    RatFn out = *this;
    Rational fact(1);
    for (int s = 1; s <= n; ++s) {
      out = out.derivative(var);
      fact *= s;
    }
    return out.scaled(Cyclo(order_, Rational(1) / fact));
  }

  // Substitute z_var := 0.  Requires regularity at z_var = 0.
  RatFn subst_zero(int var) const {
    if (!regular_at_zero(var)) throw std::domain_error("pole at z=0 under specialization");
    LaurentPoly n = num_.subst_zero(var);
    Cyclo unit = Cyclo::one(order_);
    std::vector<PoleFactor> den;
    for (const auto& f : den_) {
      if (f.is_var() || (f.i != var && f.j != var)) {
        den.push_back(f);
      } else if (f.j == var) {
        // z_i - eps^k * 0 = z_i
        den.push_back(PoleFactor::var(f.i));
      } else {
        // 0 - eps^k z_j = -eps^k z_j
        unit *= (-Cyclo::eps_pow(order_, f.k)).inverse();
        den.push_back(PoleFactor::var(f.j));
      }
    }
    std::sort(den.begin(), den.end());
    return RatFn(n.scaled(unit), den);
  }

  // Evaluate at a point; entries must avoid all poles.
  Cyclo evaluate(const std::vector<Cyclo>& point) const {
    Cyclo n = num_.evaluate(point);
    Cyclo d = Cyclo::one(order_);
    for (const auto& f : den_) {
      Cyclo fv = f.is_var() ? point[static_cast<std::size_t>(f.i)]
                            : point[static_cast<std::size_t>(f.i)] -
                                  Cyclo::eps_pow(order_, f.k) * point[static_cast<std::size_t>(f.j)];
      if (fv.is_zero()) throw std::domain_error("evaluation point hits a pole");
      d *= fv;
    }
    return n / d;
  }

  // --- Laurent expansion along the diagonal z_i = eps^k z_j -----------------
  //
  // Returns pairs (l, coefficient) with the coefficient of
  // (z_i - eps^k z_j)^{-l-1}, for l from M-1 (M = pole order) down to
  // -depth-1.  Coefficients are rational functions of the remaining
  // variables (z_i eliminated).
  std::vector<std::pair<int, RatFn>> laurent_at_diagonal(int i, int j, int k, int depth) const {
    k %= order_;
    if (k < 0) k += order_;
    if (i == j) throw std::domain_error("diagonal needs distinct variables");
    auto [match, match_unit] = PoleFactor::lin(i, j, k, order_);
    // (z_i - eps^k z_j) = match_unit * stored_factor, so each stored matching
    // factor equals match_unit^{-1} * t with t = z_i - eps^k z_j.
    int M = 0;
    std::vector<PoleFactor> rest;
    for (const auto& f : den_) {
      if (f == match) ++M;
      else rest.push_back(f);
    }
    int T = M + depth;  // compute the t-series of f * t^M up to degree T
    if (T < 0) return {};
    // t-series with RatFn coefficients
    std::vector<RatFn> series(static_cast<std::size_t>(T + 1), RatFn::zero(nvars_, order_));
    // numerator: substitute z_i = eps^k z_j + t
    {
      Cyclo eps = Cyclo::eps_pow(order_, k);
      for (const auto& [e, c] : num_.terms) {
        int ei = e[static_cast<std::size_t>(i)];
        if (ei < 0) throw std::domain_error("numerator not in polynomial normal form");
        Expo base = e;
        base[static_cast<std::size_t>(i)] = 0;
        // (eps^k z_j + t)^ei
        Rational binom(1);
        for (int p = 0; p <= std::min(ei, T); ++p) {
          if (p > 0) binom = binom * (ei - p + 1) / p;
          Expo e2 = base;
          e2[static_cast<std::size_t>(j)] += ei - p;
          Cyclo coeff = c * Cyclo(order_, binom) * eps.pow(ei - p);
          LaurentPoly lp(nvars_, order_);
          lp.add_term(e2, coeff);
          series[static_cast<std::size_t>(p)] += RatFn::from_poly(std::move(lp));
        }
      }
    }
    // factors that do not involve z_i divide the series at the end
    std::vector<PoleFactor> static_den;
    // multiply by the inverse t-series of each remaining z_i factor
    for (const auto& f : rest) {
      if (f.is_var() ? (f.i != i) : (f.i != i && f.j != i)) {
        static_den.push_back(f);
        continue;
      }
      // After substitution the factor reads c + u*t with c a unit times a
      // single admissible factor and u a unit; 1/(c+u t) = sum (-u)^n t^n / c^{n+1}.
      Cyclo u;                  // coefficient of t
      Cyclo cunit;              // unit part of c
      std::optional<PoleFactor> cfac;  // factor part of c (Var or Lin)
      if (f.is_var()) {
        // z_i = eps^k z_j + t
        u = Cyclo::one(order_);
        cunit = Cyclo::eps_pow(order_, k);
        cfac = PoleFactor::var(j);
      } else if (f.i == i) {
        // eps^k z_j + t - eps^{k'} z_b
        u = Cyclo::one(order_);
        int b = f.j;
        if (b == j) {
          Cyclo c0 = Cyclo::eps_pow(order_, k) - Cyclo::eps_pow(order_, f.k);
          if (c0.is_zero()) throw std::logic_error("unmatched matching factor");
          cunit = c0;
          cfac = PoleFactor::var(j);
        } else {
          auto [pf, cu] = PoleFactor::lin(j, b, f.k - k, order_);
          cunit = Cyclo::eps_pow(order_, k) * cu;
          cfac = pf;
        }
      } else {
        // z_a - eps^{k'} (eps^k z_j + t) = (z_a - eps^{k'+k} z_j) - eps^{k'} t
        int a = f.i;
        u = -Cyclo::eps_pow(order_, f.k);
        if (a == j) {
          Cyclo c0 = Cyclo::one(order_) - Cyclo::eps_pow(order_, f.k + k);
          if (c0.is_zero()) throw std::logic_error("unmatched matching factor");
          cunit = c0;
          cfac = PoleFactor::var(j);
        } else {
          auto [pf, cu] = PoleFactor::lin(a, j, f.k + k, order_);
          cunit = cu;
          cfac = pf;
        }
      }
      // build the inverse series and multiply in
      std::vector<RatFn> inv(static_cast<std::size_t>(T) + 1, RatFn::zero(nvars_, order_));
      for (int n = 0; n <= T; ++n) {
        LaurentPoly numn = LaurentPoly::constant(nvars_, order_, (-u).pow(n) * cunit.pow(-(n + 1)));
        std::vector<PoleFactor> denn(static_cast<std::size_t>(n) + 1, *cfac);
        inv[static_cast<std::size_t>(n)] = RatFn(numn, denn);
      }
      series = mul_tseries(series, inv, T);
    }
    if (!static_den.empty()) {
      RatFn divisor(LaurentPoly::constant(nvars_, order_, Cyclo::one(order_)), static_den);
      for (auto& s : series) s *= divisor;
    }
    // f = (series sum_p t^p) * (match_unit^{-1} t)^{-M}  => coefficient of
    // t^{-l-1} in f is match_unit^{M} * series[M-l-1].
    Cyclo scale = match_unit.pow(M);
    std::vector<std::pair<int, RatFn>> out;
    for (int l = M - 1; l >= -depth - 1; --l) {
      int idx = M - l - 1;
      out.emplace_back(l, series[static_cast<std::size_t>(idx)].scaled(scale));
    }
    return out;
  }

  // Coefficient l = m of the diagonal Laurent expansion:
  // Res_{z_i = eps^k z_j} f * (z_i - eps^k z_j)^m.
  RatFn residue_at(int i, int j, int k, int m) const {
    int depth = std::max(0, -m - 1);
    auto coeffs = laurent_at_diagonal(i, j, k, depth);
    for (const auto& [l, c] : coeffs)
      if (l == m) return c;
    return RatFn::zero(nvars_, order_);
  }

  // Pole order at the diagonal z_i = eps^k z_j (number of matching stored
  // factors; normalization guarantees no hidden cancellation).
  int pole_order(int i, int j, int k) const {
    auto [match, unit] = PoleFactor::lin(i, j, k, order_);
    int M = 0;
    for (const auto& f : den_)
      if (f == match) ++M;
    return M;
  }

  // --- Region expansion -----------------------------------------------------
  //
  // Expansion in the region |z_{region[0]}| >> |z_{region[1]}| >> ... as a
  // truncated two-sided Laurent series with per-variable window [-C, C].
  LaurentSeries expand_region(const std::vector<int>& region_order, int window) const {
    int budget = window * (nvars_ + 1);
    LaurentSeries wide = expand_rec(*this, region_order, budget);
    LaurentSeries out(nvars_, order_, window, region_order);
    for (const auto& [e, c] : wide.terms) out.add_term(e, c);
    return out;
  }

  std::string to_string(const std::vector<std::string>& names) const {
    std::ostringstream os;
    os << "(" << num_.to_string(names) << ")";
    if (!den_.empty()) {
      os << " / (";
      for (std::size_t idx = 0; idx < den_.size(); ++idx) {
        if (idx) os << " * ";
        const auto& f = den_[idx];
        if (f.is_var()) os << names[static_cast<std::size_t>(f.i)];
        else {
          os << "(" << names[static_cast<std::size_t>(f.i)];
          if (f.k == 0) os << " - ";
          else os << " - eps^" << f.k << " ";
          os << names[static_cast<std::size_t>(f.j)] << ")";
        }
      }
      os << ")";
    }
    return os.str();
  }

 private:
  static void check_compat(const RatFn& a, const RatFn& b) {
    if (a.nvars_ != b.nvars_) throw std::domain_error("variable roster mismatch");
  }
  static std::vector<PoleFactor> multiset_union(const std::vector<PoleFactor>& a,
                                                const std::vector<PoleFactor>& b) {
    std::vector<PoleFactor> out;
    std::size_t ia = 0, ib = 0;
    while (ia < a.size() || ib < b.size()) {
      if (ib == b.size() || (ia < a.size() && (a[ia] < b[ib] || a[ia] == b[ib]))) {
        // advance matching entries in both (take max multiplicity)
        if (ib < b.size() && a[ia] == b[ib]) ++ib;
        out.push_back(a[ia++]);
      } else {
        out.push_back(b[ib++]);
      }
    }
    return out;
  }
  static LaurentPoly missing_product(const std::vector<PoleFactor>& common,
                                     const std::vector<PoleFactor>& own, int nvars, int order) {
    LaurentPoly out = LaurentPoly::constant(nvars, order, Cyclo::one(order));
    std::size_t io = 0;
    for (const auto& f : common) {
      if (io < own.size() && own[io] == f) {
        ++io;
        continue;
      }
      out = out * f.as_poly(nvars, order);
    }
    return out;
  }

  void normalize() {
    if (num_.is_zero()) {
      den_.clear();
      return;
    }
    std::sort(den_.begin(), den_.end());
    // fold negative numerator exponents into Var denominator factors
    for (int v = 0; v < nvars_; ++v) {
      int m = num_.min_exponent(v);
      if (m < 0) {
        num_ = num_.shifted(v, -m);
        for (int s = 0; s < -m; ++s) den_.push_back(PoleFactor::var(v));
      }
    }
    std::sort(den_.begin(), den_.end());
    // cancel denominator factors dividing the numerator
    bool progress = true;
    while (progress) {
      progress = false;
      for (std::size_t idx = 0; idx < den_.size(); ++idx) {
        const PoleFactor f = den_[idx];
        if (f.is_var()) {
          if (num_.min_exponent(f.i) >= 1) {
            num_ = num_.shifted(f.i, -1);
            den_.erase(den_.begin() + static_cast<std::ptrdiff_t>(idx));
            progress = true;
            break;
          }
        } else {
          if (!num_.subst_var_root(f.i, f.j, f.k).is_zero()) continue;
          LaurentPoly q;
          if (num_.divide_linear(f.i, f.j, f.k, &q)) {
            num_ = q;
            den_.erase(den_.begin() + static_cast<std::ptrdiff_t>(idx));
            progress = true;
            break;
          }
        }
      }
    }
  }

  static std::vector<RatFn> mul_tseries(const std::vector<RatFn>& a, const std::vector<RatFn>& b, int T) {
    std::vector<RatFn> out(static_cast<std::size_t>(T) + 1,
                           RatFn::zero(a.empty() ? 0 : a[0].nvars(), a.empty() ? 1 : a[0].order()));
    for (int p = 0; p <= T; ++p) {
      if (a[static_cast<std::size_t>(p)].is_zero()) continue;
      for (int q = 0; p + q <= T; ++q) {
        if (b[static_cast<std::size_t>(q)].is_zero()) continue;
        out[static_cast<std::size_t>(p + q)] += a[static_cast<std::size_t>(p)] * b[static_cast<std::size_t>(q)];
      }
    }
    return out;
  }

  // Recursive partial-fraction expansion; `budget` is the working window.
  static LaurentSeries expand_rec(const RatFn& f, const std::vector<int>& region, int budget) {
    LaurentSeries out(f.nvars_, f.order_, budget, region);
    if (f.is_zero() || region.empty()) {
      for (const auto& [e, c] : f.num_.terms) out.add_term(e, c);
      return out;
    }
    int v = region.front();
    std::vector<int> rest(region.begin() + 1, region.end());
    // gather the distinct diagonal poles of z_v
    std::vector<std::pair<int, int>> diagonals;  // (other variable, root power) as z_v = eps^p z_other
    for (const auto& fac : f.den_) {
      if (fac.is_var()) continue;
      int other = -1, p = 0;
      if (fac.i == v) { other = fac.j; p = fac.k; }
      else if (fac.j == v) { other = fac.i; p = (f.order_ - fac.k) % f.order_; }
      else continue;
      if (std::find(diagonals.begin(), diagonals.end(), std::pair(other, p)) == diagonals.end())
        diagonals.emplace_back(other, p);
    }
    RatFn remainder = f;
    for (auto [other, p] : diagonals) {
      auto coeffs = f.laurent_at_diagonal(v, other, p, -1);  // singular part only
      for (const auto& [l, coeff] : coeffs) {
        if (coeff.is_zero()) continue;
        // singular term coeff * (z_v - eps^p z_other)^{-l-1}
        RatFn term = coeff * RatFn::inv_linear(f.nvars_, f.order_, v, other, p).pow(l + 1);
        remainder -= term;
        // expand: (z_v - c)^{-l-1} = sum_{n>=0} C(n+l, l) c^n z_v^{-n-l-1}
        LaurentSeries ce = expand_rec(coeff, rest, budget);
        Rational binom(1);
        Cyclo eps = Cyclo::eps_pow(f.order_, p);
        for (int n = 0; n + l + 1 <= budget; ++n) {
          if (n > 0) binom = binom * (n + l) / n;
          Cyclo c = Cyclo(f.order_, binom) * eps.pow(n);
          for (const auto& [e, ccoeff] : ce.terms) {
            Expo e2 = e;
            e2[static_cast<std::size_t>(v)] -= n + l + 1;
            e2[static_cast<std::size_t>(other)] += n;
            out.add_term(e2, ccoeff * c);
          }
        }
      }
    }
    // remainder now has no diagonal poles in z_v; only z_v = 0 and numerator
    // powers remain.  Group by the z_v exponent.
    int var_pole = 0;
    std::vector<PoleFactor> residual_den;
    for (const auto& fac : remainder.den_) {
      if (fac.is_var() && fac.i == v) ++var_pole;
      else if (!fac.is_var() && (fac.i == v || fac.j == v))
        throw std::logic_error("diagonal pole survived partial fractions");
      else residual_den.push_back(fac);
    }
    std::map<int, LaurentPoly> by_power;
    for (const auto& [e, c] : remainder.num_.terms) {
      Expo e2 = e;
      int ev = e2[static_cast<std::size_t>(v)];
      e2[static_cast<std::size_t>(v)] = 0;
      auto [it, fresh] = by_power.emplace(ev - var_pole, LaurentPoly(f.nvars_, f.order_));
      it->second.add_term(e2, c);
    }
    for (auto& [d, poly] : by_power) {
      if (d < -budget || d > budget) continue;
      RatFn piece(poly, residual_den);
      LaurentSeries pe = expand_rec(piece, rest, budget);
      for (const auto& [e, c] : pe.terms) {
        Expo e2 = e;
        e2[static_cast<std::size_t>(v)] += d;
        out.add_term(e2, c);
      }
    }
    return out;
  }

  int nvars_ = 0;
  int order_ = 1;
  LaurentPoly num_;
  std::vector<PoleFactor> den_;
};

// Named wrapper matching the module operation list.
inline RatFn normalize(const RatFn& f) { return f; }

// Relabel variables: new index of old variable v is perm[v].
inline RatFn permute_vars(const RatFn& f, const std::vector<int>& perm) {
  LaurentPoly num(f.nvars(), f.order());
  for (const auto& [e, c] : f.num().terms) {
    Expo e2(e.size(), 0);
    for (std::size_t v = 0; v < e.size(); ++v) e2[static_cast<std::size_t>(perm[v])] = e[v];
    num.add_term(e2, c);
  }
  std::vector<PoleFactor> den;
  Cyclo unit = Cyclo::one(f.order());
  for (const auto& fac : f.den()) {
    if (fac.is_var()) {
      den.push_back(PoleFactor::var(perm[static_cast<std::size_t>(fac.i)]));
    } else {
      auto [pf, u] = PoleFactor::lin(perm[static_cast<std::size_t>(fac.i)],
                                     perm[static_cast<std::size_t>(fac.j)], fac.k, f.order());
      unit *= u.inverse();
      den.push_back(pf);
    }
  }
  std::sort(den.begin(), den.end());
  return RatFn(num.scaled(unit), den);
}

// d/dz_var log f, exact, by factoring f over the admissible pole set.
inline RatFn log_derivative(const RatFn& f, int var) {
  if (f.is_zero()) throw std::domain_error("log of zero");
  auto fac = f.factor_numerator();
  if (!fac) throw std::domain_error("numerator does not factor over the admissible pole set");
  auto [unit, mono, lins] = *fac;
  RatFn out = RatFn::zero(f.nvars(), f.order());
  // monomial part: d/dz log z^a = a/z
  int a = mono[static_cast<std::size_t>(var)];
  for (const auto& df : f.den())
    if (df.is_var() && df.i == var) --a;
  if (a != 0)
    out += RatFn(LaurentPoly::constant(f.nvars(), f.order(), Cyclo(f.order(), Rational(a))),
                 {PoleFactor::var(var)});
  std::map<std::vector<int>, int> mult;
  for (const auto& l : lins) mult[{l.i, l.j, l.k}] += 1;
  for (const auto& l : f.den())
    if (!l.is_var()) mult[{l.i, l.j, l.k}] -= 1;
  for (const auto& [key, m] : mult) {
    if (m == 0) continue;
    PoleFactor pf{key[0], key[1], key[2]};
    Cyclo d = Cyclo::zero(f.order());
    if (pf.i == var) d = Cyclo::one(f.order());
    else if (pf.j == var) d = -Cyclo::eps_pow(f.order(), pf.k);
    if (d.is_zero()) continue;
    out += RatFn::inv_linear(f.nvars(), f.order(), pf.i, pf.j, pf.k)
               .scaled(d * Cyclo(f.order(), Rational(m)));
  }
  return out;
}

struct HopfVarOp {
  bool is_twist = false;  // false: divided-power derivative D^{(n)}; true: T^k
  int amount = 1;
};

inline RatFn apply_hopf_op(const RatFn& f, int var, const HopfVarOp& op) {
  return op.is_twist ? f.twist(var, op.amount) : f.dpow(var, op.amount);
}

// d/dz0 d/dz1 log f, computed exactly by factoring f over the admissible
// pole set (monomial and unit parts contribute nothing).
inline RatFn log_mixed_derivative(const RatFn& f) {
  if (f.is_zero()) throw std::domain_error("log of zero");
  auto fac = f.factor_numerator();
  if (!fac) throw std::domain_error("numerator does not factor over the admissible pole set");
  auto [unit, mono, lins] = *fac;
  // multiplicities: numerator factors count +1, denominator factors -1
  std::map<std::vector<int>, int> mult;
  for (const auto& l : lins) mult[{l.i, l.j, l.k}] += 1;
  for (const auto& l : f.den())
    if (!l.is_var()) mult[{l.i, l.j, l.k}] -= 1;
  RatFn out = RatFn::zero(f.nvars(), f.order());
  for (const auto& [key, m] : mult) {
    if (m == 0) continue;
    PoleFactor pf{key[0], key[1], key[2]};
    // factor involves z0 and z1?
    if (!((pf.i == 0 && pf.j == 1) || (pf.i == 1 && pf.j == 0))) continue;
    // d/dz0 d/dz1 log (z_i - eps^k z_j): with (i,j)=(0,1):
    // d/dz0 log = 1/(z0 - eps^k z1); d/dz1 of that = eps^k/(z0-eps^k z1)^2
    Cyclo eps = Cyclo::eps_pow(f.order(), pf.k);
    RatFn term = RatFn::inv_linear(f.nvars(), f.order(), pf.i, pf.j, pf.k).pow(2).scaled(eps);
    out += term.scaled(Cyclo(f.order(), Rational(m)));
  }
  return out;
}

// Truncated formal delta supported on z = eps^k w: sum_j eps^{k j} z^{-j-1} w^j
// for |j| <= C (two variables, z first).  Stored with window C+1 so the
// z-exponent -C-1 of the j = C term remains representable.
inline LaurentSeries delta_series(int order, int k, int window) {
  LaurentSeries out(2, order, window + 1, {0, 1});
  for (int j = -window; j <= window; ++j)
    out.add_term({-j - 1, j}, Cyclo::eps_pow(order, static_cast<long>(k) * j));
  return out;
}

}  // namespace tva
