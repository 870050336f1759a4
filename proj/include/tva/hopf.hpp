// Supercommutative, supercocommutative Hopf algebras: free Leibnitz modules
// over the base algebras (odd generators phi/psi, the even oscillator
// generator h, rank-one lattice grouplikes e^{m alpha}) under the action of
// the divided-power derivation D^{(n)} and the finite-order twist T with
// D T = eps T D, together with iterated coproducts in Sweedler form, the
// counit, and the quotient relations of the twisted lattice ambients.
#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tva/cyclotomic.hpp"

namespace tva {

// Generator storage convention: a Generator with (base g, dDeg n, tPow k)
// denotes the element D^{(n)} T^k g.  The alternative T-first ordering
// differs by eps^{nk}, which this module folds into coefficients wherever a
// reordering happens.
inline constexpr const char* kGeneratorOrderConvention = "D-part-then-T-part";

enum class BaseSym { Phi, Psi, H };

enum class Ambient {
  FreePhi,     // Grassmann algebra on phi and its descendants
  FreePhiPsi,  // two odd generators
  Boson,       // polynomial algebra on h and its descendants
  Lattice,     // rank-one lattice, unquotiented
  LatticeB,    // lattice with T e^{m a} = e^{-m a}, T h = h
  LatticeD,    // lattice with T e^{m a} = e^{m a},  T h = -h
};

inline bool is_lattice(Ambient a) {
  return a == Ambient::Lattice || a == Ambient::LatticeB || a == Ambient::LatticeD;
}

struct Generator {
  BaseSym base = BaseSym::Phi;
  int dDeg = 0;  // divided-power layer n of D^{(n)}
  int tPow = 0;  // twist layer k of T^k

  bool odd() const { return base == BaseSym::Phi || base == BaseSym::Psi; }

  friend auto operator<=>(const Generator& a, const Generator& b) {
    // canonical order: base rank, then tPow, then dDeg
    return std::tuple(static_cast<int>(a.base), a.tPow, a.dDeg) <=>
           std::tuple(static_cast<int>(b.base), b.tPow, b.dDeg);
  }
  friend bool operator==(const Generator&, const Generator&) = default;
};

// A canonical monomial: coefficient, sorted generator word, and (for lattice
// ambients) the grouplike part prod_k T^k e^{lat[k] alpha} stored as one
// charge per twist layer.
struct Monomial {
  Cyclo coeff;
  std::vector<Generator> gens;
  std::vector<int> lat;  // empty for non-lattice ambients; length N otherwise

  int charge() const {
    int c = 0;
    for (int m : lat) c += m;
    return c;
  }
  bool odd() const {
    int n = 0;
    for (const auto& g : gens) n += g.odd();
    return n % 2 != 0;
  }
  bool is_unit_word() const {
    if (!gens.empty()) return false;
    for (int m : lat)
      if (m != 0) return false;
    return true;
  }
};

// monomial key comparisons, ignoring the coefficient
inline bool monomial_key_less(const Monomial& a, const Monomial& b) {
  if (a.gens != b.gens) return a.gens < b.gens;
  return a.lat < b.lat;
}
inline bool monomial_key_eq(const Monomial& a, const Monomial& b) {
  return a.gens == b.gens && a.lat == b.lat;
}

class HopfElement {
 public:
  HopfElement() = default;
  HopfElement(int order, Ambient amb) : order_(order), amb_(amb) {}

  static HopfElement zero(int order, Ambient amb) { return HopfElement(order, amb); }
  static HopfElement unit(int order, Ambient amb) {
    HopfElement e(order, amb);
    Monomial m;
    m.coeff = Cyclo::one(order);
    if (is_lattice(amb)) m.lat.assign(static_cast<std::size_t>(order), 0);
    e.add_monomial(m);
    return e;
  }
  static HopfElement generator(int order, Ambient amb, Generator g) {
    HopfElement e(order, amb);
    Monomial m;
    m.coeff = Cyclo::one(order);
    m.gens = {g};
    if (is_lattice(amb)) m.lat.assign(static_cast<std::size_t>(order), 0);
    e.add_monomial(m);
    return e;
  }
  // T^k e^{m alpha} in a lattice ambient
  static HopfElement lattice(int order, Ambient amb, int m, int tPow = 0) {
    HopfElement e(order, amb);
    Monomial mo;
    mo.coeff = Cyclo::one(order);
    mo.lat.assign(static_cast<std::size_t>(order), 0);
    mo.lat[static_cast<std::size_t>(((tPow % order) + order) % order)] = m;
    e.add_monomial(mo);
    return e;
  }

  int order() const { return order_; }
  Ambient ambient() const { return amb_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // Marks an element living in the projected algebra W (charges mod 2 for
  // the type-B lattice quotient).
  bool projected() const { return projected_; }
  void set_projected(bool p) {
    projected_ = p;
    if (p) {
      std::vector<Monomial> old;
      old.swap(terms_);
      for (auto& m : old) add_monomial(std::move(m));
    }
  }

  // Adds a monomial, applying the ambient's normal-form rewrites:
  //  - quotient ambients eliminate twist layers (T e^{ma} = e^{-ma} or
  //    e^{ma}; T h = +h or -h, propagated through D^{(n)} layers);
  //  - odd generator squares vanish;
  //  - sorting into canonical order contributes the Koszul sign.
  void add_monomial(Monomial m) {
    if (m.coeff.is_zero()) return;
    // quotient rewrites on the lattice part
    if (amb_ == Ambient::LatticeB || amb_ == Ambient::LatticeD) {
      if (!m.lat.empty()) {
        int c0 = 0;
        for (std::size_t k = 0; k < m.lat.size(); ++k) {
          int mk = m.lat[k];
          if (amb_ == Ambient::LatticeB && (k % 2) == 1) mk = -mk;
          c0 += mk;
        }
        std::fill(m.lat.begin(), m.lat.end(), 0);
        m.lat[0] = c0;
      }
      for (auto& g : m.gens) {
        if (g.tPow != 0) {
          // D^{(n)} T^k h = sigma^k D^{(n)} h with sigma = Th/h
          if (amb_ == Ambient::LatticeD && (g.tPow % 2) != 0) m.coeff = -m.coeff;
          g.tPow = 0;
        }
      }
    }
    if (projected_ && amb_ == Ambient::LatticeB && !m.lat.empty()) {
      int c = ((m.lat[0] % 2) + 2) % 2;  // e^{2 alpha} = 1 in W
      std::fill(m.lat.begin(), m.lat.end(), 0);
      m.lat[0] = c;
    }
    // sort generators, tracking the Koszul sign; odd squares vanish
    std::vector<Generator>& g = m.gens;
    for (std::size_t i = 1; i < g.size(); ++i)
      for (std::size_t j = i; j > 0 && g[j] < g[j - 1]; --j) {
        if (g[j].odd() && g[j - 1].odd()) m.coeff = -m.coeff;
        std::swap(g[j], g[j - 1]);
      }
    for (std::size_t i = 1; i < g.size(); ++i)
      if (g[i] == g[i - 1] && g[i].odd()) return;  // zero
    // merge
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m, monomial_key_less);
    if (it != terms_.end() && monomial_key_eq(*it, m)) {
      it->coeff += m.coeff;
      if (it->coeff.is_zero()) terms_.erase(it);
    } else {
      terms_.insert(it, std::move(m));
    }
  }

  friend HopfElement operator+(const HopfElement& a, const HopfElement& b) {
    check_compat(a, b);
    HopfElement out = a;
    for (const auto& m : b.terms_) out.add_monomial(m);
    return out;
  }
  friend HopfElement operator-(const HopfElement& a, const HopfElement& b) {
    check_compat(a, b);
    HopfElement out = a;
    for (auto m : b.terms_) {
      m.coeff = -m.coeff;
      out.add_monomial(std::move(m));
    }
    return out;
  }
  HopfElement scaled(const Cyclo& c) const {
    HopfElement out(order_, amb_);
    out.projected_ = projected_;
    if (c.is_zero()) return out;
    for (auto m : terms_) {
      m.coeff *= c;
      out.add_monomial(std::move(m));
    }
    return out;
  }
  friend HopfElement operator*(const HopfElement& a, const HopfElement& b) {
    check_compat(a, b);
    HopfElement out(a.order_, a.amb_);
    out.projected_ = a.projected_ || b.projected_;
    for (const auto& ma : a.terms_)
      for (const auto& mb : b.terms_) {
        Monomial m;
        m.coeff = ma.coeff * mb.coeff;
        // Koszul sign: each odd generator of mb passes every odd generator of
        // ma that sits to its right in the concatenated word -- none, since we
        // append mb after ma; signs arise only in the canonical re-sort.
        m.gens = ma.gens;
        m.gens.insert(m.gens.end(), mb.gens.begin(), mb.gens.end());
        if (!ma.lat.empty() || !mb.lat.empty()) {
          m.lat.assign(static_cast<std::size_t>(a.order_), 0);
          for (std::size_t k = 0; k < ma.lat.size(); ++k) m.lat[k] += ma.lat[k];
          for (std::size_t k = 0; k < mb.lat.size(); ++k) m.lat[k] += mb.lat[k];
        }
        out.add_monomial(std::move(m));
      }
    return out;
  }
  friend bool operator==(const HopfElement& a, const HopfElement& b) { return (a - b).is_zero(); }
  friend bool operator!=(const HopfElement& a, const HopfElement& b) { return !(a == b); }

  // -1 odd, +1 even, 0 mixed, +1 for zero
  int parity() const {
    bool has_even = false, has_odd = false;
    for (const auto& m : terms_) (m.odd() ? has_odd : has_even) = true;
    if (has_odd && has_even) return 0;
    return has_odd ? -1 : 1;
  }

  std::pair<HopfElement, HopfElement> parity_split() const {
    HopfElement even(order_, amb_), odd(order_, amb_);
    even.projected_ = odd.projected_ = projected_;
    for (const auto& m : terms_) (m.odd() ? odd : even).add_monomial(m);
    return {even, odd};
  }

  std::string to_string() const;

 private:
  static void check_compat(const HopfElement& a, const HopfElement& b) {
    if (a.order_ != b.order_ || a.amb_ != b.amb_)
      throw std::domain_error("mismatched ambient algebras");
  }

  int order_ = 1;
  Ambient amb_ = Ambient::FreePhi;
  bool projected_ = false;
  std::vector<Monomial> terms_;  // sorted by monomial key
};

// eta: coefficient of grouplike-only monomials (eta = 0 on primitives and all
// nontrivial generator words, 1 on every grouplike).
inline Cyclo counit(const HopfElement& a) {
  Cyclo out = Cyclo::zero(a.order());
  for (const auto& m : a.terms())
    if (m.gens.empty()) out += m.coeff;
  return out;
}

// ---------------------------------------------------------------------------
// Sweedler sums: Delta^l(a) materialized as explicit signed term lists.
// ---------------------------------------------------------------------------
struct SweedlerTerm {
  Cyclo coeff;  // sign times the source coefficient
  std::vector<Monomial> slots;
};

struct SweedlerSum {
  int order = 1;
  Ambient amb = Ambient::FreePhi;
  int nslots = 2;
  std::vector<SweedlerTerm> terms;

  HopfElement slot_element(const SweedlerTerm& t, std::size_t s) const {
    HopfElement e(order, amb);
    Monomial m = t.slots[s];
    m.coeff = Cyclo::one(order);
    e.add_monomial(std::move(m));
    return e;
  }

  // canonical map (slot monomial keys) -> coefficient, for equality tests
  std::map<std::vector<std::pair<std::vector<Generator>, std::vector<int>>>, Cyclo> canonical() const {
    std::map<std::vector<std::pair<std::vector<Generator>, std::vector<int>>>, Cyclo> out;
    for (const auto& t : terms) {
      std::vector<std::pair<std::vector<Generator>, std::vector<int>>> key;
      Cyclo c = t.coeff;
      for (const auto& s : t.slots) {
        key.emplace_back(s.gens, s.lat);
        c *= s.coeff;
      }
      auto [it, fresh] = out.emplace(std::move(key), c);
      if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) out.erase(it);
      }
    }
    return out;
  }
};

// Iterated coproduct Delta^l (l >= 1, giving l+1 tensor slots).  Primitive
// generators distribute over the slots; the grouplike lattice part replicates
// into every slot; the Koszul sign counts odd-generator pairs whose slot
// order inverts their original order.
inline SweedlerSum coproduct(const HopfElement& a, int l = 1) {
  if (l < 1) throw std::domain_error("coproduct needs l >= 1");
  SweedlerSum out;
  out.order = a.order();
  out.amb = a.ambient();
  out.nslots = l + 1;
  const int S = l + 1;
  for (const auto& m : a.terms()) {
    const std::size_t n = m.gens.size();
    std::vector<int> assign(n, 0);
    while (true) {
      // build one term
      SweedlerTerm t;
      t.coeff = m.coeff;
      t.slots.assign(static_cast<std::size_t>(S), Monomial{Cyclo::one(out.order), {}, m.lat});
      for (std::size_t p = 0; p < n; ++p)
        t.slots[static_cast<std::size_t>(assign[p])].gens.push_back(m.gens[p]);
      // Koszul sign: odd pair (p < q) with slot(p) > slot(q)
      for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = p + 1; q < n; ++q)
          if (m.gens[p].odd() && m.gens[q].odd() && assign[p] > assign[q]) t.coeff = -t.coeff;
      if (!t.coeff.is_zero()) out.terms.push_back(std::move(t));
      // next assignment
      std::size_t p = 0;
      while (p < n && assign[p] == S - 1) assign[p++] = 0;
      if (p == n) break;
      ++assign[p];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Module-algebra action of D^{(n)} T^k.
// ---------------------------------------------------------------------------

// T as an algebra automorphism: T (D^{(n)} T^k g) = eps^{-n} D^{(n)} T^{k+1} g,
// T (T^k e^{ma}) = T^{k+1} e^{ma}; quotient rewrites apply on re-insertion.
inline HopfElement act_T(const HopfElement& a) {
  HopfElement out(a.order(), a.ambient());
  const int N = a.order();
  for (const auto& m : a.terms()) {
    Monomial m2;
    m2.coeff = m.coeff;
    for (auto g : m.gens) {
      m2.coeff *= Cyclo::eps_pow(N, -g.dDeg);
      g.tPow = (g.tPow + 1) % N;
      m2.gens.push_back(g);
    }
    if (!m.lat.empty()) {
      m2.lat.assign(m.lat.size(), 0);
      for (std::size_t k = 0; k < m.lat.size(); ++k)
        m2.lat[(k + 1) % m.lat.size()] = m.lat[k];
    }
    out.add_monomial(std::move(m2));
  }
  return out;
}

// D as a derivation.  On a generator: D (D^{(n)} T^k g) = (n+1) D^{(n+1)} T^k g.
// On a lattice grouplike: D(T^k e^{ma}) = m eps^k (T^k h)(T^k e^{ma}).
inline HopfElement act_D(const HopfElement& a) {
  HopfElement out(a.order(), a.ambient());
  const int N = a.order();
  for (const auto& m : a.terms()) {
    for (std::size_t p = 0; p < m.gens.size(); ++p) {
      Monomial m2 = m;
      m2.coeff *= Cyclo(N, Rational(m.gens[p].dDeg + 1));
      m2.gens[p].dDeg += 1;
      out.add_monomial(std::move(m2));
    }
    for (std::size_t k = 0; k < m.lat.size(); ++k) {
      if (m.lat[k] == 0) continue;
      Monomial m2 = m;
      m2.coeff *= Cyclo(N, Rational(m.lat[k])) * Cyclo::eps_pow(N, static_cast<long>(k));
      m2.gens.push_back(Generator{BaseSym::H, 0, static_cast<int>(k)});
      out.add_monomial(std::move(m2));
    }
  }
  return out;
}

// D^{(n)} T^k acting as a module-algebra operator.
inline HopfElement act(const HopfElement& a, int dDeg, int tPow) {
  HopfElement out = a;
  for (int s = 0; s < ((tPow % a.order()) + a.order()) % a.order(); ++s) out = act_T(out);
  Rational fact(1);
  for (int s = 1; s <= dDeg; ++s) {
    out = act_D(out);
    fact *= s;
  }
  return out.scaled(Cyclo(a.order(), Rational(1) / fact));
}

// Re-tag an element of the unquotiented lattice ambient into a quotient
// ambient, applying the relation rewrites.
inline HopfElement quotient_reduce(const HopfElement& a, Ambient rel) {
  if (rel != Ambient::LatticeB && rel != Ambient::LatticeD)
    throw std::domain_error("quotient_reduce expects a lattice quotient tag");
  if (!is_lattice(a.ambient())) throw std::domain_error("quotient_reduce needs a lattice ambient");
  HopfElement out(a.order(), rel);
  for (const auto& m : a.terms()) out.add_monomial(m);
  return out;
}

// ---------------------------------------------------------------------------
// Printing (grammar shared with the CLI parser).
// ---------------------------------------------------------------------------
inline std::string HopfElement::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& m : terms_) {
    if (!first) os << " + ";
    first = false;
    bool printed = false;
    auto emit = [&](const std::string& s) {
      if (printed) os << " * ";
      os << s;
      printed = true;
    };
    if (!(m.coeff == Cyclo::one(order_)) || (m.gens.empty() && m.is_unit_word())) {
      std::string c = m.coeff.to_string();
      if (c.find(' ') != std::string::npos) c = "(" + c + ")";
      emit(c);
    }
    for (const auto& g : m.gens) {
      std::ostringstream gs;
      if (g.dDeg > 0) gs << "D^(" << g.dDeg << ") ";
      if (g.tPow > 0) {
        gs << "T";
        if (g.tPow > 1) gs << "^" << g.tPow;
        gs << " ";
      }
      switch (g.base) {
        case BaseSym::Phi: gs << "phi"; break;
        case BaseSym::Psi: gs << "psi"; break;
        case BaseSym::H: gs << "h"; break;
      }
      emit(gs.str());
    }
    for (std::size_t k = 0; k < m.lat.size(); ++k) {
      if (m.lat[k] == 0) continue;
      std::ostringstream gs;
      if (k > 0) {
        gs << "T";
        if (k > 1) gs << "^" << k;
        gs << " ";
      }
      gs << "e{" << m.lat[k] << "}";
      emit(gs.str());
    }
    if (!printed) os << "1";
  }
  return os.str();
}

}  // namespace tva
