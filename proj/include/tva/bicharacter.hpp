// Covariant bicharacter pairings on the free Leibnitz module algebras:
// extension from base-generator values by covariance under D^{(n)} T^k,
// multiplicativity through the coproduct with Koszul signs, and bilinearity;
// plus the structural predicates (symmetry, shift restriction, quotient
// relation consistency) and the multivariable n-characters.
#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tva/hopf.hpp"
#include "tva/ratfn.hpp"

namespace tva {

namespace detail_bc {

// Atom tags for table keys: 0 = phi, 1 = psi, 2 = h, 3 = lattice unit e^{s a}.
inline constexpr int kTagE = 3;

// A single multiplicative factor D^{(dDeg)} T^{tPow} applied to a base atom.
// For tag == kTagE the atom is e^{s alpha}; otherwise s is unused.
struct Factor {
  int tag = 0;
  int s = 0;
  int dDeg = 0;
  int tPow = 0;

  bool odd() const { return tag == 0 || tag == 1; }
  bool has_ops() const { return dDeg != 0 || tPow != 0; }
  std::array<int, 4> key() const { return {tag, s, dDeg, tPow}; }
};

using Word = std::vector<Factor>;
using WordKey = std::vector<std::array<int, 4>>;

inline WordKey word_key(const Word& w) {
  WordKey k;
  k.reserve(w.size());
  for (const auto& f : w) k.push_back(f.key());
  return k;
}

inline int parity(const Word& w) {  // 0 even, 1 odd
  int p = 0;
  for (const auto& f : w) p ^= f.odd() ? 1 : 0;
  return p;
}

// eta on a factor word: 1 on pure grouplike words, 0 as soon as a primitive
// generator or a derivation layer appears (eta annihilates h e^{s a}).
inline int eta(const Word& w) {
  for (const auto& f : w) {
    if (f.tag != kTagE || f.dDeg != 0) return 0;
  }
  return 1;
}

inline Word monomial_word(const Monomial& m) {
  Word w;
  for (const auto& g : m.gens) w.push_back(Factor{static_cast<int>(g.base), 0, g.dDeg, g.tPow});
  for (std::size_t k = 0; k < m.lat.size(); ++k) {
    int c = m.lat[k];
    int s = c > 0 ? 1 : -1;
    for (int t = 0; t < (c > 0 ? c : -c); ++t)
      w.push_back(Factor{kTagE, s, 0, static_cast<int>(k)});
  }
  return w;
}

}  // namespace detail_bc

struct BicharacterSpec {
  int N = 2;
  Ambient amb = Ambient::FreePhi;
  std::string preset;  // empty for custom specs
  // Ordered base-atom pair -> value in F^N(z,w)^{+,w} (two variables z, w).
  // Pairs of opposite parity are absent (value 0); absent grouplike pairs
  // default to the counit product eta x eta.
  std::map<std::pair<int, int>, RatFn> table;

  // Memo table for the recursive extension, keyed by canonical factor-word
  // pairs.  It is the only mutable state; computations here are confined to
  // one thread per spec instance (clone the spec to parallelize).
  mutable std::map<std::pair<detail_bc::WordKey, detail_bc::WordKey>, RatFn> memo;
};

namespace detail_bc {

// Two-slot coproduct of a factor word: primitive factors (tags 0..2, with any
// derivation/twist layers) distribute over the slots, grouplike lattice units
// replicate into both.  Emits (sign, slot0, slot1) triples.
template <typename F>
inline void for_each_split(const Word& w, F&& emit) {
  std::vector<std::size_t> prim;
  for (std::size_t p = 0; p < w.size(); ++p) {
    if (w[p].tag != kTagE) {
      prim.push_back(p);
    } else if (w[p].has_ops()) {
      throw std::logic_error("derived grouplike factor reached a coproduct split");
    }
  }
  const std::size_t n = prim.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Word s0, s1;
    int sign = 1;
    std::size_t pi = 0;
    std::vector<int> slot_of(w.size(), 0);
    for (std::size_t p = 0; p < w.size(); ++p) {
      int slot = 0;
      if (w[p].tag == kTagE) {
        s0.push_back(w[p]);
        s1.push_back(w[p]);
        continue;
      }
      slot = (mask >> pi) & 1U;
      ++pi;
      slot_of[p] = slot;
      (slot == 0 ? s0 : s1).push_back(w[p]);
    }
    for (std::size_t p = 0; p < w.size(); ++p)
      for (std::size_t q = p + 1; q < w.size(); ++q)
        if (w[p].odd() && w[q].odd() && w[p].tag != kTagE && w[q].tag != kTagE &&
            slot_of[p] > slot_of[q])
          sign = -sign;
    emit(sign, s0, s1);
  }
}

inline RatFn rword(const BicharacterSpec& r, const Word& A, const Word& B);

// Base value on op-free atoms, before covariance layers are applied.
inline RatFn atom_pair_value(const BicharacterSpec& r, const Factor& a, const Factor& b) {
  if (is_lattice(r.amb) && a.tag == 2) {
    // h = (D e^{a}) e^{-a} in the lattice ambients; extend multiplicatively.
    Word left = {Factor{kTagE, 1, 1, 0}, Factor{kTagE, -1, 0, 0}};
    return rword(r, left, {b});
  }
  if (is_lattice(r.amb) && b.tag == 2) {
    Word right = {Factor{kTagE, 1, 1, 0}, Factor{kTagE, -1, 0, 0}};
    return rword(r, {a}, right);
  }
  if (a.tag == kTagE && b.tag == kTagE) {
    auto it = r.table.find({kTagE, kTagE});
    if (it == r.table.end()) return RatFn::one(2, r.N);  // eta x eta on grouplikes
    return it->second.pow(a.s * b.s);
  }
  auto it = r.table.find({a.tag, b.tag});
  if (it != r.table.end()) return it->second;
  // Absent primitive pairs pair to zero (eta vanishes on primitives).
  return RatFn::zero(2, r.N);
}

inline RatFn rword(const BicharacterSpec& r, const Word& A, const Word& B) {
  if (A.empty()) return RatFn::constant(2, r.N, Cyclo(r.N, Rational(eta(B))));
  if (B.empty()) return RatFn::constant(2, r.N, Cyclo(r.N, Rational(eta(A))));

  auto key = std::make_pair(word_key(A), word_key(B));
  if (auto it = r.memo.find(key); it != r.memo.end()) return it->second;

  RatFn out = RatFn::zero(2, r.N);
  if (A.size() > 1) {
    // r(x y ~ c) = sum (-1)^{|y| |c'|} r(x ~ c') r(y ~ c'')
    Word x = {A.front()};
    Word rest(A.begin() + 1, A.end());
    const int py = parity(rest);
    for_each_split(B, [&](int sign, const Word& c0, const Word& c1) {
      if (py && parity(c0)) sign = -sign;
      RatFn f = rword(r, x, c0);
      if (f.is_zero()) return;
      RatFn g = rword(r, rest, c1);
      if (g.is_zero()) return;
      RatFn t = f * g;
      out += (sign < 0) ? -t : t;
    });
  } else if (A.front().has_ops()) {
    // Covariance: r(D^{(n)} T^k a ~ b) = D^{(n)}_z T^k_z r(a ~ b).
    Factor a0 = A.front();
    int n = a0.dDeg, k = a0.tPow;
    a0.dDeg = a0.tPow = 0;
    out = rword(r, {a0}, B).twist(0, k).dpow(0, n);
  } else if (B.size() > 1) {
    // r(a ~ y c) = sum (-1)^{|a''| |y|} r(a' ~ y) r(a'' ~ c)
    const Factor& a = A.front();
    Word y = {B.front()};
    Word rest(B.begin() + 1, B.end());
    if (a.tag == kTagE) {
      out = rword(r, A, y) * rword(r, A, rest);
    } else {
      // primitive: Delta a = a x 1 + 1 x a
      RatFn t1 = rword(r, A, y).scaled(Cyclo(r.N, Rational(eta(rest))));
      RatFn t2 = rword(r, A, rest).scaled(Cyclo(r.N, Rational(eta(y))));
      if (a.odd() && parity(y)) t2 = -t2;
      out = t1 + t2;
    }
  } else if (B.front().has_ops()) {
    Factor b0 = B.front();
    int n = b0.dDeg, k = b0.tPow;
    b0.dDeg = b0.tPow = 0;
    out = rword(r, A, {b0}).twist(1, k).dpow(1, n);
  } else {
    out = atom_pair_value(r, A.front(), B.front());
  }
  r.memo.emplace(std::move(key), out);
  return out;
}

// Embed a two-variable value as the (zi, zj) slice of an nvars-variable one.
inline RatFn embed_pair(const RatFn& f, int nvars, int i, int j) {
  LaurentPoly num(nvars, f.order());
  for (const auto& [e, c] : f.num().terms) {
    Expo e2(static_cast<std::size_t>(nvars), 0);
    e2[static_cast<std::size_t>(i)] = e[0];
    e2[static_cast<std::size_t>(j)] = e[1];
    num.add_term(e2, c);
  }
  std::vector<PoleFactor> den;
  Cyclo unit = Cyclo::one(f.order());
  for (const auto& fac : f.den()) {
    if (fac.is_var()) {
      den.push_back(PoleFactor::var(fac.i == 0 ? i : j));
    } else {
      auto [pf, u] = PoleFactor::lin(fac.i == 0 ? i : j, fac.j == 0 ? i : j, fac.k, f.order());
      unit *= u.inverse();
      den.push_back(pf);
    }
  }
  std::sort(den.begin(), den.end());
  return RatFn(num.scaled(unit), den);
}

}  // namespace detail_bc

// ---------------------------------------------------------------------------
// Built-in presets.
// ---------------------------------------------------------------------------
inline bool relation_consistency(const BicharacterSpec& r, Ambient rel);

inline BicharacterSpec make_preset(const std::string& name, int order = 0) {
  BicharacterSpec r;
  r.preset = name;
  auto inv_lin = [](int N, int k) { return RatFn::inv_linear(2, N, 0, 1, k); };
  auto lin = [](int N, int k) { return RatFn::linear(2, N, 0, 1, k); };
  if (name == "Af") {
    r.N = order ? order : 1;
    r.amb = Ambient::FreePhiPsi;
    r.table[{0, 1}] = inv_lin(r.N, 0);
    r.table[{1, 0}] = inv_lin(r.N, 0);
  } else if (name == "Ab") {
    r.N = order ? order : 1;
    r.amb = Ambient::Lattice;
    r.table[{3, 3}] = lin(r.N, 0);
  } else if (name == "Bf") {
    r.N = order ? order : 2;
    r.amb = Ambient::FreePhi;
    r.table[{0, 0}] = lin(r.N, 0) * inv_lin(r.N, r.N / 2);
  } else if (name == "Bb") {
    r.N = order ? order : 2;
    r.amb = Ambient::LatticeB;
    r.table[{3, 3}] = lin(r.N, 0) * inv_lin(r.N, r.N / 2);
  } else if (name == "Df") {
    r.N = order ? order : 2;
    r.amb = Ambient::FreePhi;
    r.table[{0, 0}] = inv_lin(r.N, 0);
  } else if (name == "Db") {
    r.N = order ? order : 2;
    r.amb = Ambient::LatticeD;
    r.table[{3, 3}] = lin(r.N, 0) * lin(r.N, 1);  // (z - w)(z + w) = z^2 - w^2
  } else if (name == "C") {
    r.N = order ? order : 2;
    r.amb = Ambient::Boson;
    r.table[{2, 2}] = inv_lin(r.N, 1);
  } else if (name == "id") {
    r.N = order ? order : 2;
    r.amb = Ambient::FreePhiPsi;
  } else {
    throw std::domain_error("unknown bicharacter preset: " + name);
  }
  if (r.amb == Ambient::LatticeB && !relation_consistency(r, Ambient::LatticeB))
    throw std::domain_error("lattice values inconsistent with the order-two reflection relation");
  if (r.amb == Ambient::LatticeD && !relation_consistency(r, Ambient::LatticeD))
    throw std::domain_error("lattice values inconsistent with the evenness relation");
  return r;
}

// ---------------------------------------------------------------------------
// Extension to arbitrary elements.
// ---------------------------------------------------------------------------
inline RatFn extend_eval(const BicharacterSpec& r, const HopfElement& a, const HopfElement& b) {
  if (a.order() != r.N || b.order() != r.N || a.ambient() != r.amb || b.ambient() != r.amb)
    throw std::domain_error("element does not live in the spec's ambient algebra");
  RatFn out = RatFn::zero(2, r.N);
  for (const auto& ma : a.terms())
    for (const auto& mb : b.terms()) {
      RatFn v = detail_bc::rword(r, detail_bc::monomial_word(ma), detail_bc::monomial_word(mb));
      out += v.scaled(ma.coeff * mb.coeff);
    }
  return out;
}

// ---------------------------------------------------------------------------
// n-characters.
// ---------------------------------------------------------------------------
// Pairwise product over (n-1)-fold coproducts: the pair (i, j), i < j, pairs
// slot j-1 of Delta^{n-2}(a_i) against slot i of Delta^{n-2}(a_j) under
// r_{z_i, z_j}; the Koszul sign counts inversions among the odd tensor
// factors in their order of appearance (pairs traversed lexicographically).
inline RatFn n_character(const BicharacterSpec& r, const std::vector<HopfElement>& as) {
  const int n = static_cast<int>(as.size());
  if (n < 2) throw std::domain_error("n_character needs n >= 2");
  if (n == 2) return extend_eval(r, as[0], as[1]);
  std::vector<SweedlerSum> cops;
  cops.reserve(as.size());
  for (const auto& a : as) {
    if (a.order() != r.N || a.ambient() != r.amb)
      throw std::domain_error("element does not live in the spec's ambient algebra");
    cops.push_back(coproduct(a, n - 2));
  }
  RatFn out = RatFn::zero(n, r.N);
  std::vector<std::size_t> pick(as.size(), 0);
  while (true) {
    Cyclo coeff = Cyclo::one(r.N);
    bool dead = false;
    for (int i = 0; i < n && !dead; ++i) {
      if (cops[static_cast<std::size_t>(i)].terms.empty()) dead = true;
      else coeff *= cops[static_cast<std::size_t>(i)].terms[pick[static_cast<std::size_t>(i)]].coeff;
    }
    if (dead) break;
    // appearance sequence of (variable tag, slot parity) for the sign rule
    int sign = 1;
    std::vector<std::pair<int, int>> seq;  // (tag, odd?)
    RatFn prod = RatFn::one(n, r.N);
    for (int i = 0; i < n && !prod.is_zero(); ++i)
      for (int j = i + 1; j < n && !prod.is_zero(); ++j) {
        const auto& ti = cops[static_cast<std::size_t>(i)].terms[pick[static_cast<std::size_t>(i)]];
        const auto& tj = cops[static_cast<std::size_t>(j)].terms[pick[static_cast<std::size_t>(j)]];
        const Monomial& mi = ti.slots[static_cast<std::size_t>(j - 1)];
        const Monomial& mj = tj.slots[static_cast<std::size_t>(i)];
        seq.emplace_back(i, mi.odd() ? 1 : 0);
        seq.emplace_back(j, mj.odd() ? 1 : 0);
        coeff *= mi.coeff * mj.coeff;
        RatFn v = detail_bc::rword(r, detail_bc::monomial_word(mi), detail_bc::monomial_word(mj));
        if (v.is_zero()) prod = RatFn::zero(n, r.N);
        else prod *= detail_bc::embed_pair(v, n, i, j);
      }
    if (!prod.is_zero() && !coeff.is_zero()) {
      for (std::size_t p = 0; p < seq.size(); ++p)
        for (std::size_t q = p + 1; q < seq.size(); ++q)
          if (seq[p].second && seq[q].second && seq[p].first > seq[q].first) sign = -sign;
      RatFn t = prod.scaled(coeff);
      out += (sign < 0) ? -t : t;
    }
    // next combination
    std::size_t i = 0;
    while (i < pick.size()) {
      if (++pick[i] < cops[i].terms.size()) break;
      pick[i++] = 0;
    }
    if (i == pick.size()) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Structural predicates.
// ---------------------------------------------------------------------------
namespace detail_bc {

inline std::vector<HopfElement> base_atoms(const BicharacterSpec& r) {
  std::vector<HopfElement> out;
  auto gen = [&](BaseSym b) { return HopfElement::generator(r.N, r.amb, Generator{b, 0, 0}); };
  switch (r.amb) {
    case Ambient::FreePhi: out = {gen(BaseSym::Phi)}; break;
    case Ambient::FreePhiPsi: out = {gen(BaseSym::Phi), gen(BaseSym::Psi)}; break;
    case Ambient::Boson: out = {gen(BaseSym::H)}; break;
    default: out = {HopfElement::lattice(r.N, r.amb, 1), HopfElement::lattice(r.N, r.amb, -1)};
  }
  return out;
}

inline HopfElement random_monomial(const BicharacterSpec& r, std::mt19937& rng, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> dd(0, 2), tp(0, r.N - 1), ch(-2, 2), cf(1, 5);
  HopfElement e = HopfElement::unit(r.N, r.amb);
  const int L = len(rng);
  for (int i = 0; i < L; ++i) {
    if (is_lattice(r.amb) && (rng() & 1U)) {
      e = e * HopfElement::lattice(r.N, r.amb, ch(rng), tp(rng));
    } else {
      BaseSym b = BaseSym::Phi;
      if (r.amb == Ambient::Boson || (is_lattice(r.amb) && true)) b = BaseSym::H;
      else if (r.amb == Ambient::FreePhiPsi && (rng() & 1U)) b = BaseSym::Psi;
      e = e * HopfElement::generator(r.N, r.amb, Generator{b, dd(rng), tp(rng)});
    }
    if (e.is_zero()) return random_monomial(r, rng, max_len);
  }
  return e.scaled(Cyclo(r.N, Rational(cf(rng))) * Cyclo::eps_pow(r.N, tp(rng)));
}

}  // namespace detail_bc

// True iff r equals its super-transpose r^tau(a~b) = (-1)^{|a||b|} r_{w,z}(b~a),
// checked on all base-atom pairs (sufficient by the extension laws) and on
// 100 deterministic pseudo-random monomial pairs.
inline bool transpose_check(const BicharacterSpec& r) {
  auto check_pair = [&](const HopfElement& a, const HopfElement& b) {
    RatFn lhs = extend_eval(r, a, b);
    RatFn rhs = permute_vars(extend_eval(r, b, a), {1, 0});
    if (a.parity() < 0 && b.parity() < 0) rhs = -rhs;
    return lhs == rhs;
  };
  auto atoms = detail_bc::base_atoms(r);
  for (const auto& a : atoms)
    for (const auto& b : atoms)
      if (!check_pair(a, b)) return false;
  std::mt19937 rng(20260824);
  for (int t = 0; t < 100; ++t) {
    HopfElement a = detail_bc::random_monomial(r, rng, 2);
    HopfElement b = detail_bc::random_monomial(r, rng, 2);
    if (!check_pair(a, b)) return false;
  }
  return true;
}

struct ShiftViolation {
  std::string pair;
  int diagonal = 0;
  int l = 0;
  std::string reason;
};

struct ShiftReport {
  bool pass = true;
  std::vector<ShiftViolation> violations;
};

// Verifies that every diagonal Laurent coefficient of every table value down
// to `depth` is a monomial c w^s, with |s| <= (N-1)(l+1) on the singular
// coefficients l >= 0.
inline ShiftReport shift_restricted_check(const BicharacterSpec& r, int depth = 2) {
  ShiftReport rep;
  auto flag = [&](const std::string& pair, int i, int l, const std::string& why) {
    rep.pass = false;
    rep.violations.push_back({pair, i, l, why});
  };
  for (const auto& [key, f] : r.table) {
    std::ostringstream pn;
    pn << "(" << key.first << "," << key.second << ")";
    for (int i = 0; i < r.N; ++i) {
      for (const auto& [l, coeff] : f.laurent_at_diagonal(0, 1, i, depth)) {
        if (coeff.is_zero()) continue;
        bool mono = coeff.num().terms.size() == 1;
        int s = 0;
        if (mono) {
          const auto& [e, c] = *coeff.num().terms.begin();
          if (e[0] != 0) mono = false;
          s = e[1];
        }
        for (const auto& fac : coeff.den()) {
          if (fac.is_var() && fac.i == 1) --s;
          else mono = false;
        }
        if (!mono) {
          flag(pn.str(), i, l, "coefficient is not a monomial in w");
          continue;
        }
        if (l >= 0 && (s > (r.N - 1) * (l + 1) || -s > (r.N - 1) * (l + 1))) {
          std::ostringstream why;
          why << "shift " << s << " exceeds bound " << (r.N - 1) * (l + 1);
          flag(pn.str(), i, l, why.str());
        }
      }
    }
  }
  return rep;
}

// Quotient-relation consistency of the lattice values:
//  - LatticeB: r_{eps z, w} = r_{z, eps w} = 1 / r_{z,w} (order-two reflection);
//  - LatticeD: r is invariant under z -> eps z and under w -> eps w.
inline bool relation_consistency(const BicharacterSpec& r, Ambient rel) {
  auto it = r.table.find({detail_bc::kTagE, detail_bc::kTagE});
  RatFn f = (it == r.table.end()) ? RatFn::one(2, r.N) : it->second;
  if (rel == Ambient::LatticeD) return f.twist(0, 1) == f && f.twist(1, 1) == f;
  if (rel == Ambient::LatticeB) {
    RatFn inv;
    try {
      inv = f.inverse();
    } catch (const std::exception&) {
      return false;
    }
    return f.twist(0, 1) == inv && f.twist(1, 1) == inv;
  }
  throw std::domain_error("relation_consistency expects a lattice quotient tag");
}

}  // namespace tva
