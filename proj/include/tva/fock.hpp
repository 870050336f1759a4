// Independent verification layer: Clifford-mode Fock spaces for the three
// fermion families, oscillator spaces with exponential vertex operators for
// the bosonic sides, truncated vacuum expectation series, mode-bracket
// extraction, highest-weight analysis, and the correspondence checkers.
// Nothing here uses the bicharacter evaluation path except where a check
// explicitly compares against it.
#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tva/vertex.hpp"

namespace tva {

enum class FockType { A, B, D };

namespace detail_fk {

// Mode keys.
//   A: key = 2n + species (species 0 = phi, 1 = psi), field phi(z) = sum phi_n z^n.
//   B: key = n, field phi(z) = sum phi_n z^n; phi_0|0> is a second highest
//      weight vector and phi_0^2 = 1.
//   D: key = 2m for the half-integer mode m (doubled, hence odd keys),
//      field phi(z) = sum_{m in Z+1/2} phi_m z^{-m-1/2}.
inline Cyclo cscale(const Cyclo& c, const Rational& r) { return c * Cyclo(c.order(), r); }

inline int a_species(int key) { return ((key % 2) + 2) % 2; }
inline int a_mode(int key) { return (key - a_species(key)) / 2; }

inline bool is_creation(FockType t, int key) {
  switch (t) {
    case FockType::A: return a_mode(key) >= 0;
    case FockType::B: return key >= 0;
    case FockType::D: return key < 0;
  }
  return false;
}

// the anticommutator constant [mode_a, mode_b]+
inline Rational bracket(FockType t, int a, int b) {
  switch (t) {
    case FockType::A:
      if (a_species(a) != a_species(b) && a_mode(a) + a_mode(b) == -1) return Rational(1);
      return Rational(0);
    case FockType::B:
      if (a + b == 0) return (((a % 2) + 2) % 2 == 0) ? Rational(2) : Rational(-2);
      return Rational(0);
    case FockType::D:
      return a + b == 0 ? Rational(1) : Rational(0);
  }
  return Rational(0);
}

// canonical word order: strictly descending rank, creations ranked above
// annihilators (type D has negative creation keys, so rank negates there)
inline int key_rank(FockType t, int key) { return t == FockType::D ? -key : key; }

inline Rational square_const(FockType t, int key) {
  // phi_m^2 = (1/2)[phi_m, phi_m]+
  return bracket(t, key, key) / 2;
}

}  // namespace detail_fk

// A linear combination of canonically ordered creation-mode words applied to
// the vacuum; words are strictly descending in the key rank (see key_rank).
struct ModeState {
  FockType type = FockType::A;
  int ord = 1;  // cyclotomic order of the coefficient field
  std::map<std::vector<int>, Cyclo> terms;

  ModeState(FockType t, int o) : type(t), ord(o) {}
  static ModeState vacuum(FockType t, int o) {
    ModeState s(t, o);
    s.terms.emplace(std::vector<int>{}, Cyclo::one(o));
    return s;
  }
  bool is_zero() const { return terms.empty(); }
  void add(const std::vector<int>& w, const Cyclo& c) {
    if (c.is_zero()) return;
    auto it = terms.find(w);
    if (it == terms.end()) {
      terms.emplace(w, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }
  Cyclo vacuum_coeff() const {
    auto it = terms.find({});
    return it == terms.end() ? Cyclo::zero(ord) : it->second;
  }
  friend bool operator==(const ModeState& x, const ModeState& y) { return x.terms == y.terms; }
  ModeState scaled(const Cyclo& c) const {
    ModeState out(type, ord);
    for (const auto& [w, v] : terms) out.add(w, v * c);
    return out;
  }
  ModeState operator-(const ModeState& o) const {
    ModeState out = *this;
    for (const auto& [w, v] : o.terms) out.add(w, -v);
    return out;
  }
  ModeState operator+(const ModeState& o) const {
    ModeState out = *this;
    for (const auto& [w, v] : o.terms) out.add(w, v);
    return out;
  }
  int max_abs_mode() const {
    int m = 0;
    for (const auto& [w, v] : terms)
      for (int k : w) m = std::max(m, std::abs(k));
    return m;
  }
};

namespace detail_fk {

// Multiply one Clifford generator into each word of a state, reducing to the
// canonical descending order via the anticommutation relations.
inline void push_mode(FockType t, int ord, const std::vector<int>& word, std::size_t pos, int mode,
                      const Cyclo& coeff, ModeState& out) {
  if (pos == word.size()) {
    if (is_creation(t, mode)) {
      std::vector<int> w = word;
      w.push_back(mode);
      out.add(w, coeff);
    }
    return;  // an annihilator reaches the vacuum
  }
  int w = word[pos];
  if (key_rank(t, mode) > key_rank(t, w)) {
    std::vector<int> nw(word.begin(), word.begin() + pos);
    nw.push_back(mode);
    nw.insert(nw.end(), word.begin() + pos, word.end());
    out.add(nw, coeff);
    return;
  }
  if (mode == w) {
    Rational sq = square_const(t, mode);
    if (!sq.is_zero()) {
      std::vector<int> nw = word;
      nw.erase(nw.begin() + pos);
      out.add(nw, cscale(coeff, sq));
    }
    return;
  }
  // contraction with word[pos], then keep moving right with a sign flip
  Rational br = bracket(t, mode, w);
  if (!br.is_zero()) {
    std::vector<int> nw = word;
    nw.erase(nw.begin() + pos);
    out.add(nw, cscale(coeff, br));
  }
  push_mode(t, ord, word, pos + 1, mode, -coeff, out);
}

}  // namespace detail_fk

inline ModeState apply_mode(const ModeState& s, int mode) {
  ModeState out(s.type, s.ord);
  for (const auto& [w, c] : s.terms) detail_fk::push_mode(s.type, s.ord, w, 0, mode, c, out);
  return out;
}

// A field descriptor: the list of (mode key, z exponent) pairs whose
// exponents lie within the window.
struct ModeField {
  FockType type;
  int species = 0;  // only used for A
  std::vector<std::pair<int, int>> modes_in_window(int C) const {
    std::vector<std::pair<int, int>> out;
    for (int e = -C; e <= C; ++e) {
      switch (type) {
        case FockType::A: out.emplace_back(2 * e + species, e); break;
        case FockType::B: out.emplace_back(e, e); break;
        case FockType::D: out.emplace_back(-2 * e - 1, e); break;
      }
    }
    return out;
  }
};

using ModeSeries = std::map<Expo, ModeState>;

namespace detail_fk {

inline void series_add(ModeSeries& s, const Expo& e, const ModeState& st) {
  if (st.is_zero()) return;
  auto it = s.find(e);
  if (it == s.end()) {
    s.emplace(e, st);
  } else {
    it->second = it->second + st;
    if (it->second.is_zero()) s.erase(it);
  }
}

inline ModeSeries apply_field(const ModeSeries& s, const ModeField& f, int var, int C) {
  ModeSeries out;
  auto modes = f.modes_in_window(C);
  for (const auto& [e, st] : s)
    for (const auto& [mode, zexp] : modes) {
      if (std::abs(e[var] + zexp) > C) continue;
      ModeState st2 = apply_mode(st, mode);
      if (st2.is_zero()) continue;
      Expo e2 = e;
      e2[var] += zexp;
      series_add(out, e2, st2);
    }
  return out;
}

inline LaurentSeries vacuum_series(const ModeSeries& s, int nvars, int ord, int C) {
  std::vector<int> region(nvars);
  std::iota(region.begin(), region.end(), 0);
  LaurentSeries out(nvars, ord, C, region);
  for (const auto& [e, st] : s) out.add_term(e, st.vacuum_coeff());
  return out;
}

}  // namespace detail_fk

// Vacuum expectation of a product of fermion fields, computed purely by mode
// algebra.  For type A the first half of the points carry phi, the second
// half psi; types B and D use the single neutral field at every point.
inline LaurentSeries fock_vev(FockType t, int npoints, int C) {
  int ord = (t == FockType::A) ? 1 : 2;
  if (t == FockType::A && npoints % 2 != 0)
    throw std::invalid_argument("type A needs matching phi/psi point counts");
  ModeSeries s;
  s.emplace(Expo(npoints, 0), ModeState::vacuum(t, ord));
  for (int i = npoints - 1; i >= 0; --i) {
    ModeField f{t, (t == FockType::A && i >= npoints / 2) ? 1 : 0};
    s = detail_fk::apply_field(s, f, i, C);
  }
  return detail_fk::vacuum_series(s, npoints, ord, C);
}

// ---------------------------------------------------------------------------
// Bosonic oscillator spaces and exponential vertex operators
// ---------------------------------------------------------------------------

// Basis element: a lattice charge and a monomial in the oscillator variables
// x_n (sorted sparse exponent list).  For type B the charge lives mod 2 and
// only odd-indexed variables occur.
struct BosonBasis {
  int q = 0;
  std::vector<std::pair<int, int>> mono;
  bool operator<(const BosonBasis& o) const {
    return std::tie(q, mono) < std::tie(o.q, o.mono);
  }
  bool operator==(const BosonBasis& o) const { return q == o.q && mono == o.mono; }
};

struct BosonState {
  int ord = 1;
  std::map<BosonBasis, Cyclo> terms;
  explicit BosonState(int o) : ord(o) {}
  static BosonState vacuum(int o) {
    BosonState s(o);
    s.terms.emplace(BosonBasis{}, Cyclo::one(o));
    return s;
  }
  void add(const BosonBasis& b, const Cyclo& c) {
    if (c.is_zero()) return;
    auto it = terms.find(b);
    if (it == terms.end()) {
      terms.emplace(b, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }
  bool is_zero() const { return terms.empty(); }
  BosonState operator+(const BosonState& o) const {
    BosonState out = *this;
    for (const auto& [b, c] : o.terms) out.add(b, c);
    return out;
  }
  Cyclo vacuum_coeff() const {
    auto it = terms.find(BosonBasis{});
    return it == terms.end() ? Cyclo::zero(ord) : it->second;
  }
};

// The exponential vertex operators.
//   APlus / AMinus : e^{+-a}(z) on C[e^a,e^-a] (x) C[x_1,x_2,...], with
//     charge power z^{+-q} and charge shift +-1.
//   BAlpha : the single order-two operator on C[Z_2] (x) C[x_1,x_3,...]; no
//     charge power, charge shift mod 2, odd oscillators only.
//   DMinus / DPlus : the neutral-field summands; the A operators in z^2 with
//     charge powers z^{-2q} resp. z^{2q+1}.
//   DPhi : the image of the neutral fermion field, DMinus + DPlus.
enum class BosonOp { APlus, AMinus, BAlpha, DMinus, DPlus, DPhi };

namespace detail_fk {

struct OpParams {
  int m;        // exponential sign
  int scale;    // z-step per oscillator index (1 for A/B, 2 for D)
  bool odd;     // odd oscillator indices only (type B)
  int qshift;
  bool mod2;    // charge arithmetic mod 2
};

inline OpParams op_params(BosonOp op) {
  switch (op) {
    case BosonOp::APlus: return {+1, 1, false, +1, false};
    case BosonOp::AMinus: return {-1, 1, false, -1, false};
    case BosonOp::BAlpha: return {+1, 1, true, +1, true};
    case BosonOp::DMinus: return {-1, 2, false, -1, false};
    case BosonOp::DPlus: return {+1, 2, false, +1, false};
    case BosonOp::DPhi: break;
  }
  throw std::logic_error("composite operator has no single parameter set");
}

inline int charge_power(BosonOp op, int q) {
  switch (op) {
    case BosonOp::APlus: return q;
    case BosonOp::AMinus: return -q;
    case BosonOp::BAlpha: return 0;
    case BosonOp::DMinus: return -2 * q;
    case BosonOp::DPlus: return 2 * q + 1;
    case BosonOp::DPhi: break;
  }
  throw std::logic_error("composite operator has no charge power");
}

// derivative coefficient of the annihilation exponential: d/dx_n enters as
// a_n = -m/n for A/D and -2/n for B (h_n acts as d/dx_n, resp. with the
// half-integer normalization [h_m,h_n] = (m/2) delta)
inline Rational annih_coeff(const OpParams& p, int n) {
  if (p.odd) return Rational(-2) / n;
  return Rational(-p.m) / n;
}

using BosonSeries = std::map<Expo, BosonState>;

inline void bseries_add(BosonSeries& s, const Expo& e, const BosonBasis& b, const Cyclo& c) {
  if (c.is_zero()) return;
  auto it = s.find(e);
  if (it == s.end()) it = s.emplace(e, BosonState(c.order())).first;
  it->second.add(b, c);
  if (it->second.is_zero()) s.erase(it);
}

// enumerate the creation exponential: all products of x_n^{k_n} with
// sum scale*n*k_n <= cap, emitting (monomial addition, z exponent, coeff)
template <typename F>
inline void creation_terms(const OpParams& p, int cap, int n, std::vector<std::pair<int, int>>& acc,
                           int zexp, const Rational& coeff, F&& emit) {
  emit(acc, zexp, coeff);
  int step = p.odd ? 2 : 1;
  if (p.odd && n % 2 == 0) ++n;
  for (; p.scale * n <= cap - zexp; n += step) {
    Rational c = coeff;
    int ze = zexp;
    acc.emplace_back(n, 0);
    for (int k = 1; p.scale * n * k <= cap - zexp; ++k) {
      c = c * p.m / k;
      ze += p.scale * n;
      acc.back().second = k;
      creation_terms(p, cap, n + step, acc, ze, c, emit);
    }
    acc.pop_back();
  }
}

// Wq(q) bounds the index weight (sum n*k over the oscillator monomial) of
// emitted states at charge q: anything heavier can no longer be annihilated
// down to the vacuum by the operators still to come, so it is pruned here
// instead of carried along.
inline void apply_simple_op(const BosonSeries& in, BosonOp op, int var, int C,
                            const std::function<int(int)>& Wq, BosonSeries& out) {
  OpParams p = op_params(op);
  for (const auto& [e, st] : in) {
    for (const auto& [basis, c0] : st.terms) {
      int base = charge_power(op, basis.q);
      int q2 = basis.q + p.qshift;
      if (p.mod2) q2 = ((q2 % 2) + 2) % 2;
      int W = Wq(q2);
      // annihilation exponential: all multi-derivatives of the monomial
      std::vector<std::pair<std::vector<std::pair<int, int>>, std::pair<int, Rational>>> dterms;
      // iterate over derivative orders per variable of the monomial
      std::vector<int> dmax;
      for (const auto& [n, k] : basis.mono) dmax.push_back(k);
      std::vector<int> d(dmax.size(), 0);
      while (true) {
        Rational dc(1);
        int dz = 0;
        std::vector<std::pair<int, int>> rem;
        for (std::size_t i = 0; i < d.size(); ++i) {
          auto [n, k] = basis.mono[i];
          Rational an = annih_coeff(p, n);
          Rational fall(1);
          for (int j = 0; j < d[i]; ++j) {
            dc = dc * an / (j + 1);
            fall = fall * (k - j);
          }
          dc = dc * fall;
          dz += p.scale * n * d[i];
          if (k - d[i] > 0) rem.emplace_back(n, k - d[i]);
        }
        dterms.emplace_back(rem, std::make_pair(dz, dc));
        // odometer
        std::size_t pos = 0;
        for (; pos < d.size(); ++pos) {
          if (d[pos] < dmax[pos]) {
            ++d[pos];
            break;
          }
          d[pos] = 0;
        }
        if (pos == d.size()) break;
      }
      for (const auto& [rem, dzc] : dterms) {
        int dz = dzc.first;
        if (dzc.second.is_zero()) continue;
        int cap = C - (base - dz);  // creation degree bound for final exp <= C
        int wrem = 0;
        for (const auto& [n, k] : rem) wrem += n * k;
        cap = std::min(cap, p.scale * (W - wrem));  // weight prune (see above)
        if (cap < 0) continue;
        std::vector<std::pair<int, int>> acc;
        creation_terms(
            p, cap, 1, acc, 0, dzc.second,
            [&](const std::vector<std::pair<int, int>>& cre, int cz, const Rational& cc) {
              int fe = base - dz + cz;
              if (std::abs(e[var] + fe) > C) return;
              BosonBasis b2;
              b2.q = q2;
              // merge monomials (both sorted by variable index)
              std::size_t i = 0, j = 0;
              while (i < rem.size() || j < cre.size()) {
                if (j == cre.size() || (i < rem.size() && rem[i].first < cre[j].first))
                  b2.mono.push_back(rem[i++]);
                else if (i == rem.size() || cre[j].first < rem[i].first)
                  b2.mono.push_back(cre[j++]);
                else {
                  b2.mono.emplace_back(rem[i].first, rem[i].second + cre[j].second);
                  ++i, ++j;
                }
              }
              Expo e2 = e;
              e2[var] += fe;
              bseries_add(out, e2, b2, cscale(c0, cc));
            });
      }
    }
  }
}

inline BosonSeries apply_boson_op(const BosonSeries& in, BosonOp op, int var, int C,
                                  const std::function<int(int)>& Wq = [](int) { return 1 << 20; }) {
  BosonSeries out;
  if (op == BosonOp::DPhi) {
    apply_simple_op(in, BosonOp::DMinus, var, C, Wq, out);
    apply_simple_op(in, BosonOp::DPlus, var, C, Wq, out);
  } else {
    apply_simple_op(in, op, var, C, Wq, out);
  }
  return out;
}

// Maximum index weight that ops[0..j], applied right to left starting from
// charge q, can remove while keeping every variable's exponent within the
// window: each operator changes the weight by at most
// floor((C + charge power)/scale).  Negative values mean forced growth.
inline int annihilable_weight(const std::vector<BosonOp>& ops, int j, int q, int C,
                              std::map<std::pair<int, int>, int>& memo) {
  if (j < 0) return 0;
  auto it = memo.find({j, q});
  if (it != memo.end()) return it->second;
  int best = std::numeric_limits<int>::min() / 2;
  std::vector<BosonOp> branches =
      ops[j] == BosonOp::DPhi ? std::vector<BosonOp>{BosonOp::DMinus, BosonOp::DPlus}
                              : std::vector<BosonOp>{ops[j]};
  for (BosonOp b : branches) {
    OpParams p = op_params(b);
    int q2 = q + p.qshift;
    if (p.mod2) q2 = ((q2 % 2) + 2) % 2;
    int step = C + charge_power(b, q);
    step = step >= 0 ? step / p.scale : -((-step + p.scale - 1) / p.scale);
    best = std::max(best, step + annihilable_weight(ops, j - 1, q2, C, memo));
  }
  return memo[{j, q}] = best;
}

}  // namespace detail_fk

// Vacuum expectation of a product of exponential vertex operators, rightmost
// operator applied first; one variable per operator.
inline LaurentSeries boson_vertex_vev(const std::vector<BosonOp>& ops, int C) {
  int n = static_cast<int>(ops.size());
  bool typeA = !ops.empty() && (ops[0] == BosonOp::APlus || ops[0] == BosonOp::AMinus);
  int ord = typeA ? 1 : 2;
  detail_fk::BosonSeries s;
  s.emplace(Expo(n, 0), BosonState::vacuum(ord));
  std::map<std::pair<int, int>, int> memo;
  for (int i = n - 1; i >= 0; --i)
    s = detail_fk::apply_boson_op(s, ops[i], i, C, [&](int q) {
      return detail_fk::annihilable_weight(ops, i - 1, q, C, memo);
    });
  std::vector<int> region(n);
  std::iota(region.begin(), region.end(), 0);
  LaurentSeries out(n, ord, C, region);
  for (const auto& [e, st] : s) out.add_term(e, st.vacuum_coeff());
  return out;
}

// ---------------------------------------------------------------------------
// Heisenberg modes on the fermionic side
// ---------------------------------------------------------------------------

namespace detail_fk {

// :mode_l mode_r: applied to a state (annihilators already on the right by
// construction: a (left-annihilator, right-creation) pair is reordered).
inline ModeState apply_normal_pair(const ModeState& s, int l, int r, const Cyclo& c) {
  if (!is_creation(s.type, l) && is_creation(s.type, r))
    return apply_mode(apply_mode(s, l), r).scaled(-c);
  return apply_mode(apply_mode(s, r), l).scaled(c);
}

}  // namespace detail_fk

// Apply the Heisenberg mode h_k, realized as the fermion bilinear:
//   A: h(z) = :phi(z) psi(z):        = sum_n h_n z^{-n-1}
//   B: h(z) = (1/4)(:phi(z)phi(-z): - 1), odd modes at z^{-r}
//   D: h(z) = (1/2):phi(z)phi(-z):,  h_n at z^{-2n-1}
inline ModeState apply_h(const ModeState& s, int k) {
  int bound = std::abs(k) + s.max_abs_mode() + 2;
  ModeState out(s.type, s.ord);
  switch (s.type) {
    case FockType::A: {
      // z-exponent of :phi_m psi_j: is m + j = -k - 1
      for (int m = -bound; m <= bound; ++m) {
        int j = -k - 1 - m;
        if (std::abs(j) > bound) continue;
        out = out + detail_fk::apply_normal_pair(s, 2 * m, 2 * j + 1, Cyclo::one(s.ord));
      }
      break;
    }
    case FockType::B: {
      if (((k % 2) + 2) % 2 == 0) throw std::invalid_argument("type B has odd modes only");
      for (int m = -bound; m <= bound; ++m) {
        int j = -k - m;
        if (std::abs(j) > bound) continue;
        Rational c = Rational(1) / 4;
        if (((j % 2) + 2) % 2 == 1) c = -c;  // the (-z) argument of the second field
        out = out + detail_fk::apply_normal_pair(s, m, j, Cyclo(s.ord, c));
      }
      break;
    }
    case FockType::D: {
      // doubled keys: z-exponent of :phi_m phi_j: is -(m2+j2)/2 - 1 = -2k-1.
      // Creation pairs reach |m2| = 4|k| - 1 and a contraction partner
      // reaches 4|k| + (largest state key), so the range must cover both.
      int R = (4 * std::abs(k) + s.max_abs_mode() + 2) | 1;  // odd keys only
      for (int m2 = -R; m2 <= R; m2 += 2) {
        int j2 = 4 * k - m2;
        if (std::abs(j2) > R) continue;
        int ej = -(j2 + 1) / 2;  // integer exponent carried by the second field
        Rational c = Rational(1) / 2;
        if (((ej % 2) + 2) % 2 == 1) c = -c;
        out = out + detail_fk::apply_normal_pair(s, m2, j2, Cyclo(s.ord, c));
      }
      break;
    }
  }
  return out;
}

// Extract the constant of [h_m, h_n] by acting on a spanning set of
// low-weight states; throws if the commutator is not that constant times the
// identity on the sampled states.
inline Cyclo mode_bracket(FockType t, int m, int n) {
  int ord = (t == FockType::A) ? 1 : 2;
  std::vector<ModeState> span{ModeState::vacuum(t, ord)};
  auto creation_keys = [&]() -> std::vector<int> {
    switch (t) {
      case FockType::A: return {0, 1, 2, 5};
      case FockType::B: return {0, 1, 3};
      case FockType::D: return {-1, -3, -5};
    }
    return {};
  }();
  for (int key : creation_keys) span.push_back(apply_mode(span[0], key));
  span.push_back(apply_mode(span[1], creation_keys[1]));

  bool have = false;
  Cyclo c = Cyclo::zero(ord);
  for (const auto& s : span) {
    if (s.is_zero()) continue;
    ModeState comm = apply_h(apply_h(s, n), m) - apply_h(apply_h(s, m), n);
    // expect comm == c * s
    if (!have) {
      // read off the candidate from the first nonzero component
      if (comm.is_zero()) {
        c = Cyclo::zero(ord);
      } else {
        const auto& [w0, v0] = *s.terms.begin();
        auto it = comm.terms.find(w0);
        if (it == comm.terms.end()) throw std::logic_error("commutator is not a scalar");
        c = it->second * v0.inverse();
      }
      have = true;
    }
    if (!(comm - s.scaled(c)).is_zero()) throw std::logic_error("commutator is not a scalar");
  }
  return c;
}

// Mode-level normal-ordered product applied to the vacuum:
//   A: :phi(z) psi(z): |0>,  B/D: :phi(z) phi(-z): |0>.
// Only creation pairs survive on the vacuum.
inline ModeSeries mode_normal_order(FockType t, int C) {
  int ord = (t == FockType::A) ? 1 : 2;
  ModeState vac = ModeState::vacuum(t, ord);
  ModeSeries out;
  ModeField fL{t, 0}, fR{t, t == FockType::A ? 1 : 0};
  for (const auto& [l, el] : fL.modes_in_window(C))
    for (const auto& [r, er] : fR.modes_in_window(C)) {
      if (std::abs(el + er) > C) continue;
      Cyclo c = Cyclo::one(ord);
      if (t != FockType::A && ((er % 2) + 2) % 2 == 1) c = -c;
      ModeState st = detail_fk::apply_normal_pair(vac, l, r, c);
      if (!st.is_zero()) detail_fk::series_add(out, Expo{el + er}, st);
    }
  return out;
}

// Pair a one-variable state series with <0| phi(u) . , yielding a
// two-variable Laurent series (u first).
inline LaurentSeries pair_with_field(const ModeSeries& s, FockType t, int species, int C) {
  int ord = (t == FockType::A) ? 1 : 2;
  ModeSeries two;
  for (const auto& [e, st] : s) two.emplace(Expo{0, e[0]}, st);
  two = detail_fk::apply_field(two, ModeField{t, species}, 0, C);
  return detail_fk::vacuum_series(two, 2, ord, C);
}

// ---------------------------------------------------------------------------
// Reports: highest-weight structure and the correspondences
// ---------------------------------------------------------------------------

struct OracleReport {
  bool pass = true;
  std::vector<std::string> lines;
  void record(const std::string& name, bool ok, const std::string& note = "") {
    pass = pass && ok;
    lines.push_back(name + ": " + (ok ? "pass" : "FAIL") + (note.empty() ? "" : " (" + note + ")"));
  }
};

// Verify that the symbolic states phi . D^{(2)}phi ... D^{(2k-2)}phi and
// D phi . D^{(3)}phi ... D^{(2k-1)}phi (k factors each) are highest weight
// vectors for the Heisenberg field Y((1/2) phi . T phi, z), with h_0
// eigenvalues -k and +k.  The mode-algebra h_0 confirms the same charges
// (each even-derivative factor contributes -1, each odd-derivative +1).
inline OracleReport highest_weight_check(int n, int C = 8) {
  OracleReport rep;
  auto r = make_preset("Df");
  auto gen_d = [&](int d) {
    return HopfElement::generator(2, Ambient::FreePhi, Generator{BaseSym::Phi, d, 0});
  };
  HopfElement h = gen_d(0) * HopfElement::generator(2, Ambient::FreePhi, Generator{BaseSym::Phi, 0, 1});
  h = h.scaled(Cyclo(2, Rational(1) / 2));
  auto run = [&](const HopfElement& a, int eigen, const std::string& name) {
    FieldSeries F = vertex_op(r, h, a, C);
    bool ok = true;
    for (int k = 1; 2 * k + 1 <= C; ++k)
      if (!F.coefficient(-2 * k - 1).is_zero()) ok = false;
    HopfElement h0a = F.coefficient(-1);
    if (!(h0a == a.scaled(Cyclo(2, static_cast<long>(eigen))))) ok = false;
    rep.record(name, ok);
  };
  run(HopfElement::unit(2, Ambient::FreePhi), 0, "vacuum weight 0");
  for (int k = 1; k <= n; ++k) {
    HopfElement ev = gen_d(0);
    for (int j = 1; j < k; ++j) ev = ev * gen_d(2 * j);
    run(ev, -k, "even vector k=" + std::to_string(k));
    HopfElement od = gen_d(1);
    for (int j = 2; j <= k; ++j) od = od * gen_d(2 * j - 1);
    run(od, k, "odd vector k=" + std::to_string(k));
  }
  return rep;
}

// The boson-fermion correspondences as equality of truncated vacuum
// expectation series, plus the structural side checks.
inline OracleReport correspondence_check(const std::string& type, int points, int C, int N = 2) {
  OracleReport rep;
  if (type == "A") {
    for (int n = 1; 2 * n <= points; ++n) {
      std::vector<BosonOp> ops(2 * n);
      for (int i = 0; i < n; ++i) ops[i] = BosonOp::APlus;
      for (int i = n; i < 2 * n; ++i) ops[i] = BosonOp::AMinus;
      bool ok = fock_vev(FockType::A, 2 * n, C) == boson_vertex_vev(ops, C);
      rep.record("A " + std::to_string(2 * n) + "-point", ok);
    }
  } else if (type == "B") {
    for (int k = 1; k <= points; ++k) {
      std::vector<BosonOp> ops(k, BosonOp::BAlpha);
      bool ok = fock_vev(FockType::B, k, C) == boson_vertex_vev(ops, C);
      rep.record("B " + std::to_string(k) + "-point", ok);
    }
  } else if (type == "D") {
    for (int k = 1; k <= points; ++k) {
      std::vector<BosonOp> ops(k, BosonOp::DPhi);
      bool ok = fock_vev(FockType::D, k, C) == boson_vertex_vev(ops, C);
      rep.record("D " + std::to_string(k) + "-point", ok);
    }
    // change of variable: <e^a_D(z) e^-a_D(w)> is the z^2-substitution of the
    // type A two-point series, with the extra z from the charge power
    int Cd = std::min(C, 6);
    LaurentSeries dpm = boson_vertex_vev({BosonOp::DPlus, BosonOp::DMinus}, 2 * Cd + 1);
    LaurentSeries apm = boson_vertex_vev({BosonOp::APlus, BosonOp::AMinus}, Cd);
    LaurentSeries expect(2, 2, 2 * Cd + 1, {0, 1});
    for (const auto& [e, c] : apm.terms)
      expect.add_term(Expo{2 * e[0] + 1, 2 * e[1]}, Cyclo(2, c.rational_part()));
    rep.record("D doubling", dpm.restricted(2 * Cd) == expect.restricted(2 * Cd));
  } else if (type == "D-N") {
    // order-N Heisenberg two-point function z^{N-1} w^{N-1} / (z^N - w^N)^2.
    // The cyclic bilinear (1/N) sum_i eps^{i-1} (T^{i-1}phi)(T^i phi) pairs to
    // -N eps^{-1} times that target (4x for N = 2, where the two cross poles
    // coincide), so a normalizing scalar lambda with the right square is
    // needed: 1/2 for N = 2 and (eps - 1)/3 for N = 3, whose square is -eps/3.
    auto r = make_preset("Df", N);
    HopfElement h = HopfElement::zero(N, Ambient::FreePhi);
    for (int i = 0; i < N; ++i) {
      int im1 = ((i - 1) % N + N) % N;
      HopfElement term =
          HopfElement::generator(N, Ambient::FreePhi, Generator{BaseSym::Phi, 0, im1}) *
          HopfElement::generator(N, Ambient::FreePhi, Generator{BaseSym::Phi, 0, i});
      h = h + term.scaled(Cyclo::eps_pow(N, im1));
    }
    h = h.scaled(Cyclo(N, Rational(1) / N));
    if (N == 2) {
      h = h.scaled(Cyclo(2, Rational(1) / 2));
    } else if (N == 3) {
      h = h.scaled((Cyclo::eps_pow(3, 1) + Cyclo(3, Rational(-1))) * Cyclo(3, Rational(1) / 3));
    } else {
      throw std::invalid_argument("order-N Heisenberg normalization derived for N = 2, 3 only");
    }
    RatFn lhs = extend_eval(r, h, h);
    RatFn rhs = RatFn::from_poly(LaurentPoly::monomial(2, N, 0, N - 1, Cyclo::one(N))) *
                RatFn::from_poly(LaurentPoly::monomial(2, N, 1, N - 1, Cyclo::one(N)));
    for (int k = 0; k < N; ++k) rhs *= RatFn::inv_linear(2, N, 0, 1, k).pow(2);
    rep.record("order-" + std::to_string(N) + " Heisenberg pairing", lhs == rhs);
  } else {
    throw std::invalid_argument("unknown correspondence type: " + type);
  }
  return rep;
}

}  // namespace tva
