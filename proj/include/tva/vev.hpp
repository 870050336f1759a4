// Closed-form vacuum expectation values: Pfaffian and determinant formulas
// for the fermionic presets, the charge-conservation product formula for the
// lattice presets, the Heisenberg pairings obtained by logarithmic
// differentiation, and exact verifiers for three classical rational-function
// identities (Cauchy determinant, Schur Pfaffian, and the neutral-fermion
// Pfaffian / symmetric-function identity).
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tva/bicharacter.hpp"

namespace tva {

// ---------------------------------------------------------------------------
// Pfaffian and determinant over exact rational functions
// ---------------------------------------------------------------------------

struct AntisymMatrix {
  int n = 0;
  std::vector<std::vector<RatFn>> a;

  explicit AntisymMatrix(std::vector<std::vector<RatFn>> m) : a(std::move(m)) {
    n = static_cast<int>(a.size());
    for (const auto& row : a)
      if (static_cast<int>(row.size()) != n)
        throw std::invalid_argument("antisymmetric matrix must be square");
    for (int i = 0; i < n; ++i) {
      if (!a[i][i].is_zero())
        throw std::invalid_argument("antisymmetric matrix must have zero diagonal");
      for (int j = i + 1; j < n; ++j) {
        int ord = a[i][j].order();
        if (a[j][i] != a[i][j].scaled(-Cyclo::one(ord)))
          throw std::invalid_argument("matrix is not antisymmetric");
      }
    }
  }
};

namespace detail_vev {

inline RatFn pfaffian_rec(const std::vector<std::vector<RatFn>>& a, std::vector<int> idx) {
  if (idx.empty()) {
    // empty Pfaffian is 1 in the ambient ring of the full matrix
    return RatFn::one(a[0][0].nvars(), a[0][0].order());
  }
  RatFn out = RatFn::zero(a[0][0].nvars(), a[0][0].order());
  int i0 = idx[0];
  for (std::size_t p = 1; p < idx.size(); ++p) {
    std::vector<int> rest;
    for (std::size_t q = 1; q < idx.size(); ++q)
      if (q != p) rest.push_back(idx[q]);
    RatFn term = a[i0][idx[p]] * pfaffian_rec(a, rest);
    if (p % 2 == 0) term = term.scaled(-Cyclo::one(term.order()));
    out += term;
  }
  return out;
}

inline RatFn det_rec(const std::vector<std::vector<RatFn>>& m, int row, uint32_t colmask,
                     std::unordered_map<uint32_t, RatFn>& memo) {
  int n = static_cast<int>(m.size());
  if (row == n) return RatFn::one(m[0][0].nvars(), m[0][0].order());
  auto it = memo.find(colmask);
  if (it != memo.end()) return it->second;
  RatFn out = RatFn::zero(m[0][0].nvars(), m[0][0].order());
  int pos = 0;
  for (int j = 0; j < n; ++j) {
    if (!(colmask & (1u << j))) continue;
    RatFn term = m[row][j] * det_rec(m, row + 1, colmask & ~(1u << j), memo);
    if (pos % 2 == 1) term = term.scaled(-Cyclo::one(term.order()));
    out += term;
    ++pos;
  }
  memo.emplace(colmask, out);
  return out;
}

}  // namespace detail_vev

// Exact Pfaffian by recursive expansion along the first row;
// Pf([[0,1],[-1,0]]) = +1.
inline RatFn pfaffian(const AntisymMatrix& A) {
  if (A.n % 2 != 0) throw std::invalid_argument("Pfaffian requires even dimension");
  if (A.n == 0) throw std::invalid_argument("Pfaffian of an empty matrix is ambiguous");
  std::vector<int> idx(A.n);
  std::iota(idx.begin(), idx.end(), 0);
  return detail_vev::pfaffian_rec(A.a, idx);
}

// Exact determinant by first-row expansion with column-mask memoization
// (avoids division, which is unavailable for non-factorable numerators).
inline RatFn determinant(const std::vector<std::vector<RatFn>>& m) {
  int n = static_cast<int>(m.size());
  for (const auto& row : m)
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("determinant requires a square matrix");
  if (n == 0) throw std::invalid_argument("determinant of an empty matrix is ambiguous");
  std::unordered_map<uint32_t, RatFn> memo;
  return detail_vev::det_rec(m, 0, (1u << n) - 1, memo);
}

// ---------------------------------------------------------------------------
// Closed-form vacuum expectation values
// ---------------------------------------------------------------------------

// <phi(z_1)...phi(z_{2n})> = Pf( r_{z_i,z_j}(phi (x) phi) ).
inline RatFn vev_neutral(const BicharacterSpec& r, int n2) {
  if (n2 <= 0 || n2 % 2 != 0) throw std::invalid_argument("vev_neutral needs an even point count");
  HopfElement phi = HopfElement::generator(r.N, r.amb, Generator{BaseSym::Phi, 0, 0});
  RatFn f2 = extend_eval(r, phi, phi);
  std::vector<std::vector<RatFn>> a(n2, std::vector<RatFn>(n2, RatFn::zero(n2, r.N)));
  for (int i = 0; i < n2; ++i)
    for (int j = i + 1; j < n2; ++j) {
      a[i][j] = detail_bc::embed_pair(f2, n2, i, j);
      a[j][i] = a[i][j].scaled(-Cyclo::one(r.N));
    }
  return pfaffian(AntisymMatrix(std::move(a)));
}

// <phi(z_1)...phi(z_n) psi(w_1)...psi(w_n)>
//   = (-1)^{n(n-1)/2} det( r_{z_i,w_j}(phi (x) psi) ).
// Variables 0..n-1 are the z's, n..2n-1 the w's.
inline RatFn vev_charged(const BicharacterSpec& r, int n) {
  if (n <= 0) throw std::invalid_argument("vev_charged needs a positive point count");
  HopfElement phi = HopfElement::generator(r.N, r.amb, Generator{BaseSym::Phi, 0, 0});
  HopfElement psi = HopfElement::generator(r.N, r.amb, Generator{BaseSym::Psi, 0, 0});
  RatFn f2 = extend_eval(r, phi, psi);
  std::vector<std::vector<RatFn>> m(n, std::vector<RatFn>(n, RatFn::zero(2 * n, r.N)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = detail_bc::embed_pair(f2, 2 * n, i, n + j);
  RatFn out = determinant(m);
  if ((n * (n - 1) / 2) % 2 == 1) out = out.scaled(-Cyclo::one(r.N));
  return out;
}

// <e^{m_1 a}(z_1)...e^{m_n a}(z_n)> = [charge sum vanishes] prod_{i<j} r(e^{m_i} (x) e^{m_j}).
// For the order-two quotient lattice the charge condition is taken mod 2.
inline RatFn vev_lattice(const BicharacterSpec& r, const std::vector<int>& charges) {
  if (!is_lattice(r.amb)) throw std::invalid_argument("vev_lattice needs a lattice ambient");
  int n = static_cast<int>(charges.size());
  if (n == 0) throw std::invalid_argument("vev_lattice needs at least one point");
  long sum = std::accumulate(charges.begin(), charges.end(), 0L);
  bool conserved = (r.amb == Ambient::LatticeB) ? (sum % 2 == 0) : (sum == 0);
  if (!conserved) return RatFn::zero(n, r.N);
  auto it = r.table.find({detail_bc::kTagE, detail_bc::kTagE});
  if (it == r.table.end()) throw std::invalid_argument("lattice pairing is missing from the table");
  RatFn out = RatFn::one(n, r.N);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int e = charges[i] * charges[j];
      if (e != 0) out *= detail_bc::embed_pair(it->second.pow(e), n, i, j);
    }
  return out;
}

// The Heisenberg pairings of a lattice bicharacter:
//   r(h (x) e^{m a}) = m d/dz log r(e^a (x) e^a),
//   r(h (x) h)       = d/dz d/dw log r(e^a (x) e^a).
inline std::pair<RatFn, RatFn> heisenberg_from_lattice(const BicharacterSpec& r, int m) {
  if (!is_lattice(r.amb)) throw std::invalid_argument("lattice ambient required");
  auto it = r.table.find({detail_bc::kTagE, detail_bc::kTagE});
  if (it == r.table.end()) throw std::invalid_argument("lattice pairing is missing from the table");
  RatFn he = log_derivative(it->second, 0).scaled(Cyclo(r.N, static_cast<long>(m)));
  return {he, log_mixed_derivative(it->second)};
}

// ---------------------------------------------------------------------------
// Classical identity verification (exact polynomial arithmetic)
// ---------------------------------------------------------------------------

namespace detail_vev {

// Sparse multivariate polynomial over int64; exponents packed 8 bits per
// variable into a 64-bit key (up to 8 variables, per-variable degree < 256).
using SPoly = std::unordered_map<uint64_t, long long>;

inline void sp_add(SPoly& p, uint64_t key, long long c) {
  auto [it, fresh] = p.emplace(key, c);
  if (!fresh && (it->second += c) == 0) p.erase(it);
}

// multiply by (z_a + sb * z_b)
inline SPoly sp_mul_linear(const SPoly& p, int a, int b, int sb) {
  SPoly out;
  out.reserve(2 * p.size());
  for (const auto& [k, c] : p) {
    sp_add(out, k + (uint64_t(1) << (8 * a)), c);
    sp_add(out, k + (uint64_t(1) << (8 * b)), sb * c);
  }
  return out;
}

inline bool sp_equal(const SPoly& a, const SPoly& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [k, c] : a) {
    auto it = b.find(k);
    if (it == b.end() || it->second != c) return false;
  }
  return true;
}

// Enumerate perfect matchings of {0..n-1} with the Pfaffian expansion sign.
template <typename F>
inline void matchings_rec(std::vector<int>& idx, int sign, std::vector<std::pair<int, int>>& acc,
                          F&& emit) {
  if (idx.empty()) {
    emit(acc, sign);
    return;
  }
  int i0 = idx[0];
  for (std::size_t p = 1; p < idx.size(); ++p) {
    std::vector<int> rest;
    for (std::size_t q = 1; q < idx.size(); ++q)
      if (q != p) rest.push_back(idx[q]);
    acc.emplace_back(i0, idx[p]);
    matchings_rec(rest, p % 2 == 1 ? sign : -sign, acc, emit);
    acc.pop_back();
  }
}

template <typename F>
inline void for_each_matching(int n, F&& emit) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<std::pair<int, int>> acc;
  matchings_rec(idx, +1, acc, emit);
}

// Cauchy determinant identity, denominators cleared by prod_{i,j}(z_i - w_j):
//   (-1)^{n(n-1)/2} sum_s sgn(s) prod_i prod_{j != s(i)} (z_i - w_j)
//     = prod_{i<j} (z_i - z_j)(w_i - w_j).
// Variables: z_i -> i, w_j -> n + j.
inline bool verify_cauchy(int n) {
  SPoly lhs;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    int sgn = 1;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) sgn = -sgn;
    SPoly term{{0, sgn}};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (j != perm[i]) term = sp_mul_linear(term, i, n + j, -1);
    for (const auto& [k, c] : term) sp_add(lhs, k, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  if ((n * (n - 1) / 2) % 2 == 1)
    for (auto& [k, c] : lhs) c = -c;

  SPoly rhs{{0, 1}};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      rhs = sp_mul_linear(rhs, i, j, -1);
      rhs = sp_mul_linear(rhs, n + i, n + j, -1);
    }
  return sp_equal(lhs, rhs);
}

// Neutral-fermion Pfaffian identity for 2n points, both sides multiplied by
// D2 = prod_{a<b}(z_a^2 - z_b^2):
//   LHS*D2 = [ sum_M eps(M) prod_{(a,b) not in M}(z_a - z_b) ] * prod_{a<b}(z_a + z_b)
//   RHS*D2 = sum_{|I|=n} prod_{i in I} z_i prod_{k<l in I}(z_k^2 - z_l^2)^2
//                                      prod_{p<q notin I}(z_p^2 - z_q^2)^2
// (keeping every squared difference in original index order, the cross
// factors of D2 cancel the term's denominator exactly, with no extra sign).
inline bool verify_da(int two_n) {
  int n = two_n / 2;
  SPoly lhs;
  for_each_matching(two_n, [&](const std::vector<std::pair<int, int>>& m, int sign) {
    SPoly term{{0, sign}};
    for (int a = 0; a < two_n; ++a)
      for (int b = a + 1; b < two_n; ++b) {
        bool in_m = false;
        for (const auto& [x, y] : m)
          if (x == a && y == b) in_m = true;
        if (!in_m) term = sp_mul_linear(term, a, b, -1);
      }
    for (const auto& [k, c] : term) sp_add(lhs, k, c);
  });
  for (int a = 0; a < two_n; ++a)
    for (int b = a + 1; b < two_n; ++b) lhs = sp_mul_linear(lhs, a, b, +1);

  SPoly rhs;
  for (uint32_t mask = 0; mask < (1u << two_n); ++mask) {
    if (__builtin_popcount(mask) != n) continue;
    std::vector<int> I, J;
    for (int v = 0; v < two_n; ++v) (mask & (1u << v) ? I : J).push_back(v);
    SPoly term{{0, 1}};
    for (int v : I) {
      SPoly shifted;
      for (const auto& [k, c] : term) shifted.emplace(k + (uint64_t(1) << (8 * v)), c);
      term = std::move(shifted);
    }
    auto sq_diff_sq = [&](const std::vector<int>& set) {
      for (std::size_t x = 0; x < set.size(); ++x)
        for (std::size_t y = x + 1; y < set.size(); ++y)
          for (int rep = 0; rep < 2; ++rep) {
            term = sp_mul_linear(term, set[x], set[y], -1);
            term = sp_mul_linear(term, set[x], set[y], +1);
          }
    };
    sq_diff_sq(I);
    sq_diff_sq(J);
    for (const auto& [k, c] : term) sp_add(rhs, k, c);
  }
  return sp_equal(lhs, rhs);
}

// Dense homogeneous polynomial in up to 8 variables with per-variable degree
// at most 7: the first 7 exponents are packed 3 bits each into the array
// index, the last variable's exponent is implied by homogeneity.
struct DPoly {
  static constexpr int kSize = 1 << 21;  // 8^7
  int deg = 0;
  std::vector<long long> c;
  DPoly() : c(kSize, 0) {}
  static int stride(int v) { return 1 << (3 * v); }
  static int expo(int key, int v) { return (key >> (3 * v)) & 7; }
};

// multiply by (z_a + sb * z_b); a < b, b may be the implicit variable 7
inline DPoly d_mul_linear(const DPoly& p, int a, int b, int sb) {
  DPoly out;
  out.deg = p.deg + 1;
  const int sa = DPoly::stride(a);
  if (b == 7) {
    for (int k = 0; k < DPoly::kSize; ++k) {
      long long v = p.c[k];
      if (v == 0) continue;
      if (DPoly::expo(k, a) == 7) throw std::logic_error("dense degree overflow");
      out.c[k + sa] += v;
      out.c[k] += sb * v;
    }
  } else {
    const int sbst = DPoly::stride(b);
    for (int k = 0; k < DPoly::kSize; ++k) {
      long long v = p.c[k];
      if (v == 0) continue;
      if (DPoly::expo(k, a) == 7 || DPoly::expo(k, b) == 7)
        throw std::logic_error("dense degree overflow");
      out.c[k + sa] += v;
      out.c[k + sbst] += sb * v;
    }
  }
  return out;
}

// exact division by (z_a + sb * z_b); a < b, b may be the implicit variable 7
inline DPoly d_div_linear(const DPoly& p, int a, int b, int sb) {
  DPoly q;
  q.deg = p.deg - 1;
  const int sa = DPoly::stride(a);
  const int sbst = (b == 7) ? 0 : DPoly::stride(b);
  // univariate synthetic division in z_a: q_{d-1} = c_d - sb * z_b * q_d
  for (int d = 7; d >= 1; --d) {
    for (int k = 0; k < DPoly::kSize; ++k) {
      if (DPoly::expo(k, a) != d) continue;
      long long zbq;
      if (b == 7) zbq = q.c[k];
      else zbq = DPoly::expo(k, b) >= 1 ? q.c[k - sbst] : 0;
      q.c[k - sa] = p.c[k] - sb * zbq;
    }
  }
  for (int k = 0; k < DPoly::kSize; ++k) {
    if (DPoly::expo(k, a) != 0) continue;
    long long zbq;
    if (b == 7) zbq = q.c[k];
    else zbq = DPoly::expo(k, b) >= 1 ? q.c[k - sbst] : 0;
    if (p.c[k] != sb * zbq) throw std::logic_error("inexact dense division");
  }
  return q;
}

// Schur Pfaffian identity for 2n points, denominators cleared by
// P+ = prod_{a<b}(z_a + z_b):
//   sum_M eps(M) prod_{(a,b) in M}(z_a - z_b) * P+ / prod_{(a,b) in M}(z_a + z_b)
//     = prod_{a<b}(z_a - z_b).
inline bool verify_schur(int two_n) {
  DPoly pplus;
  pplus.c[0] = 1;
  for (int a = 0; a < two_n; ++a)
    for (int b = a + 1; b < two_n; ++b) pplus = d_mul_linear(pplus, a, b, +1);

  DPoly lhs;
  lhs.deg = pplus.deg;
  for_each_matching(two_n, [&](const std::vector<std::pair<int, int>>& m, int sign) {
    DPoly term = pplus;
    for (const auto& [a, b] : m) term = d_div_linear(term, a, b, +1);
    for (const auto& [a, b] : m) term = d_mul_linear(term, a, b, -1);
    for (int k = 0; k < DPoly::kSize; ++k) lhs.c[k] += sign * term.c[k];
  });

  DPoly rhs;
  rhs.c[0] = 1;
  for (int a = 0; a < two_n; ++a)
    for (int b = a + 1; b < two_n; ++b) rhs = d_mul_linear(rhs, a, b, -1);
  return lhs.deg == rhs.deg && lhs.c == rhs.c;
}

}  // namespace detail_vev

// Exact verification of the three classical identities underlying the
// charged, symmetric, and neutral fermion vacuum expectation values.
//   cauchy: n is the matrix size (2n variables)
//   schur / da: n is the (even) point count 2n <= 8 resp. 2n <= 6
inline bool verify_identity(const std::string& name, int n) {
  if (name == "cauchy") {
    if (n < 1 || n > 4) throw std::invalid_argument("cauchy: n must be in 1..4");
    return detail_vev::verify_cauchy(n);
  }
  if (name == "schur") {
    if (n < 2 || n > 8 || n % 2 != 0)
      throw std::invalid_argument("schur: point count must be even, 2..8");
    return detail_vev::verify_schur(n);
  }
  if (name == "da") {
    if (n < 2 || n > 6 || n % 2 != 0)
      throw std::invalid_argument("da: point count must be even, 2..6");
    return detail_vev::verify_da(n);
  }
  throw std::invalid_argument("unknown identity: " + name);
}

}  // namespace tva
