// Bicharacter extension, presets, structural predicates, and n-characters.
#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tva/bicharacter.hpp"

using namespace tva;

namespace {

RatFn inv_lin(int nv, int N, int i, int j, int k = 0) { return RatFn::inv_linear(nv, N, i, j, k); }
RatFn lin(int nv, int N, int i, int j, int k = 0) { return RatFn::linear(nv, N, i, j, k); }

HopfElement gen(int N, Ambient amb, BaseSym b, int dDeg = 0, int tPow = 0) {
  return HopfElement::generator(N, amb, Generator{b, dDeg, tPow});
}

// h_phi = phi . T phi (the even Heisenberg element of the order-2 fermion
// ambients)
HopfElement h_phi(int N, Ambient amb) {
  return gen(N, amb, BaseSym::Phi) * gen(N, amb, BaseSym::Phi, 0, 1);
}

}  // namespace

TEST_CASE("preset construction") {
  for (const char* name : {"Af", "Ab", "Bf", "Bb", "Df", "Db", "C", "id"})
    REQUIRE_NOTHROW(make_preset(name));
  REQUIRE_THROWS_AS(make_preset("Zf"), std::domain_error);
  CHECK(make_preset("Af").N == 1);
  CHECK(make_preset("Ab").N == 1);
  CHECK(make_preset("Bf").N == 2);
  CHECK(make_preset("Df", 3).N == 3);
  CHECK(make_preset("Bb").amb == Ambient::LatticeB);
  CHECK(make_preset("Db").amb == Ambient::LatticeD);

  // an order-two lattice value violating its quotient relation must be
  // rejected at construction time
  BicharacterSpec bad = make_preset("Db");
  bad.table[{3, 3}] = lin(2, 2, 0, 1);  // z - w is not even in z
  CHECK_FALSE(relation_consistency(bad, Ambient::LatticeD));
}

TEST_CASE("extension on fermion descendants") {
  auto rD = make_preset("Df");
  auto phi = gen(2, Ambient::FreePhi, BaseSym::Phi);
  auto Tphi = gen(2, Ambient::FreePhi, BaseSym::Phi, 0, 1);

  CHECK(extend_eval(rD, phi, phi) == inv_lin(2, 2, 0, 1));
  // r(T phi, T phi) = -r(phi, phi)
  CHECK(extend_eval(rD, Tphi, Tphi) == -inv_lin(2, 2, 0, 1));
  // r(phi, T phi) = 1/(z + w)
  CHECK(extend_eval(rD, phi, Tphi) == inv_lin(2, 2, 0, 1, 1));

  // covariance on a derivative descendant: r(D phi, phi) = d/dz 1/(z-w)
  auto Dphi = gen(2, Ambient::FreePhi, BaseSym::Phi, 1, 0);
  CHECK(extend_eval(rD, Dphi, phi) == inv_lin(2, 2, 0, 1).derivative(0));

  // unit law r(1, a) = eta(a), r(a, 1) = eta(a)
  auto one = HopfElement::unit(2, Ambient::FreePhi);
  CHECK(extend_eval(rD, one, phi).is_zero());
  CHECK(extend_eval(rD, phi, one).is_zero());
  CHECK(extend_eval(rD, one, one) == RatFn::one(2, 2));
}

TEST_CASE("Heisenberg two-point values") {
  // r^D(h_phi, h_phi) = 4zw/(z^2-w^2)^2 = 1/(z-w)^2 - 1/(z+w)^2
  auto rD = make_preset("Df");
  RatFn expD = inv_lin(2, 2, 0, 1).pow(2) - inv_lin(2, 2, 0, 1, 1).pow(2);
  CHECK(extend_eval(rD, h_phi(2, Ambient::FreePhi), h_phi(2, Ambient::FreePhi)) == expD);

  // r^B(h_phi, h_phi) = 8zw(z^2+w^2)/(z^2-w^2)^2
  //                   = (z+w)^2/(z-w)^2 - (z-w)^2/(z+w)^2
  auto rB = make_preset("Bf");
  RatFn expB = (lin(2, 2, 0, 1, 1) * inv_lin(2, 2, 0, 1)).pow(2) -
               (lin(2, 2, 0, 1) * inv_lin(2, 2, 0, 1, 1)).pow(2);
  CHECK(extend_eval(rB, h_phi(2, Ambient::FreePhi), h_phi(2, Ambient::FreePhi)) == expB);
}

TEST_CASE("lattice extension and group law") {
  auto rAb = make_preset("Ab");
  const int N = 1;
  auto e = [&](int m, int t = 0) { return HopfElement::lattice(N, Ambient::Lattice, m, t); };
  RatFn zw = lin(2, N, 0, 1);

  CHECK(extend_eval(rAb, e(1), e(1)) == zw);
  CHECK(extend_eval(rAb, e(-1), e(1)) == zw.pow(-1));
  CHECK(extend_eval(rAb, e(2), e(3)) == zw.pow(6));
  CHECK(extend_eval(rAb, e(0), e(5)) == RatFn::one(2, N));

  // the oscillator from the group algebra: r(h, e^{m a}) = m dlog_z r(e, e)
  auto h = gen(N, Ambient::Lattice, BaseSym::H);
  CHECK(extend_eval(rAb, h, e(1)) == inv_lin(2, N, 0, 1));
  CHECK(extend_eval(rAb, h, e(3)) == inv_lin(2, N, 0, 1).scaled(Cyclo(N, Rational(3))));
  CHECK(extend_eval(rAb, h, e(1)) == log_derivative(zw, 0));
  // r(h, h) = d^2/dzdw log r(e, e) = 1/(z-w)^2
  CHECK(extend_eval(rAb, h, h) == inv_lin(2, N, 0, 1).pow(2));
  CHECK(extend_eval(rAb, h, h) == log_mixed_derivative(zw));

  // quotient ambients: the same log-derivative structure
  auto rBb = make_preset("Bb");
  auto hB = gen(2, Ambient::LatticeB, BaseSym::H);
  CHECK(extend_eval(rBb, hB, hB) == log_mixed_derivative(rBb.table.at({3, 3})));
  CHECK(extend_eval(rBb, hB, hB) ==
        inv_lin(2, 2, 0, 1).pow(2) + inv_lin(2, 2, 0, 1, 1).pow(2));

  auto rDb = make_preset("Db");
  auto hD = gen(2, Ambient::LatticeD, BaseSym::H);
  CHECK(extend_eval(rDb, hD, hD) == log_mixed_derivative(rDb.table.at({3, 3})));
  CHECK(extend_eval(rDb, hD, hD) ==
        inv_lin(2, 2, 0, 1).pow(2) - inv_lin(2, 2, 0, 1, 1).pow(2));
}

TEST_CASE("transpose predicate") {
  CHECK(transpose_check(make_preset("Af")));
  CHECK(transpose_check(make_preset("Bf")));
  CHECK(transpose_check(make_preset("Df")));
  // the lattice pairings are antisymmetric under the transpose (the grouplike
  // values z-w, (z-w)/(z+w), z^2-w^2 all flip sign under z <-> w), which is
  // the source of the alternating sign in the charged correlation functions
  CHECK_FALSE(transpose_check(make_preset("Ab")));
  CHECK_FALSE(transpose_check(make_preset("Bb")));
  CHECK_FALSE(transpose_check(make_preset("Db")));
  CHECK(transpose_check(make_preset("C")));
  CHECK(transpose_check(make_preset("id")));

  BicharacterSpec asym;
  asym.N = 2;
  asym.amb = Ambient::FreePhi;
  asym.table[{0, 0}] = RatFn::variable(2, 2, 0);  // (phi, phi) -> z
  CHECK_FALSE(transpose_check(asym));
}

TEST_CASE("shift restriction predicate") {
  CHECK(shift_restricted_check(make_preset("Bf")).pass);
  CHECK(shift_restricted_check(make_preset("Df")).pass);
  CHECK(shift_restricted_check(make_preset("Af")).pass);
  CHECK(shift_restricted_check(make_preset("C")).pass);
  CHECK(shift_restricted_check(make_preset("id")).pass);  // vacuous

  // (phi, phi) -> w^3/(z+w): singular coefficient at z = -w is w^3, shift 3
  // exceeds the order-2 bound (N-1)(0+1) = 1
  BicharacterSpec bad;
  bad.N = 2;
  bad.amb = Ambient::FreePhi;
  bad.table[{0, 0}] =
      RatFn::from_poly(LaurentPoly::monomial(2, 2, 1, 3, Cyclo::one(2))) * inv_lin(2, 2, 0, 1, 1);
  auto rep = shift_restricted_check(bad);
  REQUIRE_FALSE(rep.pass);
  bool found = false;
  for (const auto& v : rep.violations)
    if (v.l == 0 && v.diagonal == 1) found = true;
  CHECK(found);
}

TEST_CASE("relation consistency") {
  CHECK(relation_consistency(make_preset("Bb"), Ambient::LatticeB));
  CHECK(relation_consistency(make_preset("Db"), Ambient::LatticeD));
  // z - w at order 2 is odd under z -> -z
  auto ab2 = make_preset("Ab", 2);
  CHECK_FALSE(relation_consistency(ab2, Ambient::LatticeD));
  CHECK_FALSE(relation_consistency(ab2, Ambient::LatticeB));
}

TEST_CASE("n-character examples") {
  auto rD = make_preset("Df");
  auto phi = gen(2, Ambient::FreePhi, BaseSym::Phi);

  // n = 2 degenerates to the plain extension
  CHECK(n_character(rD, {phi, phi}) == extend_eval(rD, phi, phi));

  // four odd points: the 4x4 Pfaffian expansion r12 r34 - r13 r24 + r14 r23
  RatFn r12 = inv_lin(4, 2, 0, 1), r13 = inv_lin(4, 2, 0, 2), r14 = inv_lin(4, 2, 0, 3);
  RatFn r23 = inv_lin(4, 2, 1, 2), r24 = inv_lin(4, 2, 1, 3), r34 = inv_lin(4, 2, 2, 3);
  CHECK(n_character(rD, {phi, phi, phi, phi}) == r12 * r34 - r13 * r24 + r14 * r23);

  // all-grouplike inputs multiply pairwise
  auto rAb = make_preset("Ab");
  auto e = [&](int m) { return HopfElement::lattice(1, Ambient::Lattice, m); };
  RatFn expect = RatFn::one(4, 1);
  int ms[4] = {1, -1, 1, -1};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) expect *= RatFn::linear(4, 1, i, j, 0).pow(ms[i] * ms[j]);
  CHECK(n_character(rAb, {e(1), e(-1), e(1), e(-1)}) == expect);
}

namespace {

// Explicit tri-character: Delta applied once to each argument, value
// r_{z1,z2}(a1' , a2') r_{z1,z3}(a1'' , a3') r_{z2,z3}(a2'' , a3''), Koszul
// sign counting inversions among the odd tensor factors in appearance order
// a1' a2' a1'' a3' a2'' a3''.
RatFn tri_character_explicit(const BicharacterSpec& r, const HopfElement& a1,
                             const HopfElement& a2, const HopfElement& a3) {
  auto c1 = coproduct(a1), c2 = coproduct(a2), c3 = coproduct(a3);
  RatFn out = RatFn::zero(3, r.N);
  for (const auto& t1 : c1.terms)
    for (const auto& t2 : c2.terms)
      for (const auto& t3 : c3.terms) {
        auto slot = [&](const SweedlerSum& c, const SweedlerTerm& t, std::size_t s) {
          return c.slot_element(t, s);
        };
        RatFn v12 = extend_eval(r, slot(c1, t1, 0), slot(c2, t2, 0));
        if (v12.is_zero()) continue;
        RatFn v13 = extend_eval(r, slot(c1, t1, 1), slot(c3, t3, 0));
        if (v13.is_zero()) continue;
        RatFn v23 = extend_eval(r, slot(c2, t2, 1), slot(c3, t3, 1));
        if (v23.is_zero()) continue;
        int tags[6] = {1, 2, 1, 3, 2, 3};
        bool odd[6] = {t1.slots[0].odd(), t2.slots[0].odd(), t1.slots[1].odd(),
                       t3.slots[0].odd(), t2.slots[1].odd(), t3.slots[1].odd()};
        int sign = 1;
        for (int p = 0; p < 6; ++p)
          for (int q = p + 1; q < 6; ++q)
            if (odd[p] && odd[q] && tags[p] > tags[q]) sign = -sign;
        RatFn term = detail_bc::embed_pair(v12, 3, 0, 1) * detail_bc::embed_pair(v13, 3, 0, 2) *
                     detail_bc::embed_pair(v23, 3, 1, 2);
        term = term.scaled(t1.coeff * t2.coeff * t3.coeff);
        out += (sign < 0) ? -term : term;
      }
  return out;
}

}  // namespace

TEST_CASE("tri-character agrees with the explicit formula") {
  std::mt19937 rng(31415);
  for (const char* name : {"Df", "Bf", "C", "Ab"}) {
    auto r = make_preset(name);
    for (int t = 0; t < 25; ++t) {
      HopfElement a = detail_bc::random_monomial(r, rng, 2);
      HopfElement b = detail_bc::random_monomial(r, rng, 2);
      HopfElement c = detail_bc::random_monomial(r, rng, 2);
      REQUIRE(n_character(r, {a, b, c}) == tri_character_explicit(r, a, b, c));
    }
  }
}

TEST_CASE("unit law, 200 random instances") {
  std::mt19937 rng(2718);
  int done = 0;
  while (done < 200) {
    for (const char* name : {"Df", "Bf", "Ab", "C", "Bb", "Db", "Af", "id"}) {
      auto r = make_preset(name);
      auto one = HopfElement::unit(r.N, r.amb);
      HopfElement a = detail_bc::random_monomial(r, rng, 3);
      RatFn ex = RatFn::constant(2, r.N, counit(a));
      REQUIRE(extend_eval(r, one, a) == ex);
      REQUIRE(extend_eval(r, a, one) == ex);
      ++done;
    }
  }
}

TEST_CASE("multiplicativity laws, 300 random triples") {
  std::mt19937 rng(97);
  int done = 0;
  while (done < 300) {
    for (const char* name : {"Df", "Bf", "Ab", "C", "Bb", "Db", "Af"}) {
      auto r = make_preset(name);
      HopfElement a = detail_bc::random_monomial(r, rng, 2);
      HopfElement b = detail_bc::random_monomial(r, rng, 2);
      HopfElement c = detail_bc::random_monomial(r, rng, 2);
      const bool b_odd = b.parity() < 0;
      const bool a_odd = a.parity() < 0;

      // r(ab, c) = sum (-1)^{|b||c'|} r(a, c') r(b, c'')
      {
        RatFn lhs = extend_eval(r, a * b, c);
        RatFn rhs = RatFn::zero(2, r.N);
        auto dc = coproduct(c);
        for (const auto& t : dc.terms) {
          RatFn v = extend_eval(r, a, dc.slot_element(t, 0)) *
                    extend_eval(r, b, dc.slot_element(t, 1));
          v = v.scaled(t.coeff * t.slots[0].coeff * t.slots[1].coeff);
          if (b_odd && t.slots[0].odd()) v = -v;
          rhs += v;
        }
        REQUIRE(lhs == rhs);
      }
      // r(a, bc) = sum (-1)^{|a''||b|} r(a', b) r(a'', c)
      {
        RatFn lhs = extend_eval(r, a, b * c);
        RatFn rhs = RatFn::zero(2, r.N);
        auto da = coproduct(a);
        for (const auto& t : da.terms) {
          RatFn v = extend_eval(r, da.slot_element(t, 0), b) *
                    extend_eval(r, da.slot_element(t, 1), c);
          v = v.scaled(t.coeff * t.slots[0].coeff * t.slots[1].coeff);
          if (b_odd && t.slots[1].odd()) v = -v;
          rhs += v;
        }
        REQUIRE(lhs == rhs);
      }
      (void)a_odd;
      ++done;
    }
  }
}

TEST_CASE("covariance under the derivation and twist, 200 random pairs") {
  std::mt19937 rng(555);
  const std::pair<int, int> ops[] = {{1, 0}, {2, 0}, {0, 1}};
  int done = 0;
  while (done < 200) {
    for (const char* name : {"Df", "Bf", "Ab", "C", "Bb", "Db"}) {
      auto r = make_preset(name);
      HopfElement a = detail_bc::random_monomial(r, rng, 2);
      HopfElement b = detail_bc::random_monomial(r, rng, 2);
      RatFn base = extend_eval(r, a, b);
      for (auto [n, k] : ops) {
        REQUIRE(extend_eval(r, act(a, n, k), b) == base.twist(0, k).dpow(0, n));
        REQUIRE(extend_eval(r, a, act(b, n, k)) == base.twist(1, k).dpow(1, n));
      }
      ++done;
    }
  }
}

TEST_CASE("evenness: opposite parities pair to zero, 200 random pairs") {
  std::mt19937 rng(8080);
  int done = 0;
  while (done < 200) {
    for (const char* name : {"Df", "Bf", "Af"}) {
      auto r = make_preset(name);
      HopfElement a = detail_bc::random_monomial(r, rng, 3);
      HopfElement b = detail_bc::random_monomial(r, rng, 3);
      if (a.is_zero() || b.is_zero() || a.parity() == b.parity()) continue;
      REQUIRE(extend_eval(r, a, b).is_zero());
      ++done;
    }
  }
}

TEST_CASE("memoization is value-stable") {
  auto r = make_preset("Bf");
  auto a = h_phi(2, Ambient::FreePhi);
  RatFn first = extend_eval(r, a, a);
  RatFn second = extend_eval(r, a, a);
  CHECK(first == second);
  CHECK_FALSE(r.memo.empty());
}
