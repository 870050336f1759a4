// Hopf layer tests: products with Koszul signs, iterated coproducts, counit,
// the D/T module-algebra action, lattice quotient rewrites, and the
// randomized law suites (supercommutativity, coassociativity, counit law,
// cocommutativity, action compatibility).
#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tva/hopf.hpp"

using namespace tva;

namespace {

HopfElement phi(int N = 2, Ambient amb = Ambient::FreePhi) {
  return HopfElement::generator(N, amb, Generator{BaseSym::Phi, 0, 0});
}
HopfElement tphi(int N = 2, Ambient amb = Ambient::FreePhi) {
  return HopfElement::generator(N, amb, Generator{BaseSym::Phi, 0, 1});
}

}  // namespace

TEST_CASE("products and Koszul signs") {
  const int N = 2;
  CHECK((phi() * phi()).is_zero());
  HopfElement hphi = phi() * tphi();
  CHECK(!hphi.is_zero());
  CHECK(tphi() * phi() == hphi.scaled(-Cyclo::one(N)));
  // lattice group law
  HopfElement ea = HopfElement::lattice(N, Ambient::Lattice, 1);
  HopfElement eminus = HopfElement::lattice(N, Ambient::Lattice, -1);
  CHECK(ea * eminus == HopfElement::unit(N, Ambient::Lattice));
}

TEST_CASE("coproduct examples") {
  const int N = 2;
  // Delta(phi) = phi x 1 + 1 x phi
  auto d = coproduct(phi(), 1);
  auto canon = d.canonical();
  CHECK(canon.size() == 2);
  // Delta(h_phi) = h_phi x 1 + 1 x h_phi + phi x Tphi - Tphi x phi
  HopfElement hphi = phi() * tphi();
  auto dh = coproduct(hphi, 1).canonical();
  CHECK(dh.size() == 4);
  Generator g0{BaseSym::Phi, 0, 0}, g1{BaseSym::Phi, 0, 1};
  using Key = std::vector<std::pair<std::vector<Generator>, std::vector<int>>>;
  Key k_phit{{{g0}, {}}, {{g1}, {}}};
  Key k_tphi{{{g1}, {}}, {{g0}, {}}};
  REQUIRE(dh.count(k_phit) == 1);
  REQUIRE(dh.count(k_tphi) == 1);
  CHECK(dh[k_phit] == Cyclo::one(N));
  CHECK(dh[k_tphi] == -Cyclo::one(N));
  // Delta(e^{2a}) = e^{2a} x e^{2a}
  HopfElement e2 = HopfElement::lattice(N, Ambient::Lattice, 2);
  auto de = coproduct(e2, 1).canonical();
  CHECK(de.size() == 1);
}

TEST_CASE("counit") {
  const int N = 2;
  CHECK(counit(HopfElement::unit(N, Ambient::FreePhi)) == Cyclo::one(N));
  CHECK(counit(phi()).is_zero());
  HopfElement x = HopfElement::unit(N, Ambient::FreePhi).scaled(Cyclo(N, Rational(3))) +
                  (phi() * tphi()).scaled(Cyclo(N, Rational(2)));
  CHECK(counit(x) == Cyclo(N, Rational(3)));
  CHECK(counit(HopfElement::lattice(N, Ambient::Lattice, 5)) == Cyclo::one(N));
}

TEST_CASE("action of D and T") {
  const int N = 2;
  // Leibnitz: D(phi * psi) = Dphi * psi + phi * Dpsi
  HopfElement p = HopfElement::generator(N, Ambient::FreePhiPsi, {BaseSym::Phi, 0, 0});
  HopfElement q = HopfElement::generator(N, Ambient::FreePhiPsi, {BaseSym::Psi, 0, 0});
  HopfElement dp = HopfElement::generator(N, Ambient::FreePhiPsi, {BaseSym::Phi, 1, 0});
  HopfElement dq = HopfElement::generator(N, Ambient::FreePhiPsi, {BaseSym::Psi, 1, 0});
  CHECK(act_D(p * q) == dp * q + p * dq);
  // D^{(2)} T phi at N=2 stores as the generator with dDeg=2, tPow=1
  HopfElement r = act(phi(), 2, 1);
  REQUIRE(r.terms().size() == 1);
  CHECK(r.terms()[0].gens == std::vector<Generator>{{BaseSym::Phi, 2, 1}});
  CHECK(r.terms()[0].coeff == Cyclo::one(N));
  // T(h_phi) = -h_phi
  HopfElement hphi = phi() * tphi();
  CHECK(act_T(hphi) == hphi.scaled(-Cyclo::one(N)));
}

TEST_CASE("lattice quotients") {
  const int N = 2;
  // R_D: Th = -h ; R_B: Th = +h
  HopfElement hD = HopfElement::generator(N, Ambient::LatticeD, {BaseSym::H, 0, 0});
  CHECK(act_T(hD) == hD.scaled(-Cyclo::one(N)));
  HopfElement hB = HopfElement::generator(N, Ambient::LatticeB, {BaseSym::H, 0, 0});
  CHECK(act_T(hB) == hB);
  // T e^{ma}: sign of the charge flips under R_B, stays under R_D
  HopfElement eB = HopfElement::lattice(N, Ambient::LatticeB, 1);
  CHECK(act_T(eB) == HopfElement::lattice(N, Ambient::LatticeB, -1));
  HopfElement eD = HopfElement::lattice(N, Ambient::LatticeD, 1);
  CHECK(act_T(eD) == eD);
  // De^{2a} = 2 h e^{2a}
  HopfElement e2 = HopfElement::lattice(N, Ambient::Lattice, 2);
  HopfElement hL = HopfElement::generator(N, Ambient::Lattice, {BaseSym::H, 0, 0});
  CHECK(act_D(e2) == (hL * e2).scaled(Cyclo(N, Rational(2))));
  // quotient_reduce re-tags
  HopfElement te = HopfElement::lattice(N, Ambient::Lattice, 3, 1);
  CHECK(quotient_reduce(te, Ambient::LatticeB) == HopfElement::lattice(N, Ambient::LatticeB, -3));
  CHECK(quotient_reduce(te, Ambient::LatticeD) == HopfElement::lattice(N, Ambient::LatticeD, 3));
  // e^{2a} = 1 in the projected type-B algebra W
  HopfElement e2b = HopfElement::lattice(N, Ambient::LatticeB, 2);
  e2b.set_projected(true);
  HopfElement oneW = HopfElement::unit(N, Ambient::LatticeB);
  oneW.set_projected(true);
  CHECK(e2b == oneW);
}

TEST_CASE("parity") {
  CHECK(phi().parity() == -1);
  CHECK((phi() * tphi()).parity() == 1);
  CHECK((HopfElement::unit(2, Ambient::FreePhi) + phi()).parity() == 0);
}

// ---------------------------------------------------------------------------
// Randomized law suites
// ---------------------------------------------------------------------------
namespace {

struct RandomAlgebra {
  int N;
  Ambient amb;
  std::mt19937 rng;

  HopfElement random_homogeneous(int maxlen) {
    std::uniform_int_distribution<int> len(0, maxlen);
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::uniform_int_distribution<int> dd(0, 2);
    std::uniform_int_distribution<int> tp(0, N - 1);
    std::uniform_int_distribution<int> chg(-2, 2);
    Monomial m;
    int c = coeff(rng);
    m.coeff = Cyclo(N, Rational(c == 0 ? 1 : c));
    int L = len(rng);
    for (int i = 0; i < L; ++i) {
      Generator g;
      switch (amb) {
        case Ambient::FreePhi: g.base = BaseSym::Phi; break;
        case Ambient::FreePhiPsi:
          g.base = (rng() % 2) ? BaseSym::Phi : BaseSym::Psi;
          break;
        default: g.base = BaseSym::H; break;
      }
      g.dDeg = dd(rng);
      g.tPow = tp(rng);
      m.gens.push_back(g);
    }
    if (is_lattice(amb)) {
      m.lat.assign(static_cast<std::size_t>(N), 0);
      m.lat[static_cast<std::size_t>(tp(rng))] = chg(rng);
    }
    HopfElement e(N, amb);
    e.add_monomial(m);
    return e;
  }
};

const Ambient kAmbients[] = {Ambient::FreePhi, Ambient::FreePhiPsi, Ambient::Boson,
                             Ambient::Lattice, Ambient::LatticeB, Ambient::LatticeD};

}  // namespace

TEST_CASE("supercommutativity: 500 random homogeneous pairs") {
  int done = 0;
  std::mt19937 seed(31337);
  while (done < 500) {
    RandomAlgebra ra{2 + static_cast<int>(seed() % 3), kAmbients[seed() % 6], std::mt19937(seed())};
    HopfElement a = ra.random_homogeneous(3);
    HopfElement b = ra.random_homogeneous(3);
    if (a.is_zero() || b.is_zero()) continue;
    bool both_odd = a.parity() == -1 && b.parity() == -1;
    HopfElement rhs = b * a;
    if (both_odd) rhs = rhs.scaled(-Cyclo::one(ra.N));
    REQUIRE(a * b == rhs);
    ++done;
  }
}

TEST_CASE("coassociativity on random elements") {
  std::mt19937 seed(2024);
  int done = 0;
  while (done < 200) {
    RandomAlgebra ra{2 + static_cast<int>(seed() % 2), kAmbients[seed() % 6], std::mt19937(seed())};
    HopfElement a = ra.random_homogeneous(3);
    if (a.is_zero()) continue;
    auto d2 = coproduct(a, 2).canonical();
    // (Delta x id) Delta and (id x Delta) Delta
    auto d1 = coproduct(a, 1);
    SweedlerSum left{ra.N, ra.amb, 3, {}}, right{ra.N, ra.amb, 3, {}};
    for (const auto& t : d1.terms) {
      HopfElement s0 = d1.slot_element(t, 0), s1 = d1.slot_element(t, 1);
      for (const auto& u : coproduct(s0, 1).terms)
        left.terms.push_back({t.coeff * u.coeff * t.slots[0].coeff * t.slots[1].coeff,
                              {u.slots[0], u.slots[1], t.slots[1]}});
      for (const auto& u : coproduct(s1, 1).terms)
        right.terms.push_back({t.coeff * u.coeff * t.slots[0].coeff * t.slots[1].coeff,
                               {t.slots[0], u.slots[0], u.slots[1]}});
    }
    REQUIRE(left.canonical() == d2);
    REQUIRE(right.canonical() == d2);
    ++done;
  }
}

TEST_CASE("counit law: (eta x id) Delta = id") {
  std::mt19937 seed(555);
  int done = 0;
  while (done < 200) {
    RandomAlgebra ra{2, kAmbients[seed() % 6], std::mt19937(seed())};
    HopfElement a = ra.random_homogeneous(3);
    auto d = coproduct(a, 1);
    HopfElement viaLeft(ra.N, ra.amb), viaRight(ra.N, ra.amb);
    for (const auto& t : d.terms) {
      Cyclo etaL = t.slots[0].gens.empty() ? t.slots[0].coeff : Cyclo::zero(ra.N);
      Cyclo etaR = t.slots[1].gens.empty() ? t.slots[1].coeff : Cyclo::zero(ra.N);
      Monomial m1 = t.slots[1];
      m1.coeff = t.coeff * etaL * m1.coeff;
      viaLeft.add_monomial(m1);
      Monomial m0 = t.slots[0];
      m0.coeff = t.coeff * etaR * m0.coeff;
      viaRight.add_monomial(m0);
    }
    REQUIRE(viaLeft == a);
    REQUIRE(viaRight == a);
    ++done;
  }
}

TEST_CASE("cocommutativity with Koszul twist") {
  std::mt19937 seed(8080);
  int done = 0;
  while (done < 200) {
    RandomAlgebra ra{2 + static_cast<int>(seed() % 2), kAmbients[seed() % 6], std::mt19937(seed())};
    HopfElement a = ra.random_homogeneous(3);
    if (a.is_zero()) continue;
    auto d = coproduct(a, 1);
    SweedlerSum tw{ra.N, ra.amb, 2, {}};
    for (const auto& t : d.terms) {
      Cyclo c = t.coeff;
      if (t.slots[0].odd() && t.slots[1].odd()) c = -c;
      tw.terms.push_back({c, {t.slots[1], t.slots[0]}});
    }
    REQUIRE(tw.canonical() == d.canonical());
    ++done;
  }
}

TEST_CASE("module-algebra compatibility: h(ab) = sum h'(a) h''(b)") {
  std::mt19937 seed(4711);
  int done = 0;
  while (done < 200) {
    RandomAlgebra ra{2 + static_cast<int>(seed() % 2), kAmbients[seed() % 6], std::mt19937(seed())};
    HopfElement a = ra.random_homogeneous(2);
    HopfElement b = ra.random_homogeneous(2);
    if (a.is_zero() || b.is_zero()) continue;
    std::uniform_int_distribution<int> nd(0, 2);
    std::uniform_int_distribution<int> kd(0, ra.N - 1);
    int n = nd(ra.rng), k = kd(ra.rng);
    // Delta(D^{(n)} T^k) = sum_{i+j=n} D^{(i)} T^k x D^{(j)} T^k
    HopfElement lhs = act(a * b, n, k);
    HopfElement rhs(ra.N, ra.amb);
    for (int i = 0; i <= n; ++i) rhs = rhs + act(a, i, k) * act(b, n - i, k);
    REQUIRE(lhs == rhs);
    ++done;
  }
}
