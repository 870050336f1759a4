// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure.  Each check is exact (symbolic equality); wall-clock budgets are
// part of the criteria that state them.
#include <chrono>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "tva/fock.hpp"
#include "tva/vertex.hpp"
#include "tva/vev.hpp"

using namespace tva;

namespace {

struct Gate {
  int failures = 0;
  std::chrono::steady_clock::time_point mark = std::chrono::steady_clock::now();

  double lap() {
    auto now = std::chrono::steady_clock::now();
    double s = std::chrono::duration<double>(now - mark).count();
    mark = now;
    return s;
  }
  void line(int idx, bool ok, const std::string& desc, double secs) {
    std::printf("criterion %2d: %s  %s  [%.1fs]\n", idx, ok ? "PASS" : "FAIL", desc.c_str(), secs);
    if (!ok) ++failures;
  }
};

RatFn mono(int nv, int N, int var, int e) {
  return RatFn::from_poly(LaurentPoly::monomial(nv, N, var, e, Cyclo::one(N)));
}

HopfElement gen(int N, Ambient amb, BaseSym b, int dDeg = 0, int tPow = 0) {
  return HopfElement::generator(N, amb, Generator{b, dDeg, tPow});
}

std::vector<int> iota_region(int n) {
  std::vector<int> region(static_cast<std::size_t>(n));
  std::iota(region.begin(), region.end(), 0);
  return region;
}

// ---- criterion 11 helpers -------------------------------------------------

HopfElement random_homogeneous(int N, Ambient amb, std::mt19937& rng, int maxlen) {
  std::uniform_int_distribution<int> len(0, maxlen), coeff(-3, 3), dd(0, 2), tp(0, N - 1),
      chg(-2, 2);
  Monomial m;
  int c = coeff(rng);
  m.coeff = Cyclo(N, Rational(c == 0 ? 1 : c));
  for (int i = len(rng); i > 0; --i) {
    Generator g;
    switch (amb) {
      case Ambient::FreePhi: g.base = BaseSym::Phi; break;
      case Ambient::FreePhiPsi: g.base = (rng() % 2) ? BaseSym::Phi : BaseSym::Psi; break;
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

const Ambient kAmbients[] = {Ambient::FreePhi, Ambient::FreePhiPsi, Ambient::Boson,
                             Ambient::Lattice, Ambient::LatticeB, Ambient::LatticeD};

bool hopf_laws(int instances) {
  std::mt19937 seed(31337);
  int done = 0;
  while (done < instances) {
    int N = 2 + static_cast<int>(seed() % 2);
    Ambient amb = kAmbients[seed() % 6];
    std::mt19937 rng(seed());
    HopfElement a = random_homogeneous(N, amb, rng, 3);
    HopfElement b = random_homogeneous(N, amb, rng, 3);
    if (a.is_zero() || b.is_zero()) continue;
    // supercommutativity with the Koszul sign
    HopfElement rhs = b * a;
    if (a.parity() == -1 && b.parity() == -1) rhs = rhs.scaled(-Cyclo::one(N));
    if (a * b != rhs) return false;
    // coassociativity: (Delta x id) Delta = (id x Delta) Delta = Delta_2
    auto d2 = coproduct(a, 2).canonical();
    auto d1 = coproduct(a, 1);
    SweedlerSum left{N, amb, 3, {}}, right{N, amb, 3, {}};
    for (const auto& t : d1.terms) {
      HopfElement s0 = d1.slot_element(t, 0), s1 = d1.slot_element(t, 1);
      for (const auto& u : coproduct(s0, 1).terms)
        left.terms.push_back({t.coeff * u.coeff * t.slots[0].coeff * t.slots[1].coeff,
                              {u.slots[0], u.slots[1], t.slots[1]}});
      for (const auto& u : coproduct(s1, 1).terms)
        right.terms.push_back({t.coeff * u.coeff * t.slots[0].coeff * t.slots[1].coeff,
                               {t.slots[0], u.slots[0], u.slots[1]}});
    }
    if (!(left.canonical() == d2) || !(right.canonical() == d2)) return false;
    // counit law: (eta x id) Delta = id = (id x eta) Delta
    HopfElement viaLeft(N, amb), viaRight(N, amb);
    for (const auto& t : d1.terms) {
      Cyclo etaL = t.slots[0].gens.empty() ? t.slots[0].coeff : Cyclo::zero(N);
      Cyclo etaR = t.slots[1].gens.empty() ? t.slots[1].coeff : Cyclo::zero(N);
      Monomial m1 = t.slots[1];
      m1.coeff = t.coeff * etaL * m1.coeff;
      viaLeft.add_monomial(m1);
      Monomial m0 = t.slots[0];
      m0.coeff = t.coeff * etaR * m0.coeff;
      viaRight.add_monomial(m0);
    }
    if (!(viaLeft == a) || !(viaRight == a)) return false;
    ++done;
  }
  return true;
}

bool bicharacter_laws(int instances) {
  std::mt19937 rng(2718);
  const std::pair<int, int> ops[] = {{1, 0}, {2, 0}, {0, 1}};
  int done = 0;
  while (done < instances) {
    for (const char* name : {"Df", "Bf", "Ab", "C", "Bb", "Db", "Af"}) {
      auto r = make_preset(name);
      HopfElement a = detail_bc::random_monomial(r, rng, 2);
      HopfElement b = detail_bc::random_monomial(r, rng, 2);
      HopfElement c = detail_bc::random_monomial(r, rng, 2);
      // unit law
      auto one = HopfElement::unit(r.N, r.amb);
      RatFn ex = RatFn::constant(2, r.N, counit(a));
      if (!(extend_eval(r, one, a) == ex) || !(extend_eval(r, a, one) == ex)) return false;
      // multiplicativity in the left slot: r(ab, c)
      const bool b_odd = b.parity() < 0;
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
        if (!(lhs == rhs)) return false;
      }
      // multiplicativity in the right slot: r(a, bc)
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
        if (!(lhs == rhs)) return false;
      }
      // covariance under D^{(n)} T^k
      RatFn base = extend_eval(r, a, b);
      for (auto [n, k] : ops) {
        if (!(extend_eval(r, act(a, n, k), b) == base.twist(0, k).dpow(0, n))) return false;
        if (!(extend_eval(r, a, act(b, n, k)) == base.twist(1, k).dpow(1, n))) return false;
      }
      // evenness: opposite parities pair to zero
      if (!a.is_zero() && !b.is_zero() && a.parity() != b.parity() &&
          !extend_eval(r, a, b).is_zero())
        return false;
      ++done;
    }
  }
  return true;
}

RatFn random_ratfn2(std::mt19937& rng) {
  const int nv = 2, N = 2;
  std::uniform_int_distribution<int> coeff(-4, 4), expo(0, 2), nfac(0, 2), which(0, 3);
  LaurentPoly num(nv, N);
  for (int t = 0; t < 3; ++t) num.add_term({expo(rng), expo(rng)}, Cyclo(N, Rational(coeff(rng))));
  std::vector<PoleFactor> den;
  for (int t = nfac(rng); t > 0; --t) {
    switch (which(rng)) {
      case 0: den.push_back(PoleFactor::var(0)); break;
      case 1: den.push_back(PoleFactor::var(1)); break;
      case 2: den.push_back(PoleFactor{0, 1, 0}); break;
      default: den.push_back(PoleFactor{0, 1, 1}); break;
    }
  }
  std::sort(den.begin(), den.end());
  return RatFn(num, den);
}

bool expansion_homomorphism(int instances) {
  std::mt19937 rng(777);
  const int C = 8;
  int done = 0;
  while (done < instances) {
    RatFn f = random_ratfn2(rng);
    RatFn g = random_ratfn2(rng);
    if (f.is_zero() || g.is_zero()) continue;
    LaurentSeries lhs = f.expand_region({0, 1}, C) * g.expand_region({0, 1}, C);
    LaurentSeries rhs = (f * g).expand_region({0, 1}, C);
    if (!(lhs.restricted(C / 2).terms == rhs.restricted(C / 2).terms)) return false;
    ++done;
  }
  return true;
}

RatFn random_entry(int nv, std::mt19937& rng) {
  std::uniform_int_distribution<int> expo(-2, 2), coef(1, 5), var(0, nv - 1), sgn(0, 1);
  RatFn f = RatFn::from_poly(LaurentPoly::monomial(
      nv, 2, var(rng), expo(rng), Cyclo(2, Rational(coef(rng) * (sgn(rng) ? 1 : -1)))));
  if (sgn(rng))
    f *= RatFn::from_poly(
        LaurentPoly::monomial(nv, 2, var(rng), expo(rng), Cyclo(2, Rational(coef(rng)))));
  return f;
}

bool pf_squared_det(int instances) {
  std::mt19937 rng(99);
  for (int t = 0; t < instances; ++t) {
    int n = t % 4 == 3 ? 4 : 2;  // mostly 2x2, every fourth 4x4
    std::vector<std::vector<RatFn>> a(static_cast<std::size_t>(n),
                                      std::vector<RatFn>(static_cast<std::size_t>(n),
                                                         RatFn::zero(n, 2)));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        a[i][j] = random_entry(n, rng);
        a[j][i] = a[i][j].scaled(-Cyclo::one(2));
      }
    RatFn pf = pfaffian(AntisymMatrix(a));
    if (!(pf * pf == determinant(a))) return false;
  }
  return true;
}

}  // namespace

int main() {
  Gate gate;

  // 1. Schur Pfaffian identity, 2n in {2,4,6,8}, < 60 s
  {
    gate.lap();
    bool ok = true;
    for (int p : {2, 4, 6, 8}) ok = ok && verify_identity("schur", p);
    double s = gate.lap();
    gate.line(1, ok && s < 60.0, "Schur Pfaffian identity, 2n in {2,4,6,8}, budget 60s", s);
  }

  // 2. Cauchy determinant identity, n in {1,2,3,4}, < 30 s
  {
    gate.lap();
    bool ok = true;
    for (int n : {1, 2, 3, 4}) ok = ok && verify_identity("cauchy", n);
    double s = gate.lap();
    gate.line(2, ok && s < 30.0, "Cauchy determinant identity, n in {1,2,3,4}, budget 30s", s);
  }

  // 3. neutral-pairing Pfaffian identity, 2n in {2,4,6}, < 60 s
  {
    gate.lap();
    bool ok = true;
    for (int p : {2, 4, 6}) ok = ok && verify_identity("da", p);
    double s = gate.lap();
    gate.line(3, ok && s < 60.0, "neutral-pairing Pfaffian identity, 2n in {2,4,6}, budget 60s", s);
  }

  // 4. OPE singular parts: -2w * Id at z = -w (order-2 reflection fermion) and
  //    1 * Id at z = w (order-2 even fermion)
  {
    gate.lap();
    auto check_ope = [](const char* preset, int diag, const Cyclo& c, int s) {
      auto r = make_preset(preset);
      auto phi = gen(r.N, r.amb, BaseSym::Phi);
      auto one = HopfElement::unit(r.N, r.amb);
      ResidueResult res = ope_residues(r, phi, phi, one, diag, 0);
      return res.triples.size() == 1 && res.triples[0].c == c && res.triples[0].s == s &&
             res.triples[0].v == one;
    };
    bool ok = check_ope("Bf", 1, Cyclo(2, -2L), 1) && check_ope("Df", 0, Cyclo::one(2), 0);
    gate.line(4, ok, "OPE singular parts: -2w*Id at z=-w and 1*Id at z=w", gate.lap());
  }

  // 5. Heisenberg two-point functions, fermionic and lattice sides
  {
    gate.lap();
    RatFn dsq = RatFn::inv_linear(2, 2, 0, 1, 0).pow(2) * RatFn::inv_linear(2, 2, 0, 1, 1).pow(2);
    RatFn zw = mono(2, 2, 0, 1) * mono(2, 2, 1, 1);
    RatFn zsq = mono(2, 2, 0, 2), wsq = mono(2, 2, 1, 2);
    auto h_phi = [&](void) { return gen(2, Ambient::FreePhi, BaseSym::Phi) *
                                    gen(2, Ambient::FreePhi, BaseSym::Phi, 0, 1); };
    // fermionic side: r(h_phi x h_phi)
    RatFn fB = extend_eval(make_preset("Bf"), h_phi(), h_phi());
    RatFn fD = extend_eval(make_preset("Df"), h_phi(), h_phi());
    bool ok = fB == (zsq + wsq).scaled(Cyclo(2, 8L)) * zw * dsq &&
              fD == zw.scaled(Cyclo(2, 4L)) * dsq;
    // field-level pairings: the quarter scale comes from h = (1/2) h_phi, and
    // the order-two reflection side carries the index shift h_a(z) = z h_f(z)
    auto quarter = Cyclo(2, Rational(1) / 4);
    auto [heB, hhB] = heisenberg_from_lattice(make_preset("Bb"), 1);
    auto [heD, hhD] = heisenberg_from_lattice(make_preset("Db"), 1);
    RatFn targetB = (zsq + wsq) * zw.scaled(Cyclo(2, Rational(1) / 2)) * dsq;
    RatFn targetD = zw * dsq;
    ok = ok && hhB.scaled(quarter) * zw == targetB && fB.scaled(quarter * quarter) == targetB;
    ok = ok && hhD.scaled(quarter) == targetD && fD.scaled(quarter) == targetD;
    (void)heB;
    (void)heD;
    gate.line(5, ok, "Heisenberg two-point functions, both presentations", gate.lap());
  }

  // 6. mode brackets extracted by the oracle
  {
    gate.lap();
    bool ok = true;
    for (int m = -4; m <= 4 && ok; ++m)
      for (int n = -4; n <= 4 && ok; ++n) {
        ok = mode_bracket(FockType::A, m, n) == Cyclo(1, m + n == 0 ? Rational(m) : Rational(0));
        ok = ok &&
             mode_bracket(FockType::D, m, n) == Cyclo(2, m + n == 0 ? Rational(m) : Rational(0));
      }
    for (int m = -5; m <= 5 && ok; m += 2)
      for (int n = -5; n <= 5 && ok; n += 2)
        ok = mode_bracket(FockType::B, m, n) ==
             Cyclo(2, m + n == 0 ? Rational(m) / 2 : Rational(0));
    gate.line(6, ok, "Heisenberg mode brackets m*delta (A, D) and (m/2)*delta (B)", gate.lap());
  }

  // 7. oracle equivalence at window C = 10, < 120 s
  {
    gate.lap();
    const int C = 10;
    bool ok = true;
    // mode-algebra side vs closed forms
    for (auto [t, name] : {std::pair{FockType::B, "Bf"}, {FockType::D, "Df"}}) {
      auto r = make_preset(name);
      for (int n2 : {2, 4})
        ok = ok && fock_vev(t, n2, C) == vev_neutral(r, n2).expand_region(iota_region(n2), C);
    }
    auto rAf = make_preset("Af");
    ok = ok && fock_vev(FockType::A, 2, C) == vev_charged(rAf, 1).expand_region({0, 1}, C);
    ok = ok && fock_vev(FockType::A, 4, C) == vev_charged(rAf, 2).expand_region({0, 1, 2, 3}, C);
    // exponential-boson side vs closed lattice forms
    auto rAb = make_preset("Ab");
    ok = ok && boson_vertex_vev({BosonOp::APlus, BosonOp::AMinus}, C) ==
                   vev_lattice(rAb, {1, -1}).expand_region({0, 1}, C);
    ok = ok &&
         boson_vertex_vev({BosonOp::APlus, BosonOp::APlus, BosonOp::AMinus, BosonOp::AMinus}, C) ==
             vev_lattice(rAb, {1, 1, -1, -1}).expand_region({0, 1, 2, 3}, C);
    auto rBb = make_preset("Bb");
    ok = ok && boson_vertex_vev({BosonOp::BAlpha, BosonOp::BAlpha}, C) ==
                   vev_lattice(rBb, {1, 1}).expand_region({0, 1}, C);
    ok = ok && boson_vertex_vev(std::vector<BosonOp>(4, BosonOp::BAlpha), C) ==
                   vev_lattice(rBb, {1, 1, 1, 1}).expand_region({0, 1, 2, 3}, C);
    auto rDb = make_preset("Db");
    RatFn z1 = mono(2, 2, 0, 1);
    ok = ok && boson_vertex_vev({BosonOp::DPlus, BosonOp::DMinus}, C) ==
                   (z1 * vev_lattice(rDb, {1, -1})).expand_region({0, 1}, C);
    RatFn z14 = mono(4, 2, 0, 1), z24 = mono(4, 2, 1, 1);
    ok = ok && boson_vertex_vev(
                   {BosonOp::DPlus, BosonOp::DPlus, BosonOp::DMinus, BosonOp::DMinus}, C) ==
                   (z14 * z24 * vev_lattice(rDb, {1, 1, -1, -1})).expand_region({0, 1, 2, 3}, C);
    double s = gate.lap();
    gate.line(7, ok && s < 120.0, "oracle equivalence, 2n <= 4 points at C = 10, budget 120s", s);
  }

  // 8. correspondence identities at C = 10, up to 4 points
  {
    gate.lap();
    bool ok = true;
    for (const char* t : {"A", "B", "D"}) ok = ok && correspondence_check(t, 4, 10).pass;
    gate.line(8, ok, "boson-fermion correspondences, 4 points at C = 10", gate.lap());
  }

  // 9. axiom suite over five presets at C = 8
  {
    gate.lap();
    bool ok = true;
    for (const char* name : {"Bf", "Df", "Af", "C", "id"}) {
      auto r = make_preset(name);
      std::vector<HopfElement> gens;
      if (r.amb == Ambient::FreePhi) gens = {gen(r.N, r.amb, BaseSym::Phi)};
      else if (r.amb == Ambient::FreePhiPsi)
        gens = {gen(r.N, r.amb, BaseSym::Phi), gen(r.N, r.amb, BaseSym::Psi)};
      else gens = {gen(r.N, r.amb, BaseSym::H)};
      AxiomReport rep = check_axioms(r, gens, 8);
      if (!rep.pass)
        for (const auto& c : rep.checks)
          if (!c.pass) std::printf("  axiom failure [%s]: %s | %s\n", name, c.axiom.c_str(),
                                   c.instance.c_str());
      ok = ok && rep.pass;
    }
    gate.line(9, ok, "axiom suite with first descendants, five presets at C = 8", gate.lap());
  }

  // 10. order-3 Heisenberg two-point function z^2 w^2 / (z^3 - w^3)^2
  {
    gate.lap();
    bool ok = correspondence_check("D-N", 0, 0, 3).pass;
    gate.line(10, ok, "order-3 Heisenberg pairing z^2 w^2/(z^3-w^3)^2", gate.lap());
  }

  // 11. randomized property suites, >= 200 instances each
  {
    gate.lap();
    bool ok = hopf_laws(200) && bicharacter_laws(200) && expansion_homomorphism(200) &&
              pf_squared_det(200);
    gate.line(11, ok, "property suites (Hopf, pairing, expansion, Pf^2 = det), 200+ each",
              gate.lap());
  }

  if (gate.failures == 0) {
    std::printf("acceptance: all 11 criteria pass\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) FAILED\n", gate.failures);
  return 1;
}
