#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fgm/structure.hpp"
#include "fixtures.hpp"

using namespace fgm;
using namespace fixtures;

TEST_CASE("hypothesis gate") {
  A1 a;
  auto hc = check_hypothesis(a.mod);
  CHECK(hc.ok);
  CHECK(hc.s == 1);
  CHECK(hc.n == 2);
  CHECK(hc.h == 1);
  CHECK(hc.m_exp == 1);
  CHECK(hc.counts_M == std::vector<u64>{3, 3});
  A2 b;
  auto hb = check_hypothesis(b.mod);
  CHECK(hb.s == 1);
  CHECK(hb.n == 1);
  CHECK(hb.h == 1);

  Precision prec{12, 6};
  auto Q3 = FieldTower::base(3, prec);
  FormalModule bad(a.F, Q3, Q3->extend(StepSpec::unramified(3)));
  auto hx = inspect_hypothesis(bad);
  CHECK(!hx.ok);
  CHECK(hx.reason == "no-torsion");
  CHECK_THROWS_AS(check_hypothesis(bad), Error);
}

TEST_CASE("quotient dimensions by both routes") {
  A1 a;
  QuotientSpace VL(a.mod, *a.L), VM(a.mod, *a.M);
  CHECK(VL.dim() == 3);
  CHECK(VM.dim() == 7);
  CHECK(quotient_dim(a.mod, VL, 3, QuotientRoute::Linear).dim == 3);
  CHECK(quotient_dim(a.mod, VL, 3, QuotientRoute::Division).dim == 3);
  CHECK(quotient_dim(a.mod, VM, 7, QuotientRoute::Linear).dim == 7);
  CHECK_THROWS_AS(quotient_dim(a.mod, VL, 4, QuotientRoute::Linear), Error);
  A2 b;
  QuotientSpace WL(b.mod, *b.L), WM(b.mod, *b.M);
  CHECK(WL.dim() == 2);
  CHECK(WM.dim() == 3);
  CHECK(quotient_dim(b.mod, WL, 2, QuotientRoute::Division).dim == 2);
  CHECK(quotient_dim(b.mod, WM, 3, QuotientRoute::Division).dim == 3);
}

TEST_CASE("linear membership agrees with division") {
  A1 a;
  QuotientSpace VM(a.mod, *a.M);
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<u64> d(0, a.M->ring().modulus() - 1);
  for (int t = 0; t < 6; ++t) {
    std::vector<u64> c(a.M->degree());
    for (auto& x : c) x = d(rng);
    FieldElement y = a.M->from_coords(c) * a.M->uniformizer();
    FieldElement z = a.mod.pi_mul(y);
    CHECK(VM.in_pi_image(z));
    CHECK(in_pi_image_by_division(a.mod, z, *a.M));
    CHECK(VM.in_pi_image(y) == in_pi_image_by_division(a.mod, y, *a.M));
  }
  FieldElement z3 = a.mod.up(a.L->generator(1));
  CHECK(!VM.in_pi_image(z3));
}

TEST_CASE("kernel, orbits and presentation for A1") {
  A1 a;
  auto hc = check_hypothesis(a.mod);
  QuotientSpace VL(a.mod, *a.L), VM(a.mod, *a.M);
  auto K = inclusion_kernel(a.mod, hc, VL, VM);
  CHECK(K.dim == 1);
  CHECK(K.kernel.size() == 1);
  CHECK(!a.mod.pi_division(a.mod.up(K.kernel[0]), *a.M).empty());
  CHECK(a.mod.pi_division(K.kernel[0], *a.L).empty());
  std::mt19937_64 rng(1);
  auto rep = build_presentation(a.mod, hc, VL, VM, rng, {2, 3, 4});
  CHECK(rep.xi.size() == 1);
  CHECK(rep.theta.size() == 1);
  CHECK(rep.relations_verified);
  CHECK(rep.independence_rank == 7);
  CHECK(rep.generation_verified);
  CHECK(orbit_independence(a.mod, VM, rep.xi));
  for (const auto& c : rep.invariants) CHECK(c.equal);
  // omega shifted by an L-point still satisfies the relation
  FieldElement w = a.mod.add(rep.omega[0], a.mod.up(a.L->uniformizer()));
  CHECK(a.mod.coboundary(w).equals(a.mod.pi_mul(rep.xi[0])));
  CHECK_THROWS_AS(orbit_independence(a.mod, VM, {a.mod.pi_mul(rep.xi[0])}), Error);
}

TEST_CASE("presentation for A2") {
  A2 b;
  auto hc = check_hypothesis(b.mod);
  QuotientSpace VL(b.mod, *b.L), VM(b.mod, *b.M);
  std::mt19937_64 rng(2);
  auto rep = build_presentation(b.mod, hc, VL, VM, rng, {2, 3, 4, 5, 6});
  CHECK(rep.theta.empty());
  CHECK(rep.independence_rank == 3);
  CHECK(rep.relations_verified);
  CHECK(orbit_independence(b.mod, VM, rep.xi));
  auto c3 = invariant_compare(b.mod, hc, VM, 3);
  CHECK(c3.presented == std::vector<int>{3, 3, 1});
  CHECK(c3.equal);
}
