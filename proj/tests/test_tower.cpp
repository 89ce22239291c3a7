#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fgm/tower.hpp"

using namespace fgm;

namespace {

std::vector<FieldElement> ints(const FieldTower& T, std::vector<i64> c) {
  std::vector<FieldElement> r;
  for (i64 v : c) r.push_back(T.from_int(v));
  return r;
}

}  // namespace

TEST_CASE("degrees and valuations") {
  Precision prec{12, 4};
  auto Q3 = FieldTower::base(3, prec);
  CHECK(Q3->degree() == 1);
  CHECK(Q3->e() == 1);
  CHECK(Q3->from_int(3).valuation() == 1);
  CHECK(Q3->from_int(18).valuation() == 2);
  CHECK(Q3->zero().valuation() == kInfiniteValuation);

  auto L = Q3->extend(StepSpec::eisenstein_int({3, 3}));
  CHECK(L->degree() == 2);
  CHECK(L->e() == 2);
  CHECK(L->f() == 1);
  CHECK(L->from_int(3).valuation() == 2);
  CHECK(L->uniformizer().valuation() == 1);

  auto T6 = FieldTower::build(2, {StepSpec::unramified(2), StepSpec::eisenstein({{2}, {0}, {0}})}, prec);
  CHECK(T6->degree() == 6);
  CHECK(T6->e() == 3);
  CHECK(T6->f() == 2);
  CHECK(T6->q_residue() == 4);
  CHECK(T6->from_int(2).valuation() == 3);
}

TEST_CASE("cyclotomic unit relation") {
  Precision prec{12, 4};
  auto L = FieldTower::build(3, {StepSpec::eisenstein_int({3, 3})}, prec);
  // x^2 + 3x + 3 has the root zeta - 1
  FieldElement x = L->generator(1);
  FieldElement zeta = x + L->one();
  CHECK(zeta.pow(3).equals(L->one()));
  FieldElement prod = (zeta - L->one()) * (zeta * zeta - L->one());
  CHECK(prod.valuation() == 2);
  FieldElement u = prod.divide(L->from_int(3));
  CHECK(u.is_unit());
  CHECK((u * L->from_int(3)).equals(prod));
}

TEST_CASE("inverse and exact division") {
  Precision prec{10, 4};
  auto M = FieldTower::build(3, {StepSpec::eisenstein_int({3, 3}), StepSpec::unramified(3)}, prec);
  CHECK(M->q_residue() == 27);
  FieldElement a = M->generator(2) + M->from_int(2);
  REQUIRE(a.is_unit());
  CHECK((a * a.inverse()).equals(M->one()));
  FieldElement b = a * M->uniformizer().pow(5);
  CHECK(b.valuation() == 5);
  CHECK(b.divide_by_uniformizer(5).equals(a));
  CHECK_THROWS_AS(a.divide(b), Error);
}

TEST_CASE("rejects bad steps") {
  Precision prec{12, 4};
  auto Q3 = FieldTower::base(3, prec);
  CHECK_THROWS_AS(Q3->extend(StepSpec::eisenstein_int({9, 3})), Error);
  CHECK_THROWS_AS(Q3->extend(StepSpec::eisenstein_int({3, 1})), Error);
  // x^2 + 1 is reducible modulo 5
  auto Q5 = FieldTower::base(5, prec);
  StepSpec s{StepKind::Unramified, 2, {{1}, {0}}};
  CHECK_THROWS_AS(Q5->extend(s), Error);
}

TEST_CASE("Frobenius on an unramified extension") {
  Precision prec{8, 4};
  auto L = FieldTower::build(3, {StepSpec::eisenstein_int({3, 3})}, prec);
  auto M = L->extend(StepSpec::unramified(3));
  GaloisData G(L, M);
  CHECK(G.order() == 3);
  FieldElement zeta = M->embed(L->generator(1)) + M->one();
  CHECK(G.fixed(zeta));
  FieldElement t = M->generator(2);
  CHECK(!G.fixed(t));
  CHECK(G.apply(t, 3).equals(t));
  // residue action is x -> x^3
  auto r1 = M->residue_digits(G.apply(t));
  auto r2 = M->residue_digits(t.pow(3));
  CHECK(r1 == r2);
  CHECK(G.apply(t * zeta).equals(G.apply(t) * zeta));
  FieldElement n = G.field_norm(t + M->from_int(1));
  CHECK(G.fixed(n));
}

TEST_CASE("roots in a field") {
  Precision prec{12, 4};
  auto Q3 = FieldTower::base(3, prec);
  auto r = roots_in_field(ints(*Q3, {-1, 0, 1}), *Q3, {0, 1});
  CHECK(r.size() == 2);
  CHECK(roots_in_field(ints(*Q3, {3, 3, 1}), *Q3, {0, 1}).empty());
  auto L = Q3->extend(StepSpec::eisenstein_int({3, 3}));
  auto rl = roots_in_field(ints(*L, {3, 3, 1}), *L, {0, 1});
  CHECK(rl.size() == 2);
  for (const auto& y : rl) CHECK(poly_eval(ints(*L, {3, 3, 1}), y).is_zero());
  // x^3 + 3x^2 + 3x = (1+x)^3 - 1 has roots 0, zeta-1, zeta^2-1
  CHECK(roots_in_field(ints(*L, {0, 3, 3, 1}), *L, {1, 2}).size() == 3);
  // 2-adic square roots of 17
  auto Q2 = FieldTower::base(2, prec);
  CHECK(roots_in_field(ints(*Q2, {-17, 0, 1}), *Q2, {0, 1}).size() == 2);
  CHECK(roots_in_field(ints(*Q2, {-3, 0, 1}), *Q2, {0, 1}).empty());
}
