#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fgm/formal_module.hpp"

using namespace fgm;

namespace {

HondaType make_type(u64 p, i64 pi, std::vector<i64> a) {
  HondaType u;
  u.p = p;
  u.pi = pi;
  u.a.push_back(0);
  for (i64 x : a) u.a.push_back(x);
  return u;
}

struct A1 {
  Precision prec{12, 4};
  TowerPtr L = FieldTower::build(3, {StepSpec::eisenstein_int({3, 3})}, prec);
  TowerPtr M = L->extend(StepSpec::unramified(3));
  GroupPtr F = FormalGroup::from_logarithm(make_type(3, 3, {-1}), multiplicative_log(32), prec);
  FormalModule mod{F, L, M};
};

FieldElement random_point(std::mt19937_64& rng, const FieldTower& T, int vmin = 1) {
  std::uniform_int_distribution<u64> d(0, T.ring().modulus() - 1);
  std::vector<u64> c(T.degree());
  for (auto& x : c) x = d(rng);
  return T.from_coords(c) * T.uniformizer().pow(vmin);
}

}  // namespace

TEST_CASE("point arithmetic") {
  A1 a;
  const auto& m = a.mod;
  FieldElement z = a.L->generator(1);  // zeta_3 - 1
  CHECK(m.add(z, a.L->zero()).equals(z));
  FieldElement zeta = z + a.L->one();
  CHECK(m.add(z, z).equals(zeta * zeta - a.L->one()));
  CHECK(m.scalar(3, z).is_zero());
  CHECK(m.scalar(1, z).equals(z));
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    FieldElement x = random_point(rng, *a.M), y = random_point(rng, *a.M), w = random_point(rng, *a.M);
    CHECK(m.add(x, m.neg(x)).is_zero());
    CHECK(m.add(x, y).equals(m.add(y, x)));
    CHECK(m.add(m.add(x, y), w).equals(m.add(x, m.add(y, w))));
    // oracle (1+x)(1+y) - 1
    CHECK(m.add(x, y).equals(x + y + x * y));
    CHECK(m.scalar(5, x).equals(m.add(m.scalar(2, x), m.scalar(3, x))));
    CHECK(m.scalar(1000, x).equals((x + a.M->one()).pow(1000) - a.M->one()));
    CHECK(m.scalar(-7, x).equals(m.neg(m.scalar(7, x))));
  }
}

TEST_CASE("group ring action and norm") {
  A1 a;
  const auto& m = a.mod;
  std::mt19937_64 rng(9);
  const int n = m.order();
  FieldElement x = random_point(rng, *a.M);
  CHECK(m.act(GroupRingElement::one(n), x).equals(x));
  CHECK(m.act(GroupRingElement::sigma(n), x).equals(m.sigma(x)));
  CHECK(m.act(GroupRingElement::norm_element(n), x).equals(m.norm(x)));
  CHECK(m.galois().fixed(m.norm(x)));
  GroupRingElement g{{2, -1, 3}}, h{{0, 4, 1}};
  CHECK(m.act(g * h, x).equals(m.act(g, m.act(h, x))));
  FieldElement y = m.up(random_point(rng, *a.L));
  CHECK(m.norm(y).equals(m.scalar(3, y)));
  CHECK(m.norm(m.coboundary(x)).is_zero());
}

TEST_CASE("norm and coboundary solvers") {
  A1 a;
  const auto& m = a.mod;
  FieldElement z = m.up(a.L->generator(1));
  FieldElement xi = m.solve_norm(z);
  CHECK(m.norm(xi).equals(z));
  FieldElement b = m.scalar(3, xi);
  FieldElement w = m.solve_coboundary(b);
  CHECK(m.coboundary(w).equals(b));
  CHECK(m.solve_coboundary(a.M->zero()).is_zero());
  std::mt19937_64 rng(13);
  for (int t = 0; t < 10; ++t) {
    FieldElement s = m.up(random_point(rng, *a.L));
    CHECK(m.norm(m.solve_norm(s)).equals(s));
    FieldElement c = m.coboundary(random_point(rng, *a.M));
    CHECK(m.coboundary(m.solve_coboundary(c)).equals(c));
  }
  CHECK_THROWS_AS(m.solve_coboundary(m.up(a.L->uniformizer().pow(3))), Error);
}

TEST_CASE("pi division") {
  A1 a;
  const auto& m = a.mod;
  auto Q3 = FieldTower::base(3, a.prec);
  // the group over Q_3 alone
  auto r0 = m.pi_division(Q3->zero(), *Q3);
  REQUIRE(r0.size() == 1);
  CHECK(r0[0].is_zero());
  CHECK(m.pi_division(a.L->generator(1), *a.L).empty());
  CHECK(m.pi_division(a.L->zero(), *a.L).size() == 3);
  std::mt19937_64 rng(17);
  for (int t = 0; t < 3; ++t) {
    FieldElement y = random_point(rng, *a.M);
    auto roots = m.pi_division(m.pi_mul(y), *a.M);
    CHECK(roots.size() == 3);
    bool found = false;
    for (const auto& r : roots) found |= r.equals(y);
    CHECK(found);
  }
}
