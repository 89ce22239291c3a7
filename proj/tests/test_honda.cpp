#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fgm/honda.hpp"

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

// F(g(x), h(x)) exactly through degree D
QSeries1 substitute(const QSeries2& F, const QSeries1& g, const QSeries1& h) {
  const int D = F.D();
  std::vector<QSeries1> gp(D + 1, QSeries1(D)), hp(D + 1, QSeries1(D));
  QSeries1 one_like(D);
  for (int k = 1; k <= D; ++k) {
    gp[k] = k == 1 ? g : gp[k - 1] * g;
    hp[k] = k == 1 ? h : hp[k - 1] * h;
  }
  QSeries1 r(D);
  for (int n = 1; n <= D; ++n)
    for (int j = 0; j <= n; ++j) {
      int i = n - j;
      const mpq_class& c = F.at(i, j);
      if (c == 0) continue;
      QSeries1 term = i == 0 ? hp[j] : j == 0 ? gp[i] : gp[i] * hp[j];
      r = r + term.scaled(c);
    }
  return r;
}

}  // namespace

TEST_CASE("heights") {
  CHECK(height(make_type(3, 3, {-1})) == 1);
  CHECK(height(make_type(2, 2, {0, -1})) == 2);
  CHECK(height(make_type(3, 3, {3, 1})) == 2);
  CHECK_THROWS_AS(height(make_type(3, 3, {3, 9})), Error);
}

TEST_CASE("logarithms of types") {
  QSeries1 f = logarithm_from_type(make_type(3, 3, {-1}), 27);
  CHECK(f[1] == 1);
  CHECK(f[3] == mpq_class(1, 3));
  CHECK(f[9] == mpq_class(1, 9));
  CHECK(f[27] == mpq_class(1, 27));
  CHECK(f[2] == 0);
  auto u = make_type(2, 2, {0, -1});
  QSeries1 g = logarithm_from_type(u, 16);
  CHECK(g[4] == mpq_class(1, 2));
  CHECK(g[16] == mpq_class(1, 4));
  CHECK(twisted_apply(u.as_twisted(), 2, g) == QSeries1::x(16).scaled(2));
  CHECK(verify_type(multiplicative_log(20), make_type(3, 3, {-1})));
  CHECK(verify_type(multiplicative_log(20), make_type(2, 2, {-1})));
  CHECK_FALSE(verify_type(QSeries1::x(9), make_type(3, 3, {-1})));
  QSeries1 lt = log_from_endomorphism([] {
    QSeries1 e(16);
    e[1] = 2, e[2] = 1;
    return e;
  }());
  CHECK(verify_type(lt, make_type(2, 2, {-1})));
}

TEST_CASE("group laws") {
  const int D = 10;
  QSeries2 F = group_law(multiplicative_log(D), 3);
  for (int n = 1; n <= D; ++n)
    for (int j = 0; j <= n; ++j) CHECK(F.at(n - j, j) == ((n == 1 || (n == 2 && j == 1)) ? 1 : 0));
  QSeries2 L = group_law(logarithm_from_type(make_type(2, 2, {-1}), 8), 2);
  CHECK(L.integral(2));
  CHECK(L.at(1, 0) == 1);
  CHECK(L.at(0, 1) == 1);
  for (int n = 2; n <= 8; ++n) CHECK(L.at(n, 0) == 0);
  // a non-type logarithm fails integrality
  QSeries1 bad = QSeries1::x(9);
  bad[3] = mpq_class(1, 9);
  CHECK_THROWS_AS(group_law(bad, 3), Error);
}

TEST_CASE("endomorphisms") {
  Precision prec{12, 4};
  auto G = FormalGroup::from_logarithm(make_type(3, 3, {-1}), multiplicative_log(12), prec);
  QSeries1 two = G->endo_exact(2);
  CHECK(two[1] == 2);
  CHECK(two[2] == 1);
  for (int n = 3; n <= 12; ++n) CHECK(two[n] == 0);
  CHECK(G->endo_exact(1) == QSeries1::x(12));
  CHECK(G->endo_exact(0) == QSeries1(12));
  // [1/2] is in Z_3
  CHECK(G->endo_exact(mpq_class(1, 2)).integral(3));
  CHECK_THROWS_AS(G->endo_exact(mpq_class(1, 3)), Error);

  auto H = FormalGroup::from_type(make_type(2, 2, {-1}), 16, prec);
  QSeries1 e2 = H->endo_exact(2);
  for (int n = 1; n <= 16; ++n) {
    mpq_class expect = n == 2 ? 1 : 0;
    CHECK(padic_val(e2[n] - expect, 2) >= 1);
  }
}

TEST_CASE("ring embedding and law properties") {
  Precision prec{12, 4};
  for (auto u : {make_type(3, 3, {-1}), make_type(2, 2, {0, -1}), make_type(3, 3, {3, 1})}) {
    auto G = FormalGroup::from_type(u, 16, prec);
    const auto& F = G->law_exact();
    CHECK(F.integral(u.p));
    QSeries1 x = QSeries1::x(16);
    for (auto [a, b] : std::vector<std::pair<int, int>>{{2, 3}, {-1, 5}, {4, 7}}) {
      CHECK(substitute(F, G->endo_exact(a), G->endo_exact(b)) == G->endo_exact(a + b));
      CHECK(series_compose(G->endo_exact(a), G->endo_exact(b)) == G->endo_exact(a * b));
      CHECK(series_compose(G->log(), G->endo_exact(a)) == G->log().scaled(a));
    }
    for (int n = 1; n <= 16; ++n)
      for (int j = 0; j <= n; ++j) CHECK(F.at(n - j, j) == F.at(j, n - j));
    CHECK(substitute(F, x, G->endo_exact(-1)) == QSeries1(16));
  }
}

TEST_CASE("kernel polynomials") {
  Precision prec{12, 4};
  auto G = FormalGroup::from_logarithm(make_type(3, 3, {-1}), multiplicative_log(12), prec);
  auto P = G->kernel_polynomial(1);
  const auto& ring = G->ring();
  REQUIRE(P.size() == 4);
  CHECK(P[0] == 0);
  CHECK(P[1] == 3);
  CHECK(P[2] == 3);
  CHECK(P[3] == 1);
  QSeries1 e(12);
  e[1] = 2, e[2] = 1;
  auto H = FormalGroup::from_logarithm(make_type(2, 2, {-1}), log_from_endomorphism(e), prec);
  auto Q = H->kernel_polynomial(1);
  REQUIRE(Q.size() == 3);
  CHECK(Q[0] == 0);
  CHECK(Q[1] == 2);
  CHECK(Q[2] == 1);
  auto S = FormalGroup::from_type(make_type(2, 2, {0, -1}), 16, prec);
  auto R = S->kernel_polynomial(1);
  CHECK(R.size() == 5);
  CHECK(ring.modulus() == 43046721u);
  CHECK(S->kernel_polynomial(2).size() == 17);
  CHECK_THROWS_AS(S->kernel_polynomial(3), Error);
}

TEST_CASE("torsion modules") {
  Precision prec{12, 4};
  auto G = FormalGroup::from_logarithm(make_type(3, 3, {-1}), multiplicative_log(24), prec);
  auto Q3 = FieldTower::base(3, prec);
  auto L = Q3->extend(StepSpec::eisenstein_int({3, 3}));
  auto W = torsion_module(*G, 1, *L);
  CHECK(W.points.size() == 3);
  CHECK(W.complete);
  CHECK(W.invariants == std::vector<int>{1});
  REQUIRE(W.basis.size() == 1);
  FieldElement z = W.basis[0] + L->one();
  CHECK(z.pow(3).equals(L->one()));
  auto W0 = torsion_module(*G, 1, *Q3);
  CHECK(W0.points.size() == 1);
  CHECK(W0.points[0].is_zero());
  CHECK(!W0.complete);
  CHECK(W0.invariants.empty());

  QSeries1 e(16);
  e[1] = 2, e[2] = 1;
  auto H = FormalGroup::from_logarithm(make_type(2, 2, {-1}), log_from_endomorphism(e), prec);
  auto Q2 = FieldTower::base(2, prec);
  auto V = torsion_module(*H, 1, *Q2);
  CHECK(V.points.size() == 2);
  CHECK(V.invariants == std::vector<int>{1});
  bool has_minus_two = false;
  for (const auto& x : V.points) has_minus_two |= x.equals(Q2->from_int(-2));
  CHECK(has_minus_two);
  // W^2 of the multiplicative group in Q_3(zeta_9) is not in Q_3(zeta_3)
  auto W2 = torsion_module(*G, 2, *L);
  CHECK(W2.points.size() == 3);
  CHECK(W2.invariants == std::vector<int>{1});
}
