#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fgm/series.hpp"

using namespace fgm;

namespace {

QSeries1 from_list(int D, std::vector<mpq_class> c) {
  QSeries1 s(D);
  for (size_t i = 0; i < c.size() && static_cast<int>(i) + 1 <= D; ++i) s[static_cast<int>(i) + 1] = c[i];
  return s;
}

QSeries1 log1p(int D) {
  QSeries1 s(D);
  for (int n = 1; n <= D; ++n) s[n] = mpq_class(n % 2 ? 1 : -1, n);
  return s;
}

QSeries1 expm1(int D) {
  QSeries1 s(D);
  mpz_class fact = 1;
  for (int n = 1; n <= D; ++n) {
    fact *= n;
    s[n] = mpq_class(mpz_class(1), fact);
  }
  return s;
}

QSeries1 random_series(std::mt19937_64& rng, int D, bool unit_linear) {
  std::uniform_int_distribution<int> d(-4, 4);
  QSeries1 s(D);
  for (int n = 1; n <= D; ++n) s[n] = d(rng);
  if (unit_linear && s[1] == 0) s[1] = 1;
  return s;
}

// Lagrange inversion: [x^n] g^{-1} = (1/n) [x^{n-1}] (x / g)^n.
QSeries1 lagrange_oracle(const QSeries1& g) {
  const int D = g.D();
  // w = g / x as a series with constant term, then its reciprocal
  std::vector<mpq_class> w(D), r(D);
  for (int k = 0; k < D; ++k) w[k] = g[k + 1];
  r[0] = 1 / w[0];
  for (int k = 1; k < D; ++k) {
    mpq_class s = 0;
    for (int j = 1; j <= k; ++j) s += w[j] * r[k - j];
    r[k] = -s / w[0];
  }
  QSeries1 h(D);
  std::vector<mpq_class> pw(D, 0);
  pw[0] = 1;
  for (int n = 1; n <= D; ++n) {
    std::vector<mpq_class> nx(D, 0);
    for (int a = 0; a < D; ++a)
      for (int b = 0; a + b < D; ++b) nx[a + b] += pw[a] * r[b];
    pw = nx;
    h[n] = pw[n - 1] / n;
  }
  return h;
}

}  // namespace

TEST_CASE("composition") {
  const int D = 9;
  QSeries1 f = log1p(D);
  CHECK(series_compose(f, QSeries1::x(D)) == f);
  QSeries1 g = from_list(D, {1, 1});
  CHECK(series_compose(g, g) == from_list(D, {1, 2, 2, 1}));
  CHECK(series_compose(log1p(D), expm1(D)) == QSeries1::x(D));
  CHECK(series_compose(expm1(D), log1p(D)) == QSeries1::x(D));
}

TEST_CASE("composition is associative") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 5; ++t) {
    QSeries1 a = random_series(rng, 8, false), b = random_series(rng, 8, false), c = random_series(rng, 8, false);
    CHECK(series_compose(series_compose(a, b), c) == series_compose(a, series_compose(b, c)));
  }
}

TEST_CASE("reversion") {
  const int D = 10;
  CHECK(series_reversion(QSeries1::x(D)) == QSeries1::x(D));
  QSeries1 h = series_reversion(from_list(D, {1, 1}));
  std::vector<int> catalan{1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862};
  for (int n = 1; n <= D; ++n) CHECK(h[n] == (n % 2 ? 1 : -1) * catalan[n - 1]);
  std::mt19937_64 rng(11);
  for (int t = 0; t < 5; ++t) {
    QSeries1 g = random_series(rng, D, true);
    QSeries1 r = series_reversion(g);
    CHECK(r == lagrange_oracle(g));
    CHECK(series_reversion(r) == g);
    CHECK(series_compose(g, r) == QSeries1::x(D));
  }
  QSeries1 bad = from_list(D, {3, 1});
  CHECK_THROWS_AS(series_reversion(bad, 3), Error);
  CHECK_THROWS_AS(series_reversion(from_list(D, {0, 1})), Error);
}

TEST_CASE("twisted action") {
  const int D = 27;
  // u = pi (constant)
  QSeries1 g = log1p(D);
  CHECK(twisted_apply({mpq_class(3)}, 3, g) == g.scaled(3));
  // u = pi - T applied to sum x^{q^i} / pi^i telescopes to pi x
  QSeries1 lt(D);
  lt[1] = 1, lt[3] = mpq_class(1, 3), lt[9] = mpq_class(1, 9), lt[27] = mpq_class(1, 27);
  CHECK(twisted_apply({mpq_class(3), mpq_class(-1)}, 3, lt) == QSeries1::x(D).scaled(3));
  // u = p - T on log(1+x) over Q_3: every coefficient divisible by 3
  QSeries1 r = twisted_apply({mpq_class(3), mpq_class(-1)}, 3, log1p(9));
  for (int n = 1; n <= 9; ++n) CHECK(padic_val(r[n], 3) >= 1);
  // additivity
  QSeries1 a = twisted_apply({mpq_class(3), mpq_class(-1)}, 3, g);
  QSeries1 b = twisted_apply({mpq_class(0), mpq_class(2), mpq_class(5)}, 3, g);
  CHECK(a + b == twisted_apply({mpq_class(3), mpq_class(1), mpq_class(5)}, 3, g));
  CHECK(twisted_apply({mpq_class(3), mpq_class(-1)}, 3, g + lt) == a + twisted_apply({mpq_class(3), mpq_class(-1)}, 3, lt));
}

TEST_CASE("denominator bounds") {
  const int D = 9;
  QSeries1 f = log1p(D);
  CHECK(f.denom_bound(3) == 2);
  CHECK((f * f).denom_bound(3) <= 2 * f.denom_bound(3));
  CHECK(series_compose(f, f).denom_bound(3) <= 2 * f.denom_bound(3) + 2);
  CHECK(from_list(D, {1, 2, 3}).integral(3));
}

TEST_CASE("bivariate law of the multiplicative group") {
  const int D = 10;
  QSeries2 s = QSeries2::split_sum(log1p(D));
  QSeries2 F = series_compose(expm1(D), s);
  for (int n = 1; n <= D; ++n)
    for (int j = 0; j <= n; ++j) {
      int i = n - j;
      int expect = (n == 1) || (i == 1 && j == 1) ? 1 : 0;
      CHECK(F.at(i, j) == expect);
    }
  ResidueRing ring(3, 6);
  auto m = F.reduce(ring);
  CHECK(m.terms().size() == 3);
}
