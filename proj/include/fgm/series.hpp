#pragma once

// Truncated power series without constant term. Exact series have rational
// coefficients (Q_p scalars are represented by rationals); reduced series
// have coefficients in Z/p^P and are produced only from integral exact ones.

#include <gmpxx.h>

#include <vector>

#include "fgm/error.hpp"
#include "fgm/modular.hpp"

namespace fgm {

/// p-adic valuation of a nonzero rational; `cap` for zero.
int padic_val(const mpq_class& x, u64 p, int cap = 1 << 20);

/// Image of a p-integral rational in Z/p^P.
u64 reduce_rational(const mpq_class& x, const ResidueRing& ring);

class ModSeries1;
class ModSeries2;

/// c_1 x + ... + c_D x^D over Q.
class QSeries1 {
 public:
  explicit QSeries1(int D = 0) : c_(D + 1) {}
  static QSeries1 x(int D);

  int D() const { return static_cast<int>(c_.size()) - 1; }
  const mpq_class& operator[](int n) const { return c_[n]; }
  mpq_class& operator[](int n) { return c_[n]; }
  const std::vector<mpq_class>& coeffs() const { return c_; }

  QSeries1 operator+(const QSeries1& o) const;
  QSeries1 operator-(const QSeries1& o) const;
  QSeries1 operator*(const QSeries1& o) const;
  QSeries1 scaled(const mpq_class& s) const;
  bool operator==(const QSeries1& o) const { return c_ == o.c_; }

  /// Largest p-power denominator exponent among the coefficients (0 when
  /// the series is p-integral).
  int denom_bound(u64 p) const;
  bool integral(u64 p) const { return denom_bound(p) == 0; }
  ModSeries1 reduce(const ResidueRing& ring) const;

 private:
  std::vector<mpq_class> c_;
};

/// Sum of c_ij x^i y^j over 1 <= i + j <= D.
class QSeries2 {
 public:
  explicit QSeries2(int D = 0);

  int D() const { return D_; }
  static int index(int i, int j) { return (i + j) * (i + j + 1) / 2 + j; }
  const mpq_class& at(int i, int j) const { return c_[index(i, j)]; }
  mpq_class& at(int i, int j) { return c_[index(i, j)]; }

  /// g(x) + g(y).
  static QSeries2 split_sum(const QSeries1& g);
  QSeries2 operator+(const QSeries2& o) const;
  /// Product truncated at total degree D; zero coefficients of either side
  /// are skipped, so multiplying by a sparse factor is cheap.
  QSeries2 operator*(const QSeries2& o) const;
  bool operator==(const QSeries2& o) const { return D_ == o.D_ && c_ == o.c_; }

  int denom_bound(u64 p) const;
  bool integral(u64 p) const { return denom_bound(p) == 0; }
  ModSeries2 reduce(const ResidueRing& ring) const;

 private:
  int D_;
  std::vector<mpq_class> c_;
};

class ModSeries1 {
 public:
  ModSeries1() = default;
  ModSeries1(int D, std::vector<u64> c) : c_(std::move(c)) { c_.resize(D + 1); }

  int D() const { return static_cast<int>(c_.size()) - 1; }
  u64 operator[](int n) const { return c_[n]; }
  const std::vector<u64>& coeffs() const { return c_; }

 private:
  std::vector<u64> c_;
};

class ModSeries2 {
 public:
  struct Term {
    int i, j;
    u64 c;
  };

  ModSeries2() = default;
  ModSeries2(int D, std::vector<Term> terms) : D_(D), terms_(std::move(terms)) {}

  int D() const { return D_; }
  /// Nonzero terms ordered by total degree.
  const std::vector<Term>& terms() const { return terms_; }

 private:
  int D_ = 0;
  std::vector<Term> terms_;
};

/// g(h(x)) truncated at degree D.
QSeries1 series_compose(const QSeries1& g, const QSeries1& h);
/// g(s(x, y)) truncated at total degree D.
QSeries2 series_compose(const QSeries1& g, const QSeries2& s);
/// Compositional inverse; requires a nonzero linear coefficient that is a
/// p-adic unit when `p` is given.
QSeries1 series_reversion(const QSeries1& g, u64 p = 0);

/// Twisted action of u = u_0 + u_1 T + ... on g with trivial Frobenius on
/// coefficients: sum of u_i g(x^(q^i)).
QSeries1 twisted_apply(const std::vector<mpq_class>& u, u64 q, const QSeries1& g);

}  // namespace fgm

#include "fgm/tower.hpp"

namespace fgm {

/// g(x) for x in the maximal ideal of a tower. Terms whose valuation reaches
/// the working precision are skipped; throws TruncationTooShort when the
/// dropped tail could still matter modulo p^N.
FieldElement eval_series(const ModSeries1& g, const FieldElement& x);
/// F(x, y) for x, y in the maximal ideal.
FieldElement eval_series(const ModSeries2& F, const FieldElement& x, const FieldElement& y);

}  // namespace fgm
