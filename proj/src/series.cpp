#include "fgm/series.hpp"

#include "fgm/error.hpp"

namespace fgm {

namespace {

void check_same_D(int a, int b) {
  if (a != b) fail(ErrorCode::FieldMismatch, "series truncation degrees differ");
}

int mpz_val(const mpz_class& z, u64 p) {
  mpz_class t = z, pz = static_cast<unsigned long>(p);
  int v = 0;
  while (mpz_divisible_p(t.get_mpz_t(), pz.get_mpz_t())) {
    mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), pz.get_mpz_t());
    ++v;
  }
  return v;
}

}  // namespace

int padic_val(const mpq_class& x, u64 p, int cap) {
  if (x == 0) return cap;
  return mpz_val(x.get_num(), p) - mpz_val(x.get_den(), p);
}

u64 reduce_rational(const mpq_class& x, const ResidueRing& ring) {
  mpz_class m = static_cast<unsigned long>(ring.modulus());
  mpz_class den = x.get_den();
  if (mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(ring.p())))
    fail(ErrorCode::NonIntegralLaw, "reducing a non-integral rational");
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
  mpz_class r = x.get_num() * inv;
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
  return static_cast<u64>(r.get_ui());
}

// ---------------------------------------------------------------------------

QSeries1 QSeries1::x(int D) {
  QSeries1 s(D);
  if (D >= 1) s[1] = 1;
  return s;
}

QSeries1 QSeries1::operator+(const QSeries1& o) const {
  check_same_D(D(), o.D());
  QSeries1 r(*this);
  for (int n = 1; n <= D(); ++n) r[n] += o[n];
  return r;
}

QSeries1 QSeries1::operator-(const QSeries1& o) const {
  check_same_D(D(), o.D());
  QSeries1 r(*this);
  for (int n = 1; n <= D(); ++n) r[n] -= o[n];
  return r;
}

QSeries1 QSeries1::operator*(const QSeries1& o) const {
  check_same_D(D(), o.D());
  QSeries1 r(D());
  for (int i = 1; i <= D(); ++i) {
    if (c_[i] == 0) continue;
    for (int j = 1; i + j <= D(); ++j)
      if (o[j] != 0) r[i + j] += c_[i] * o[j];
  }
  return r;
}

QSeries1 QSeries1::scaled(const mpq_class& s) const {
  QSeries1 r(*this);
  for (auto& c : r.c_) c *= s;
  return r;
}

int QSeries1::denom_bound(u64 p) const {
  int b = 0;
  for (const auto& c : c_)
    if (c != 0) b = std::max(b, -padic_val(c, p));
  return b;
}

ModSeries1 QSeries1::reduce(const ResidueRing& ring) const {
  std::vector<u64> c(c_.size(), 0);
  for (int n = 1; n <= D(); ++n) c[n] = reduce_rational(c_[n], ring);
  return ModSeries1(D(), std::move(c));
}

// ---------------------------------------------------------------------------

QSeries2::QSeries2(int D) : D_(D), c_(index(0, D) + 1) {}

QSeries2 QSeries2::split_sum(const QSeries1& g) {
  QSeries2 s(g.D());
  for (int n = 1; n <= g.D(); ++n) {
    s.at(n, 0) = g[n];
    s.at(0, n) = g[n];
  }
  return s;
}

QSeries2 QSeries2::operator+(const QSeries2& o) const {
  check_same_D(D_, o.D_);
  QSeries2 r(*this);
  for (size_t k = 0; k < c_.size(); ++k) r.c_[k] += o.c_[k];
  return r;
}

QSeries2 QSeries2::operator*(const QSeries2& o) const {
  check_same_D(D_, o.D_);
  struct NZ {
    int i, j;
    const mpq_class* c;
  };
  auto nonzeros = [](const QSeries2& s) {
    std::vector<NZ> v;
    for (int n = 1; n <= s.D_; ++n)
      for (int j = 0; j <= n; ++j)
        if (s.at(n - j, j) != 0) v.push_back({n - j, j, &s.at(n - j, j)});
    return v;
  };
  auto a = nonzeros(*this), b = nonzeros(o);
  QSeries2 r(D_);
  mpq_class t;
  for (const auto& x : a)
    for (const auto& y : b) {
      if (x.i + x.j + y.i + y.j > D_) continue;
      mpq_mul(t.get_mpq_t(), x.c->get_mpq_t(), y.c->get_mpq_t());
      r.at(x.i + y.i, x.j + y.j) += t;
    }
  return r;
}

int QSeries2::denom_bound(u64 p) const {
  int b = 0;
  for (const auto& c : c_)
    if (c != 0) b = std::max(b, -padic_val(c, p));
  return b;
}

ModSeries2 QSeries2::reduce(const ResidueRing& ring) const {
  std::vector<ModSeries2::Term> terms;
  for (int n = 1; n <= D_; ++n)
    for (int j = 0; j <= n; ++j) {
      const auto& c = at(n - j, j);
      if (c == 0) continue;
      u64 r = reduce_rational(c, ring);
      if (r != 0) terms.push_back({n - j, j, r});
    }
  return ModSeries2(D_, std::move(terms));
}

// ---------------------------------------------------------------------------

QSeries1 series_compose(const QSeries1& g, const QSeries1& h) {
  check_same_D(g.D(), h.D());
  const int D = g.D();
  QSeries1 acc(D);
  for (int k = D; k >= 1; --k) {
    // acc <- (acc + g_k) * h, with the constant g_k carried separately
    QSeries1 t = acc * h;
    if (g[k] != 0)
      for (int n = 1; n <= D; ++n) t[n] += g[k] * h[n];
    acc = std::move(t);
  }
  return acc;
}

QSeries2 series_compose(const QSeries1& g, const QSeries2& s) {
  check_same_D(g.D(), s.D());
  const int D = g.D();
  QSeries2 acc(D);
  for (int k = D; k >= 1; --k) {
    QSeries2 t = acc * s;
    if (g[k] != 0)
      for (int n = 1; n <= D; ++n)
        for (int j = 0; j <= n; ++j)
          if (s.at(n - j, j) != 0) t.at(n - j, j) += g[k] * s.at(n - j, j);
    acc = std::move(t);
  }
  return acc;
}

QSeries1 series_reversion(const QSeries1& g, u64 p) {
  const int D = g.D();
  if (D < 1 || g[1] == 0) fail(ErrorCode::NonUnitLinearTerm, "linear coefficient is zero");
  if (p != 0 && padic_val(g[1], p) != 0) fail(ErrorCode::NonUnitLinearTerm, "linear coefficient is not a unit");
  // Solve h(g(x)) = x using the powers of g.
  std::vector<QSeries1> pw(D + 1, QSeries1(D));
  pw[1] = g;
  for (int k = 2; k <= D; ++k) pw[k] = pw[k - 1] * g;
  QSeries1 h(D);
  for (int n = 1; n <= D; ++n) {
    mpq_class s = n == 1 ? mpq_class(1) : mpq_class(0);
    for (int k = 1; k < n; ++k)
      if (h[k] != 0) s -= h[k] * pw[k][n];
    h[n] = s / pw[n][n];
  }
  return h;
}

QSeries1 twisted_apply(const std::vector<mpq_class>& u, u64 q, const QSeries1& g) {
  const int D = g.D();
  QSeries1 r(D);
  u64 step = 1;
  for (size_t i = 0; i < u.size(); ++i) {
    if (i > 0) {
      if (step > static_cast<u64>(D) / q + 1) break;
      step *= q;
    }
    if (step > static_cast<u64>(D)) break;
    if (u[i] == 0) continue;
    for (int n = 1; static_cast<u64>(n) * step <= static_cast<u64>(D); ++n)
      if (g[n] != 0) r[static_cast<int>(n * step)] += u[i] * g[n];
  }
  return r;
}

}  // namespace fgm

// ---------------------------------------------------------------------------
// Evaluation at tower points

namespace fgm {

namespace {

void check_tail(int D, int v, const FieldTower& T) {
  if (v >= kInfiniteValuation) return;
  if (v <= 0) fail(ErrorCode::PreconditionFailed, "series evaluated outside the maximal ideal");
  if (static_cast<i64>(D + 1) * v < static_cast<i64>(T.e()) * T.precision().N)
    fail(ErrorCode::TruncationTooShort, "series tail is not negligible at this point");
}

std::vector<FieldElement> powers(const FieldElement& x, int D, int v, int full) {
  std::vector<FieldElement> pw{x.tower().one()};
  for (int i = 1; i <= D; ++i) {
    if (v < kInfiniteValuation && static_cast<i64>(i) * v >= full) break;
    if (v >= kInfiniteValuation) break;
    pw.push_back(pw.back() * x);
  }
  return pw;
}

}  // namespace

FieldElement eval_series(const ModSeries1& g, const FieldElement& x) {
  const FieldTower& T = x.tower();
  const int v = x.valuation();
  check_tail(g.D(), v, T);
  const int full = T.e() * T.precision().digits();
  auto pw = powers(x, g.D(), v, full);
  FieldElement acc = T.zero();
  for (int n = 1; n < static_cast<int>(pw.size()); ++n)
    if (g[n] != 0) acc += pw[n].scaled(g[n]);
  return acc;
}

FieldElement eval_series(const ModSeries2& F, const FieldElement& x, const FieldElement& y) {
  if (x.tower_ptr() != y.tower_ptr()) fail(ErrorCode::TowerMismatch, "points in different towers");
  const FieldTower& T = x.tower();
  const int vx = x.valuation(), vy = y.valuation();
  check_tail(F.D(), std::min(vx, vy), T);
  const int full = T.e() * T.precision().digits();
  auto px = powers(x, F.D(), vx, full), py = powers(y, F.D(), vy, full);
  std::vector<FieldElement> rows(py.size(), T.zero());
  std::vector<bool> used(py.size(), false);
  for (const auto& t : F.terms()) {
    if (t.i >= static_cast<int>(px.size()) || t.j >= static_cast<int>(py.size())) continue;
    rows[t.j] += px[t.i].scaled(t.c);
    used[t.j] = true;
  }
  FieldElement acc = T.zero();
  for (size_t j = 0; j < rows.size(); ++j)
    if (used[j]) acc += j == 0 ? rows[j] : rows[j] * py[j];
  return acc;
}

}  // namespace fgm
