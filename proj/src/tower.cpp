#include "fgm/tower.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>

namespace fgm {

namespace {

bool all_zero(const u64* a, int n) {
  for (int i = 0; i < n; ++i)
    if (a[i] != 0) return false;
  return true;
}

int ceil_div(i64 a, i64 b) {
  if (b < 0) a = -a, b = -b;
  return static_cast<int>(a >= 0 ? (a + b - 1) / b : -((-a) / b));
}

thread_local std::vector<u64> g_scratch;

}  // namespace

StepSpec StepSpec::eisenstein_int(const std::vector<i64>& c) {
  std::vector<std::vector<i64>> coeffs;
  for (i64 v : c) coeffs.push_back({v});
  return eisenstein(std::move(coeffs));
}

// ---------------------------------------------------------------------------
// FieldTower

FieldTower::FieldTower(u64 p, Precision prec) : prec_(prec), ring_(p, prec.digits()) {
  if (prec.N < 4) fail(ErrorCode::PrecisionTooLow, "N must be at least 4");
  if (prec.guard < 0) fail(ErrorCode::PrecisionTooLow, "guard must be non-negative");
}

TowerPtr FieldTower::base(u64 p, Precision prec) {
  auto t = std::shared_ptr<FieldTower>(new FieldTower(p, prec));
  t->finalize();
  return t;
}

TowerPtr FieldTower::build(u64 p, const std::vector<StepSpec>& steps, Precision prec) {
  TowerPtr t = base(p, prec);
  for (const auto& s : steps) t = t->extend(s);
  return t;
}

void FieldTower::append_level(StepKind kind, int d, std::vector<u64> poly, const StepSpec& spec) {
  levels_.push_back({kind, d, std::move(poly)});
  specs_.push_back(spec);
  int n = deg_.back();
  deg_.push_back(n * d);
  scratch_.push_back((2 * d - 1) * n + n + scratch_.back());
  if (kind == StepKind::Eisenstein)
    e_ *= d;
  else
    f_ *= d;
}

TowerPtr FieldTower::extend(const StepSpec& step) const {
  const int n = degree();
  auto reduce_coeff = [&](const std::vector<i64>& v) {
    if (static_cast<int>(v.size()) > n)
      fail(ErrorCode::ConfigParseError, "step coefficient has more coordinates than the level below");
    std::vector<u64> c(n, 0);
    for (size_t i = 0; i < v.size(); ++i) c[i] = ring_.from_signed(v[i]);
    return FieldElement(this, c);
  };

  std::vector<u64> poly;
  StepSpec resolved = step;
  if (step.kind == StepKind::Eisenstein) {
    int d = static_cast<int>(step.coeffs.size());
    if (d < 1) fail(ErrorCode::NotEisenstein, "empty Eisenstein polynomial");
    for (int j = 0; j < d; ++j) {
      FieldElement c = reduce_coeff(step.coeffs[j]);
      int v = c.valuation();
      if (j == 0 && v != 1) fail(ErrorCode::NotEisenstein, "constant term must have valuation exactly 1");
      if (j > 0 && v < 1) fail(ErrorCode::NotEisenstein, "non-leading coefficient is a unit");
      poly.insert(poly.end(), c.coords().begin(), c.coords().end());
    }
    resolved.degree = d;
  } else {
    ResidueField k(*this);
    int d = step.degree;
    if (!step.coeffs.empty()) d = static_cast<int>(step.coeffs.size());
    if (d < 1) fail(ErrorCode::NotIrreducibleResidue, "unramified degree must be positive");
    std::vector<u64> low(d);
    if (!step.coeffs.empty()) {
      for (int j = 0; j < d; ++j) {
        FieldElement c = reduce_coeff(step.coeffs[j]);
        low[j] = residue_index(residue_digits(c));
        poly.insert(poly.end(), c.coords().begin(), c.coords().end());
      }
      if (!residue_poly_irreducible(k, low))
        fail(ErrorCode::NotIrreducibleResidue, "reduction of the unramified step polynomial is reducible");
    } else {
      // Lexicographically smallest irreducible monic residue polynomial,
      // comparing (c_{d-1}, ..., c_0).
      const u64 q = q_;
      u64 total = 1;
      for (int j = 0; j < d; ++j) total *= q;
      bool found = false;
      for (u64 idx = 0; idx < total && !found; ++idx) {
        u64 t = idx;
        for (int j = 0; j < d; ++j) low[j] = t % q, t /= q;
        if (residue_poly_irreducible(k, low)) found = true;
      }
      if (!found) fail(ErrorCode::NotIrreducibleResidue, "no irreducible residue polynomial found");
      resolved.coeffs.clear();
      for (int j = 0; j < d; ++j) {
        FieldElement c = lift_residue(residue_from_index(low[j]));
        poly.insert(poly.end(), c.coords().begin(), c.coords().end());
        std::vector<i64> sc;
        for (u64 x : c.coords()) sc.push_back(static_cast<i64>(x));
        resolved.coeffs.push_back(sc);
      }
    }
    resolved.degree = d;
  }

  auto t = std::shared_ptr<FieldTower>(new FieldTower(*this));
  t->append_level(step.kind, resolved.degree, std::move(poly), resolved);
  t->finalize();
  return t;
}

void FieldTower::finalize() {
  // residue positions: basis monomials with every Eisenstein exponent zero
  std::vector<int> pos{0};
  for (size_t k = 0; k < levels_.size(); ++k) {
    if (levels_[k].kind == StepKind::Eisenstein) continue;
    std::vector<int> next;
    for (int j = 0; j < levels_[k].d; ++j)
      for (int x : pos) next.push_back(x + j * deg_[k]);
    pos = std::move(next);
  }
  std::sort(pos.begin(), pos.end());
  residue_pos_ = pos;
  q_ = 1;
  for (int i = 0; i < f_; ++i) q_ *= p();

  int last_eis = -1;
  for (size_t k = 0; k < levels_.size(); ++k)
    if (levels_[k].kind == StepKind::Eisenstein) last_eis = static_cast<int>(k) + 1;
  uniformizer_ = std::make_shared<FieldElement>(last_eis < 0 ? from_int(static_cast<i64>(p()))
                                                            : generator(last_eis));
  pi_pows_.clear();
  pi_pows_.push_back(one());
  for (int i = 1; i <= e_; ++i) pi_pows_.push_back(pi_pows_.back() * *uniformizer_);
  std::vector<u64> eps = pi_pows_.back().coords();
  for (auto& c : eps) {
    if (c % p() != 0) fail(ErrorCode::NotEisenstein, "pi^e is not divisible by p");
    c /= p();
  }
  eps_inv_ = std::make_shared<FieldElement>(FieldElement(this, eps).inverse());
}

bool FieldTower::has_prefix(const FieldTower& other) const {
  if (other.p() != p() || !(other.prec_ == prec_)) return false;
  if (other.levels_.size() > levels_.size()) return false;
  for (size_t k = 0; k < other.levels_.size(); ++k) {
    if (other.levels_[k].kind != levels_[k].kind || other.levels_[k].d != levels_[k].d) return false;
    if (other.levels_[k].poly != levels_[k].poly) return false;
  }
  return true;
}

std::string FieldTower::describe() const {
  std::ostringstream os;
  os << "Q_" << p();
  for (const auto& l : levels_) os << (l.kind == StepKind::Eisenstein ? " / E" : " / U") << l.d;
  os << " (e=" << e_ << ", f=" << f_ << ")";
  return os.str();
}

FieldElement FieldTower::zero() const { return FieldElement(this, std::vector<u64>(degree(), 0)); }

FieldElement FieldTower::one() const { return from_int(1); }

FieldElement FieldTower::from_int(i64 v) const {
  std::vector<u64> c(degree(), 0);
  c[0] = ring_.from_signed(v);
  return FieldElement(this, std::move(c));
}

FieldElement FieldTower::from_coords(const std::vector<u64>& c) const {
  if (static_cast<int>(c.size()) != degree()) fail(ErrorCode::TowerMismatch, "coordinate vector length");
  std::vector<u64> r(c);
  for (auto& x : r) x %= ring_.modulus();
  return FieldElement(this, std::move(r));
}

FieldElement FieldTower::from_signed_coords(const std::vector<i64>& c) const {
  if (static_cast<int>(c.size()) > degree()) fail(ErrorCode::TowerMismatch, "coordinate vector length");
  std::vector<u64> r(degree(), 0);
  for (size_t i = 0; i < c.size(); ++i) r[i] = ring_.from_signed(c[i]);
  return FieldElement(this, std::move(r));
}

FieldElement FieldTower::generator(int level) const {
  if (level < 1 || level > num_steps()) fail(ErrorCode::TowerMismatch, "no such level");
  std::vector<u64> c(degree(), 0);
  if (levels_[level - 1].d == 1) {
    // degree-one step: the root is -c_0
    for (int i = 0; i < deg_[level - 1]; ++i) c[i] = ring_.neg(levels_[level - 1].poly[i]);
  } else {
    c[deg_[level - 1]] = 1;
  }
  return FieldElement(this, std::move(c));
}

const FieldElement& FieldTower::uniformizer() const { return *uniformizer_; }

FieldElement FieldTower::embed(const FieldElement& x) const {
  if (x.tower_ptr() == this) return x;
  if (!has_prefix(x.tower())) fail(ErrorCode::TowerMismatch, "embedding from a non-prefix tower");
  std::vector<u64> c(degree(), 0);
  std::copy(x.coords().begin(), x.coords().end(), c.begin());
  return FieldElement(this, std::move(c));
}

FieldElement FieldTower::restrict_to(const FieldTower& sub, const FieldElement& x) const {
  if (!has_prefix(sub)) fail(ErrorCode::TowerMismatch, "restriction to a non-prefix tower");
  const int n = sub.degree();
  const u64 pn = ring_.power(prec_.N);
  for (int i = n; i < degree(); ++i)
    if (x.coords()[i] % pn != 0) fail(ErrorCode::TowerMismatch, "element does not lie in the subfield");
  return FieldElement(&sub, std::vector<u64>(x.coords().begin(), x.coords().begin() + n));
}

FieldElement FieldTower::lift_residue(const std::vector<int>& digits) const {
  if (static_cast<int>(digits.size()) != f_) fail(ErrorCode::TowerMismatch, "residue digit count");
  std::vector<u64> c(degree(), 0);
  for (int i = 0; i < f_; ++i) c[residue_pos_[i]] = static_cast<u64>(((digits[i] % static_cast<i64>(p())) + p()) % p());
  return FieldElement(this, std::move(c));
}

std::vector<int> FieldTower::residue_digits(const FieldElement& x) const {
  std::vector<int> d(f_);
  for (int i = 0; i < f_; ++i) d[i] = static_cast<int>(x.coords()[residue_pos_[i]] % p());
  return d;
}

u64 FieldTower::residue_index(const std::vector<int>& digits) const {
  u64 idx = 0;
  for (int i = f_ - 1; i >= 0; --i) idx = idx * p() + static_cast<u64>(digits[i]);
  return idx;
}

std::vector<int> FieldTower::residue_from_index(u64 idx) const {
  std::vector<int> d(f_);
  for (int i = 0; i < f_; ++i) d[i] = static_cast<int>(idx % p()), idx /= p();
  return d;
}

void FieldTower::mul_rec(int k, const u64* a, const u64* b, u64* out, u64* scratch) const {
  if (k == 0) {
    out[0] = ring_.mul(a[0], b[0]);
    return;
  }
  const Level& L = levels_[k - 1];
  const int n = deg_[k - 1], d = L.d;
  u64* prod = scratch;
  u64* tmp = prod + (2 * d - 1) * n;
  u64* sub = tmp + n;
  std::fill(prod, prod + (2 * d - 1) * n, 0);
  for (int i = 0; i < d; ++i) {
    if (all_zero(a + i * n, n)) continue;
    for (int j = 0; j < d; ++j) {
      if (all_zero(b + j * n, n)) continue;
      mul_rec(k - 1, a + i * n, b + j * n, tmp, sub);
      u64* dst = prod + (i + j) * n;
      for (int t = 0; t < n; ++t) dst[t] = ring_.add(dst[t], tmp[t]);
    }
  }
  for (int t = 2 * d - 2; t >= d; --t) {
    const u64* blk = prod + t * n;
    if (all_zero(blk, n)) continue;
    for (int j = 0; j < d; ++j) {
      const u64* c = L.poly.data() + j * n;
      if (all_zero(c, n)) continue;
      mul_rec(k - 1, blk, c, tmp, sub);
      u64* dst = prod + (t - d + j) * n;
      for (int s = 0; s < n; ++s) dst[s] = ring_.sub(dst[s], tmp[s]);
    }
  }
  std::copy(prod, prod + d * n, out);
}

void FieldTower::mul_raw(const u64* a, const u64* b, u64* out) const {
  const size_t need = static_cast<size_t>(scratch_.back()) + 1;
  if (g_scratch.size() < need) g_scratch.resize(need);
  mul_rec(num_steps(), a, b, out, g_scratch.data());
}

int FieldTower::val_rec(int k, const u64* a) const {
  if (k == 0) {
    int v = ring_.val(a[0], prec_.digits());
    return v >= prec_.digits() ? kInfiniteValuation : v;
  }
  const Level& L = levels_[k - 1];
  const int n = deg_[k - 1];
  int best = kInfiniteValuation;
  for (int j = 0; j < L.d; ++j) {
    int v = val_rec(k - 1, a + j * n);
    if (v >= kInfiniteValuation) continue;
    int w = L.kind == StepKind::Eisenstein ? v * L.d + j : v;
    best = std::min(best, w);
  }
  return best;
}

int FieldTower::valuation_raw(const u64* a) const { return val_rec(num_steps(), a); }

// ---------------------------------------------------------------------------
// FieldElement

void FieldElement::check_same(const FieldElement& o) const {
  if (tower_ != o.tower_) fail(ErrorCode::TowerMismatch, "operands live in different towers");
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  FieldElement r = *this;
  r += o;
  return r;
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  FieldElement r = *this;
  r -= o;
  return r;
}

FieldElement FieldElement::operator-() const {
  FieldElement r = *this;
  for (auto& x : r.c_) x = tower_->ring_.neg(x);
  return r;
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
  check_same(o);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] = tower_->ring_.add(c_[i], o.c_[i]);
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
  check_same(o);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] = tower_->ring_.sub(c_[i], o.c_[i]);
  return *this;
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  check_same(o);
  std::vector<u64> out(c_.size());
  tower_->mul_raw(c_.data(), o.c_.data(), out.data());
  return FieldElement(tower_, std::move(out));
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
  *this = *this * o;
  return *this;
}

FieldElement FieldElement::scaled(u64 s) const {
  FieldElement r = *this;
  s %= tower_->ring_.modulus();
  for (auto& x : r.c_) x = tower_->ring_.mul(x, s);
  return r;
}

FieldElement FieldElement::scaled_signed(i64 s) const { return scaled(tower_->ring_.from_signed(s)); }

FieldElement FieldElement::pow(u64 e) const {
  FieldElement r = tower_->one(), b = *this;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

int FieldElement::valuation() const {
  int v = tower_->valuation_raw(c_.data());
  return v >= tower_->e() * tower_->prec_.N ? kInfiniteValuation : v;
}

bool FieldElement::is_zero() const {
  const u64 pn = tower_->ring_.power(tower_->prec_.N);
  for (u64 x : c_)
    if (x % pn != 0) return false;
  return true;
}

FieldElement FieldElement::inverse() const {
  if (tower_->valuation_raw(c_.data()) != 0) fail(ErrorCode::DivisionBelowPrecision, "inverse of a non-unit");
  const u64 q = tower_->q_residue();
  FieldElement x = q >= 2 ? pow(q - 2) : tower_->one();
  const FieldElement two = tower_->from_int(2);
  for (int it = 0; it < 80; ++it) {
    FieldElement err = tower_->one() - *this * x;
    if (all_zero(err.c_.data(), static_cast<int>(err.c_.size()))) return x;
    x = x * (two - *this * x);
  }
  fail(ErrorCode::NonConvergence, "Newton inversion did not converge");
}

FieldElement FieldElement::divide_by_uniformizer(int v) const {
  if (v <= 0) return *this;
  const int e = tower_->e();
  const int full = tower_->valuation_raw(c_.data());
  if (full < v) fail(ErrorCode::DivisionBelowPrecision, "valuation below the requested divisor");
  const int k = ceil_div(v, e);
  if (k >= tower_->prec_.digits())
    fail(ErrorCode::GuardExhausted, "division by pi^" + std::to_string(v) + " exhausts the precision");
  FieldElement y = *this * tower_->pi_pows_[k * e - v];
  const u64 pk = tower_->ring_.power(k);
  for (auto& c : y.c_) {
    if (c % pk != 0) fail(ErrorCode::DivisionBelowPrecision, "coordinates not divisible by p^k");
    c /= pk;
  }
  return y * tower_->eps_inv_->pow(static_cast<u64>(k));
}

FieldElement FieldElement::divide(const FieldElement& b) const {
  check_same(b);
  const int vb = tower_->valuation_raw(b.c_.data());
  if (vb >= kInfiniteValuation) fail(ErrorCode::DivisionBelowPrecision, "division by zero at precision");
  const int va = tower_->valuation_raw(c_.data());
  if (va < vb) fail(ErrorCode::DivisionBelowPrecision, "quotient is not integral");
  if (va >= kInfiniteValuation) return tower_->zero();
  return divide_by_uniformizer(vb) * b.divide_by_uniformizer(vb).inverse();
}

std::vector<u64> FieldElement::key() const {
  const u64 pn = tower_->ring_.power(tower_->prec_.N);
  std::vector<u64> k(c_);
  for (auto& x : k) x %= pn;
  return k;
}

std::string FieldElement::to_string() const {
  std::ostringstream os;
  const auto& ring = tower_->ring_;
  const u64 pn = ring.power(tower_->prec_.N);
  os << "[";
  for (size_t i = 0; i < c_.size(); ++i) {
    u64 x = c_[i] % pn;
    i64 s = x > pn / 2 ? -static_cast<i64>(pn - x) : static_cast<i64>(x);
    os << (i ? ", " : "") << s;
  }
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------------------
// Residue fields and residue polynomials

ResidueField::ResidueField(const FieldTower& t) : t_(t), q_(t.q_residue()) {
  std::vector<int> one(t.f(), 0);
  one[0] = 1;
  one_ = t.residue_index(one);
  if (q_ <= 256) {
    std::vector<FieldElement> lifts;
    for (u64 i = 0; i < q_; ++i) lifts.push_back(t.lift_residue(t.residue_from_index(i)));
    mul_table_.resize(q_ * q_);
    for (u64 i = 0; i < q_; ++i)
      for (u64 j = 0; j < q_; ++j) mul_table_[i * q_ + j] = t.residue_index(t.residue_digits(lifts[i] * lifts[j]));
  }
}

u64 ResidueField::add(u64 a, u64 b) const {
  const u64 p = t_.p();
  u64 r = 0, scale = 1;
  for (int i = 0; i < t_.f(); ++i) {
    r += ((a % p + b % p) % p) * scale;
    a /= p, b /= p, scale *= p;
  }
  return r;
}

u64 ResidueField::sub(u64 a, u64 b) const {
  const u64 p = t_.p();
  u64 r = 0, scale = 1;
  for (int i = 0; i < t_.f(); ++i) {
    r += ((a % p + p - b % p) % p) * scale;
    a /= p, b /= p, scale *= p;
  }
  return r;
}

u64 ResidueField::mul(u64 a, u64 b) const {
  if (!mul_table_.empty()) return mul_table_[a * q_ + b];
  FieldElement x = t_.lift_residue(t_.residue_from_index(a)) * t_.lift_residue(t_.residue_from_index(b));
  return t_.residue_index(t_.residue_digits(x));
}

namespace {

// remainder of the monic polynomial a (full coefficient list, leading 1)
// modulo the monic polynomial b
std::vector<u64> poly_rem(const ResidueField& k, std::vector<u64> a, const std::vector<u64>& b) {
  const int db = static_cast<int>(b.size()) - 1;
  for (int i = static_cast<int>(a.size()) - 1; i >= db; --i) {
    u64 c = a[i];
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) a[i - db + j] = k.sub(a[i - db + j], k.mul(c, b[j]));
  }
  a.resize(db);
  return a;
}

}  // namespace

bool residue_poly_irreducible(const ResidueField& k, const std::vector<u64>& low) {
  const int d = static_cast<int>(low.size());
  if (d == 1) return true;
  if (low[0] == 0) return false;
  std::vector<u64> a(low);
  a.push_back(k.one());
  const u64 q = k.size();
  for (int m = 1; m <= d / 2; ++m) {
    u64 total = 1;
    for (int j = 0; j < m; ++j) total *= q;
    for (u64 idx = 0; idx < total; ++idx) {
      std::vector<u64> b(m + 1);
      u64 t = idx;
      for (int j = 0; j < m; ++j) b[j] = t % q, t /= q;
      b[m] = k.one();
      auto r = poly_rem(k, a, b);
      if (std::all_of(r.begin(), r.end(), [](u64 x) { return x == 0; })) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Galois action

GaloisData::GaloisData(TowerPtr L, TowerPtr M) : L_(std::move(L)), M_(std::move(M)) {
  const FieldTower& m = *M_;
  if (!m.has_prefix(*L_)) fail(ErrorCode::NotUnramifiedOverL, "M is not built on top of L");
  const int lvl_L = L_->num_steps();
  order_ = 1;
  for (int k = lvl_L; k < m.num_steps(); ++k) {
    if (m.step_kind(k) != StepKind::Unramified) fail(ErrorCode::NotUnramifiedOverL, "M/L has an Eisenstein step");
    order_ *= m.step_degree(k);
  }
  {
    int o = order_;
    while (o % static_cast<int>(m.p()) == 0) o /= static_cast<int>(m.p());
    if (o != 1) fail(ErrorCode::NotUnramifiedOverL, "[M:L] is not a power of p");
  }
  const int n = m.degree();
  const u64 ql = L_->q_residue();
  const auto& ring = m.ring();

  // images of the generators adjoined above L
  std::vector<FieldElement> images(m.num_steps() + 1);
  // sigma applied to an element supported on the first `level` levels
  std::function<FieldElement(int, const std::vector<u64>&)> apply_partial =
      [&](int level, const std::vector<u64>& c) -> FieldElement {
    if (level <= lvl_L) {
      std::vector<u64> full(n, 0);
      std::copy(c.begin(), c.begin() + m.level_degree(level), full.begin());
      return FieldElement(&m, full);
    }
    const int nb = m.level_degree(level - 1);
    const int d = m.step_degree(level - 1);
    FieldElement acc = m.zero(), gp = m.one();
    for (int j = 0; j < d; ++j) {
      std::vector<u64> blk(c.begin() + j * nb, c.begin() + (j + 1) * nb);
      acc += apply_partial(level - 1, blk) * gp;
      gp *= images[level];
    }
    return acc;
  };

  for (int level = lvl_L + 1; level <= m.num_steps(); ++level) {
    const int nb = m.level_degree(level - 1);
    const int d = m.step_degree(level - 1);
    std::vector<FieldElement> poly;  // sigma(m_k), monic, low coefficients
    const auto& spec = m.specs()[level - 1];
    for (int j = 0; j < d; ++j) {
      std::vector<u64> blk(nb, 0);
      for (size_t t = 0; t < spec.coeffs[j].size() && static_cast<int>(t) < nb; ++t)
        blk[t] = ring.from_signed(spec.coeffs[j][t]);
      poly.push_back(apply_partial(level - 1, blk));
    }
    poly.push_back(m.one());
    std::vector<FieldElement> deriv;
    for (int j = 1; j <= d; ++j) deriv.push_back(poly[j].scaled(static_cast<u64>(j)));
    FieldElement x = m.generator(level).pow(ql);
    bool done = false;
    for (int it = 0; it < 80 && !done; ++it) {
      FieldElement px = poly_eval(poly, x);
      bool exact = std::all_of(px.coords().begin(), px.coords().end(), [](u64 c) { return c == 0; });
      if (exact) {
        done = true;
        break;
      }
      x -= px * poly_eval(deriv, x).inverse();
    }
    if (!done) fail(ErrorCode::NonConvergence, "Frobenius lift did not converge");
    images[level] = x;
  }

  // matrix of sigma on the power basis: basis vector i = (lower monomial) * (upper monomial)
  std::vector<u64> S(static_cast<size_t>(n) * n, 0);
  const int nl = L_->degree();
  for (int i = 0; i < n; ++i) {
    int low = i % nl;
    int rest = i / nl;
    std::vector<u64> lc(n, 0);
    lc[low] = 1;
    FieldElement img(&m, lc);
    for (int level = lvl_L + 1; level <= m.num_steps(); ++level) {
      int d = m.step_degree(level - 1);
      int j = rest % d;
      rest /= d;
      img *= images[level].pow(static_cast<u64>(j));
    }
    for (int r = 0; r < n; ++r) S[static_cast<size_t>(r) * n + i] = img.coords()[r];
  }
  std::vector<u64> I(static_cast<size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) I[static_cast<size_t>(i) * n + i] = 1;
  mats_.push_back(I);
  for (int k = 1; k < order_; ++k) {
    const auto& prev = mats_.back();
    std::vector<u64> nx(static_cast<size_t>(n) * n, 0);
    for (int r = 0; r < n; ++r)
      for (int t = 0; t < n; ++t) {
        u64 a = S[static_cast<size_t>(r) * n + t];
        if (!a) continue;
        for (int c = 0; c < n; ++c)
          nx[static_cast<size_t>(r) * n + c] =
              ring.add(nx[static_cast<size_t>(r) * n + c], ring.mul(a, prev[static_cast<size_t>(t) * n + c]));
      }
    mats_.push_back(std::move(nx));
  }
}

FieldElement GaloisData::apply(const FieldElement& x, i64 k) const {
  if (x.tower_ptr() != M_.get()) fail(ErrorCode::TowerMismatch, "Galois action on an element outside M");
  i64 kk = ((k % order_) + order_) % order_;
  if (kk == 0) return x;
  const auto& A = mats_[kk];
  const int n = M_->degree();
  const auto& ring = M_->ring();
  std::vector<u64> out(n, 0);
  for (int r = 0; r < n; ++r) {
    u128 acc = 0;
    for (int c = 0; c < n; ++c) acc = (acc + static_cast<u128>(A[static_cast<size_t>(r) * n + c]) * x.coords()[c]) % ring.modulus();
    out[r] = static_cast<u64>(acc);
  }
  return FieldElement(M_.get(), std::move(out));
}

FieldElement GaloisData::field_norm(const FieldElement& x) const {
  FieldElement r = x;
  for (int k = 1; k < order_; ++k) r *= apply(x, k);
  return r;
}

FieldElement GaloisData::field_trace(const FieldElement& x) const {
  FieldElement r = x;
  for (int k = 1; k < order_; ++k) r += apply(x, k);
  return r;
}

bool GaloisData::fixed(const FieldElement& x) const { return apply(x, 1).equals(x); }

// ---------------------------------------------------------------------------
// Polynomials and roots

FieldElement poly_eval(const std::vector<FieldElement>& poly, const FieldElement& x) {
  FieldElement acc = x.tower().zero();
  for (size_t i = poly.size(); i-- > 0;) acc = acc * x + poly[i];
  return acc;
}

namespace {

class RootSearch {
 public:
  RootSearch(const std::vector<FieldElement>& poly, const FieldTower& T) : poly_(poly), T_(T) {
    full_ = T.e() * T.precision().digits();
    for (u64 i = 0; i < T.q_residue(); ++i) lifts_.push_back(T.lift_residue(T.residue_from_index(i)));
    pi_pows_.push_back(T.one());
    for (int j = 1; j <= full_; ++j) pi_pows_.push_back(pi_pows_.back() * T.uniformizer());
    for (size_t j = 1; j < poly_.size(); ++j) deriv_.push_back(poly_[j].scaled(j));
  }

  int val(const FieldElement& x) const { return T_.valuation_raw(x.coords().data()); }

  std::vector<FieldElement> taylor(const FieldElement& y0) const {
    std::vector<FieldElement> c(poly_);
    const int d = static_cast<int>(c.size()) - 1;
    std::vector<FieldElement> out;
    for (int i = 0; i <= d; ++i) {
      // synthetic division of c (degree d - i) by (x - y0)
      for (int k = d - 1; k >= i; --k) c[k] += c[k + 1] * y0;
      out.push_back(c[i]);
    }
    return out;
  }

  void dfs(const FieldElement& y0, int j) {
    if (j >= full_) fail(ErrorCode::PrecisionTooLowToSeparate, "candidate roots agree through the working precision");
    auto c = taylor(y0);
    const int d = static_cast<int>(c.size()) - 1;
    std::vector<int> v(d + 1);
    for (int i = 0; i <= d; ++i) v[i] = val(c[i]);
    auto term = [&](int i) { return v[i] >= kInfiniteValuation ? kInfiniteValuation : v[i] + i * j; };
    int m1 = kInfiniteValuation;
    for (int i = 1; i <= d; ++i) m1 = std::min(m1, term(i));
    if (v[0] < kInfiniteValuation && v[0] < m1) return;
    if (m1 >= kInfiniteValuation && v[0] >= kInfiniteValuation)
      fail(ErrorCode::PrecisionTooLowToSeparate, "polynomial vanishes identically at precision");
    bool unique = d >= 1 && v[1] < kInfiniteValuation && term(1) <= v[0];
    for (int i = 2; i <= d && unique; ++i)
      if (term(i) <= term(1)) unique = false;
    if (unique && j > v[1]) {
      roots_.push_back(newton(y0));
      return;
    }
    for (const auto& r : lifts_) dfs(y0 + r * pi_pows_[j], j + 1);
  }

  FieldElement newton(FieldElement y) const {
    const int iters = 4;
    int bits = 1;
    while ((1 << bits) < full_) ++bits;
    for (int it = 0; it < bits + iters; ++it) {
      FieldElement py = poly_eval(poly_, y);
      if (val(py) >= kInfiniteValuation) break;
      y -= py.divide(poly_eval(deriv_, y));
    }
    if (!poly_eval(poly_, y).is_zero()) fail(ErrorCode::NonConvergence, "Newton refinement of a root failed");
    return y;
  }

  std::vector<FieldElement> roots_;

 private:
  const std::vector<FieldElement>& poly_;
  const FieldTower& T_;
  int full_;
  std::vector<FieldElement> lifts_, pi_pows_, deriv_;
};

}  // namespace

std::vector<FieldElement> roots_in_field(const std::vector<FieldElement>& poly_in, const FieldTower& T,
                                         RationalValuation vmin) {
  std::vector<FieldElement> poly;
  for (const auto& c : poly_in) poly.push_back(T.embed(c));
  while (!poly.empty() && poly.back().is_zero()) poly.pop_back();
  if (poly.empty()) fail(ErrorCode::PrecisionTooLowToSeparate, "zero polynomial");
  if (poly.size() == 1) return {};
  RootSearch rs(poly, T);
  int j0 = std::max(0, ceil_div(vmin.num, vmin.den));
  rs.dfs(T.zero(), j0);
  return rs.roots_;
}

}  // namespace fgm
