#include "fgm/honda.hpp"

#include <set>
#include <sstream>

namespace fgm {

std::vector<mpq_class> HondaType::as_twisted() const {
  std::vector<mpq_class> u(a.size() < 1 ? 1 : a.size());
  u[0] = pi;
  for (size_t i = 1; i < a.size(); ++i) u[i] = a[i];
  return u;
}

std::string HondaType::to_string() const {
  std::ostringstream os;
  os << pi.get_str();
  for (size_t i = 1; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    os << (a[i] < 0 ? " - " : " + ");
    mpq_class m = abs(a[i]);
    if (m != 1) os << m.get_str();
    os << "T";
    if (i > 1) os << "^" << i;
  }
  return os.str();
}

void validate_type(const HondaType& u) {
  if (!is_prime(u.p)) fail(ErrorCode::ConfigParseError, "p must be prime");
  if (padic_val(u.pi, u.p) != 1) fail(ErrorCode::PreconditionFailed, "pi must have valuation 1");
  for (size_t i = 1; i < u.a.size(); ++i)
    if (u.a[i] != 0 && padic_val(u.a[i], u.p) < 0) fail(ErrorCode::PreconditionFailed, "type coefficients must be integral");
}

int height(const HondaType& u) {
  for (size_t i = 1; i < u.a.size(); ++i)
    if (u.a[i] != 0 && padic_val(u.a[i], u.p) == 0) return static_cast<int>(i);
  fail(ErrorCode::InfiniteHeight, "no unit coefficient in the type " + u.to_string());
}

QSeries1 logarithm_from_type(const HondaType& u, int D) {
  validate_type(u);
  height(u);
  QSeries1 f(D);
  const u64 q = u.q();
  for (int n = 1; n <= D; ++n) {
    mpq_class s = n == 1 ? 1 : 0;
    u64 step = 1;
    for (size_t i = 1; i < u.a.size(); ++i) {
      step *= q;
      if (step > static_cast<u64>(n)) break;
      if (u.a[i] != 0 && n % step == 0) s -= u.a[i] * f[static_cast<int>(n / step)] / u.pi;
    }
    f[n] = s;
  }
  return f;
}

bool verify_type(const QSeries1& f, const HondaType& u) {
  QSeries1 r = twisted_apply(u.as_twisted(), u.q(), f);
  for (int n = 1; n <= r.D(); ++n)
    if (r[n] != 0 && padic_val(r[n], u.p) < 1) return false;
  return true;
}

QSeries1 multiplicative_log(int D) {
  QSeries1 s(D);
  for (int n = 1; n <= D; ++n) s[n] = mpq_class(n % 2 ? 1 : -1, n);
  return s;
}

QSeries1 log_from_endomorphism(const QSeries1& e) {
  const int D = e.D();
  const mpq_class pi = e[1];
  if (pi == 0) fail(ErrorCode::NonUnitLinearTerm, "endomorphism has no linear term");
  // powers of e, and g_k (pi - pi^k) = sum_{j<k} g_j [e^j]_k
  std::vector<QSeries1> pw(D + 1, QSeries1(D));
  pw[1] = e;
  for (int k = 2; k <= D; ++k) pw[k] = pw[k - 1] * e;
  QSeries1 g(D);
  g[1] = 1;
  mpq_class pik = pi;
  for (int k = 2; k <= D; ++k) {
    pik *= pi;
    mpq_class s = 0;
    for (int j = 1; j < k; ++j)
      if (g[j] != 0) s += g[j] * pw[j][k];
    g[k] = s / (pi - pik);
  }
  return g;
}

QSeries2 group_law(const QSeries1& f, u64 p) {
  QSeries1 finv = series_reversion(f, p);
  QSeries2 F = series_compose(finv, QSeries2::split_sum(f));
  if (!F.integral(p)) fail(ErrorCode::NonIntegralLaw, "group law has non-integral coefficients");
  return F;
}

// ---------------------------------------------------------------------------

FormalGroup::FormalGroup(const HondaType& u, QSeries1 f, Precision prec)
    : u_(u), h_(0), prec_(prec), ring_(u.p, prec.digits()), f_(std::move(f)) {
  validate_type(u_);
  h_ = fgm::height(u_);
  if (f_.D() < 2 || f_[1] != 1) fail(ErrorCode::PreconditionFailed, "logarithm must start with x");
  if (!verify_type(f_, u_)) fail(ErrorCode::Mismatch, "logarithm is not of type " + u_.to_string());
  finv_ = series_reversion(f_, u_.p);
  law_ = group_law(f_, u_.p);
  law_mod_ = law_.reduce(ring_);
}

std::shared_ptr<FormalGroup> FormalGroup::from_type(const HondaType& u, int D, Precision prec) {
  return std::shared_ptr<FormalGroup>(new FormalGroup(u, logarithm_from_type(u, D), prec));
}

std::shared_ptr<FormalGroup> FormalGroup::from_logarithm(const HondaType& u, const QSeries1& f, Precision prec) {
  return std::shared_ptr<FormalGroup>(new FormalGroup(u, f, prec));
}

const FormalGroup::Endo& FormalGroup::endo_entry(const mpq_class& a) const {
  if (a != 0 && padic_val(a, u_.p) < 0) fail(ErrorCode::NonIntegralEndo, "scalar is not in Z_p");
  const std::string key = a.get_str();
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = endos_.find(key);
    if (it != endos_.end()) return *it->second;
  }
  auto e = std::make_unique<Endo>();
  e->exact = series_compose(finv_, f_.scaled(a));
  if (!e->exact.integral(u_.p)) fail(ErrorCode::NonIntegralEndo, "[" + key + "]_F is not integral");
  e->reduced = e->exact.reduce(ring_);
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = endos_.emplace(key, std::move(e));
  return *it->second;
}

const QSeries1& FormalGroup::endo_exact(const mpq_class& a) const { return endo_entry(a).exact; }

const ModSeries1& FormalGroup::endo(const mpq_class& a) const { return endo_entry(a).reduced; }

const ModSeries1& FormalGroup::pi_power(int n) const {
  mpq_class a = 1;
  for (int i = 0; i < n; ++i) a *= u_.pi;
  return endo(a);
}

namespace {

// product of two truncated polynomials, keeping degrees <= maxdeg
std::vector<u64> mulmod(const ResidueRing& ring, const std::vector<u64>& a, const std::vector<u64>& b, int maxdeg) {
  std::vector<u64> r(maxdeg + 1, 0);
  for (size_t i = 0; i < a.size() && static_cast<int>(i) <= maxdeg; ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size() && static_cast<int>(i + j) <= maxdeg; ++j)
      if (b[j]) r[i + j] = ring.add(r[i + j], ring.mul(a[i], b[j]));
  }
  return r;
}

}  // namespace

std::vector<u64> FormalGroup::kernel_polynomial(int n) const {
  u64 expect = 1;
  for (int i = 0; i < n * h_; ++i) expect *= q();
  const int D = this->D();
  if (expect > static_cast<u64>(D)) fail(ErrorCode::TruncationTooShort, "truncation degree below q^(nh)");
  const ModSeries1& g = pi_power(n);
  int d = -1;
  for (int i = 1; i <= D; ++i)
    if (g[i] % p() != 0) {
      d = i;
      break;
    }
  if (d < 0) fail(ErrorCode::TruncationTooShort, "[pi^n]_F has no unit coefficient below the truncation");
  if (static_cast<u64>(d) != expect) fail(ErrorCode::Mismatch, "Weierstrass degree differs from q^(nh)");

  std::vector<u64> A(g.coeffs().begin(), g.coeffs().begin() + d);
  std::vector<u64> B(g.coeffs().begin() + d, g.coeffs().end());
  const int m = D - d;
  std::vector<u64> Binv(m + 1, 0);
  Binv[0] = ring_.inv(B[0]);
  for (int k = 1; k <= m; ++k) {
    u64 s = 0;
    for (int j = 1; j <= k; ++j) s = ring_.add(s, ring_.mul(B[j], Binv[k - j]));
    Binv[k] = ring_.mul(ring_.neg(s), Binv[0]);
  }
  std::vector<u64> C = mulmod(ring_, Binv, A, D);

  std::vector<u64> h(D + 1, 0), r(d, 0);
  h[d] = 1;
  for (int it = 0; it <= prec_.digits() + 2; ++it) {
    for (int i = 0; i < d; ++i) r[i] = ring_.add(r[i], h[i]);
    std::vector<u64> H(h.begin() + d, h.end());
    if (std::all_of(H.begin(), H.end(), [](u64 x) { return x == 0; })) break;
    h = mulmod(ring_, H, C, D);
    for (auto& x : h) x = ring_.neg(x);
  }
  std::vector<u64> P(d + 1);
  for (int i = 0; i < d; ++i) {
    P[i] = ring_.neg(r[i]);
    if (P[i] % p() != 0) fail(ErrorCode::Mismatch, "kernel polynomial is not distinguished");
  }
  P[d] = 1;
  return P;
}

// ---------------------------------------------------------------------------

std::vector<FieldElement> torsion_points(const FormalGroup& F, int n, const FieldTower& T) {
  if (T.p() != F.p() || !(T.precision() == F.precision()))
    fail(ErrorCode::FieldMismatch, "tower and group use different p or precision");
  auto P = F.kernel_polynomial(n);
  std::vector<FieldElement> poly;
  for (u64 c : P) {
    std::vector<u64> v(T.degree(), 0);
    v[0] = c;
    poly.push_back(T.from_coords(v));
  }
  return roots_in_field(poly, T, {1, 1});
}

namespace {

using Key = std::vector<u64>;

std::set<Key> span_of(const FormalGroup& F, const std::vector<FieldElement>& gens, const FieldTower& T) {
  std::set<Key> seen{T.zero().key()};
  std::vector<FieldElement> all{T.zero()}, frontier{T.zero()};
  while (!frontier.empty()) {
    std::vector<FieldElement> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        FieldElement y = eval_series(F.law(), x, g);
        if (seen.insert(y.key()).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return seen;
}

}  // namespace

TorsionModule torsion_module(const FormalGroup& F, int n, const FieldTower& T) {
  TorsionModule W;
  W.level = n;
  W.points = torsion_points(F, n, T);
  u64 full = 1;
  for (int i = 0; i < n * F.height(); ++i) full *= F.q();
  W.complete = W.points.size() == full;

  // kernel counts give the invariant factors
  std::vector<u64> count(n + 1, 1);
  for (int k = 1; k <= n; ++k) {
    u64 c = 0;
    for (const auto& x : W.points)
      if (eval_series(F.pi_power(k), x).is_zero()) ++c;
    count[k] = c;
  }
  std::vector<int> rank(n + 2, 0);
  for (int k = 1; k <= n; ++k) {
    u64 ratio = count[k] / count[k - 1];
    int r = 0;
    while (ratio > 1) ratio /= F.q(), ++r;
    rank[k] = r;
  }
  for (int k = n; k >= 1; --k)
    for (int i = 0; i < rank[k] - rank[k + 1]; ++i) W.invariants.push_back(k);

  if (W.complete) {
    std::vector<FieldElement> basis;
    size_t size = 1;
    u64 qn = 1;
    for (int i = 0; i < n; ++i) qn *= F.q();
    for (int i = 0; i < F.height(); ++i) {
      bool found = false;
      for (const auto& z : W.points) {
        if (n > 1 && eval_series(F.pi_power(n - 1), z).is_zero()) continue;
        if (n == 1 && z.is_zero()) continue;
        auto trial = basis;
        trial.push_back(z);
        size_t s = span_of(F, trial, T).size();
        if (s == size * qn) {
          basis = std::move(trial);
          size = s;
          found = true;
          break;
        }
      }
      if (!found) fail(ErrorCode::Mismatch, "no torsion basis found");
    }
    W.basis = std::move(basis);
  }
  return W;
}

}  // namespace fgm
