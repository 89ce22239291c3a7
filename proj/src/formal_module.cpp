#include "fgm/formal_module.hpp"

#include <functional>

namespace fgm {

GroupRingElement GroupRingElement::one(int order) { return sigma(order, 0); }

GroupRingElement GroupRingElement::sigma(int order, int k) {
  GroupRingElement g{std::vector<i64>(order, 0)};
  g.c[((k % order) + order) % order] = 1;
  return g;
}

GroupRingElement GroupRingElement::norm_element(int order) { return {std::vector<i64>(order, 1)}; }

GroupRingElement GroupRingElement::operator*(const GroupRingElement& o) const {
  const size_t n = c.size();
  GroupRingElement r{std::vector<i64>(n, 0)};
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) r.c[(i + j) % n] += c[i] * o.c[j];
  return r;
}

GroupRingElement GroupRingElement::operator+(const GroupRingElement& o) const {
  GroupRingElement r = *this;
  for (size_t i = 0; i < c.size(); ++i) r.c[i] += o.c[i];
  return r;
}

GroupRingElement GroupRingElement::operator-(const GroupRingElement& o) const {
  GroupRingElement r = *this;
  for (size_t i = 0; i < c.size(); ++i) r.c[i] -= o.c[i];
  return r;
}

// ---------------------------------------------------------------------------

namespace {

// F_p-matrix of an additive map on k_M given by its action on lifts
Matrix residue_map(const FieldTower& M, const std::function<FieldElement(const FieldElement&)>& f) {
  const int fm = M.f();
  Matrix A(fm, std::vector<u64>(fm, 0));
  for (int c = 0; c < fm; ++c) {
    std::vector<int> d(fm, 0);
    d[c] = 1;
    auto img = M.residue_digits(f(M.lift_residue(d)));
    for (int r = 0; r < fm; ++r) A[r][c] = static_cast<u64>(img[r]);
  }
  return A;
}

}  // namespace

FormalModule::FormalModule(GroupPtr F, TowerPtr L, TowerPtr M)
    : F_(std::move(F)), L_(std::move(L)), M_(std::move(M)), G_(L_, M_) {
  if (!(M_->precision() == F_->precision()) || M_->p() != F_->p())
    fail(ErrorCode::FieldMismatch, "group and towers use different p or precision");
  trace_map_ = residue_map(*M_, [&](const FieldElement& t) { return G_.field_trace(t); });
  cob_map_ = residue_map(*M_, [&](const FieldElement& t) { return G_.apply(t) - t; });

  // powers of [pi]_F over Z/p^P, truncated at D
  const auto& ring = F_->ring();
  const int D = F_->D();
  const ModSeries1& e = F_->pi_power(1);
  std::vector<u64> one(D + 1, 0);
  pi_powers_.push_back(ModSeries1(D, one));
  std::vector<u64> cur = e.coeffs();
  pi_powers_.push_back(ModSeries1(D, cur));
  for (int i = 2; i <= D; ++i) {
    std::vector<u64> nx(D + 1, 0);
    for (int a = 1; a <= D; ++a) {
      if (!cur[a]) continue;
      for (int b = 1; a + b <= D; ++b)
        if (e[b]) nx[a + b] = ring.add(nx[a + b], ring.mul(cur[a], e[b]));
    }
    cur = std::move(nx);
    pi_powers_.push_back(ModSeries1(D, cur));
  }
}

FieldElement FormalModule::add(const FieldElement& x, const FieldElement& y) const {
  if (x.is_zero()) return y;
  if (y.is_zero()) return x;
  return eval_series(F_->law(), x, y);
}

FieldElement FormalModule::neg(const FieldElement& x) const { return eval_series(F_->iota(), x); }

FieldElement FormalModule::sub(const FieldElement& x, const FieldElement& y) const { return add(x, neg(y)); }

FieldElement FormalModule::scalar(i64 a, const FieldElement& x) const {
  if (a >= -64 && a <= 64) return eval_series(F_->endo(mpq_class(static_cast<long>(a))), x);
  FieldElement base = a < 0 ? neg(x) : x;
  u64 n = a < 0 ? static_cast<u64>(-(a + 1)) + 1 : static_cast<u64>(a);
  FieldElement acc = x.tower().zero();
  while (n) {
    if (n & 1) acc = add(acc, base);
    n >>= 1;
    if (n) base = add(base, base);
  }
  return acc;
}

FieldElement FormalModule::scalar(const mpq_class& a, const FieldElement& x) const {
  return eval_series(F_->endo(a), x);
}

FieldElement FormalModule::pi_mul(const FieldElement& x, int k) const { return eval_series(F_->pi_power(k), x); }

FieldElement FormalModule::sigma(const FieldElement& x, i64 k) const { return G_.apply(x, k); }

FieldElement FormalModule::act(const GroupRingElement& g, const FieldElement& x) const {
  FieldElement acc = M_->zero();
  for (size_t k = 0; k < g.c.size(); ++k) {
    if (g.c[k] == 0) continue;
    acc = add(acc, scalar(g.c[k], sigma(x, static_cast<i64>(k))));
  }
  return acc;
}

FieldElement FormalModule::norm(const FieldElement& x) const {
  FieldElement acc = x;
  for (int k = 1; k < order(); ++k) acc = add(acc, sigma(x, k));
  return acc;
}

FieldElement FormalModule::coboundary(const FieldElement& x) const { return sub(sigma(x), x); }

FieldElement FormalModule::graded_solve(const FieldElement& target, bool norm_equation) const {
  const FieldTower& m = *M_;
  const int cap = m.e() * m.precision().N;
  const Matrix& A = norm_equation ? trace_map_ : cob_map_;
  FieldElement sol = m.zero(), rest = target;
  int last = 0;
  for (int step = 0; step <= cap; ++step) {
    int v = rest.valuation();
    if (v >= kInfiniteValuation) return sol;
    if (v <= last && step > 0) fail(ErrorCode::NonConvergence, "valuation did not increase");
    if (v < 1) fail(ErrorCode::PreconditionFailed, "target is not in the maximal ideal");
    last = v;
    FieldElement lead = rest.divide_by_uniformizer(v);
    auto digits = m.residue_digits(lead);
    std::vector<u64> b(digits.begin(), digits.end());
    auto t = solve_mod_p(A, b, m.p());
    if (!t) fail(norm_equation ? ErrorCode::NonConvergence : ErrorCode::NormNotZero, "residue equation has no solution");
    std::vector<int> td(t->begin(), t->end());
    FieldElement delta = m.lift_residue(td) * m.uniformizer().pow(static_cast<u64>(v));
    sol = add(sol, delta);
    rest = sub(rest, norm_equation ? norm(delta) : coboundary(delta));
  }
  fail(ErrorCode::NonConvergence, "solver exceeded its iteration cap");
}

FieldElement FormalModule::solve_norm(const FieldElement& a_in) const {
  FieldElement a = M_->embed(a_in);
  if (order() == 1) return a;
  if (!G_.fixed(a)) fail(ErrorCode::PreconditionFailed, "norm target must lie in L");
  FieldElement xi = graded_solve(a, true);
  if (!norm(xi).equals(a)) fail(ErrorCode::NonConvergence, "norm round-trip failed");
  return xi;
}

FieldElement FormalModule::solve_coboundary(const FieldElement& b_in) const {
  FieldElement b = M_->embed(b_in);
  if (!norm(b).is_zero()) fail(ErrorCode::NormNotZero, "coboundary target has nonzero norm");
  if (order() == 1) return M_->zero();
  FieldElement w = graded_solve(b, false);
  if (!coboundary(w).equals(b)) fail(ErrorCode::NonConvergence, "coboundary round-trip failed");
  return w;
}

std::vector<FieldElement> FormalModule::pi_division(const FieldElement& z_in, const FieldTower& T) const {
  if (!T.has_prefix(*L_) && !M_->has_prefix(T)) fail(ErrorCode::TowerMismatch, "unrelated tower");
  FieldElement z = T.embed(z_in);
  const int D = F_->D();
  const FieldElement iz = neg(z);
  const int full = T.e() * T.precision().digits();

  // G(Y) = F([pi]Y, iota z) = sum_i A_i [pi]^i(Y), A_i = sum_j c_ij (iota z)^j
  std::vector<FieldElement> A(D + 1, T.zero());
  std::vector<FieldElement> zp{T.one()};
  const int vz = iz.valuation();
  for (int j = 1; j <= D; ++j) {
    if (vz >= kInfiniteValuation || static_cast<i64>(j) * vz >= full) break;
    zp.push_back(zp.back() * iz);
  }
  for (const auto& t : F_->law().terms())
    if (t.j < static_cast<int>(zp.size())) A[t.i] += zp[t.j].scaled(t.c);
  std::vector<FieldElement> Gs(D + 1, T.zero());
  Gs[0] = A[0];
  for (int i = 1; i <= D; ++i) {
    if (A[i].is_zero()) continue;
    const auto& P = pi_powers_[i];
    for (int k = i; k <= D; ++k)
      if (P[k]) Gs[k] += A[i].scaled(P[k]);
  }

  // Weierstrass preparation over O_T
  int d = -1;
  for (int k = 0; k <= D; ++k)
    if (T.valuation_raw(Gs[k].coords().data()) == 0) {
      d = k;
      break;
    }
  if (d < 0) fail(ErrorCode::TruncationTooShort, "no unit coefficient in [pi]Y - z");
  std::vector<FieldElement> Bv(Gs.begin() + d, Gs.end());
  const int m = D - d;
  std::vector<FieldElement> Binv(m + 1, T.zero());
  Binv[0] = Bv[0].inverse();
  for (int k = 1; k <= m; ++k) {
    FieldElement s = T.zero();
    for (int j = 1; j <= k; ++j) s += Bv[j] * Binv[k - j];
    Binv[k] = -(s * Binv[0]);
  }
  std::vector<FieldElement> C(D + 1, T.zero());
  for (int a = 0; a < d; ++a) {
    if (Gs[a].is_zero()) continue;
    for (int b = 0; b <= m && a + b <= D; ++b) C[a + b] += Gs[a] * Binv[b];
  }
  std::vector<FieldElement> h(D + 1, T.zero()), r(d, T.zero());
  h[d] = T.one();
  bool converged = false;
  for (int it = 0; it <= full + 2; ++it) {
    for (int i = 0; i < d; ++i) r[i] += h[i];
    bool zero = true;
    for (int i = d; i <= D && zero; ++i) zero = T.valuation_raw(h[i].coords().data()) >= kInfiniteValuation;
    if (zero) {
      converged = true;
      break;
    }
    std::vector<FieldElement> nh(D + 1, T.zero());
    for (int a = d; a <= D; ++a) {
      if (T.valuation_raw(h[a].coords().data()) >= kInfiniteValuation) continue;
      for (int b = 0; (a - d) + b <= D; ++b)
        if (T.valuation_raw(C[b].coords().data()) < kInfiniteValuation) nh[a - d + b] -= h[a] * C[b];
    }
    h = std::move(nh);
  }
  if (!converged) fail(ErrorCode::NonConvergence, "Weierstrass division did not converge");
  std::vector<FieldElement> P(d + 1);
  for (int i = 0; i < d; ++i) P[i] = -r[i];
  P[d] = T.one();
  return roots_in_field(P, T, {1, 1});
}

}  // namespace fgm
