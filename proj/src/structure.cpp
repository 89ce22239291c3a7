#include "fgm/structure.hpp"

#include <algorithm>

namespace fgm {

namespace {

FieldElement random_point(std::mt19937_64& rng, const FieldTower& T) {
  std::uniform_int_distribution<u64> d(0, T.ring().modulus() - 1);
  std::vector<u64> c(T.degree());
  for (auto& x : c) x = d(rng);
  return T.from_coords(c) * T.uniformizer();
}

u64 ipow(u64 b, int e) {
  u64 r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// sum_F [c_k] x_k
FieldElement combination(const FormalModule& mod, const std::vector<FieldElement>& xs, const std::vector<u64>& c,
                         const FieldTower& T) {
  FieldElement acc = T.zero();
  for (size_t k = 0; k < xs.size(); ++k)
    if (c[k] % T.p() != 0) acc = mod.add(acc, mod.scalar(static_cast<i64>(c[k] % T.p()), T.embed(xs[k])));
  return acc;
}

}  // namespace

// ---------------------------------------------------------------------------
// QuotientSpace

QuotientSpace::QuotientSpace(const FormalModule& mod, const FieldTower& T) : mod_(mod), T_(T) {
  const int e = T.e();
  const int p = static_cast<int>(T.p());
  grades_ = e / (p - 1) + 1 + e;
  for (int i = 1; i < grades_; ++i) {
    FieldElement pi_i = T.uniformizer().pow(static_cast<u64>(i));
    for (int t = 0; t < T.f(); ++t) {
      std::vector<int> d(T.f(), 0);
      d[t] = 1;
      gens_.push_back(T.lift_residue(d) * pi_i);
    }
  }
  Matrix rows;
  for (const auto& g : gens_) rows.push_back(digits(mod_.pi_mul(g)));
  relations_ = row_basis_mod_p(rows, T.p());
  std::vector<bool> is_pivot(gens_.size(), false);
  for (const auto& r : relations_) {
    int c = 0;
    while (r[c] == 0) ++c;
    pivots_.push_back(c);
    is_pivot[c] = true;
  }
  for (size_t c = 0; c < gens_.size(); ++c)
    if (!is_pivot[c]) free_.push_back(static_cast<int>(c));
  dim_ = static_cast<int>(free_.size());
}

std::vector<u64> QuotientSpace::digits(const FieldElement& y_in) const {
  FieldElement y = T_.embed(y_in);
  const int f = T_.f();
  std::vector<u64> d(gens_.size(), 0);
  for (int i = 1; i < grades_; ++i) {
    int v = y.valuation();
    if (v >= grades_) break;
    if (v < i) fail(ErrorCode::PreconditionFailed, "point outside the maximal ideal");
    if (v > i) continue;
    auto r = T_.residue_digits(y.divide_by_uniformizer(i));
    for (int t = 0; t < f; ++t) {
      if (r[t] == 0) continue;
      size_t k = static_cast<size_t>(i - 1) * f + t;
      d[k] = static_cast<u64>(r[t]);
      y = mod_.sub(y, mod_.scalar(r[t], gens_[k]));
    }
    if (y.valuation() <= i) fail(ErrorCode::NonConvergence, "normal form did not advance");
  }
  return d;
}

std::vector<u64> QuotientSpace::coords(const FieldElement& y) const {
  const u64 p = T_.p();
  auto r = digits(y);
  for (size_t k = 0; k < relations_.size(); ++k) {
    u64 a = r[pivots_[k]] % p;
    if (!a) continue;
    for (size_t c = 0; c < r.size(); ++c) r[c] = (r[c] + p * p - a * relations_[k][c] % p) % p;
  }
  std::vector<u64> out;
  for (int c : free_) out.push_back(r[c]);
  return out;
}

bool QuotientSpace::in_pi_image(const FieldElement& y) const {
  auto c = coords(y);
  return std::all_of(c.begin(), c.end(), [](u64 x) { return x == 0; });
}

int QuotientSpace::rank(const std::vector<FieldElement>& xs) const {
  Matrix A;
  for (const auto& x : xs) A.push_back(coords(x));
  if (A.empty() || dim_ == 0) return 0;
  return rank_mod_p(A, T_.p());
}

// ---------------------------------------------------------------------------
// Division-based membership

bool in_pi_image_by_division(const FormalModule& mod, const FieldElement& z, const FieldTower& T) {
  return !mod.pi_division(z, T).empty();
}

namespace {

// whether x stays independent of the independent list xs
bool independent_with(const FormalModule& mod, const std::vector<FieldElement>& xs, const FieldElement& x,
                      const FieldTower& T) {
  const u64 p = T.p();
  const u64 total = ipow(p, static_cast<int>(xs.size()));
  for (u64 idx = 0; idx < total; ++idx) {
    std::vector<u64> c(xs.size());
    u64 t = idx;
    for (auto& ci : c) ci = t % p, t /= p;
    FieldElement y = mod.add(combination(mod, xs, c, T), T.embed(x));
    if (in_pi_image_by_division(mod, y, T)) return false;
  }
  return true;
}

}  // namespace

bool independent_by_division(const FormalModule& mod, const std::vector<FieldElement>& xs, const FieldTower& T) {
  std::vector<FieldElement> acc;
  for (const auto& x : xs) {
    if (!independent_with(mod, acc, x, T)) return false;
    acc.push_back(x);
  }
  return true;
}

// ---------------------------------------------------------------------------
// Hypothesis

HypothesisCheck inspect_hypothesis(const FormalModule& mod) {
  const FormalGroup& F = mod.group();
  HypothesisCheck hc;
  hc.n = mod.L().degree();
  hc.h = F.height();
  hc.order = mod.order();
  for (int o = hc.order; o > 1; o /= static_cast<int>(F.p())) ++hc.m_exp;

  auto scan = [&](const FieldTower& T, std::vector<u64>& counts) {
    int s = 0;
    for (int k = 1;; ++k) {
      u64 c = torsion_points(F, k, T).size();
      counts.push_back(c);
      if (c != ipow(F.q(), k * hc.h)) break;
      s = k;
    }
    return s;
  };
  int sL = scan(mod.L(), hc.counts_L);
  int sM = scan(mod.M(), hc.counts_M);
  hc.s = sL;
  const u64 full_L = ipow(F.q(), sL * hc.h), full_M = ipow(F.q(), sM * hc.h);
  if (sL == 0) {
    hc.reason = "no-torsion";
  } else if (sL != sM) {
    hc.reason = "unequal-intersections";
  } else if (hc.counts_M.back() != full_M || hc.counts_L.back() != full_L) {
    hc.reason = "extra-torsion-in-M";
  } else {
    hc.ok = true;
  }
  if (hc.ok) {
    if (hc.h > hc.n) fail(ErrorCode::FormulaMismatch, "height exceeds [L:K0]");
    hc.torsion_L = torsion_module(F, hc.s, mod.L());
    hc.torsion_M = torsion_module(F, hc.s, mod.M());
  }
  return hc;
}

HypothesisCheck check_hypothesis(const FormalModule& mod) {
  HypothesisCheck hc = inspect_hypothesis(mod);
  if (!hc.ok) fail(ErrorCode::HypothesisFailed, hc.reason);
  return hc;
}

// ---------------------------------------------------------------------------
// Dimensions and kernel

QuotientDim quotient_dim(const FormalModule& mod, const QuotientSpace& V, int expected, QuotientRoute route) {
  QuotientDim q;
  q.expected = expected;
  q.route = route;
  const FieldTower& T = V.tower();
  for (const auto& g : V.generators()) {
    bool indep;
    if (route == QuotientRoute::Linear) {
      auto trial = q.witnesses;
      trial.push_back(g);
      indep = V.rank(trial) == static_cast<int>(trial.size());
    } else {
      indep = independent_with(mod, q.witnesses, g, T);
    }
    if (indep) q.witnesses.push_back(g);
  }
  q.dim = static_cast<int>(q.witnesses.size());
  if (q.dim != expected)
    fail(ErrorCode::FormulaMismatch,
         "quotient dimension " + std::to_string(q.dim) + " differs from " + std::to_string(expected));
  return q;
}

InclusionKernel inclusion_kernel(const FormalModule& mod, const HypothesisCheck& hc, const QuotientSpace& VL,
                                 const QuotientSpace& VM) {
  InclusionKernel K;
  for (const auto& z : hc.torsion_L.basis) {
    FieldElement eta = hc.s > 1 ? mod.pi_mul(z, hc.s - 1) : z;
    FieldElement t = mod.solve_coboundary(mod.up(eta));
    FieldElement k = mod.pi_mul(t);
    if (!mod.galois().fixed(k)) fail(ErrorCode::FormulaMismatch, "kernel generator is not in L");
    FieldElement kL = mod.M().restrict_to(mod.L(), k);
    if (!VM.in_pi_image(k)) fail(ErrorCode::FormulaMismatch, "kernel generator is not in [pi]F(p_M)");
    K.eta.push_back(eta);
    K.t.push_back(t);
    K.kernel.push_back(kL);
  }
  if (VL.rank(K.kernel) != hc.h) fail(ErrorCode::FormulaMismatch, "kernel generators are dependent in V_L");
  // kernel of V_L -> V_M from a basis of V_L
  std::vector<FieldElement> basis;
  for (const auto& g : VL.generators()) {
    auto trial = basis;
    trial.push_back(g);
    if (VL.rank(trial) == static_cast<int>(trial.size())) basis = std::move(trial);
  }
  std::vector<FieldElement> images;
  for (const auto& b : basis) images.push_back(mod.up(b));
  K.dim = static_cast<int>(basis.size()) - VM.rank(images);
  if (K.dim != hc.h)
    fail(ErrorCode::FormulaMismatch, "inclusion kernel has dimension " + std::to_string(K.dim));
  return K;
}

bool orbit_independence(const FormalModule& mod, const QuotientSpace& VM, const std::vector<FieldElement>& xs) {
  std::vector<FieldElement> norms, orbit;
  for (const auto& x : xs) norms.push_back(mod.norm(mod.up(x)));
  if (VM.rank(norms) != static_cast<int>(xs.size()))
    fail(ErrorCode::PreconditionFailed, "norms are dependent modulo [pi]F(p_M)");
  for (const auto& x : xs)
    for (int j = 0; j < mod.order(); ++j) orbit.push_back(mod.sigma(mod.up(x), j));
  return VM.rank(orbit) == static_cast<int>(orbit.size());
}

bool generation_check(const FormalModule& mod, const QuotientSpace& V, const std::vector<FieldElement>& gens_in,
                      int targets, std::mt19937_64& rng) {
  const FieldTower& T = V.tower();
  std::vector<FieldElement> gens;
  for (const auto& g : gens_in) gens.push_back(T.embed(g));
  if (V.rank(gens) != V.dim()) fail(ErrorCode::PreconditionFailed, "generators do not span the quotient");
  Matrix A(V.dim(), std::vector<u64>(gens.size()));
  for (size_t k = 0; k < gens.size(); ++k) {
    auto c = V.coords(gens[k]);
    for (int r = 0; r < V.dim(); ++r) A[r][k] = c[r];
  }
  const int cap = T.e() * T.precision().N + 8;
  for (int t = 0; t < targets; ++t) {
    const FieldElement y0 = random_point(rng, T);
    FieldElement y = y0, approx = T.zero();
    bool done = false;
    for (int k = 0; k <= cap && !done; ++k) {
      auto c = solve_mod_p(A, V.coords(y), T.p());
      if (!c) return false;
      FieldElement chunk = combination(mod, gens, *c, T);
      approx = mod.add(approx, k == 0 ? chunk : mod.pi_mul(chunk, k));
      if (mod.sub(y0, approx).is_zero()) {
        done = true;
        break;
      }
      auto roots = mod.pi_division(mod.sub(y, chunk), T);
      if (roots.empty()) return false;
      // keep the descent small: take the root of largest valuation
      size_t best = 0;
      for (size_t r = 1; r < roots.size(); ++r)
        if (roots[r].valuation() > roots[best].valuation()) best = r;
      y = roots[best];
    }
    if (!done) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Presentation

InvariantComparison invariant_compare(const FormalModule& mod, const HypothesisCheck& hc, const QuotientSpace& VM,
                                      int level) {
  InvariantComparison out;
  out.level = level;
  const FormalGroup& F = mod.group();
  ResidueRing ring(F.p(), level);
  mpq_class pis = 1;
  for (int i = 0; i < hc.s; ++i) pis *= F.type().pi;
  const u64 c = reduce_rational(pis, ring);
  const int P = mod.order(), h = hc.h;
  Matrix R(static_cast<size_t>(h) * P, std::vector<u64>(static_cast<size_t>(2 * h) * P, 0));
  for (int i = 0; i < h; ++i)
    for (int l = 0; l < P; ++l) {
      auto& row = R[static_cast<size_t>(i) * P + l];
      const size_t xi = static_cast<size_t>(i) * P, om = static_cast<size_t>(h + i) * P;
      row[xi + l] = ring.add(row[xi + l], c);
      row[om + (l + 1) % P] = ring.sub(row[om + (l + 1) % P], 1 % ring.modulus());
      row[om + l] = ring.add(row[om + l], 1 % ring.modulus());
    }
  auto v = smith_valuations(R, ring);
  int generators = (hc.n - h) * P + 2 * h * P;
  for (int x : v)
    if (x > 0) out.presented.push_back(x);
  for (int k = 0; k < generators - static_cast<int>(v.size()); ++k) out.presented.push_back(level);

  for (int k : hc.torsion_M.invariants) out.computed.push_back(std::min(k, level));
  const int free_rank = VM.dim() - static_cast<int>(hc.torsion_M.invariants.size());
  for (int k = 0; k < free_rank; ++k) out.computed.push_back(level);
  std::sort(out.presented.rbegin(), out.presented.rend());
  std::sort(out.computed.rbegin(), out.computed.rend());
  out.equal = out.presented == out.computed;
  return out;
}

int random_relation_checks(const FormalModule& mod, const PresentationReport& rep, int s, int count,
                           std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(-4, 4);
  int done = 0;
  for (int t = 0; t < count; ++t) {
    const size_t i = static_cast<size_t>(t) % rep.xi.size();
    GroupRingElement a{std::vector<i64>(mod.order())};
    for (auto& x : a.c) x = d(rng);
    FieldElement lhs = mod.act(a, mod.pi_mul(rep.xi[i], s));
    FieldElement rhs = mod.act(a, mod.coboundary(rep.omega[i]));
    FieldElement rhs2 = mod.act(a * (GroupRingElement::sigma(mod.order()) - GroupRingElement::one(mod.order())),
                                rep.omega[i]);
    if (!lhs.equals(rhs) || !lhs.equals(rhs2)) fail(ErrorCode::InvariantMismatch, "random relation check failed");
    ++done;
  }
  return done;
}

PresentationReport build_presentation(const FormalModule& mod, const HypothesisCheck& hc, const QuotientSpace& VL,
                                      const QuotientSpace& VM, std::mt19937_64& rng, const std::vector<int>& levels) {
  PresentationReport rep;
  const int s = hc.s, h = hc.h, n = hc.n, P = mod.order();
  rep.dim_L = VL.dim();
  rep.dim_M = VM.dim();
  rep.zeta = hc.torsion_L.basis;
  for (const auto& z : rep.zeta) {
    FieldElement xi = mod.solve_norm(mod.up(z));
    rep.xi.push_back(xi);
    rep.omega.push_back(mod.solve_coboundary(mod.pi_mul(xi, s)));
  }
  rep.kernel = inclusion_kernel(mod, hc, VL, VM);

  std::vector<FieldElement> base = rep.kernel.kernel;
  base.insert(base.end(), rep.zeta.begin(), rep.zeta.end());
  if (VL.rank(base) != 2 * h) fail(ErrorCode::FormulaMismatch, "torsion basis is dependent modulo the kernel");
  for (const auto& g : VL.generators()) {
    if (static_cast<int>(rep.epsilon.size()) == n - h) break;
    auto trial = base;
    trial.push_back(g);
    if (VL.rank(trial) == static_cast<int>(trial.size())) {
      base = std::move(trial);
      rep.epsilon.push_back(g);
    }
  }
  if (static_cast<int>(rep.epsilon.size()) != n - h) fail(ErrorCode::FormulaMismatch, "could not extend by epsilons");
  for (const auto& e : rep.epsilon) rep.theta.push_back(mod.solve_norm(mod.up(e)));

  std::vector<FieldElement> system = rep.omega;
  for (const auto& x : rep.xi)
    for (int k = 0; k < P; ++k) system.push_back(mod.sigma(x, k));
  for (const auto& x : rep.theta)
    for (int k = 0; k < P; ++k) system.push_back(mod.sigma(x, k));
  rep.expected_rank = n * P + h;
  rep.independence_rank = VM.rank(system);

  rep.relations_verified = true;
  for (int i = 0; i < h; ++i)
    rep.relations_verified &= mod.pi_mul(rep.xi[i], s).equals(mod.coboundary(rep.omega[i]));

  rep.generation_verified = generation_check(mod, VM, system, 2, rng);
  rep.random_relations_checked = random_relation_checks(mod, rep, s, 8, rng);
  rep.random_relations_ok = true;
  for (int lv : levels) {
    rep.invariants.push_back(invariant_compare(mod, hc, VM, lv));
    if (!rep.invariants.back().equal) fail(ErrorCode::InvariantMismatch, "invariant factors differ at N' = " + std::to_string(lv));
  }
  return rep;
}

}  // namespace fgm
