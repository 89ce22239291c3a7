#pragma once

// The Galois module F(p_M) for M/L unramified of p-power degree: point
// arithmetic, the group-ring action, the module norm, and constructive
// solvers for the norm and coboundary equations.

#include <memory>
#include <vector>

#include "fgm/honda.hpp"
#include "fgm/linalg.hpp"
#include "fgm/tower.hpp"

namespace fgm {

/// sum_k c_k sigma^k with integer coefficients.
struct GroupRingElement {
  std::vector<i64> c;

  static GroupRingElement one(int order);
  static GroupRingElement sigma(int order, int k = 1);
  static GroupRingElement norm_element(int order);
  GroupRingElement operator*(const GroupRingElement& o) const;
  GroupRingElement operator+(const GroupRingElement& o) const;
  GroupRingElement operator-(const GroupRingElement& o) const;
};

class FormalModule {
 public:
  FormalModule(GroupPtr F, TowerPtr L, TowerPtr M);

  const FormalGroup& group() const { return *F_; }
  GroupPtr group_ptr() const { return F_; }
  const FieldTower& L() const { return *L_; }
  const FieldTower& M() const { return *M_; }
  TowerPtr L_ptr() const { return L_; }
  TowerPtr M_ptr() const { return M_; }
  const GaloisData& galois() const { return G_; }
  int order() const { return G_.order(); }

  // Point arithmetic in any tower on which the group's precision matches.
  FieldElement add(const FieldElement& x, const FieldElement& y) const;
  FieldElement neg(const FieldElement& x) const;
  FieldElement sub(const FieldElement& x, const FieldElement& y) const;
  /// [a]_F(x) for integer a.
  FieldElement scalar(i64 a, const FieldElement& x) const;
  /// [a]_F(x) for a p-integral rational a.
  FieldElement scalar(const mpq_class& a, const FieldElement& x) const;
  /// [pi^k]_F(x).
  FieldElement pi_mul(const FieldElement& x, int k = 1) const;

  /// Embed a point of L into M.
  FieldElement up(const FieldElement& x) const { return M_->embed(x); }
  FieldElement sigma(const FieldElement& x, i64 k = 1) const;
  FieldElement act(const GroupRingElement& g, const FieldElement& x) const;
  FieldElement norm(const FieldElement& x) const;
  /// sigma(x) - x in the group law.
  FieldElement coboundary(const FieldElement& x) const;

  /// xi in M with norm(xi) = a, for a a point of L (embedded in M).
  FieldElement solve_norm(const FieldElement& a) const;
  /// omega in M with coboundary(omega) = b; b must have norm zero.
  FieldElement solve_coboundary(const FieldElement& b) const;

  /// All y in the maximal ideal of T with [pi]_F(y) = z.
  std::vector<FieldElement> pi_division(const FieldElement& z, const FieldTower& T) const;

 private:
  // graded successive approximation shared by both solvers
  FieldElement graded_solve(const FieldElement& target, bool norm_equation) const;

  GroupPtr F_;
  TowerPtr L_, M_;
  GaloisData G_;
  Matrix trace_map_;  // residue trace k_M -> k_M over F_p, column per basis digit
  Matrix cob_map_;    // residue sigma - 1
  std::vector<ModSeries1> pi_powers_;  // ([pi]_F)^i for i = 0..D
};

}  // namespace fgm
