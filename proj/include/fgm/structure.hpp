#pragma once

// The structure pipeline for F(p_M) as a Galois module: hypothesis gate,
// quotient dimensions, the inclusion kernel, orbit independence,
// generation, the explicit presentation and its invariant factors.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fgm/formal_module.hpp"

namespace fgm {

/// V_T = F(p_T) / [pi]_F F(p_T) with linear coordinates. Points of grade
/// >= c lie in the image of [pi]_F; below that every point has a unique
/// normal form as a sum of [d]_F(lift(t) pi^i), and the digits reduced
/// modulo the digits of [pi]_F(generator) give coordinates on V_T.
class QuotientSpace {
 public:
  QuotientSpace(const FormalModule& mod, const FieldTower& T);

  const FieldTower& tower() const { return T_; }
  int dim() const { return dim_; }
  /// Graded generators lift(t) pi^i in the fixed search order.
  const std::vector<FieldElement>& generators() const { return gens_; }
  /// Normal-form digits (one per generator).
  std::vector<u64> digits(const FieldElement& y) const;
  /// Coordinates of the class of y (length dim()).
  std::vector<u64> coords(const FieldElement& y) const;
  bool in_pi_image(const FieldElement& y) const;
  int rank(const std::vector<FieldElement>& xs) const;

 private:
  const FormalModule& mod_;
  const FieldTower& T_;
  int grades_ = 0;
  std::vector<FieldElement> gens_;
  Matrix relations_;        // row echelon basis of relation digits
  std::vector<int> pivots_;
  std::vector<int> free_;   // non-pivot columns
  int dim_ = 0;
};

/// Membership in [pi]_F F(p_T) by solving [pi]_F(y) = z.
bool in_pi_image_by_division(const FormalModule& mod, const FieldElement& z, const FieldTower& T);
/// Independence modulo [pi]_F by testing every normalized k_0-combination.
bool independent_by_division(const FormalModule& mod, const std::vector<FieldElement>& xs, const FieldTower& T);

struct HypothesisCheck {
  int s = 0;
  int n = 0;
  int h = 0;
  int m_exp = 0;
  int order = 1;
  bool ok = false;
  std::string reason;
  std::vector<u64> counts_L;  // |W^k cap F(p_L)| for k = 1..s+1
  std::vector<u64> counts_M;
  TorsionModule torsion_L;    // level s
  TorsionModule torsion_M;
};

HypothesisCheck inspect_hypothesis(const FormalModule& mod);
/// As inspect_hypothesis, throws HypothesisFailed unless ok.
HypothesisCheck check_hypothesis(const FormalModule& mod);

enum class QuotientRoute { Linear, Division };

struct QuotientDim {
  int dim = 0;
  int expected = 0;
  QuotientRoute route = QuotientRoute::Linear;
  std::vector<FieldElement> witnesses;
};

/// Greedy independent list drawn from V.generators(); throws FormulaMismatch
/// when its length differs from `expected`.
QuotientDim quotient_dim(const FormalModule& mod, const QuotientSpace& V, int expected, QuotientRoute route);

struct InclusionKernel {
  std::vector<FieldElement> eta;     // [pi^(s-1)] zeta_i in L
  std::vector<FieldElement> t;       // coboundary witnesses in M
  std::vector<FieldElement> kernel;  // [pi](t_i) in L
  int dim = 0;                       // kernel dimension of V_L -> V_M
};

InclusionKernel inclusion_kernel(const FormalModule& mod, const HypothesisCheck& hc, const QuotientSpace& VL,
                                 const QuotientSpace& VM);

/// Whether the orbit {sigma^j x_i} is independent in V_M; the norms must be
/// independent (PreconditionFailed otherwise).
bool orbit_independence(const FormalModule& mod, const QuotientSpace& VM, const std::vector<FieldElement>& xs);

/// pi-adic descent of random targets through the generators; gens must span V.
bool generation_check(const FormalModule& mod, const QuotientSpace& V, const std::vector<FieldElement>& gens,
                      int targets, std::mt19937_64& rng);

struct InvariantComparison {
  int level = 0;                  // N'
  std::vector<int> computed;      // from the torsion of F(p_M) and its rank
  std::vector<int> presented;     // Smith form of the relation matrix
  bool equal = false;
};

struct PresentationReport {
  std::vector<FieldElement> zeta, xi, omega, epsilon, theta;
  InclusionKernel kernel;
  bool relations_verified = false;
  int independence_rank = 0;
  int expected_rank = 0;
  int dim_L = 0, dim_M = 0;
  bool generation_verified = false;
  std::vector<InvariantComparison> invariants;
  int random_relations_checked = 0;
  bool random_relations_ok = false;
};

/// Runs every step of the construction; `levels` are the N' values for
/// invariant_compare.
PresentationReport build_presentation(const FormalModule& mod, const HypothesisCheck& hc, const QuotientSpace& VL,
                                      const QuotientSpace& VM, std::mt19937_64& rng, const std::vector<int>& levels);

/// Invariant factors of the presented module and of F(p_M) modulo pi^level,
/// as exponents (level means a free summand).
InvariantComparison invariant_compare(const FormalModule& mod, const HypothesisCheck& hc, const QuotientSpace& VM,
                                      int level);

/// Random O[G]-multiples of the defining relations must vanish on the
/// generators; returns the number of checks (all must pass).
int random_relation_checks(const FormalModule& mod, const PresentationReport& rep, int s, int count,
                           std::mt19937_64& rng);

}  // namespace fgm
