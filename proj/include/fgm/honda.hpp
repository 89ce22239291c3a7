#pragma once

// Honda formal groups over Z_p: types, logarithms, group laws,
// endomorphisms, kernel polynomials and torsion points.

#include <gmpxx.h>

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "fgm/series.hpp"
#include "fgm/tower.hpp"

namespace fgm {

/// u = pi + a_1 T + ... + a_r T^r with trivial Frobenius (K = K_0 = Q_p).
struct HondaType {
  u64 p = 0;
  mpq_class pi;
  std::vector<mpq_class> a;  // a[0] unused

  u64 q() const { return p; }
  /// Coefficients u_0 = pi, u_i = a_i.
  std::vector<mpq_class> as_twisted() const;
  std::string to_string() const;
};

/// Checks that pi is a uniformizer and the a_i are integral.
void validate_type(const HondaType& u);
/// Minimal i with a_i a unit; throws InfiniteHeight when there is none.
int height(const HondaType& u);

/// The solution of u * f = pi x with f = x + (higher).
QSeries1 logarithm_from_type(const HondaType& u, int D);
/// True when every coefficient of u * f is divisible by p.
bool verify_type(const QSeries1& f, const HondaType& u);
/// log(1 + x), the logarithm of x + y + xy.
QSeries1 multiplicative_log(int D);
/// The logarithm g of the group with [pi](x) = e(x), from g(e(x)) = pi g(x).
QSeries1 log_from_endomorphism(const QSeries1& e);

/// F(x, y) = f^{-1}(f(x) + f(y)); throws NonIntegralLaw unless integral.
QSeries2 group_law(const QSeries1& f, u64 p);

class FormalGroup {
 public:
  /// Canonical group of type u.
  static std::shared_ptr<FormalGroup> from_type(const HondaType& u, int D, Precision prec);
  /// Group with an explicit logarithm, which must be of type u.
  static std::shared_ptr<FormalGroup> from_logarithm(const HondaType& u, const QSeries1& f, Precision prec);

  const HondaType& type() const { return u_; }
  int height() const { return h_; }
  u64 p() const { return u_.p; }
  u64 q() const { return u_.q(); }
  int D() const { return f_.D(); }
  const Precision& precision() const { return prec_; }
  const ResidueRing& ring() const { return ring_; }

  const QSeries1& log() const { return f_; }
  const QSeries1& exp() const { return finv_; }
  const QSeries2& law_exact() const { return law_; }
  const ModSeries2& law() const { return law_mod_; }

  /// [a]_F for a in Z_p (a p-integral rational); cached.
  const QSeries1& endo_exact(const mpq_class& a) const;
  const ModSeries1& endo(const mpq_class& a) const;
  /// [pi^n]_F.
  const ModSeries1& pi_power(int n) const;
  const ModSeries1& iota() const { return endo(mpq_class(-1)); }

  /// Distinguished factor of [pi^n]_F over Z/p^P, as coefficients c_0..c_d
  /// with c_d = 1 and d = q^(n h).
  std::vector<u64> kernel_polynomial(int n) const;

 private:
  FormalGroup(const HondaType& u, QSeries1 f, Precision prec);

  HondaType u_;
  int h_;
  Precision prec_;
  ResidueRing ring_;
  QSeries1 f_, finv_;
  QSeries2 law_;
  ModSeries2 law_mod_;

  struct Endo {
    QSeries1 exact;
    ModSeries1 reduced;
  };
  mutable std::mutex mu_;
  mutable std::map<std::string, std::unique_ptr<Endo>> endos_;
  const Endo& endo_entry(const mpq_class& a) const;
};

using GroupPtr = std::shared_ptr<const FormalGroup>;

/// W^n_F intersected with the maximal ideal of a tower.
struct TorsionModule {
  int level = 0;
  std::vector<FieldElement> points;
  bool complete = false;
  std::vector<FieldElement> basis;  // set when complete
  /// Invariant factors: exponents k of the cyclic summands O/pi^k.
  std::vector<int> invariants;
};

TorsionModule torsion_module(const FormalGroup& F, int n, const FieldTower& T);

/// Points of the kernel of [pi^n]_F in T (roots of the kernel polynomial).
std::vector<FieldElement> torsion_points(const FormalGroup& F, int n, const FieldTower& T);

}  // namespace fgm
