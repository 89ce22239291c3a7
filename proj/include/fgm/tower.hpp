#pragma once

// Towers of local fields over Q_p built from unramified and Eisenstein
// steps, with elements of the ring of integers stored in the product power
// basis (an integral basis for such towers).

#include <climits>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fgm/error.hpp"
#include "fgm/modular.hpp"

namespace fgm {

/// Working precision: reported values are exact modulo p^N; arithmetic is
/// carried modulo p^(N + guard).
struct Precision {
  int N = 12;
  int guard = 4;

  int digits() const { return N + guard; }
  bool operator==(const Precision&) const = default;
};

/// Valuation of a value that is zero at the working precision.
inline constexpr int kInfiniteValuation = INT_MAX / 8;

enum class StepKind { Unramified, Eisenstein };

/// One extension step. `coeffs` holds c_0..c_{d-1} of the monic step
/// polynomial, each as a coordinate vector over the level below. An
/// unramified step with empty `coeffs` gets the lexicographically smallest
/// lift of an irreducible residue polynomial of the requested degree.
struct StepSpec {
  StepKind kind = StepKind::Unramified;
  int degree = 0;
  std::vector<std::vector<i64>> coeffs;

  static StepSpec unramified(int degree) { return {StepKind::Unramified, degree, {}}; }
  static StepSpec eisenstein(std::vector<std::vector<i64>> coeffs) {
    int d = static_cast<int>(coeffs.size());
    return {StepKind::Eisenstein, d, std::move(coeffs)};
  }
  /// Eisenstein step over Q_p given by integer coefficients c_0..c_{d-1}.
  static StepSpec eisenstein_int(const std::vector<i64>& c);
};

class FieldElement;
class FieldTower;
using TowerPtr = std::shared_ptr<const FieldTower>;

struct RationalValuation {
  i64 num = 1;
  i64 den = 1;
};

/// Immutable after construction. Elements keep a raw pointer to their tower,
/// so a tower must outlive its elements.
class FieldTower {
 public:
  static TowerPtr base(u64 p, Precision prec);
  static TowerPtr build(u64 p, const std::vector<StepSpec>& steps, Precision prec);
  TowerPtr extend(const StepSpec& step) const;

  u64 p() const { return ring_.p(); }
  const Precision& precision() const { return prec_; }
  const ResidueRing& ring() const { return ring_; }
  int degree() const { return deg_.back(); }
  int e() const { return e_; }
  int f() const { return f_; }
  u64 q_residue() const { return q_; }
  int num_steps() const { return static_cast<int>(levels_.size()); }
  StepKind step_kind(int i) const { return levels_[i].kind; }
  int step_degree(int i) const { return levels_[i].d; }
  /// Absolute degree of the sub-field after `k` steps.
  int level_degree(int k) const { return deg_[k]; }
  /// The step polynomials as specified (coefficients as coordinate vectors).
  const std::vector<StepSpec>& specs() const { return specs_; }
  /// True when `other` was built from the same p, precision and a prefix
  /// of this tower's steps.
  bool has_prefix(const FieldTower& other) const;
  std::string describe() const;

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement from_int(i64 v) const;
  FieldElement from_coords(const std::vector<u64>& c) const;
  FieldElement from_signed_coords(const std::vector<i64>& c) const;
  /// Root adjoined by step `k` (1-based level index), embedded in the top.
  FieldElement generator(int level) const;
  const FieldElement& uniformizer() const;
  /// Embed an element of a prefix tower.
  FieldElement embed(const FieldElement& x) const;
  /// Restrict to a prefix tower; the element must lie in it.
  FieldElement restrict_to(const FieldTower& sub, const FieldElement& x) const;
  /// Lift of a residue-field element given by F_p coordinates.
  FieldElement lift_residue(const std::vector<int>& digits) const;
  /// F_p coordinates of the residue class of an integral element.
  std::vector<int> residue_digits(const FieldElement& x) const;
  /// Encodes residue digits as an integer index in [0, q).
  u64 residue_index(const std::vector<int>& digits) const;
  std::vector<int> residue_from_index(u64 idx) const;

  // Kernels on raw coordinate arrays of length degree().
  void mul_raw(const u64* a, const u64* b, u64* out) const;
  int valuation_raw(const u64* a) const;

 private:
  struct Level {
    StepKind kind;
    int d;
    std::vector<u64> poly;  // d blocks of the lower degree
  };

  FieldTower(u64 p, Precision prec);
  void finalize();
  void mul_rec(int k, const u64* a, const u64* b, u64* out, u64* scratch) const;
  int val_rec(int k, const u64* a) const;
  void append_level(StepKind kind, int d, std::vector<u64> poly, const StepSpec& spec);

  Precision prec_;
  ResidueRing ring_;
  std::vector<Level> levels_;
  std::vector<StepSpec> specs_;
  std::vector<int> deg_{1};
  std::vector<int> scratch_{0};
  std::vector<int> residue_pos_;
  int e_ = 1;
  int f_ = 1;
  u64 q_ = 0;
  std::shared_ptr<FieldElement> uniformizer_;
  std::vector<FieldElement> pi_pows_;  // pi^0 .. pi^e
  std::shared_ptr<FieldElement> eps_inv_;  // (pi^e / p)^{-1}

  friend class FieldElement;
};

/// Element of the ring of integers of a tower, modulo p^(N+guard).
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(const FieldTower* t, std::vector<u64> c) : tower_(t), c_(std::move(c)) {}

  const FieldTower& tower() const { return *tower_; }
  const FieldTower* tower_ptr() const { return tower_; }
  const std::vector<u64>& coords() const { return c_; }
  bool valid() const { return tower_ != nullptr; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  FieldElement scaled(u64 s) const;
  FieldElement scaled_signed(i64 s) const;
  FieldElement pow(u64 e) const;

  /// Valuation in units of the tower's uniformizer; kInfiniteValuation when
  /// the element is zero modulo p^N.
  int valuation() const;
  bool is_zero() const;
  bool is_unit() const { return valuation() == 0; }
  bool equals(const FieldElement& o) const { return (*this - o).is_zero(); }

  /// Inverse of a unit.
  FieldElement inverse() const;
  /// x / pi^v for v <= valuation().
  FieldElement divide_by_uniformizer(int v) const;
  /// Exact quotient *this / b, requires valuation() >= b.valuation().
  FieldElement divide(const FieldElement& b) const;

  /// Coordinates reduced modulo p^N (stable hashing/equality key).
  std::vector<u64> key() const;
  std::string to_string() const;

 private:
  void check_same(const FieldElement& o) const;

  const FieldTower* tower_ = nullptr;
  std::vector<u64> c_;
};

/// Residue field of a tower; elements are indices of their F_p coordinates.
class ResidueField {
 public:
  explicit ResidueField(const FieldTower& t);
  u64 size() const { return q_; }
  u64 add(u64 a, u64 b) const;
  u64 sub(u64 a, u64 b) const;
  u64 mul(u64 a, u64 b) const;
  u64 neg(u64 a) const { return sub(0, a); }
  u64 one() const { return one_; }

 private:
  const FieldTower& t_;
  u64 q_;
  u64 one_;
  std::vector<u64> mul_table_;  // used when q is small
};

/// Polynomials over a residue field (`coeffs[i]` is the coefficient of x^i).
bool residue_poly_irreducible(const ResidueField& k, const std::vector<u64>& monic_low_coeffs);

/// Generator of Gal(M/L) for M unramified over L: the lift of the residue
/// Frobenius x -> x^|l|. Matrices of sigma^k on the power basis of M are
/// cached for 0 <= k < order.
class GaloisData {
 public:
  GaloisData(TowerPtr L, TowerPtr M);

  int order() const { return order_; }
  const FieldTower& base() const { return *L_; }
  const FieldTower& top() const { return *M_; }
  /// sigma^k(x), k taken modulo the order.
  FieldElement apply(const FieldElement& x, i64 k = 1) const;
  /// Field norm N_{M/L}(x) = prod_k sigma^k(x), as an element of M.
  FieldElement field_norm(const FieldElement& x) const;
  FieldElement field_trace(const FieldElement& x) const;
  /// True when x is fixed by sigma at precision.
  bool fixed(const FieldElement& x) const;

 private:
  TowerPtr L_, M_;
  int order_ = 1;
  std::vector<std::vector<u64>> mats_;  // row-major degree x degree
};

/// All roots of `poly` (coefficients over T, index = degree) in T with
/// valuation >= vmin, by digit-wise depth-first search over uniformizer
/// digits. Each root is exact modulo p^N.
std::vector<FieldElement> roots_in_field(const std::vector<FieldElement>& poly, const FieldTower& T,
                                         RationalValuation vmin);

/// Evaluate a polynomial with coefficients in T.
FieldElement poly_eval(const std::vector<FieldElement>& poly, const FieldElement& x);

}  // namespace fgm
