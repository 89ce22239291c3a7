#pragma once

// Arithmetic in Z/p^P for moduli below 2^62.

#include <cstdint>
#include <vector>

namespace fgm {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

class ResidueRing {
 public:
  ResidueRing() = default;
  ResidueRing(u64 p, int digits);

  u64 p() const { return p_; }
  int digits() const { return digits_; }
  u64 modulus() const { return mod_; }
  /// p^k for 0 <= k <= digits.
  u64 power(int k) const { return pow_[k]; }

  u64 add(u64 a, u64 b) const {
    u64 s = a + b;
    return s >= mod_ ? s - mod_ : s;
  }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + mod_ - b; }
  u64 neg(u64 a) const { return a == 0 ? 0 : mod_ - a; }
  u64 mul(u64 a, u64 b) const { return static_cast<u64>((static_cast<u128>(a) * b) % mod_); }
  u64 from_signed(i64 v) const;
  /// Inverse of a unit (v_p(a) = 0).
  u64 inv(u64 a) const;
  u64 pow(u64 a, u64 e) const;

  /// v_p(a), capped at `cap` (a value >= cap means "zero modulo p^cap").
  int val(u64 a, int cap) const;

  /// Symmetric representative in (-mod/2, mod/2].
  i64 centered(u64 a) const;

 private:
  u64 p_ = 0;
  int digits_ = 0;
  u64 mod_ = 1;
  std::vector<u64> pow_;
};

bool is_prime(u64 n);

}  // namespace fgm
