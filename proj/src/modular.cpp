#include "fgm/modular.hpp"

#include <string>

#include "fgm/error.hpp"

namespace fgm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotEisenstein: return "NotEisenstein";
    case ErrorCode::NotIrreducibleResidue: return "NotIrreducibleResidue";
    case ErrorCode::PrecisionTooLow: return "PrecisionTooLow";
    case ErrorCode::PrecisionTooHigh: return "PrecisionTooHigh";
    case ErrorCode::TowerMismatch: return "TowerMismatch";
    case ErrorCode::DivisionBelowPrecision: return "DivisionBelowPrecision";
    case ErrorCode::NotUnramifiedOverL: return "NotUnramifiedOverL";
    case ErrorCode::PrecisionTooLowToSeparate: return "PrecisionTooLowToSeparate";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::NonUnitLinearTerm: return "NonUnitLinearTerm";
    case ErrorCode::InfiniteHeight: return "InfiniteHeight";
    case ErrorCode::GuardExhausted: return "GuardExhausted";
    case ErrorCode::NonIntegralLaw: return "NonIntegralLaw";
    case ErrorCode::NonIntegralEndo: return "NonIntegralEndo";
    case ErrorCode::TruncationTooShort: return "TruncationTooShort";
    case ErrorCode::Mismatch: return "Mismatch";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NormNotZero: return "NormNotZero";
    case ErrorCode::HypothesisFailed: return "HypothesisFailed";
    case ErrorCode::FormulaMismatch: return "FormulaMismatch";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::InvariantMismatch: return "InvariantMismatch";
    case ErrorCode::ConfigParseError: return "ConfigParseError";
  }
  return "Unknown";
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

ResidueRing::ResidueRing(u64 p, int digits) : p_(p), digits_(digits) {
  if (!is_prime(p)) fail(ErrorCode::ConfigParseError, "p = " + std::to_string(p) + " is not prime");
  pow_.assign(1, 1);
  for (int k = 1; k <= digits; ++k) {
    if (pow_.back() > (u64(1) << 62) / p)
      fail(ErrorCode::PrecisionTooHigh, "p^" + std::to_string(digits) + " does not fit in 62 bits");
    pow_.push_back(pow_.back() * p);
  }
  mod_ = pow_.back();
}

u64 ResidueRing::from_signed(i64 v) const {
  i64 m = static_cast<i64>(mod_);
  i64 r = v % m;
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

u64 ResidueRing::inv(u64 a) const {
  if (a % p_ == 0) fail(ErrorCode::DivisionBelowPrecision, "inverse of a non-unit in Z/p^k");
  // extended Euclid on signed 128-bit values
  __int128 r0 = mod_, r1 = a, s0 = 0, s1 = 1;
  while (r1 != 0) {
    __int128 q = r0 / r1;
    __int128 t = r0 - q * r1;
    r0 = r1, r1 = t;
    t = s0 - q * s1;
    s0 = s1, s1 = t;
  }
  __int128 m = mod_;
  __int128 res = s0 % m;
  if (res < 0) res += m;
  return static_cast<u64>(res);
}

u64 ResidueRing::pow(u64 a, u64 e) const {
  u64 r = 1 % mod_;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

int ResidueRing::val(u64 a, int cap) const {
  if (cap > digits_) cap = digits_;
  int v = 0;
  while (v < cap && a % p_ == 0) {
    a /= p_;
    ++v;
  }
  return v;
}

i64 ResidueRing::centered(u64 a) const {
  if (a > mod_ / 2) return -static_cast<i64>(mod_ - a);
  return static_cast<i64>(a);
}

}  // namespace fgm
