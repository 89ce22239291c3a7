#include "fgm/linalg.hpp"

#include <utility>

namespace fgm {

namespace {

u64 inv_mod_p(u64 a, u64 p) {
  // p is prime and small enough for 128-bit products
  u64 r = 1, b = a % p, e = p - 2;
  while (e) {
    if (e & 1) r = static_cast<u64>(static_cast<u128>(r) * b % p);
    b = static_cast<u64>(static_cast<u128>(b) * b % p);
    e >>= 1;
  }
  return r;
}

// In-place reduced row echelon form; returns pivot columns.
std::vector<int> rref(Matrix& A, u64 p) {
  std::vector<int> pivots;
  if (A.empty()) return pivots;
  const size_t rows = A.size(), cols = A[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && A[piv][c] % p == 0) ++piv;
    if (piv == rows) continue;
    std::swap(A[r], A[piv]);
    u64 inv = inv_mod_p(A[r][c], p);
    for (auto& x : A[r]) x = static_cast<u64>(static_cast<u128>(x % p) * inv % p);
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || A[i][c] % p == 0) continue;
      u64 f = A[i][c] % p;
      for (size_t j = 0; j < cols; ++j)
        A[i][j] = (A[i][j] % p + p - static_cast<u64>(static_cast<u128>(f) * A[r][j] % p)) % p;
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return pivots;
}

}  // namespace

int rank_mod_p(Matrix A, u64 p) { return static_cast<int>(rref(A, p).size()); }

std::optional<std::vector<u64>> solve_mod_p(const Matrix& A, const std::vector<u64>& b, u64 p) {
  const size_t rows = A.size();
  const size_t cols = rows ? A[0].size() : 0;
  Matrix aug(rows, std::vector<u64>(cols + 1));
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) aug[i][j] = A[i][j] % p;
    aug[i][cols] = b[i] % p;
  }
  auto piv = rref(aug, p);
  std::vector<u64> x(cols, 0);
  for (size_t k = 0; k < piv.size(); ++k) {
    if (static_cast<size_t>(piv[k]) == cols) return std::nullopt;
    x[piv[k]] = aug[k][cols];
  }
  return x;
}

Matrix row_basis_mod_p(Matrix rows, u64 p) {
  auto piv = rref(rows, p);
  rows.resize(piv.size());
  return rows;
}

std::vector<int> smith_valuations(Matrix A, const ResidueRing& ring) {
  std::vector<int> out;
  if (A.empty()) return out;
  const int k = ring.digits();
  const u64 p = ring.p();
  size_t rows = A.size(), cols = A[0].size();
  for (auto& row : A)
    for (auto& x : row) x %= ring.modulus();
  size_t t = 0;
  while (t < rows && t < cols) {
    // pivot of minimal valuation in the remaining block
    int best = k;
    size_t bi = 0, bj = 0;
    for (size_t i = t; i < rows; ++i)
      for (size_t j = t; j < cols; ++j) {
        int v = ring.val(A[i][j], k);
        if (v < best) best = v, bi = i, bj = j;
      }
    if (best >= k) break;
    std::swap(A[t], A[bi]);
    for (auto& row : A) std::swap(row[t], row[bj]);
    // pivot = p^best * unit
    u64 unit = A[t][t] / ring.power(best);
    u64 uinv = ring.inv(unit);
    for (size_t i = t + 1; i < rows; ++i) {
      if (A[i][t] == 0) continue;
      u64 f = ring.mul(A[i][t] / ring.power(best), uinv);
      for (size_t j = t; j < cols; ++j) A[i][j] = ring.sub(A[i][j], ring.mul(f, A[t][j]));
    }
    for (size_t j = t + 1; j < cols; ++j) {
      if (A[t][j] == 0) continue;
      u64 f = ring.mul(A[t][j] / ring.power(best), uinv);
      for (size_t i = t; i < rows; ++i) A[i][j] = ring.sub(A[i][j], ring.mul(f, A[i][t]));
    }
    out.push_back(best);
    ++t;
  }
  (void)p;
  return out;
}

}  // namespace fgm
