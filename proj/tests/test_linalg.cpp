#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <gmpxx.h>

#include <algorithm>
#include <random>

#include "fgm/linalg.hpp"

using namespace fgm;

namespace {

mpz_class det(const std::vector<std::vector<i64>>& A) {
  const size_t n = A.size();
  if (n == 1) return A[0][0];
  mpz_class s = 0;
  for (size_t c = 0; c < n; ++c) {
    std::vector<std::vector<i64>> m;
    for (size_t r = 1; r < n; ++r) {
      std::vector<i64> row;
      for (size_t j = 0; j < n; ++j)
        if (j != c) row.push_back(A[r][j]);
      m.push_back(row);
    }
    mpz_class t = det(m) * A[0][c];
    s += (c % 2 ? -t : t);
  }
  return s;
}

int vp(mpz_class z, u64 p, int cap) {
  if (z == 0) return cap;
  int v = 0;
  while (z % static_cast<unsigned long>(p) == 0 && v < cap) z /= static_cast<unsigned long>(p), ++v;
  return v;
}

// minimal valuation of the k x k minors
int minor_val(const std::vector<std::vector<i64>>& A, int k, u64 p, int cap) {
  const int rows = static_cast<int>(A.size()), cols = static_cast<int>(A[0].size());
  int best = cap;
  std::vector<int> rs(rows, 0), cs(cols, 0);
  std::fill(rs.end() - k, rs.end(), 1);
  do {
    std::fill(cs.begin(), cs.end(), 0);
    std::fill(cs.end() - k, cs.end(), 1);
    do {
      std::vector<std::vector<i64>> m;
      for (int r = 0; r < rows; ++r) {
        if (!rs[r]) continue;
        std::vector<i64> row;
        for (int c = 0; c < cols; ++c)
          if (cs[c]) row.push_back(A[r][c]);
        m.push_back(row);
      }
      best = std::min(best, vp(det(m), p, cap));
    } while (std::next_permutation(cs.begin(), cs.end()));
  } while (std::next_permutation(rs.begin(), rs.end()));
  return best;
}

}  // namespace

TEST_CASE("solving over F_p") {
  Matrix A{{1, 2, 0}, {0, 1, 1}};
  auto x = solve_mod_p(A, {3, 4}, 5);
  REQUIRE(x);
  CHECK(((*x)[0] + 2 * (*x)[1]) % 5 == 3);
  CHECK(((*x)[1] + (*x)[2]) % 5 == 4);
  Matrix B{{1, 1}, {2, 2}};
  CHECK(!solve_mod_p(B, {1, 1}, 3));
  CHECK(rank_mod_p(B, 3) == 1);
  CHECK(row_basis_mod_p(B, 3).size() == 1);
}

TEST_CASE("Smith form matches minors") {
  std::mt19937_64 rng(3);
  for (u64 p : {2u, 3u}) {
    const int k = 5;
    ResidueRing ring(p, k);
    std::uniform_int_distribution<int> d(-6, 6);
    for (int trial = 0; trial < 20; ++trial) {
      int rows = 2 + trial % 3, cols = 3 + trial % 2;
      std::vector<std::vector<i64>> A(rows, std::vector<i64>(cols));
      Matrix M(rows, std::vector<u64>(cols));
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
          A[r][c] = d(rng) * (trial % 4 == 0 ? static_cast<i64>(p) : 1);
          M[r][c] = ring.from_signed(A[r][c]);
        }
      auto v = smith_valuations(M, ring);
      int acc = 0;
      for (int t = 1; t <= std::min(rows, cols); ++t) {
        acc += t <= static_cast<int>(v.size()) ? v[t - 1] : k;
        CHECK(std::min(acc, k) == std::min(minor_val(A, t, p, k), k));
      }
      CHECK(std::is_sorted(v.begin(), v.end()));
    }
  }
}
