#pragma once

// Dense linear algebra over F_p and Z/p^k.

#include <optional>
#include <vector>

#include "fgm/modular.hpp"

namespace fgm {

using Matrix = std::vector<std::vector<u64>>;

/// Rank over F_p.
int rank_mod_p(Matrix A, u64 p);

/// Some x with A x = b over F_p, or nullopt when b is not in the image.
std::optional<std::vector<u64>> solve_mod_p(const Matrix& A, const std::vector<u64>& b, u64 p);

/// Reduces `rows` to a basis of their span over F_p (row echelon form).
Matrix row_basis_mod_p(Matrix rows, u64 p);

/// Smith normal form over Z/p^k: the diagonal entries as valuations
/// v_1 <= v_2 <= ..., one per nonzero invariant factor p^v with v < k.
/// Entries equal to p^k (zero) are not listed.
std::vector<int> smith_valuations(Matrix A, const ResidueRing& ring);

}  // namespace fgm
