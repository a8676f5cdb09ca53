#pragma once

#include <vector>

#include "ffmc/base/integer.hpp"

namespace ffmc {

using IntMatrix = std::vector<std::vector<Integer>>;

/// U * A * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... (non-negative).
struct SmithForm {
  IntMatrix U, V;
  std::vector<Integer> diagonal;  // length min(rows, cols)
};

SmithForm smith_normal_form(const IntMatrix& A, std::size_t cols);

IntMatrix mat_mul(const IntMatrix& A, const IntMatrix& B);
IntMatrix identity_matrix(std::size_t n);

/// Finite abelian group Z^gens / (row span of relations): invariant factors > 1,
/// plus the count of free Z summands.
struct AbelianInvariants {
  std::vector<Integer> torsion;
  std::size_t free_rank = 0;
  Integer order() const;  // throws if free_rank > 0
};

AbelianInvariants abelian_invariants(const IntMatrix& relations, std::size_t gens);

}  // namespace ffmc
