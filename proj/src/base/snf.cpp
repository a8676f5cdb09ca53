#include "ffmc/base/snf.hpp"

#include <utility>

namespace ffmc {

IntMatrix identity_matrix(std::size_t n) {
  IntMatrix I(n, std::vector<Integer>(n, 0));
  for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

IntMatrix mat_mul(const IntMatrix& A, const IntMatrix& B) {
  if (A.empty()) return {};
  const std::size_t n = A.size(), k = B.size(), m = B.empty() ? 0 : B[0].size();
  IntMatrix C(n, std::vector<Integer>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (A[i][l] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) C[i][j] += A[i][l] * B[l][j];
    }
  return C;
}

namespace {

struct Work {
  IntMatrix A, U, V;
  std::size_t r, c;

  void swap_rows(std::size_t i, std::size_t j) {
    std::swap(A[i], A[j]);
    std::swap(U[i], U[j]);
  }
  void swap_cols(std::size_t i, std::size_t j) {
    for (auto& row : A) std::swap(row[i], row[j]);
    for (auto& row : V) std::swap(row[i], row[j]);
  }
  // row_i -= f * row_j
  void add_row(std::size_t i, std::size_t j, const Integer& f) {
    for (std::size_t k = 0; k < c; ++k) A[i][k] -= f * A[j][k];
    for (std::size_t k = 0; k < r; ++k) U[i][k] -= f * U[j][k];
  }
  void add_col(std::size_t i, std::size_t j, const Integer& f) {
    for (std::size_t k = 0; k < r; ++k) A[k][i] -= f * A[k][j];
    for (std::size_t k = 0; k < c; ++k) V[k][i] -= f * V[k][j];
  }
  void negate_row(std::size_t i) {
    for (auto& x : A[i]) x = -x;
    for (auto& x : U[i]) x = -x;
  }
};

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& A, std::size_t cols) {
  Work w{A, identity_matrix(A.size()), identity_matrix(cols), A.size(), cols};
  const std::size_t n = std::min(w.r, w.c);
  for (std::size_t t = 0; t < n; ++t) {
    while (true) {
      // Pivot: smallest nonzero |entry| in the remaining block.
      std::size_t pi = w.r, pj = w.c;
      Integer best = 0;
      for (std::size_t i = t; i < w.r; ++i)
        for (std::size_t j = t; j < w.c; ++j) {
          const Integer a = abs(w.A[i][j]);
          if (a != 0 && (best == 0 || a < best)) {
            best = a;
            pi = i;
            pj = j;
          }
        }
      if (best == 0) goto done;
      w.swap_rows(t, pi);
      w.swap_cols(t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < w.r; ++i) {
        if (w.A[i][t] == 0) continue;
        w.add_row(i, t, floor_div(w.A[i][t], w.A[t][t]));
        if (w.A[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < w.c; ++j) {
        if (w.A[t][j] == 0) continue;
        w.add_col(j, t, floor_div(w.A[t][j], w.A[t][t]));
        if (w.A[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // Divisibility condition for the rest of the block.
      bool divides = true;
      for (std::size_t i = t + 1; i < w.r && divides; ++i)
        for (std::size_t j = t + 1; j < w.c; ++j)
          if (w.A[i][j] % w.A[t][t] != 0) {
            // Fold row i into row t and retry.
            w.add_row(t, i, Integer(-1));
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (w.A[t][t] < 0) w.negate_row(t);
  }
done:
  SmithForm out;
  out.U = std::move(w.U);
  out.V = std::move(w.V);
  for (std::size_t i = 0; i < n; ++i) out.diagonal.push_back(w.A[i][i]);
  return out;
}

Integer AbelianInvariants::order() const {
  if (free_rank) throw Error(ErrorCode::InvalidArgument, "group is infinite");
  Integer o = 1;
  for (const auto& d : torsion) o *= d;
  return o;
}

AbelianInvariants abelian_invariants(const IntMatrix& relations, std::size_t gens) {
  AbelianInvariants inv;
  if (relations.empty()) {
    inv.free_rank = gens;
    return inv;
  }
  const SmithForm s = smith_normal_form(relations, gens);
  std::size_t nonzero = 0;
  for (const auto& d : s.diagonal) {
    if (d == 0) continue;
    ++nonzero;
    if (d != 1) inv.torsion.push_back(d);
  }
  inv.free_rank = gens - nonzero;
  return inv;
}

}  // namespace ffmc
