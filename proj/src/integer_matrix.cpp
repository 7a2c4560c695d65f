#include "epscov/integer_matrix.hpp"

#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace epscov {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in matrix reduction");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in matrix reduction");
  return r;
}

namespace {

// row_dst -= q * row_src
void row_sub(IntRow& dst, const IntRow& src, std::int64_t q) {
  if (q == 0) return;
  for (std::size_t j = 0; j < dst.size(); ++j)
    if (src[j] != 0) dst[j] = checked_add(dst[j], -checked_mul(q, src[j]));
}

void col_sub(IntMatrix& M, std::size_t dst, std::size_t src, std::int64_t q) {
  if (q == 0) return;
  for (auto& row : M)
    if (row[src] != 0) row[dst] = checked_add(row[dst], -checked_mul(q, row[src]));
}

void col_swap(IntMatrix& M, std::size_t a, std::size_t b) {
  for (auto& row : M) std::swap(row[a], row[b]);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

SmithForm smith_normal_form(IntMatrix A, std::size_t cols) {
  const std::size_t m = A.size();
  SmithForm out;
  out.V.assign(cols, IntRow(cols, 0));
  for (std::size_t i = 0; i < cols; ++i) out.V[i][i] = 1;
  out.diagonal.assign(cols, 0);
  std::size_t t = 0;
  while (t < m && t < cols) {
    std::size_t pi = m, pj = cols;
    std::int64_t best = 0;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < cols; ++j) {
        std::int64_t v = std::llabs(A[i][j]);
        if (v != 0 && (best == 0 || v < best)) {
          best = v;
          pi = i;
          pj = j;
          if (best == 1) break;
        }
      }
    if (best == 0) break;
    std::swap(A[t], A[pi]);
    if (pj != t) {
      col_swap(A, t, pj);
      col_swap(out.V, t, pj);
    }
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (A[i][t] == 0) continue;
        row_sub(A[i], A[t], A[i][t] / A[t][t]);
        if (A[i][t] != 0) {
          std::swap(A[i], A[t]);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (A[t][j] == 0) continue;
        std::int64_t q = A[t][j] / A[t][t];
        col_sub(A, j, t, q);
        col_sub(out.V, j, t, q);
        if (A[t][j] != 0) {
          col_swap(A, t, j);
          col_swap(out.V, t, j);
          clean = false;
        }
      }
      if (!clean) continue;
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (A[i][j] % A[t][t] != 0) {
            row_sub(A[t], A[i], -1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (A[t][t] < 0)
      for (auto& x : A[t]) x = -x;
    out.diagonal[t] = A[t][t];
    ++t;
  }
  return out;
}

namespace {

IntMatrix hnf_on(IntMatrix A, std::size_t pivot_cols, std::size_t* rank_out) {
  std::size_t r = 0;
  const std::size_t m = A.size();
  for (std::size_t c = 0; c < pivot_cols && r < m; ++c) {
    for (std::size_t i = r + 1; i < m; ++i) {
      while (A[i][c] != 0) {
        row_sub(A[r], A[i], A[r][c] / A[i][c]);
        std::swap(A[r], A[i]);
      }
    }
    if (A[r][c] == 0) continue;
    if (A[r][c] < 0)
      for (auto& x : A[r]) x = -x;
    for (std::size_t i = 0; i < r; ++i) row_sub(A[i], A[r], floor_div(A[i][c], A[r][c]));
    ++r;
  }
  if (rank_out) *rank_out = r;
  return A;
}

}  // namespace

IntMatrix hermite_normal_form(IntMatrix A, std::size_t cols) {
  std::size_t r = 0;
  A = hnf_on(std::move(A), cols, &r);
  A.resize(r);
  return A;
}

IntMatrix left_kernel(const IntMatrix& A, std::size_t cols) {
  const std::size_t m = A.size();
  IntMatrix aug(m, IntRow(cols + m, 0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < cols; ++j) aug[i][j] = A[i][j];
    aug[i][cols + i] = 1;
  }
  std::size_t r = 0;
  aug = hnf_on(std::move(aug), cols, &r);
  IntMatrix ker;
  for (std::size_t i = r; i < m; ++i) ker.emplace_back(aug[i].begin() + static_cast<std::ptrdiff_t>(cols), aug[i].end());
  return hermite_normal_form(std::move(ker), m);
}

}  // namespace epscov
