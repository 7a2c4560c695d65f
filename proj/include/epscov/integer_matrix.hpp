#pragma once

#include <cstdint>
#include <vector>

namespace epscov {

using IntRow = std::vector<std::int64_t>;
using IntMatrix = std::vector<IntRow>;

// U * A * V = diag(diagonal) with U, V unimodular; only V is kept.
// diagonal has one entry per column; zero entries are free directions.
struct SmithForm {
  std::vector<std::int64_t> diagonal;
  IntMatrix V;
};

SmithForm smith_normal_form(IntMatrix A, std::size_t cols);

// Row Hermite normal form with zero rows dropped. Pivots are positive and the
// entries above each pivot lie in [0, pivot).
IntMatrix hermite_normal_form(IntMatrix A, std::size_t cols);

// Basis (in Hermite form) of { x : x * A = 0 }.
IntMatrix left_kernel(const IntMatrix& A, std::size_t cols);

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

}  // namespace epscov
