#pragma once

#include <optional>
#include <span>
#include <vector>

#include "schutzkit/algebra_core.hpp"

/// Dense linear algebra over the prime field GF(p).
namespace schutzkit::gfp {

using Vector = std::vector<Scalar>;

Scalar inverse(Scalar a, Scalar p);

/// Rank of the matrix with the given rows.
std::size_t rank(std::vector<Vector> rows, Scalar p);

/// Coefficients c with sum_j c_j * columns[j] == target, or nullopt.
///
/// Elimination picks pivots in increasing column order and sets free
/// variables to zero, so the solution is deterministic.
std::optional<Vector> solve(const std::vector<Vector>& columns, std::span<const Scalar> target,
                            Scalar p);

/// Indices of a maximal linearly independent prefix-greedy subset: vector i
/// is kept iff it is independent of the kept vectors before it.
std::vector<std::size_t> greedy_basis(const std::vector<Vector>& vectors, Scalar p);

}  // namespace schutzkit::gfp
