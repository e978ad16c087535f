#include "schutzkit/gfp.hpp"

#include <utility>

#include "schutzkit/errors.hpp"

namespace schutzkit::gfp {

Scalar inverse(Scalar a, Scalar p) {
  a %= p;
  if (a == 0) throw InternalError("inverse of zero in GF(p)");
  // Fermat: a^(p-2)
  Scalar result = 1, base = a, e = p - 2;
  while (e > 0) {
    if (e & 1) result = static_cast<Scalar>((std::uint64_t{result} * base) % p);
    base = static_cast<Scalar>((std::uint64_t{base} * base) % p);
    e >>= 1;
  }
  return result;
}

namespace {

// Row-reduce `m` in place over the first `cols` columns; returns pivot
// column of each pivot row, in order.
std::vector<std::size_t> reduce(std::vector<Vector>& m, std::size_t cols, Scalar p) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    std::size_t r = row;
    while (r < m.size() && m[r][c] % p == 0) ++r;
    if (r == m.size()) continue;
    std::swap(m[row], m[r]);
    const Scalar inv = inverse(m[row][c], p);
    for (auto& x : m[row]) x = static_cast<Scalar>((std::uint64_t{x} * inv) % p);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == row || m[i][c] == 0) continue;
      const Scalar f = m[i][c];
      for (std::size_t j = 0; j < m[i].size(); ++j)
        m[i][j] = static_cast<Scalar>((m[i][j] + std::uint64_t{p - f} * m[row][j]) % p);
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

}  // namespace

std::size_t rank(std::vector<Vector> rows, Scalar p) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  return reduce(rows, cols, p).size();
}

std::optional<Vector> solve(const std::vector<Vector>& columns, std::span<const Scalar> target,
                            Scalar p) {
  const std::size_t n = target.size();
  const std::size_t k = columns.size();
  std::vector<Vector> m(n, Vector(k + 1, 0));
  for (std::size_t j = 0; j < k; ++j) {
    if (columns[j].size() != n) throw InputError("column length mismatch");
    for (std::size_t i = 0; i < n; ++i) m[i][j] = columns[j][i] % p;
  }
  for (std::size_t i = 0; i < n; ++i) m[i][k] = target[i] % p;

  const auto pivots = reduce(m, k, p);
  for (std::size_t i = pivots.size(); i < n; ++i)
    if (m[i][k] != 0) return std::nullopt;

  Vector c(k, 0);
  for (std::size_t r = 0; r < pivots.size(); ++r) c[pivots[r]] = m[r][k];
  return c;
}

std::vector<std::size_t> greedy_basis(const std::vector<Vector>& vectors, Scalar p) {
  std::vector<Vector> echelon;
  std::vector<std::size_t> lead;
  std::vector<std::size_t> kept;
  for (std::size_t idx = 0; idx < vectors.size(); ++idx) {
    Vector v = vectors[idx];
    for (auto& x : v) x %= p;
    for (std::size_t r = 0; r < echelon.size(); ++r) {
      const Scalar f = v[lead[r]];
      if (f == 0) continue;
      for (std::size_t j = 0; j < v.size(); ++j)
        v[j] = static_cast<Scalar>((v[j] + std::uint64_t{p - f} * echelon[r][j]) % p);
    }
    std::size_t c = 0;
    while (c < v.size() && v[c] == 0) ++c;
    if (c == v.size()) continue;
    const Scalar inv = inverse(v[c], p);
    for (auto& x : v) x = static_cast<Scalar>((std::uint64_t{x} * inv) % p);
    // keep earlier rows reduced at the new lead position
    for (std::size_t r = 0; r < echelon.size(); ++r) {
      const Scalar f = echelon[r][c];
      if (f == 0) continue;
      for (std::size_t j = 0; j < v.size(); ++j)
        echelon[r][j] = static_cast<Scalar>((echelon[r][j] + std::uint64_t{p - f} * v[j]) % p);
    }
    echelon.push_back(std::move(v));
    lead.push_back(c);
    kept.push_back(idx);
  }
  return kept;
}

}  // namespace schutzkit::gfp
