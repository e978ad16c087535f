#include <gtest/gtest.h>

#include <set>

#include "schutzkit/gfp.hpp"
#include "support.hpp"

using namespace schutzkit;
using schutzkit::testing::Rng;

namespace {

// All coefficient vectors over GF(p)^k in lexicographic order, with the
// first coordinate least significant.
std::vector<gfp::Vector> all_coefficients(std::size_t k, Scalar p) {
  std::vector<gfp::Vector> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= p;
  for (std::size_t code = 0; code < total; ++code) {
    gfp::Vector c(k);
    std::size_t r = code;
    for (std::size_t i = 0; i < k; ++i, r /= p) c[i] = static_cast<Scalar>(r % p);
    out.push_back(c);
  }
  return out;
}

gfp::Vector combine(const std::vector<gfp::Vector>& cols, const gfp::Vector& c, std::size_t n, Scalar p) {
  gfp::Vector out(n, 0);
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) out[i] = (out[i] + c[j] * cols[j][i]) % p;
  return out;
}

std::vector<gfp::Vector> random_vectors(std::size_t count, std::size_t n, Scalar p, Rng& rng) {
  std::vector<gfp::Vector> v(count, gfp::Vector(n));
  for (auto& x : v)
    for (auto& c : x) c = static_cast<Scalar>(rng.below(p));
  return v;
}

}  // namespace

TEST(Gfp, Inverse) {
  for (Scalar p : {2u, 3u, 5u, 7u, 11u})
    for (Scalar a = 1; a < p; ++a) EXPECT_EQ(a * gfp::inverse(a, p) % p, 1u);
}

TEST(Gfp, RankMatchesSpanSize) {
  Rng rng(3);
  for (int round = 0; round < 60; ++round) {
    const Scalar p = round % 2 ? 3 : 2;
    const std::size_t k = 1 + rng.below(4), n = 1 + rng.below(4);
    const auto rows = random_vectors(k, n, p, rng);
    std::set<gfp::Vector> span;
    for (const auto& c : all_coefficients(k, p)) span.insert(combine(rows, c, n, p));
    std::size_t expected = 0, size = 1;
    while (size < span.size()) size *= p, ++expected;
    EXPECT_EQ(gfp::rank(rows, p), expected);
  }
}

TEST(Gfp, SolveAgreesWithBruteForce) {
  Rng rng(5);
  for (int round = 0; round < 80; ++round) {
    const Scalar p = round % 3 == 0 ? 5 : 2;
    const std::size_t k = 1 + rng.below(3), n = 1 + rng.below(3);
    const auto cols = random_vectors(k, n, p, rng);
    const auto target = random_vectors(1, n, p, rng)[0];
    bool solvable = false;
    for (const auto& c : all_coefficients(k, p)) solvable |= combine(cols, c, n, p) == target;
    const auto sol = gfp::solve(cols, target, p);
    ASSERT_EQ(sol.has_value(), solvable);
    if (sol) {
      EXPECT_EQ(combine(cols, *sol, n, p), target);
    }
  }
}

TEST(Gfp, SolveIsDeterministicWithFreeVariablesZero) {
  // Columns e0, e0: the first pivot is column 0 and column 1 stays free.
  const std::vector<gfp::Vector> cols{{1, 0}, {1, 0}};
  const gfp::Vector target{1, 0};
  EXPECT_EQ(gfp::solve(cols, target, 2), (gfp::Vector{1, 0}));
}

TEST(Gfp, GreedyBasisKeepsFirstIndependent) {
  const std::vector<gfp::Vector> v{{0, 0}, {1, 1}, {2, 2}, {0, 1}, {1, 0}};
  EXPECT_EQ(gfp::greedy_basis(v, 3), (std::vector<std::size_t>{1, 3}));
}
