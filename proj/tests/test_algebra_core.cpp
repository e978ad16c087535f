#include <gtest/gtest.h>

#include <set>

#include "schutzkit/algebra_core.hpp"
#include "schutzkit/errors.hpp"
#include "support.hpp"

using namespace schutzkit;
using schutzkit::testing::Rng;

namespace {

// Brute-force oracle: every map obj -> S that satisfies the morphism laws,
// checked pointwise without going through the library's enumeration.
std::vector<Valuation> brute_valuations(const FiniteObject& obj) {
  const Semiring s = Semiring::for_variety(obj.variety());
  const std::size_t n = obj.size();
  const std::uint32_t q = s.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= q;
  std::vector<Valuation> out;
  for (std::size_t code = 0; code < total; ++code) {
    Valuation v{std::vector<Scalar>(n)};
    std::size_t c = code;
    for (std::size_t i = 0; i < n; ++i, c /= q) v.values[i] = static_cast<Scalar>(c % q);
    bool ok = true;
    for (Elem x = 0; x < n && ok; ++x)
      for (Elem y = 0; y < n && ok; ++y) {
        switch (obj.variety().kind()) {
          case VarietyKind::Set: break;
          case VarietyKind::Pos: ok = !obj.leq(x, y) || v(x) <= v(y); break;
          case VarietyKind::Jsl:
            ok = v(obj.bottom()) == 0 && v(obj.join(x, y)) == (v(x) | v(y));
            break;
          case VarietyKind::Vect:
            ok = v(obj.add(x, y)) == s.add(v(x), v(y));
            for (Scalar k = 0; k < q && ok; ++k) ok = v(obj.scale(k, x)) == s.mul(k, v(x));
            break;
        }
      }
    if (ok) out.push_back(std::move(v));
  }
  std::sort(out.begin(), out.end());
  return out;
}

FiniteObject chain(std::size_t n) {
  std::vector<std::pair<Elem, Elem>> pairs;
  for (Elem i = 0; i + 1 < n; ++i) pairs.emplace_back(i, i + 1);
  return FiniteObject::poset(n, pairs);
}

FiniteObject chain_semilattice(std::size_t n) {
  std::vector<Elem> join(n * n);
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) join[x * n + y] = std::max(x, y);
  return FiniteObject::semilattice(n, std::move(join), 0);
}

// Random poset: the order closure of random pairs (x, y) with x < y.
FiniteObject random_poset(std::size_t n, Rng& rng) {
  std::vector<std::pair<Elem, Elem>> pairs;
  for (Elem x = 0; x < n; ++x)
    for (Elem y = x + 1; y < n; ++y)
      if (rng.below(3) == 0) pairs.emplace_back(x, y);
  return FiniteObject::poset(n, pairs);
}

}  // namespace

TEST(Variety, PrimesAndNames) {
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(7));
  EXPECT_FALSE(is_prime(1));
  EXPECT_FALSE(is_prime(9));
  EXPECT_EQ(Variety::vect(3).name(), "vect");
  EXPECT_EQ(Variety::pos().name(), "pos");
  try {
    Variety::vect(4);
    FAIL() << "modulus 4 accepted";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("modulus must be prime"), std::string::npos);
  }
}

TEST(Semiring, BooleanAndPrimeField) {
  const Semiring b = Semiring::for_variety(Variety::jsl());
  EXPECT_EQ(b.add(1, 1), 1u);
  EXPECT_EQ(b.mul(1, 0), 0u);
  EXPECT_TRUE(b.leq(0, 1));
  EXPECT_FALSE(Semiring::for_variety(Variety::set()).leq(0, 1));
  const Semiring f5 = Semiring::for_variety(Variety::vect(5));
  EXPECT_EQ(f5.add(3, 4), 2u);
  EXPECT_EQ(f5.mul(3, 4), 2u);
  EXPECT_EQ(f5.neg(2), 3u);
}

TEST(FiniteObject, PosetClosureIsTransitive) {
  const FiniteObject c = chain(4);
  EXPECT_TRUE(c.leq(0, 3));
  EXPECT_FALSE(c.leq(3, 0));
  EXPECT_TRUE(validate_object(c).ok());
  const FiniteObject cyc = FiniteObject::poset(2, {{0, 1}, {1, 0}});
  EXPECT_FALSE(validate_object(cyc).ok());
}

TEST(FiniteObject, BadJoinTableIsReported) {
  // join(0, 1) = 0 but join(1, 0) = 1
  const FiniteObject bad = FiniteObject::semilattice(2, {0, 0, 1, 1}, 0);
  EXPECT_FALSE(validate_object(bad).ok());
}

TEST(FiniteObject, VectorCoordinatesRoundTrip) {
  const FiniteObject v = FiniteObject::vector_space(3, 2);
  EXPECT_EQ(v.size(), 9u);
  for (Elem x = 0; x < v.size(); ++x) EXPECT_EQ(v.from_coords(v.coords(x)), x);
  EXPECT_EQ(v.coords(v.add(v.basis(0), v.scale(2, v.basis(1)))), (std::vector<Scalar>{1, 2}));
  EXPECT_THROW(FiniteObject::vector_space(2, 13), SizeGuardError);
}

TEST(FiniteObject, ProductEncodingAndOrder) {
  const FiniteObject grid = FiniteObject::product({chain(2), chain(2)});
  ASSERT_EQ(grid.size(), 4u);
  // id x0 + 2 x1
  EXPECT_TRUE(grid.leq(1, 3));
  EXPECT_FALSE(grid.leq(1, 2));
  EXPECT_TRUE(validate_object(grid).ok());
  const FiniteObject vs = FiniteObject::product({FiniteObject::vector_space(2, 1), FiniteObject::vector_space(2, 2)});
  EXPECT_EQ(vs.dimension(), 3u);
  EXPECT_THROW(FiniteObject::product({chain(2), FiniteObject::set(2)}), InputError);
}

TEST(Valuations, GridHasSixUpperSets) {
  const FiniteObject grid = FiniteObject::product({chain(2), chain(2)});
  EXPECT_EQ(enumerate_valuations(grid).size(), 6u);
}

TEST(Valuations, CountsPerVariety) {
  EXPECT_EQ(enumerate_valuations(FiniteObject::set(3)).size(), 8u);
  EXPECT_EQ(enumerate_valuations(chain(3)).size(), 4u);
  EXPECT_EQ(enumerate_valuations(chain_semilattice(3)).size(), 3u);
  EXPECT_EQ(enumerate_valuations(FiniteObject::vector_space(3, 2)).size(), 9u);
  EXPECT_THROW(enumerate_valuations(FiniteObject::set(12), 1000), SizeGuardError);
}

TEST(Valuations, MatchBruteForceOnCorpusCarriers) {
  for (const auto& e : schutzkit::testing::corpus()) {
    const auto& obj = e.monoid.carrier();
    const auto got = enumerate_valuations(obj);
    EXPECT_EQ(got, brute_valuations(obj)) << e.name;
    EXPECT_TRUE(std::is_sorted(got.begin(), got.end())) << e.name;
    for (const auto& v : got) EXPECT_TRUE(is_valuation(obj, v)) << e.name;
    EXPECT_TRUE(is_separating(got, obj)) << e.name;
  }
}

TEST(Valuations, MatchBruteForceOnRandomPosets) {
  Rng rng(11);
  for (int round = 0; round < 40; ++round) {
    const FiniteObject p = random_poset(1 + rng.below(7), rng);
    EXPECT_EQ(enumerate_valuations(p), brute_valuations(p)) << "round " << round;
  }
}

TEST(Valuations, MatchBruteForceOnSmallVectorSpaces) {
  // The oracle scans all p^(p^d) maps.
  const std::pair<std::uint32_t, std::size_t> spaces[] = {{2, 0}, {2, 1}, {2, 2}, {2, 3}, {3, 0},
                                                          {3, 1}, {3, 2}, {5, 1}, {7, 1}};
  for (const auto& [p, d] : spaces) {
    const FiniteObject v = FiniteObject::vector_space(p, d);
    EXPECT_EQ(enumerate_valuations(v), brute_valuations(v)) << p << "^" << d;
  }
}

TEST(Separation, DetectsCollapsedFamilies) {
  const FiniteObject s = FiniteObject::set(3);
  const std::vector<Valuation> one{{{1, 0, 0}}};
  EXPECT_FALSE(is_separating(one, s));
  const std::vector<Valuation> two{{{1, 0, 0}}, {{0, 1, 0}}};
  EXPECT_TRUE(is_separating(two, s));
  // On a 2-chain, the constant family cannot reflect 0 < 1.
  const std::vector<Valuation> constant{{{1, 1}}};
  EXPECT_FALSE(is_separating(constant, chain(2)));
}

TEST(Morphisms, StructureMorphismsPerVariety) {
  const FiniteObject c2 = chain(2);
  const std::vector<Elem> swap{1, 0};
  EXPECT_FALSE(is_structure_morphism(c2, c2, swap));
  EXPECT_TRUE(is_structure_morphism(FiniteObject::set(2), FiniteObject::set(2), swap));
  const FiniteObject v = FiniteObject::vector_space(2, 1);
  const std::vector<Elem> to_one{1, 1};
  EXPECT_FALSE(is_structure_morphism(v, v, to_one));
}
