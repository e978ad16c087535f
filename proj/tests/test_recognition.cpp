#include <gtest/gtest.h>

#include "schutzkit/errors.hpp"
#include "schutzkit/recognition.hpp"
#include "support.hpp"

using namespace schutzkit;
using schutzkit::testing::corpus_monoid;
using schutzkit::testing::corpus_pairs;
using schutzkit::testing::random_assignment;
using schutzkit::testing::random_language;
using schutzkit::testing::Rng;

namespace {

// First valuation in enumeration order whose language is the target.
std::optional<Valuation> brute_recognizes(const LetterAssignment& f, const TruncLanguage& target) {
  for (const auto& v : enumerate_valuations(f.target.carrier()))
    if (recognized_language(f, v, target.space()) == target) return v;
  return std::nullopt;
}

LetterAssignment named(const DMonoid& m, const std::string& alphabet, const std::vector<std::string>& names) {
  LetterAssignment f{alphabet, m, {}};
  for (const auto& n : names) f.images.push_back(*m.find(n));
  return f;
}

Valuation indicator(const DMonoid& m, const std::vector<std::string>& names) {
  Valuation v{std::vector<Scalar>(m.size(), 0)};
  for (const auto& n : names) v.values[*m.find(n)] = 1;
  return v;
}

}  // namespace

TEST(Recognizes, AgreesWithBruteForce) {
  Rng rng(59);
  const WordSpace space("ab", 5);
  for (const auto& e : schutzkit::testing::corpus()) {
    const Semiring s = Semiring::for_variety(e.monoid.variety());
    const auto vals = enumerate_valuations(e.monoid.carrier());
    for (int round = 0; round < 10; ++round) {
      const auto f = random_assignment("ab", e.monoid, rng);
      const TruncLanguage target = round % 3 == 2 ? random_language(space, s, rng)
                                                  : recognized_language(f, vals[rng.below(vals.size())], space);
      EXPECT_EQ(recognizes(f, target), brute_recognizes(f, target)) << e.name << " round " << round;
    }
  }
}

TEST(Recognizes, ContainsAInB2) {
  const DMonoid b2 = corpus_monoid("set_b2");
  const auto f = named(b2, "ab", {"0", "1"});
  const WordSpace space("ab", 8);
  const auto target = TruncLanguage::from_function(space, Semiring::for_variety(Variety::set()),
                                                   [](std::string_view w) { return w.find('a') != w.npos ? 1u : 0u; });
  const auto v = recognizes(f, target);
  ASSERT_TRUE(v);
  EXPECT_EQ(*v, indicator(b2, {"0"}));
}

TEST(Schurec, EvenLengthThenContainsB) {
  const DMonoid z2 = corpus_monoid("set_z2");
  const DMonoid b2 = corpus_monoid("set_b2");
  const SchutzProduct s = schutzenberger(z2, b2);
  const auto g = named(z2, "ab", {"g", "g"});
  const auto h = named(b2, "ab", {"1", "0"});
  const WordSpace space("ab", 8);
  const Semiring bs = Semiring::for_variety(Variety::set());
  const auto& pv = s.star().left_valuations();
  const auto& qv = s.star().right_valuations();
  const std::size_t p = std::find(pv.begin(), pv.end(), indicator(z2, {"1"})) - pv.begin();
  const std::size_t q = std::find(qv.begin(), qv.end(), indicator(b2, {"0"})) - qv.begin();
  const auto res = schurec_witness(s, g, p, h, q, 'a', space);
  EXPECT_TRUE(res.report.passed()) << res.report.counterexample.value_or("");
  const auto even = TruncLanguage::from_function(space, bs, [](std::string_view w) { return w.size() % 2 == 0; });
  const auto has_b = TruncLanguage::from_function(space, bs, [](std::string_view w) { return w.find('b') != w.npos; });
  EXPECT_EQ(res.k.language, even);
  EXPECT_EQ(res.l.language, has_b);
  EXPECT_EQ(res.kal.language, marked_product(even, 'a', has_b));
  EXPECT_EQ(recognized_language(res.f, res.kal.valuation, space), res.kal.language);
  EXPECT_TRUE(is_valuation(s.monoid().carrier(), res.kal.valuation));
}

TEST(Schurec, AllValuationPairsOnCorpus) {
  Rng rng(61);
  const WordSpace space("ab", 6);
  for (const auto& [a, b] : corpus_pairs()) {
    const SchutzProduct s = schutzenberger(a.monoid, b.monoid);
    const auto g = random_assignment("ab", a.monoid, rng);
    const auto h = random_assignment("ab", b.monoid, rng);
    for (std::size_t p = 0; p < s.star().left_valuations().size(); ++p)
      for (std::size_t q = 0; q < s.star().right_valuations().size(); ++q) {
        const auto res = schurec_witness(s, g, p, h, q, 'b', space);
        ASSERT_TRUE(res.report.passed()) << a.name << "<>" << b.name << " " << res.report.counterexample.value_or("");
      }
  }
}

TEST(Reutenauer, PassesOnCorpus) {
  Rng rng(67);
  for (const auto& [a, b] : corpus_pairs()) {
    const SchutzProduct s = schutzenberger(a.monoid, b.monoid);
    for (int round = 0; round < 3; ++round) {
      const auto f = random_assignment("ab", s.monoid(), rng);
      const auto r = reutenauer_check(s, f, 6);
      EXPECT_TRUE(r.passed()) << a.name << "<>" << b.name << " " << r.counterexample.value_or("");
    }
  }
}

TEST(Decompose, ExpressionReEvaluates) {
  Rng rng(71);
  for (const auto& [a, b] : corpus_pairs()) {
    const SchutzProduct s = schutzenberger(a.monoid, b.monoid);
    const auto f = random_assignment("ab", s.monoid(), rng);
    for (std::size_t p = 0; p < s.star().left_valuations().size(); ++p)
      for (std::size_t q = 0; q < s.star().right_valuations().size(); ++q) {
        const auto d = decompose_middle(s, f, p, q, 5);
        ASSERT_TRUE(d.report.passed()) << a.name << "<>" << b.name << " " << d.report.counterexample.value_or("");
      }
  }
}

TEST(Lmn, ListsAreDeduplicated) {
  const SchutzProduct s = schutzenberger(corpus_monoid("set_z2"), corpus_monoid("set_z2"));
  // Every letter maps to the unit, so K and L are constant.
  const auto f = schutz_assignment(s, "ab", {0, 0}, {0, 0}, {0, 0});
  const auto lmn = lmn_set(s, f, WordSpace("ab", 4));
  EXPECT_EQ(lmn.k_list.size(), 2u);
  EXPECT_EQ(lmn.l_list.size(), 2u);
  EXPECT_EQ(lmn.products.size(), 2u * 2u * 2u);
}

TEST(Closure, PassesWithoutAndWithDerivatives) {
  Rng rng(73);
  for (const auto& [a, b] : corpus_pairs()) {
    const SchutzProduct s = schutzenberger(a.monoid, b.monoid);
    const auto f = random_assignment("ab", s.monoid(), rng);
    for (ClosureMode mode : {ClosureMode::WithoutDerivatives, ClosureMode::WithDerivatives}) {
      const auto r = closure_check(s, f, mode, 4);
      EXPECT_NE(r.verdict, Verdict::Fail) << a.name << "<>" << b.name << " " << r.counterexample.value_or("");
      if (r.verdict == Verdict::Pass) {
        EXPECT_FALSE(r.witnesses.empty());
      }
    }
  }
}

TEST(Universal, ImageCorestrictionFactorsF) {
  Rng rng(79);
  for (const auto& [a, b] : corpus_pairs()) {
    const SchutzProduct s = schutzenberger(a.monoid, b.monoid);
    const auto f = random_assignment("ab", s.monoid(), rng);
    const auto e = image_of_free_morphism(f).corestriction;
    const auto res = universal_property_check(s, f, e, 6);
    ASSERT_TRUE(res.h) << a.name << "<>" << b.name << " " << res.report.counterexample.value_or("");
    EXPECT_NE(res.report.verdict, Verdict::Fail);
    EXPECT_TRUE(is_monoid_morphism(e.target, s.monoid(), *res.h));
  }
}

TEST(Universal, PassesWhenERecognizesLmn) {
  // Over a one-letter alphabet the marked letter is the only letter, so the
  // schurec assignment recognizes every K a L.
  Rng rng(83);
  for (const auto& [a, b] : corpus_pairs()) {
    const SchutzProduct s = schutzenberger(a.monoid, b.monoid);
    const auto g = random_assignment("a", a.monoid, rng);
    const auto h = random_assignment("a", b.monoid, rng);
    const auto f = schurec_assignment(s, g, h, 'a');
    const auto e = image_of_free_morphism(f).corestriction;
    const auto res = universal_property_check(s, f, e, 6);
    EXPECT_TRUE(res.report.passed()) << a.name << "<>" << b.name << " " << res.report.counterexample.value_or("");
    EXPECT_TRUE(res.h);
  }
}

TEST(Universal, TrivialEViolatesPrecondition) {
  const DMonoid z2 = corpus_monoid("set_z2");
  const SchutzProduct s = schutzenberger(z2, z2);
  const auto f = schutz_assignment(s, "ab", {1, 0}, {0, 0}, {0, 1});
  const LetterAssignment e{"ab", DMonoid::trivial(Variety::set()), {0, 0}};
  const auto res = universal_property_check(s, f, e, 6);
  EXPECT_EQ(res.report.verdict, Verdict::PreconditionViolated);
  EXPECT_FALSE(res.h);
}

TEST(Universal, NonSurjectiveEViolatesPrecondition) {
  const DMonoid z2 = corpus_monoid("set_z2");
  const SchutzProduct s = schutzenberger(z2, z2);
  const auto f = schutz_assignment(s, "ab", {0, 0}, {0, 0}, {0, 0});
  const LetterAssignment e{"ab", z2, {0, 0}};
  EXPECT_EQ(universal_property_check(s, f, e, 4).report.verdict, Verdict::PreconditionViolated);
}

TEST(Reports, FailKeepsFirstCounterexample) {
  VerificationReport r;
  r.fail("ab");
  r.fail("ba");
  EXPECT_EQ(r.verdict, Verdict::Fail);
  EXPECT_EQ(r.counterexample, "ab");
  EXPECT_EQ(to_string(Verdict::PreconditionViolated), "precondition_violated");
}
