// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "schutzkit/errors.hpp"
#include "schutzkit/recognition.hpp"
#include "support.hpp"

using namespace schutzkit;
using schutzkit::testing::corpus_pairs;
using schutzkit::testing::CorpusEntry;
using schutzkit::testing::random_assignment;
using schutzkit::testing::random_language;
using schutzkit::testing::Rng;

namespace {

constexpr std::size_t kBound = 8;
const std::string kAlphabet = "ab";

struct Outcome {
  bool ok = true;
  std::string detail;
  std::size_t checks = 0;

  void expect(bool cond, const std::string& what) {
    ++checks;
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

std::string pair_name(const CorpusEntry& a, const CorpusEntry& b) { return a.name + "<>" + b.name; }

// Brute-force language oracles, independent of the library's evaluation.
TruncLanguage brute_recognized(const LetterAssignment& f, const Valuation& v, const WordSpace& space) {
  return TruncLanguage::from_function(space, Semiring::for_variety(f.target.variety()), [&](std::string_view w) {
    Elem x = f.target.unit();
    for (char c : w) x = f.target.mult(x, f.images[f.alphabet.find(c)]);
    return v(x);
  });
}

TruncLanguage brute_marked(const TruncLanguage& k, char a, const TruncLanguage& l) {
  const Semiring& s = k.semiring();
  return TruncLanguage::from_function(k.space(), s, [&](std::string_view u) {
    Scalar acc = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i] == a) acc = s.add(acc, s.mul(k(u.substr(0, i)), l(u.substr(i + 1))));
    return acc;
  });
}

bool is_constant(const TruncLanguage& l) {
  for (std::size_t i = 1; i < l.space().size(); ++i)
    if (l.at(i) != l.at(0)) return false;
  return true;
}

// 1. Size law for SET pairs with |M|, |N| <= 3.
Outcome size_law() {
  Outcome o;
  for (const auto& [a, b] : corpus_pairs()) {
    if (a.monoid.variety().kind() != VarietyKind::Set || a.monoid.size() > 3 || b.monoid.size() > 3) continue;
    const std::size_t m = a.monoid.size(), n = b.monoid.size();
    const std::size_t got = schutzenberger(a.monoid, b.monoid).size();
    o.expect(got == m * (std::size_t{1} << (m * n)) * n, pair_name(a, b) + " has " + std::to_string(got));
  }
  const std::size_t z2 =
      schutzenberger(schutzkit::testing::corpus_monoid("set_z2"), schutzkit::testing::corpus_monoid("set_z2")).size();
  o.detail = "|Z2<>Z2| = " + std::to_string(z2) + " = 2*2^4*2";
  return o;
}

// 2. schurec witnesses against brute-force K, L, KaL.
Outcome schurec() {
  Outcome o;
  Rng rng(2);
  const WordSpace space(kAlphabet, kBound);
  for (const auto& [a, b] : corpus_pairs()) {
    const SchutzProduct s = schutzenberger(a.monoid, b.monoid);
    const auto g = random_assignment(kAlphabet, a.monoid, rng);
    const auto h = random_assignment(kAlphabet, b.monoid, rng);
    const auto& pv = s.star().left_valuations();
    const auto& qv = s.star().right_valuations();
    for (std::size_t p = 0; p < pv.size(); ++p) {
      const TruncLanguage k = brute_recognized(g, pv[p], space);
      for (std::size_t q = 0; q < qv.size(); ++q) {
        const TruncLanguage l = brute_recognized(h, qv[q], space);
        for (char mark : kAlphabet) {
          const auto res = schurec_witness(s, g, p, h, q, mark, space);
          const TruncLanguage kal = brute_marked(k, mark, l);
          const std::string where = pair_name(a, b) + " p=" + std::to_string(p) + " q=" + std::to_string(q) +
                                    " mark " + mark;
          o.expect(res.report.passed(), where + ": " + res.report.counterexample.value_or(""));
          o.expect(brute_recognized(res.f, res.k.valuation, space) == k, where + ": K");
          o.expect(brute_recognized(res.f, res.l.valuation, space) == l, where + ": L");
          o.expect(brute_recognized(res.f, res.kal.valuation, space) == kal, where + ": KaL");
          o.expect(is_valuation(s.monoid().carrier(), res.kal.valuation), where + ": KaL valuation");
        }
      }
    }
  }
  return o;
}

// 3. Sum formula for 20 seeded assignments per pair.
Outcome reutenauer() {
  Outcome o;
  Rng rng(3);
  for (const auto& [a, b] : corpus_pairs()) {
    const SchutzProduct s = schutzenberger(a.monoid, b.monoid);
    for (int i = 0; i < 20; ++i) {
      const auto f = random_assignment(kAlphabet, s.monoid(), rng);
      const auto r = reutenauer_check(s, f, kBound);
      o.expect(r.passed(), pair_name(a, b) + " fails at " + r.counterexample.value_or(""));
    }
  }
  return o;
}

// 4. Middle-language decomposition for all valuation pairs.
Outcome decompose() {
  Outcome o;
  Rng rng(4);
  for (const auto& [a, b] : corpus_pairs()) {
    const SchutzProduct s = schutzenberger(a.monoid, b.monoid);
    for (int i = 0; i < 2; ++i) {
      const auto f = random_assignment(kAlphabet, s.monoid(), rng);
      for (std::size_t p = 0; p < s.star().left_valuations().size(); ++p)
        for (std::size_t q = 0; q < s.star().right_valuations().size(); ++q) {
          const auto d = decompose_middle(s, f, p, q, kBound);
          o.expect(d.report.passed(), pair_name(a, b) + " fails at " + d.report.counterexample.value_or(""));
          o.expect(c_op_apply(d.expr, d.env) ==
                       brute_recognized(f, Valuation{[&] {
                                          std::vector<Scalar> v(s.size());
                                          const Valuation mid = s.middle().middle_valuation(p, q);
                                          for (Elem x = 0; x < s.size(); ++x) v[x] = mid(s.middle_of(x));
                                          return v;
                                        }()},
                                        WordSpace(kAlphabet, kBound)),
                   pair_name(a, b) + ": expression differs from the brute-force middle language");
        }
    }
  }
  return o;
}

// 5. Closure without derivatives.
Outcome closure() {
  Outcome o;
  Rng rng(5);
  std::size_t sampled = 0, languages = 0;
  for (const auto& [a, b] : corpus_pairs()) {
    const SchutzProduct s = schutzenberger(a.monoid, b.monoid);
    const auto f = random_assignment(kAlphabet, s.monoid(), rng);
    const auto r = closure_check(s, f, ClosureMode::WithoutDerivatives, kBound, 5);
    o.expect(r.passed(), pair_name(a, b) + ": " + to_string(r.verdict) + " " + r.counterexample.value_or(""));
    o.expect(!r.witnesses.empty(), pair_name(a, b) + ": no witnesses");
    sampled += r.sampled;
    languages += r.witnesses.size();
  }
  if (o.ok) o.detail = std::to_string(languages) + " languages with witnesses, " + std::to_string(sampled) +
                       " instances sampled";
  return o;
}

// 6. Closed-subset semiring against the star product (JSL).
Outcome klima_polak() {
  Outcome o;
  for (const auto& [a, b] : corpus_pairs()) {
    if (a.monoid.variety().kind() != VarietyKind::Jsl) continue;
    const StarProduct sp = star_product(a.monoid, b.monoid);
    const ClosedSemiring cs = jsl_closed_semiring(a.monoid, b.monoid);
    o.expect(is_isomorphism(sp.monoid(), cs.monoid, star_to_closed(sp, cs)), pair_name(a, b));
  }
  const auto bb = schutzkit::testing::corpus_monoid("jsl_boolean");
  o.expect(star_product(bb, bb).size() == 2, "B*B does not have 2 elements");
  return o;
}

// 7. Separating families and the VECT rank test.
Outcome separation() {
  Outcome o;
  for (const auto& [a, b] : corpus_pairs()) {
    const StarProduct sp = star_product(a.monoid, b.monoid);
    switch (a.monoid.variety().kind()) {
      case VarietyKind::Set:
      case VarietyKind::Pos:
        o.expect(is_separating(sp.coordinate_family(), sp.monoid().carrier()), pair_name(a, b));
        break;
      case VarietyKind::Vect:
        o.expect(separation_rank(sp) == a.monoid.carrier().dimension() * b.monoid.carrier().dimension(),
                 pair_name(a, b));
        break;
      case VarietyKind::Jsl: break;
    }
  }
  return o;
}

// 8. Tensor oracle.
Outcome tensor() {
  Outcome o;
  const FiniteObject two = schutzkit::testing::corpus_monoid("jsl_boolean").carrier();
  const TensorOracle t = tensor_jsl_oracle(two, two);
  o.expect(t.carrier.size() == 2, "2 (x) 2 has " + std::to_string(t.carrier.size()) + " elements");
  if (t.carrier.size() == 2) {
    // bottom -> 0, t(1, 1) -> 1
    std::vector<Elem> iso(2);
    iso[t.carrier.bottom()] = 0;
    iso[t.pure[1 + 2 * 1]] = 1;
    o.expect(t.pure[1 + 2 * 1] != t.carrier.bottom() && is_structure_morphism(t.carrier, two, iso),
             "2 (x) 2 is not isomorphic to 2");
  }
  for (const auto& [a, b] : corpus_pairs()) {
    if (a.monoid.variety().kind() != VarietyKind::Jsl) continue;
    const auto r = tensor_image_matches_star(tensor_jsl_oracle(a.monoid.carrier(), b.monoid.carrier()),
                                             star_product(a.monoid, b.monoid));
    o.expect(r.ok(), pair_name(a, b) + ": " + (r.ok() ? "" : r.violations.front()));
  }
  return o;
}

// 9. Derivative identities on 50 seeded instances per variety.
Outcome derivatives() {
  Outcome o;
  Rng rng(9);
  const WordSpace space(kAlphabet, kBound);
  for (const Variety& v : {Variety::set(), Variety::pos(), Variety::jsl(), Variety::vect(2), Variety::vect(3)}) {
    const Semiring s = Semiring::for_variety(v);
    for (int i = 0; i < 50; ++i) {
      const auto k = random_language(space, s, rng);
      const auto l = random_language(space, s, rng);
      const char a = kAlphabet[rng.below(2)];
      const char b = a == 'a' ? 'b' : 'a';
      const auto kal = brute_marked(k, a, l);
      const auto lt = truncate(l, kBound - 1);
      const auto lhs_a = derivative(kal, a, Side::Left);
      const auto rhs_a = add(marked_product(derivative(k, a, Side::Left), a, lt), scale(k(""), lt));
      o.expect(lhs_a == rhs_a, v.name() + ": a-derivative differs at " + first_difference(lhs_a, rhs_a).value_or(""));
      const auto lhs_b = derivative(kal, b, Side::Left);
      const auto rhs_b = marked_product(derivative(k, b, Side::Left), a, lt);
      o.expect(lhs_b == rhs_b, v.name() + ": b-derivative differs at " + first_difference(lhs_b, rhs_b).value_or(""));
    }
  }
  return o;
}

// 10. Universal property with the image corestriction and the trivial monoid.
Outcome universal() {
  Outcome o;
  Rng rng(10);
  const WordSpace space(kAlphabet, kBound);
  std::size_t violations = 0;
  for (const auto& [a, b] : corpus_pairs()) {
    const SchutzProduct s = schutzenberger(a.monoid, b.monoid);
    const auto f = random_assignment(kAlphabet, s.monoid(), rng);
    const auto e = image_of_free_morphism(f).corestriction;
    const auto res = universal_property_check(s, f, e, kBound);
    // The corestriction always factors f; the L_MN hypothesis may still fail.
    o.expect(res.h.has_value() && res.report.verdict != Verdict::Fail,
             pair_name(a, b) + ": " + res.report.counterexample.value_or(""));
    if (res.h) {
      o.expect(is_monoid_morphism(e.target, s.monoid(), *res.h), pair_name(a, b) + ": h is not a morphism");
      for (std::size_t w = 0; w < space.size(); ++w) {
        const std::string word = space.word(w);
        if ((*res.h)[eval_word(e, word)] != eval_word(f, word)) {
          o.expect(false, pair_name(a, b) + ": h o e != f at " + word);
          break;
        }
      }
    }
    const LetterAssignment trivial{kAlphabet, DMonoid::trivial(a.monoid.variety()),
                                   std::vector<Elem>(kAlphabet.size(), 0)};
    const auto lmn = lmn_set(s, f, space);
    bool nonconstant = false;
    for (const auto* list : {&lmn.k_list, &lmn.l_list, &lmn.products})
      for (const auto& entry : *list) nonconstant |= !is_constant(entry.language);
    const auto tr = universal_property_check(s, f, trivial, kBound);
    if (nonconstant) {
      ++violations;
      o.expect(tr.report.verdict == Verdict::PreconditionViolated, pair_name(a, b) + ": trivial e accepted");
    } else {
      o.expect(tr.report.passed(), pair_name(a, b) + ": trivial e rejected with constant L_MN");
    }
  }
  if (o.ok) o.detail = std::to_string(violations) + " trivial-e precondition violations reported";
  return o;
}

// 11. Validity of every constructed structure.
Outcome structures() {
  Outcome o;
  for (const auto& [a, b] : corpus_pairs()) {
    const std::string where = pair_name(a, b);
    const StarProduct sp = star_product(a.monoid, b.monoid);
    const auto rs = validate_dmonoid(sp.monoid());
    o.expect(rs.ok(), where + " star: " + (rs.ok() ? "" : rs.violations.front()));
    const LiftedSAlgebra lift = lift_algebra(sp);
    const auto rl = validate_salgebra(lift.algebra());
    o.expect(rl.ok(), where + " lift: " + (rl.ok() ? "" : rl.violations.front()));
    const SchutzProduct s = schutzenberger(a.monoid, b.monoid);
    const auto rt = validate_dmonoid(s.monoid());
    o.expect(rt.ok(), where + " triangular: " + (rt.ok() ? "" : rt.violations.front()));
    const auto rz = validate_schutz_structure(s);
    o.expect(rz.ok(), where + " structure: " + (rz.ok() ? "" : rz.violations.front()));
    o.expect(is_monoid_morphism(s.monoid(), a.monoid, s.left_projection()), where + ": left projection");
    o.expect(is_monoid_morphism(s.monoid(), b.monoid, s.right_projection()), where + ": right projection");
  }
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"size law (SET)", size_law},
      {"marked-product recognition witnesses", schurec},
      {"middle-component sum formula", reutenauer},
      {"middle-language decomposition", decompose},
      {"closure of L_MN without derivatives", closure},
      {"closed-subset semiring vs M*N (JSL)", klima_polak},
      {"separating families and VECT rank", separation},
      {"tensor oracle", tensor},
      {"derivative identities", derivatives},
      {"universal property", universal},
      {"structure validity", structures},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream line;
    line << (o.ok ? "PASS" : "FAIL") << " " << index << " " << name << " (" << o.checks << " checks, "
         << static_cast<int>(secs * 1000) << " ms)";
    if (!o.detail.empty()) line << ": " << o.detail;
    std::cout << line.str() << std::endl;
    failed += !o.ok;
  }
  return failed == 0 ? 0 : 1;
}
