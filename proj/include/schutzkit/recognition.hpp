#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "schutzkit/dmonoid.hpp"
#include "schutzkit/languages.hpp"
#include "schutzkit/products.hpp"
#include "schutzkit/words.hpp"

namespace schutzkit {

/// f(w) for every word w of `space`, indexed like the space.
std::vector<Elem> word_images(const LetterAssignment& f, const WordSpace& space);

/// The language w -> v(f(w)) on `space`.
TruncLanguage recognized_language(const LetterAssignment& f, const Valuation& v, const WordSpace& space);

/// The first valuation v of f.target (in the order of enumerate_valuations)
/// with v(f(w)) = target(w) on every word of the target's space, or nullopt.
/// Solved per variety without enumerating: SET and POS take the indicator of
/// the (upward closure of the) images valued 1; JSL scans principal ideals;
/// VECT fixes functional coordinates one at a time to their least feasible
/// value.
std::optional<Valuation> recognizes(const LetterAssignment& f, const TruncLanguage& target);

enum class Verdict { Pass, Fail, Inconclusive, PreconditionViolated };

/// "pass", "fail", "inconclusive" or "precondition_violated".
std::string to_string(Verdict v);

struct VerificationReport {
  std::string theorem;
  std::string instance;
  std::size_t bound = kDefaultBound;
  Verdict verdict = Verdict::Pass;
  /// First failing word, or the reason for a precondition violation.
  std::optional<std::string> counterexample;
  /// Labelled witness expressions (or other per-item results).
  std::vector<std::pair<std::string, std::string>> witnesses;
  std::vector<std::string> notes;
  bool sampled = false;
  std::optional<double> elapsed_ms;

  bool passed() const { return verdict == Verdict::Pass; }
  /// Records the first failure only.
  void fail(std::string counterexample);
};

struct RecognitionWitness {
  LetterAssignment assignment;
  Valuation valuation;
  TruncLanguage language;
};

/// One language of L_{M,N}(f), named and with its defining expression.
struct LmnEntry {
  std::string name;
  Expr expr;
  TruncLanguage language;
};

/// The languages recognized through the outer projections of a letter
/// assignment into M<>N, and all their marked products. Languages repeated
/// under another valuation are listed once, under the first name.
struct LmnSet {
  std::vector<LmnEntry> k_list;
  std::vector<LmnEntry> l_list;
  std::vector<LmnEntry> products;

  std::vector<NamedAtom> atoms() const;
  /// Environment binding the K and L names.
  Environment environment(const Variety& variety, const WordSpace& space) const;
};

LmnSet lmn_set(const SchutzProduct& s, const LetterAssignment& f, const WordSpace& space);

/// A letter assignment into M<>N from its three components per letter.
LetterAssignment schutz_assignment(const SchutzProduct& s, const std::string& alphabet,
                                   const std::vector<Elem>& left, const std::vector<Elem>& middle,
                                   const std::vector<Elem>& right);

/// The letter rule f(a) = (g(a), 1, h(a)), f(b) = (g(b), 0, h(b)) for b != a.
LetterAssignment schurec_assignment(const SchutzProduct& s, const LetterAssignment& g,
                                    const LetterAssignment& h, char a);

struct SchurecResult {
  LetterAssignment f;
  RecognitionWitness k, l, kal;
  VerificationReport report;
};

/// Builds f by the letter rule and checks on `space` that p o pi_M o f is
/// K = p o g, q o pi_N o f is L = q o h, and the middle valuation (p*q) lifted
/// along pi_MN o f is KaL. `p` and `q` index the valuations of M and N.
SchurecResult schurec_witness(const SchutzProduct& s, const LetterAssignment& g, std::size_t p,
                              const LetterAssignment& h, std::size_t q, char a, const WordSpace& space);

/// Compares the middle component of f(u) with
/// sum over u = v a w of eta(f_M(v)*1) f_MN(a) eta(1*f_N(w)) for every word u
/// of length at most `bound`.
VerificationReport reutenauer_check(const SchutzProduct& s, const LetterAssignment& f, std::size_t bound);

struct Decomposition {
  Expr expr;
  Environment env;
  VerificationReport report;
};

/// Writes each f_MN(a) as a combination of generators eta(m_j * n_j) with
/// coefficients l_j and checks that
/// sum_a sum_j l_j (LM[a,j] a LN[a,j]) with LM[a,j] = p o (- m_j) o f_M and
/// LN[a,j] = q o (n_j -) o f_N equals the middle-recognized language.
Decomposition decompose_middle(const SchutzProduct& s, const LetterAssignment& f, std::size_t p,
                               std::size_t q, std::size_t bound);

struct UniversalResult {
  std::optional<std::vector<Elem>> h;
  VerificationReport report;
};

/// Builds h: P -> M<>N from word witnesses of e (extended by joins for JSL
/// and through a basis of word images for VECT) and checks h o e = f on all
/// words up to `bound` and that h is a monoid morphism. A non-surjective e is
/// a precondition violation and no h is built. If some language of
/// L_{M,N}(f) is not recognized by e the verdict is a precondition violation,
/// but h is still returned whenever it factors f.
UniversalResult universal_property_check(const SchutzProduct& s, const LetterAssignment& f,
                                         const LetterAssignment& e, std::size_t bound);

enum class ClosureMode { WithoutDerivatives, WithDerivatives };

inline constexpr std::size_t kValuationSampleThreshold = std::size_t{1} << 12;

/// Every language recognized by f is submitted to closure membership against
/// L_{M,N}(f) (plus one round of left and right derivatives of every atom in
/// WithDerivatives mode). The valuations of M<>N are taken on the image of f,
/// which recognizes the same languages; past 2^12 of them a seeded sample is
/// used.
VerificationReport closure_check(const SchutzProduct& s, const LetterAssignment& f, ClosureMode mode,
                                 std::size_t bound, std::uint64_t seed = 0);

}  // namespace schutzkit
