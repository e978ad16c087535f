#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "schutzkit/algebra_core.hpp"

namespace schutzkit {

/// Function-backed operations on at most this many pairs are tabulated on
/// construction.
inline constexpr std::size_t kTabulateLimit = std::size_t{1} << 20;

/// A finite monoid whose multiplication is a bimorphism of its carrier's
/// variety: a monoid (SET), an ordered monoid (POS), an idempotent semiring
/// (JSL) or an associative GF(p)-algebra (VECT).
///
/// Multiplication is either a stored table or a function computed on demand
/// (kept only for products too large to tabulate). Copies are cheap and share the
/// immutable state.
class DMonoid {
 public:
  using MultFn = std::function<Elem(Elem, Elem)>;

  DMonoid() = default;
  DMonoid(FiniteObject carrier, Elem unit, std::vector<Elem> table,
          std::vector<std::string> names = {});
  DMonoid(FiniteObject carrier, Elem unit, MultFn mult, std::vector<std::string> names = {});

  /// Algebra over GF(p) from structure constants: constants[i][j] holds the
  /// coordinates of e_i * e_j.
  static DMonoid from_structure_constants(
      std::uint32_t modulus, const std::vector<std::vector<std::vector<Scalar>>>& constants,
      const std::vector<Scalar>& unit);

  /// The one-element monoid in `variety`.
  static DMonoid trivial(const Variety& variety);

  const FiniteObject& carrier() const { return carrier_; }
  const Variety& variety() const { return carrier_.variety(); }
  std::size_t size() const { return carrier_.size(); }
  Elem unit() const { return unit_; }
  Elem mult(Elem x, Elem y) const { return table_ ? (*table_)[x * size() + y] : (*fn_)(x, y); }
  bool tabulated() const { return table_ != nullptr; }

  /// Element name for reports; defaults to the index (or coordinates for VECT).
  std::string name(Elem x) const;
  bool has_names() const { return names_ != nullptr; }
  /// Index of the element called `name`, if any.
  std::optional<Elem> find(std::string_view name) const;

 private:
  FiniteObject carrier_;
  Elem unit_ = 0;
  std::shared_ptr<const std::vector<Elem>> table_;
  std::shared_ptr<const MultFn> fn_;
  std::shared_ptr<const std::vector<std::string>> names_;
};

/// Budget for exhaustive law checks. Above `exhaustive_budget` triples a law
/// is checked on `samples` seeded random triples and the report is flagged.
struct CheckBudget {
  std::uint64_t exhaustive_budget = std::uint64_t{1} << 24;
  std::uint64_t samples = std::uint64_t{1} << 18;
  std::uint64_t seed = 0;
};

/// Associativity, unit laws and the bimorphism law of the variety.
ValidationReport validate_dmonoid(const DMonoid& m, const CheckBudget& budget = {});

/// Whether `values` maps the unit to the unit, preserves multiplication, and
/// is a morphism of the underlying variety.
bool is_monoid_morphism(const DMonoid& source, const DMonoid& target, std::span<const Elem> values);

/// A monoid morphism that is a bijection and whose inverse is monotone for POS.
bool is_isomorphism(const DMonoid& source, const DMonoid& target, std::span<const Elem> values);

/// Images of the letters of an alphabet in a target D-monoid. Stands for the
/// unique D-monoid morphism from the free D-monoid on the alphabet. Each
/// character of `alphabet` is one symbol.
struct LetterAssignment {
  std::string alphabet;
  DMonoid target;
  std::vector<Elem> images;

  /// Index of `symbol` in the alphabet; throws InputError when absent.
  std::size_t letter(char symbol) const;
};

/// Unit for the empty word, left fold of the multiplication otherwise.
/// Throws InputError on a symbol outside the alphabet.
Elem eval_word(const LetterAssignment& f, std::string_view word);

/// The sub-D-monoid generated by the letter images: closed under
/// multiplication, and under joins (JSL) or linear combinations (VECT).
struct FreeImage {
  DMonoid submonoid;
  /// Sub-element id -> id in the original target.
  std::vector<Elem> embedding;
  /// Shortest (then lexicographically least) word reaching each element;
  /// absent for elements only reachable through joins or sums.
  std::vector<std::optional<std::string>> witnesses;
  /// The given assignment with its target replaced by `submonoid`.
  LetterAssignment corestriction;
  /// VECT only: words whose images form the basis behind the sub ids.
  std::vector<std::string> basis_words;
};

FreeImage image_of_free_morphism(const LetterAssignment& f);

}  // namespace schutzkit
