#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "schutzkit/algebra_core.hpp"
#include "schutzkit/words.hpp"

namespace schutzkit {

/// A map from the words of length at most `bound` into S.
class TruncLanguage {
 public:
  TruncLanguage() = default;
  TruncLanguage(WordSpace space, Semiring s, std::vector<Scalar> values);

  static TruncLanguage constant(const WordSpace& space, const Semiring& s, Scalar c);
  static TruncLanguage from_function(const WordSpace& space, const Semiring& s,
                                     const std::function<Scalar(std::string_view)>& fn);
  /// Value 1 on the listed words, 0 elsewhere.
  static TruncLanguage characteristic(const WordSpace& space, const Semiring& s,
                                      const std::vector<std::string>& words);

  const WordSpace& space() const { return space_; }
  const Semiring& semiring() const { return semiring_; }
  std::size_t bound() const { return space_.bound(); }
  const std::string& alphabet() const { return space_.alphabet(); }

  Scalar operator()(std::string_view word) const { return values_[space_.index(word)]; }
  Scalar at(std::size_t index) const { return values_[index]; }
  std::span<const Scalar> values() const { return values_; }

  bool operator==(const TruncLanguage& o) const {
    return space_ == o.space_ && semiring_ == o.semiring_ && values_ == o.values_;
  }

 private:
  WordSpace space_;
  Semiring semiring_ = Semiring::for_variety(Variety::set());
  std::vector<Scalar> values_;
};

/// Shortlex-first word on which the two languages differ. Both must share
/// alphabet, bound and semiring.
std::optional<std::string> first_difference(const TruncLanguage& a, const TruncLanguage& b);

/// Restriction to words of length at most `bound` (no larger than a.bound()).
TruncLanguage truncate(const TruncLanguage& a, std::size_t bound);

TruncLanguage add(const TruncLanguage& a, const TruncLanguage& b);
TruncLanguage scale(Scalar c, const TruncLanguage& a);
/// Pointwise product; intersection for Boolean S.
TruncLanguage pointwise_mul(const TruncLanguage& a, const TruncLanguage& b);
/// Boolean S only.
TruncLanguage complement(const TruncLanguage& a);

/// (KaL)(u) = sum over u = v a w of K(v) L(w). Every factor is shorter than
/// u, so the result is exact on the shared bound.
TruncLanguage marked_product(const TruncLanguage& k, char a, const TruncLanguage& l);

enum class Side { Left, Right };

/// (a^-1 L)(u) = L(au) or (L a^-1)(u) = L(ua), on words of length at most
/// bound - 1. Throws InputError at bound 0.
TruncLanguage derivative(const TruncLanguage& l, char a, Side side);

/// A term over named atoms built from the operations of one variety:
/// SET union, intersection, complement, empty, full; POS the same without
/// complement; JSL union and empty; VECT sums and scalar multiples. Marked
/// products of subterms may appear in every variety.
class Expr {
 public:
  enum class Op { Atom, Empty, Full, Union, Intersection, Complement, Sum, Scale, Marked };

  static Expr atom(std::string name);
  static Expr empty();
  static Expr full();
  /// Zero operands mean empty; a single operand is returned as is.
  static Expr union_of(std::vector<Expr> operands);
  /// Zero operands mean full; a single operand is returned as is.
  static Expr intersection_of(std::vector<Expr> operands);
  static Expr complement(Expr operand);
  /// Zero operands mean the zero series; a single operand is returned as is.
  static Expr sum(std::vector<Expr> operands);
  static Expr scale(Scalar c, Expr operand);
  static Expr marked(Expr k, char a, Expr l);

  Op op() const { return op_; }
  const std::string& name() const { return name_; }
  Scalar coefficient() const { return coefficient_; }
  char mark() const { return mark_; }
  const std::vector<Expr>& operands() const { return operands_; }

  std::string to_string() const;
  void collect_atoms(std::set<std::string>& out) const;

  bool operator==(const Expr&) const = default;

 private:
  Op op_ = Op::Empty;
  std::string name_;
  Scalar coefficient_ = 0;
  char mark_ = 0;
  std::vector<Expr> operands_;
};

/// Bindings for evaluating expressions.
struct Environment {
  Variety variety = Variety::set();
  WordSpace space;
  std::map<std::string, TruncLanguage> atoms;

  void bind(const std::string& name, TruncLanguage language);
};

/// Pointwise evaluation. Throws InputError on an unbound atom, an operation
/// outside the variety, or a language on another word space.
TruncLanguage c_op_apply(const Expr& expr, const Environment& env);

/// An atom offered to closure membership: its expression (a name or a marked
/// product of names) and its value.
struct NamedAtom {
  Expr expr;
  TruncLanguage language;
};

inline constexpr std::size_t kPosClosureCap = std::size_t{1} << 16;

/// Decides membership of languages in the closure of a fixed atom list under
/// the operations of a variety, producing witness expressions.
///
/// SET: words are grouped by their values on all atoms; a member is constant
/// on every group and its witness is a union of minterms.
/// POS: the lattice generated by the atoms, empty and full is built as the
/// join-closure of the meet-closure; throws SizeGuardError ("closure too
/// large") past the cap.
/// JSL: a member is the union of the atoms below it.
/// VECT: Gaussian elimination with lexicographically first pivots.
class MembershipOracle {
 public:
  MembershipOracle(Variety variety, std::vector<NamedAtom> atoms, std::size_t pos_cap = kPosClosureCap);
  ~MembershipOracle();
  MembershipOracle(MembershipOracle&&) noexcept;
  MembershipOracle& operator=(MembershipOracle&&) noexcept;

  std::optional<Expr> find(const TruncLanguage& target) const;

  /// Atoms left after removing duplicate languages (first name kept).
  const std::vector<NamedAtom>& atoms() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::optional<Expr> closure_membership(const TruncLanguage& target, const std::vector<NamedAtom>& atoms,
                                       const Variety& variety);

}  // namespace schutzkit
