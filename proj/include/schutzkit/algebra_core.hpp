#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace schutzkit {

using Elem = std::uint32_t;
using Scalar = std::uint32_t;

enum class VarietyKind { Set, Pos, Jsl, Vect };

/// One of the four commutative varieties the library works in. Vector spaces
/// carry the (prime) modulus of their scalar field.
class Variety {
 public:
  static Variety set() { return Variety(VarietyKind::Set, 0); }
  static Variety pos() { return Variety(VarietyKind::Pos, 0); }
  static Variety jsl() { return Variety(VarietyKind::Jsl, 0); }
  /// Throws InputError unless `modulus` is prime.
  static Variety vect(std::uint32_t modulus);

  VarietyKind kind() const { return kind_; }
  std::uint32_t modulus() const { return modulus_; }
  bool is_vect() const { return kind_ == VarietyKind::Vect; }

  /// "set", "pos", "jsl" or "vect".
  std::string name() const;

  bool operator==(const Variety&) const = default;

 private:
  Variety(VarietyKind kind, std::uint32_t modulus) : kind_(kind), modulus_(modulus) {}

  VarietyKind kind_;
  std::uint32_t modulus_;
};

bool is_prime(std::uint32_t n);

/// The finite output semiring S: the Boolean semiring {0,1} with 1+1=1 for
/// SET, POS and JSL, and GF(p) for VECT. Element ids are 0..size()-1 with
/// zero = 0 and one = 1.
class Semiring {
 public:
  static Semiring for_variety(const Variety& v);

  std::uint32_t size() const { return boolean_ ? 2 : modulus_; }
  bool is_boolean() const { return boolean_; }
  /// Characteristic of GF(p); 2 for the Boolean semiring (used only for sizing).
  std::uint32_t modulus() const { return boolean_ ? 2 : modulus_; }

  Scalar zero() const { return 0; }
  Scalar one() const { return 1; }
  Scalar add(Scalar a, Scalar b) const { return boolean_ ? (a | b) : (a + b) % modulus_; }
  Scalar mul(Scalar a, Scalar b) const { return boolean_ ? (a & b) : (a * b) % modulus_; }
  /// Additive inverse; only meaningful for GF(p).
  Scalar neg(Scalar a) const { return boolean_ ? a : (modulus_ - a) % modulus_; }
  /// 0 < 1 for POS and JSL; equality otherwise.
  bool leq(Scalar a, Scalar b) const { return ordered_ ? a <= b : a == b; }
  bool ordered() const { return ordered_; }

  bool operator==(const Semiring&) const = default;

 private:
  Semiring(bool boolean, bool ordered, std::uint32_t modulus)
      : boolean_(boolean), ordered_(ordered), modulus_(modulus) {}

  bool boolean_;
  bool ordered_;
  std::uint32_t modulus_;
};

/// Violations found by a validator. Empty means valid.
struct ValidationReport {
  std::vector<std::string> violations;
  /// True when a law was checked on a seeded sample instead of exhaustively.
  bool sampled = false;
  std::vector<std::string> notes;

  bool ok() const { return violations.empty(); }
  void add(std::string v) { violations.push_back(std::move(v)); }
  void merge(const ValidationReport& other, const std::string& prefix = {});
};

/// A finite carrier in one of the four varieties. Elements are the indices
/// 0..size()-1.
///
/// POS carriers hold an order matrix, JSL carriers a join table and bottom.
/// VECT carriers are all p^d coordinate tuples; element id x encodes the
/// tuple with coordinate i equal to (x / p^i) mod p.
///
/// Copies share the immutable tables.
class FiniteObject {
 public:
  FiniteObject() = default;

  static FiniteObject set(std::size_t n);
  /// Reflexive-transitive closure of `pairs`, read as x <= y.
  static FiniteObject poset(std::size_t n, const std::vector<std::pair<Elem, Elem>>& pairs);
  /// Order relation given verbatim (row-major, leq[x*n+y] means x <= y).
  static FiniteObject poset_from_relation(std::size_t n, std::vector<bool> leq);
  static FiniteObject semilattice(std::size_t n, std::vector<Elem> join, Elem bottom);
  /// Throws SizeGuardError when d * log2(p) exceeds 12 bits.
  static FiniteObject vector_space(std::uint32_t modulus, std::size_t dimension);

  /// Categorical product in the shared variety, with element id
  /// x0 + |A0| * (x1 + |A1| * (x2 + ...)). For VECT the coordinates are
  /// concatenated in factor order, so the encoding is preserved.
  static FiniteObject product(const std::vector<FiniteObject>& factors);

  const Variety& variety() const { return variety_; }
  std::size_t size() const { return size_; }

  /// POS: stored order. JSL: join(x, y) == y. SET and VECT: equality.
  bool leq(Elem x, Elem y) const;

  // JSL
  Elem join(Elem x, Elem y) const { return (*join_)[x * size_ + y]; }
  Elem bottom() const { return bottom_; }

  // VECT
  std::size_t dimension() const { return dimension_; }
  std::vector<Scalar> coords(Elem x) const;
  Elem from_coords(std::span<const Scalar> c) const;
  Elem add(Elem x, Elem y) const;
  Elem scale(Scalar s, Elem x) const;
  /// The basis vector e_i.
  Elem basis(std::size_t i) const;

 private:
  Variety variety_ = Variety::set();
  std::size_t size_ = 0;
  std::shared_ptr<const std::vector<bool>> order_;
  std::shared_ptr<const std::vector<Elem>> join_;
  Elem bottom_ = 0;
  std::size_t dimension_ = 0;
};

ValidationReport validate_object(const FiniteObject& obj);

/// A structure-preserving map from a carrier into S, stored by value per
/// element.
struct Valuation {
  std::vector<Scalar> values;

  Scalar operator()(Elem x) const { return values[x]; }
  auto operator<=>(const Valuation&) const = default;
};

/// Whether `values` is a variety morphism from `obj` into S: any map (SET),
/// monotone (POS), preserves bottom and binary joins (JSL), GF(p)-linear
/// (VECT).
bool is_valuation(const FiniteObject& obj, const Valuation& v);

/// Whether `map` is a variety morphism from `src` to `dst` (both in the same
/// variety).
bool is_structure_morphism(const FiniteObject& src, const FiniteObject& dst,
                           std::span<const Elem> map);

inline constexpr std::size_t kDefaultValuationCap = std::size_t{1} << 20;

/// Every morphism obj -> S, without duplicates, sorted lexicographically by
/// value vector. Throws SizeGuardError ("enumeration too large") past `cap`.
std::vector<Valuation> enumerate_valuations(const FiniteObject& obj,
                                            std::size_t cap = kDefaultValuationCap);

/// Whether the tupled map obj -> S^family is injective (SET, JSL, VECT) or
/// order-reflecting (POS).
bool is_separating(std::span<const Valuation> family, const FiniteObject& obj);

}  // namespace schutzkit
