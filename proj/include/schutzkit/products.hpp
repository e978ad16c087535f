#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "schutzkit/algebra_core.hpp"
#include "schutzkit/dmonoid.hpp"

namespace schutzkit {

inline constexpr std::size_t kStarSizeGuard = 4096;
inline constexpr std::size_t kLiftBaseGuard = 20;

/// Pair (m, n) of M x N, encoded as m + |M| * n.
using PairIndex = std::uint32_t;

/// The D-monoid M*N: the image of M x N in S^(P x Q), where P and Q are the
/// valuations of M and N and (m, n) goes to the vector (p, q) -> p(m) q(n).
///
/// SET/POS: the carrier is M x N itself (id m + |M| n, product order).
/// JSL: the join-closure of the vectors v_{m,n} and the zero vector, sorted
/// lexicographically, so the zero vector is element 0.
/// VECT: the tensor product, coordinate i + d_M * j on e_i (x) f_j.
class StarProduct {
 public:
  const DMonoid& left() const { return state_->left; }
  const DMonoid& right() const { return state_->right; }
  const std::vector<Valuation>& left_valuations() const { return state_->p; }
  const std::vector<Valuation>& right_valuations() const { return state_->q; }
  const DMonoid& monoid() const { return state_->monoid; }
  std::size_t size() const { return state_->monoid.size(); }

  /// The element m*n.
  Elem gen(Elem m, Elem n) const { return state_->gen[m + left().size() * n]; }

  /// Coordinate (p, q) of x, i.e. the value of the separating family member
  /// indexed by (p, q).
  Scalar coordinate(Elem x, std::size_t p, std::size_t q) const;
  /// Coordinate (p, q) as a valuation on the carrier of M*N.
  Valuation coordinate_valuation(std::size_t p, std::size_t q) const;
  /// All coordinates, index p * |Q| + q.
  std::vector<Valuation> coordinate_family() const;

  /// JSL: the vector in S^(P x Q) of element x, bit p * |Q| + q.
  const std::vector<bool>& vector(Elem x) const { return state_->vectors.at(x); }
  /// JSL: the pairs (m, n) with v_{m,n} <= x. Their join is x.
  std::vector<PairIndex> max_witness(Elem x) const;

 private:
  friend StarProduct star_product(const DMonoid&, const DMonoid&);
  struct State {
    DMonoid left, right;
    std::vector<Valuation> p, q;
    DMonoid monoid;
    std::vector<Elem> gen;
    std::vector<std::vector<bool>> vectors;
  };
  std::shared_ptr<const State> state_;
};

/// Throws InputError on a variety mismatch and SizeGuardError past
/// kStarSizeGuard elements.
StarProduct star_product(const DMonoid& m, const DMonoid& n);

/// VECT: rank over GF(p) of the |M||N|-row matrix whose row (i, j) lists
/// p(e_i) q(f_j) over all valuation pairs (p, q).
std::size_t separation_rank(const StarProduct& sp);

/// Nonempty join-closed down-sets of a JSL carrier, as membership vectors,
/// found by brute force over all subsets (at most 20 elements).
std::vector<std::vector<bool>> jsl_ideals(const FiniteObject& obj);

/// Closure of X, a subset of M x N given by membership over PairIndex:
/// (m, n) is in [X] iff every pair of ideals I, J with m not in I and n not
/// in J admits (x, y) in X with x not in I and y not in J.
std::vector<bool> kp_closure(const std::vector<bool>& x, const DMonoid& m, const DMonoid& n);

/// The idempotent semiring of closed subsets of M x N with [X] v [Y] =
/// [X u Y] and [X][Y] = [XY]. Elements are ordered by their bitmask.
struct ClosedSemiring {
  DMonoid monoid;
  std::vector<std::uint32_t> masks;  // bit m + |M| n
};

/// Brute force over all subsets; requires |M| |N| <= 16.
ClosedSemiring jsl_closed_semiring(const DMonoid& m, const DMonoid& n);

/// The map x -> [W(x)] from M*N into the closed-subset semiring.
std::vector<Elem> star_to_closed(const StarProduct& sp, const ClosedSemiring& cs);

/// The tensor product A (x) B of two join-semilattices, computed as the
/// quotient of the free semilattice on A x B by the congruence generated by
/// bilinearity and bottom annihilation.
struct TensorOracle {
  FiniteObject carrier;
  /// t(a, b) at index a + |A| b.
  std::vector<Elem> pure;
  /// Smallest subset mask (bit a + |A| b) of each class.
  std::vector<std::uint32_t> representative;
  /// Class of every subset mask.
  std::vector<Elem> class_of_mask;
};

/// Requires |A| |B| <= 16.
TensorOracle tensor_jsl_oracle(const FiniteObject& a, const FiniteObject& b);

/// Checks that x -> join of v_{a,b} over a representative of x is well
/// defined on the classes of `t` and that its image is exactly the carrier of
/// `sp` (whose factors must have the carriers t was built from).
ValidationReport tensor_image_matches_star(const TensorOracle& t, const StarProduct& sp);

/// A finite S-algebra: an S-module carrier with a bilinear associative
/// multiplication. For Boolean S the addition is the join of the carrier.
struct SAlgebra {
  FiniteObject carrier;
  Elem zero = 0;
  Elem one = 0;
  std::function<Elem(Elem, Elem)> add;
  std::function<Elem(Elem, Elem)> mul;
};

/// Additive commutative monoid laws, associativity, unit, distributivity and
/// zero absorption. Sampled like validate_dmonoid past the budget.
ValidationReport validate_salgebra(const SAlgebra& a, const CheckBudget& budget = {});

/// The free S-algebra on M*N.
///
/// SET: subsets of M*N; element id is the bitmask itself.
/// POS: down-sets of M*N ordered by inclusion, indexed by increasing mask.
/// JSL, VECT: M*N itself.
class LiftedSAlgebra {
 public:
  const StarProduct& base() const { return base_; }
  const SAlgebra& algebra() const { return *algebra_; }
  std::size_t size() const { return algebra_->carrier.size(); }
  Elem eta(Elem x) const { return eta_[x]; }
  std::span<const Elem> eta_table() const { return eta_; }

  /// SET/POS: members of the subset behind element x as a bitmask over M*N.
  std::uint32_t mask(Elem x) const;
  /// SET/POS: element with the given member mask (which must be a down-set
  /// for POS).
  Elem from_mask(std::uint32_t mask) const;

  /// The S-linear extension of a valuation on M*N.
  Valuation lift(const Valuation& on_base) const;
  /// lift(base().coordinate_valuation(p, q)).
  Valuation middle_valuation(std::size_t p, std::size_t q) const;

 private:
  friend LiftedSAlgebra lift_algebra(const StarProduct&);
  StarProduct base_;
  std::shared_ptr<const SAlgebra> algebra_;
  std::vector<Elem> eta_;
  std::shared_ptr<const std::vector<std::uint32_t>> masks_;  // POS only
};

/// Throws SizeGuardError for SET/POS when |M*N| exceeds kLiftBaseGuard.
LiftedSAlgebra lift_algebra(const StarProduct& sp);

/// The D-monoid on M x A x N with unit (1, 0, 1) and
/// (m, a, n)(m', a', n') = (mm', f(m) a' + a g(n'), nn'), element id
/// m + |M| (a + |A| n). `f` and `g` list the images of M and N.
DMonoid triangular_monoid(const SAlgebra& a, std::span<const Elem> f, std::span<const Elem> g,
                          const DMonoid& m, const DMonoid& n);

/// M<>N: the triangular monoid over the free S-algebra on M*N with
/// f(m) = eta(m*1) and g(n) = eta(1*n).
class SchutzProduct {
 public:
  const DMonoid& left() const { return lifted_.base().left(); }
  const DMonoid& right() const { return lifted_.base().right(); }
  const StarProduct& star() const { return lifted_.base(); }
  const LiftedSAlgebra& middle() const { return lifted_; }
  const DMonoid& monoid() const { return monoid_; }
  std::size_t size() const { return monoid_.size(); }

  Elem compose(Elem m, Elem a, Elem n) const;
  std::tuple<Elem, Elem, Elem> split(Elem x) const;
  Elem left_of(Elem x) const { return std::get<0>(split(x)); }
  Elem middle_of(Elem x) const { return std::get<1>(split(x)); }
  Elem right_of(Elem x) const { return std::get<2>(split(x)); }

  /// f(m) = eta(m*1) and g(n) = eta(1*n).
  Elem f(Elem m) const { return f_[m]; }
  Elem g(Elem n) const { return g_[n]; }

  std::vector<Elem> left_projection() const;
  std::vector<Elem> right_projection() const;

 private:
  friend SchutzProduct schutzenberger(const DMonoid&, const DMonoid&);
  LiftedSAlgebra lifted_;
  std::vector<Elem> f_, g_;
  DMonoid monoid_;
};

SchutzProduct schutzenberger(const DMonoid& m, const DMonoid& n);

/// Structural checks on a Schützenberger product that do not need the full
/// triple enumeration: the middle algebra's laws, f and g being monoid
/// morphisms into it, eta being multiplicative, and the projections being
/// monoid morphisms (checked with the given budget).
ValidationReport validate_schutz_structure(const SchutzProduct& s, const CheckBudget& budget = {});

}  // namespace schutzkit
