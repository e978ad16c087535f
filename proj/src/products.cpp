#include "schutzkit/products.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <random>

#include "detail/sampling.hpp"
#include "schutzkit/errors.hpp"
#include "schutzkit/gfp.hpp"

namespace schutzkit {

using detail::for_triples;
using detail::LawCounter;
using detail::triple;

namespace {

void require_same_variety(const DMonoid& m, const DMonoid& n) {
  if (!(m.variety() == n.variety()))
    throw InputError("variety mismatch: " + m.variety().name() + " vs " + n.variety().name());
}

[[noreturn]] void star_too_large(std::size_t n) {
  throw SizeGuardError("star product too large: " + std::to_string(n) + " elements (limit " +
                       std::to_string(kStarSizeGuard) + ")");
}

std::vector<Scalar> tensor_coords(const std::vector<Scalar>& u, const std::vector<Scalar>& w,
                                  Scalar p) {
  std::vector<Scalar> z(u.size() * w.size());
  for (std::size_t j = 0; j < w.size(); ++j)
    for (std::size_t i = 0; i < u.size(); ++i) z[i + u.size() * j] = u[i] * w[j] % p;
  return z;
}

std::vector<bool> join_bits(const std::vector<bool>& x, const std::vector<bool>& y) {
  std::vector<bool> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] || y[i];
  return z;
}

bool bits_leq(const std::vector<bool>& x, const std::vector<bool>& y) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] && !y[i]) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// M*N

StarProduct star_product(const DMonoid& m, const DMonoid& n) {
  require_same_variety(m, n);
  auto st = std::make_shared<StarProduct::State>();
  st->left = m;
  st->right = n;
  st->p = enumerate_valuations(m.carrier());
  st->q = enumerate_valuations(n.carrier());
  const std::size_t sm = m.size(), sn = n.size();
  st->gen.resize(sm * sn);

  switch (m.variety().kind()) {
    case VarietyKind::Set:
    case VarietyKind::Pos: {
      const std::size_t k = sm * sn;
      if (k > kStarSizeGuard) star_too_large(k);
      FiniteObject carrier = FiniteObject::product({m.carrier(), n.carrier()});
      std::vector<Elem> table(k * k);
      for (Elem x = 0; x < k; ++x)
        for (Elem y = 0; y < k; ++y)
          table[x * k + y] = m.mult(x % sm, y % sm) + sm * n.mult(x / sm, y / sm);
      std::iota(st->gen.begin(), st->gen.end(), Elem{0});
      st->monoid = DMonoid(carrier, st->gen[m.unit() + sm * n.unit()], std::move(table));
      break;
    }
    case VarietyKind::Jsl: {
      const std::size_t np = st->p.size(), nq = st->q.size();
      std::vector<std::vector<bool>> v(sm * sn, std::vector<bool>(np * nq));
      for (Elem a = 0; a < sm; ++a)
        for (Elem b = 0; b < sn; ++b)
          for (std::size_t i = 0; i < np; ++i)
            for (std::size_t j = 0; j < nq; ++j) v[a + sm * b][i * nq + j] = st->p[i](a) && st->q[j](b);

      std::map<std::vector<bool>, Elem> seen;
      std::vector<std::vector<bool>> elems;
      auto add = [&](const std::vector<bool>& x) {
        if (seen.emplace(x, static_cast<Elem>(elems.size())).second) {
          elems.push_back(x);
          if (elems.size() > kStarSizeGuard) star_too_large(elems.size());
        }
      };
      add(std::vector<bool>(np * nq, false));
      for (const auto& x : v) add(x);
      for (std::size_t i = 0; i < elems.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) add(join_bits(elems[i], elems[j]));

      std::sort(elems.begin(), elems.end());
      seen.clear();
      for (Elem i = 0; i < elems.size(); ++i) seen.emplace(elems[i], i);
      const std::size_t k = elems.size();
      auto id = [&](const std::vector<bool>& x) { return seen.at(x); };

      std::vector<Elem> join(k * k);
      for (Elem x = 0; x < k; ++x)
        for (Elem y = 0; y < k; ++y) join[x * k + y] = id(join_bits(elems[x], elems[y]));
      for (std::size_t i = 0; i < v.size(); ++i) st->gen[i] = id(v[i]);

      std::vector<std::vector<PairIndex>> witness(k);
      for (Elem x = 0; x < k; ++x)
        for (PairIndex pi = 0; pi < v.size(); ++pi)
          if (bits_leq(v[pi], elems[x])) witness[x].push_back(pi);

      std::vector<Elem> table(k * k);
      for (Elem x = 0; x < k; ++x)
        for (Elem y = 0; y < k; ++y) {
          std::vector<bool> acc(np * nq, false);
          for (PairIndex a : witness[x])
            for (PairIndex b : witness[y]) {
              const PairIndex c = m.mult(a % sm, b % sm) + sm * n.mult(a / sm, b / sm);
              acc = join_bits(acc, v[c]);
            }
          table[x * k + y] = id(acc);
        }
      FiniteObject carrier = FiniteObject::semilattice(k, std::move(join), 0);
      st->vectors = std::move(elems);
      st->monoid = DMonoid(carrier, st->gen[m.unit() + sm * n.unit()], std::move(table));
      break;
    }
    case VarietyKind::Vect: {
      const Scalar p = m.variety().modulus();
      const std::size_t dm = m.carrier().dimension(), dn = n.carrier().dimension();
      const std::size_t d = dm * dn;
      std::vector<std::vector<std::vector<Scalar>>> constants(d, std::vector<std::vector<Scalar>>(d));
      for (std::size_t i = 0; i < dm; ++i)
        for (std::size_t j = 0; j < dn; ++j)
          for (std::size_t k = 0; k < dm; ++k)
            for (std::size_t l = 0; l < dn; ++l) {
              const auto u = m.carrier().coords(m.mult(m.carrier().basis(i), m.carrier().basis(k)));
              const auto w = n.carrier().coords(n.mult(n.carrier().basis(j), n.carrier().basis(l)));
              constants[i + dm * j][k + dm * l] = tensor_coords(u, w, p);
            }
      const auto unit = tensor_coords(m.carrier().coords(m.unit()), n.carrier().coords(n.unit()), p);
      st->monoid = DMonoid::from_structure_constants(p, constants, unit);
      for (Elem a = 0; a < sm; ++a)
        for (Elem b = 0; b < sn; ++b)
          st->gen[a + sm * b] = st->monoid.carrier().from_coords(
              tensor_coords(m.carrier().coords(a), n.carrier().coords(b), p));
      break;
    }
  }
  StarProduct sp;
  sp.state_ = std::move(st);
  return sp;
}

Scalar StarProduct::coordinate(Elem x, std::size_t p, std::size_t q) const {
  const auto& s = *state_;
  const std::size_t sm = s.left.size();
  switch (s.left.variety().kind()) {
    case VarietyKind::Set:
    case VarietyKind::Pos: return s.p[p](x % sm) & s.q[q](x / sm);
    case VarietyKind::Jsl: return s.vectors[x][p * s.q.size() + q] ? 1 : 0;
    case VarietyKind::Vect: {
      const Scalar mod = s.left.variety().modulus();
      const auto& lc = s.left.carrier();
      const auto& rc = s.right.carrier();
      const std::size_t dm = lc.dimension(), dn = rc.dimension();
      const auto z = s.monoid.carrier().coords(x);
      Scalar acc = 0;
      for (std::size_t j = 0; j < dn; ++j)
        for (std::size_t i = 0; i < dm; ++i) {
          const Scalar c = z[i + dm * j];
          if (c == 0) continue;
          acc = (acc + c * s.p[p](lc.basis(i)) % mod * s.q[q](rc.basis(j))) % mod;
        }
      return acc;
    }
  }
  throw InternalError("unknown variety");
}

Valuation StarProduct::coordinate_valuation(std::size_t p, std::size_t q) const {
  Valuation v{std::vector<Scalar>(size())};
  for (Elem x = 0; x < size(); ++x) v.values[x] = coordinate(x, p, q);
  return v;
}

std::vector<Valuation> StarProduct::coordinate_family() const {
  std::vector<Valuation> out;
  for (std::size_t p = 0; p < state_->p.size(); ++p)
    for (std::size_t q = 0; q < state_->q.size(); ++q) out.push_back(coordinate_valuation(p, q));
  return out;
}

std::vector<PairIndex> StarProduct::max_witness(Elem x) const {
  if (monoid().variety().kind() != VarietyKind::Jsl)
    throw InputError("maximal witnesses are defined for join-semilattices only");
  std::vector<PairIndex> out;
  const auto& target = state_->vectors[x];
  for (PairIndex pi = 0; pi < state_->gen.size(); ++pi)
    if (bits_leq(state_->vectors[state_->gen[pi]], target)) out.push_back(pi);
  return out;
}

std::size_t separation_rank(const StarProduct& sp) {
  if (!sp.monoid().variety().is_vect()) throw InputError("separation rank is a vector-space test");
  const auto& lc = sp.left().carrier();
  const auto& rc = sp.right().carrier();
  const Scalar mod = sp.monoid().variety().modulus();
  std::vector<gfp::Vector> rows;
  for (std::size_t j = 0; j < rc.dimension(); ++j)
    for (std::size_t i = 0; i < lc.dimension(); ++i) {
      gfp::Vector row;
      for (const auto& p : sp.left_valuations())
        for (const auto& q : sp.right_valuations())
          row.push_back(p(lc.basis(i)) * q(rc.basis(j)) % mod);
      rows.push_back(std::move(row));
    }
  return gfp::rank(std::move(rows), mod);
}

// ---------------------------------------------------------------------------
// closed subsets

std::vector<std::vector<bool>> jsl_ideals(const FiniteObject& obj) {
  if (obj.variety().kind() != VarietyKind::Jsl) throw InputError("ideals need a join-semilattice");
  const std::size_t n = obj.size();
  if (n > 20) throw SizeGuardError("ideal enumeration too large: " + std::to_string(n) + " elements");
  std::vector<std::vector<bool>> out;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
    auto in = [&](Elem x) { return (mask >> x) & 1u; };
    bool ok = true;
    for (Elem x = 0; x < n && ok; ++x) {
      if (!in(x)) continue;
      for (Elem y = 0; y < n && ok; ++y) {
        if (obj.leq(y, x) && !in(y)) ok = false;
        if (in(y) && !in(obj.join(x, y))) ok = false;
      }
    }
    if (!ok) continue;
    std::vector<bool> ideal(n);
    for (Elem x = 0; x < n; ++x) ideal[x] = in(x);
    out.push_back(std::move(ideal));
  }
  return out;
}

namespace {

// For every pair of ideals (I, J): the mask of pairs (x, y) with x not in I
// and y not in J.
std::vector<std::uint32_t> ideal_pair_masks(const DMonoid& m, const DMonoid& n) {
  const auto im = jsl_ideals(m.carrier());
  const auto in = jsl_ideals(n.carrier());
  const std::size_t sm = m.size();
  std::vector<std::uint32_t> out;
  for (const auto& i : im)
    for (const auto& j : in) {
      std::uint32_t mask = 0;
      for (Elem x = 0; x < sm; ++x)
        for (Elem y = 0; y < n.size(); ++y)
          if (!i[x] && !j[y]) mask |= std::uint32_t{1} << (x + sm * y);
      out.push_back(mask);
    }
  return out;
}

std::uint32_t closure_mask(std::uint32_t x, std::span<const std::uint32_t> hits, std::uint32_t full) {
  std::uint32_t excluded = 0;
  for (std::uint32_t h : hits)
    if ((h & x) == 0) excluded |= h;
  return full & ~excluded;
}

void require_jsl_pair(const DMonoid& m, const DMonoid& n, std::size_t limit) {
  require_same_variety(m, n);
  if (m.variety().kind() != VarietyKind::Jsl) throw InputError("closed subsets need join-semilattices");
  if (m.size() * n.size() > limit)
    throw SizeGuardError("closed-subset enumeration too large: |M||N| = " +
                         std::to_string(m.size() * n.size()));
}

}  // namespace

std::vector<bool> kp_closure(const std::vector<bool>& x, const DMonoid& m, const DMonoid& n) {
  require_jsl_pair(m, n, 32);
  const std::size_t k = m.size() * n.size();
  if (x.size() != k) throw InputError("subset has wrong size");
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < k; ++i)
    if (x[i]) mask |= std::uint32_t{1} << i;
  const std::uint32_t full = k == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << k) - 1;
  const auto hits = ideal_pair_masks(m, n);
  const std::uint32_t c = closure_mask(mask, hits, full);
  std::vector<bool> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = (c >> i) & 1u;
  return out;
}

ClosedSemiring jsl_closed_semiring(const DMonoid& m, const DMonoid& n) {
  require_jsl_pair(m, n, 16);
  const std::size_t sm = m.size();
  const std::size_t k = sm * n.size();
  const std::uint32_t full = (std::uint32_t{1} << k) - 1;
  const auto hits = ideal_pair_masks(m, n);

  std::vector<std::uint32_t> closed;
  for (std::uint32_t x = 0; x <= full; ++x)
    if (closure_mask(x, hits, full) == x) closed.push_back(x);
  auto id = [&](std::uint32_t x) {
    return static_cast<Elem>(std::lower_bound(closed.begin(), closed.end(), x) - closed.begin());
  };
  auto product = [&](std::uint32_t x, std::uint32_t y) {
    std::uint32_t z = 0;
    for (PairIndex a = 0; a < k; ++a) {
      if (!((x >> a) & 1u)) continue;
      for (PairIndex b = 0; b < k; ++b)
        if ((y >> b) & 1u) z |= std::uint32_t{1} << (m.mult(a % sm, b % sm) + sm * n.mult(a / sm, b / sm));
    }
    return z;
  };

  const std::size_t c = closed.size();
  std::vector<Elem> join(c * c), table(c * c);
  for (Elem a = 0; a < c; ++a)
    for (Elem b = 0; b < c; ++b) {
      join[a * c + b] = id(closure_mask(closed[a] | closed[b], hits, full));
      table[a * c + b] = id(closure_mask(product(closed[a], closed[b]), hits, full));
    }
  const Elem bottom = id(closure_mask(0, hits, full));
  const Elem unit = id(closure_mask(std::uint32_t{1} << (m.unit() + sm * n.unit()), hits, full));
  ClosedSemiring out;
  out.monoid = DMonoid(FiniteObject::semilattice(c, std::move(join), bottom), unit, std::move(table));
  out.masks = std::move(closed);
  return out;
}

std::vector<Elem> star_to_closed(const StarProduct& sp, const ClosedSemiring& cs) {
  const auto& m = sp.left();
  const auto& n = sp.right();
  const std::size_t k = m.size() * n.size();
  const std::uint32_t full = (std::uint32_t{1} << k) - 1;
  const auto hits = ideal_pair_masks(m, n);
  std::vector<Elem> out;
  for (Elem x = 0; x < sp.size(); ++x) {
    std::uint32_t w = 0;
    for (PairIndex pi : sp.max_witness(x)) w |= std::uint32_t{1} << pi;
    const std::uint32_t c = closure_mask(w, hits, full);
    const auto it = std::lower_bound(cs.masks.begin(), cs.masks.end(), c);
    if (it == cs.masks.end() || *it != c) throw InternalError("closure of a witness is not closed");
    out.push_back(static_cast<Elem>(it - cs.masks.begin()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// tensor product of semilattices

namespace {

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

TensorOracle tensor_jsl_oracle(const FiniteObject& a, const FiniteObject& b) {
  if (a.variety().kind() != VarietyKind::Jsl || b.variety().kind() != VarietyKind::Jsl)
    throw InputError("the tensor oracle needs join-semilattices");
  const std::size_t sa = a.size(), sb = b.size();
  const std::size_t k = sa * sb;
  if (k > 16) throw SizeGuardError("tensor oracle too large: |A||B| = " + std::to_string(k));
  auto bit = [&](Elem x, Elem y) { return std::uint32_t{1} << (x + sa * y); };

  std::vector<std::pair<std::uint32_t, std::uint32_t>> rel;
  for (Elem x = 0; x < sa; ++x)
    for (Elem y1 = 0; y1 < sb; ++y1)
      for (Elem y2 = 0; y2 < sb; ++y2) rel.emplace_back(bit(x, b.join(y1, y2)), bit(x, y1) | bit(x, y2));
  for (Elem y = 0; y < sb; ++y)
    for (Elem x1 = 0; x1 < sa; ++x1)
      for (Elem x2 = 0; x2 < sa; ++x2) rel.emplace_back(bit(a.join(x1, x2), y), bit(x1, y) | bit(x2, y));
  for (Elem x = 0; x < sa; ++x) rel.emplace_back(bit(x, b.bottom()), 0u);
  for (Elem y = 0; y < sb; ++y) rel.emplace_back(bit(a.bottom(), y), 0u);

  const std::uint32_t subsets = std::uint32_t{1} << k;
  UnionFind uf(subsets);
  // Compatible closure: a semilattice's unary polynomials are z -> z v c.
  for (const auto& [x, y] : rel)
    for (std::uint32_t z = 0; z < subsets; ++z) uf.unite(x | z, y | z);

  TensorOracle out;
  std::vector<Elem> class_of(subsets);
  std::map<std::uint32_t, Elem> root_class;
  for (std::uint32_t s = 0; s < subsets; ++s) {
    const auto [it, fresh] = root_class.emplace(uf.find(s), static_cast<Elem>(out.representative.size()));
    if (fresh) out.representative.push_back(s);
    class_of[s] = it->second;
  }
  const std::size_t c = out.representative.size();
  std::vector<Elem> join(c * c);
  for (Elem i = 0; i < c; ++i)
    for (Elem j = 0; j < c; ++j) join[i * c + j] = class_of[out.representative[i] | out.representative[j]];
  out.carrier = FiniteObject::semilattice(c, std::move(join), class_of[0]);
  for (Elem y = 0; y < sb; ++y)
    for (Elem x = 0; x < sa; ++x) out.pure.push_back(class_of[bit(x, y)]);
  out.class_of_mask = std::move(class_of);
  return out;
}

ValidationReport tensor_image_matches_star(const TensorOracle& t, const StarProduct& sp) {
  ValidationReport r;
  const std::size_t sa = sp.left().size(), sb = sp.right().size();
  if (t.pure.size() != sa * sb) {
    r.add("tensor factors do not match the star product factors");
    return r;
  }
  const std::size_t width = sp.left_valuations().size() * sp.right_valuations().size();
  auto image = [&](std::uint32_t mask) {
    std::vector<bool> acc(width, false);
    for (PairIndex pi = 0; pi < sa * sb; ++pi)
      if ((mask >> pi) & 1u) acc = join_bits(acc, sp.vector(sp.gen(pi % sa, pi / sa)));
    return acc;
  };
  std::vector<std::vector<bool>> class_image;
  for (std::uint32_t rep : t.representative) class_image.push_back(image(rep));
  for (std::uint32_t s = 0; s < t.class_of_mask.size(); ++s)
    if (image(s) != class_image[t.class_of_mask[s]]) {
      r.add("valuation embedding not constant on the class of subset " + std::to_string(s));
      break;
    }
  std::vector<std::vector<bool>> img = class_image, star;
  std::sort(img.begin(), img.end());
  img.erase(std::unique(img.begin(), img.end()), img.end());
  for (Elem x = 0; x < sp.size(); ++x) star.push_back(sp.vector(x));
  if (img != star)
    r.add("image of the tensor product has " + std::to_string(img.size()) +
          " elements, star product has " + std::to_string(star.size()));
  return r;
}

// ---------------------------------------------------------------------------
// S-algebras

ValidationReport validate_salgebra(const SAlgebra& a, const CheckBudget& budget) {
  ValidationReport r = validate_object(a.carrier);
  if (!r.ok()) return r;
  const std::size_t n = a.carrier.size();
  const FiniteObject& obj = a.carrier;
  const bool boolean = !obj.variety().is_vect();

  LawCounter units{r};
  for (Elem x = 0; x < n; ++x) {
    if (a.add(x, a.zero) != x || a.add(a.zero, x) != x) units.fail("zero not neutral at " + std::to_string(x));
    if (a.mul(x, a.one) != x || a.mul(a.one, x) != x) units.fail("one not neutral at " + std::to_string(x));
    if (a.mul(x, a.zero) != a.zero || a.mul(a.zero, x) != a.zero)
      units.fail("zero not absorbing at " + std::to_string(x));
    if (boolean && a.add(x, x) != x) units.fail("addition not idempotent at " + std::to_string(x));
  }

  LawCounter add_laws{r}, mul_laws{r}, dist{r}, structure{r};
  for_triples(n, budget, r, "S-algebra laws", [&](Elem x, Elem y, Elem z) {
    if (a.add(x, y) != a.add(y, x)) add_laws.fail("addition not commutative at " + triple(x, y, z));
    if (a.add(a.add(x, y), z) != a.add(x, a.add(y, z)))
      add_laws.fail("addition not associative at " + triple(x, y, z));
    if (a.mul(a.mul(x, y), z) != a.mul(x, a.mul(y, z)))
      mul_laws.fail("multiplication not associative at " + triple(x, y, z));
    if (a.mul(x, a.add(y, z)) != a.add(a.mul(x, y), a.mul(x, z)))
      dist.fail("left distributivity violated at " + triple(x, y, z));
    if (a.mul(a.add(y, z), x) != a.add(a.mul(y, x), a.mul(z, x)))
      dist.fail("right distributivity violated at " + triple(x, y, z));
    switch (obj.variety().kind()) {
      case VarietyKind::Set: break;
      case VarietyKind::Pos:
        if (obj.leq(x, y) != (a.add(x, y) == y)) structure.fail("addition is not the join at " + triple(x, y, z));
        break;
      case VarietyKind::Jsl:
        if (a.add(x, y) != obj.join(x, y)) structure.fail("addition is not the join at " + triple(x, y, z));
        break;
      case VarietyKind::Vect:
        if (a.add(x, y) != obj.add(x, y)) structure.fail("addition is not vector addition at " + triple(x, y, z));
        if (a.mul(obj.scale(z % obj.variety().modulus(), x), y) !=
            obj.scale(z % obj.variety().modulus(), a.mul(x, y)))
          structure.fail("multiplication not homogeneous at " + triple(x, y, z));
        break;
    }
  });
  return r;
}

// ---------------------------------------------------------------------------
// lifts

std::uint32_t LiftedSAlgebra::mask(Elem x) const {
  switch (base_.monoid().variety().kind()) {
    case VarietyKind::Set: return x;
    case VarietyKind::Pos: return (*masks_)[x];
    default: throw InputError("member masks exist for set and poset lifts only");
  }
}

Elem LiftedSAlgebra::from_mask(std::uint32_t m) const {
  switch (base_.monoid().variety().kind()) {
    case VarietyKind::Set: return m;
    case VarietyKind::Pos: {
      const auto it = std::lower_bound(masks_->begin(), masks_->end(), m);
      if (it == masks_->end() || *it != m) throw InputError("mask is not a down-set");
      return static_cast<Elem>(it - masks_->begin());
    }
    default: throw InputError("member masks exist for set and poset lifts only");
  }
}

Valuation LiftedSAlgebra::lift(const Valuation& on_base) const {
  const auto kind = base_.monoid().variety().kind();
  if (kind == VarietyKind::Jsl || kind == VarietyKind::Vect) return on_base;
  Valuation v{std::vector<Scalar>(size())};
  for (Elem x = 0; x < size(); ++x) {
    std::uint32_t bits = mask(x);
    Scalar acc = 0;
    while (bits && !acc) {
      const int i = std::countr_zero(bits);
      acc = on_base(static_cast<Elem>(i));
      bits &= bits - 1;
    }
    v.values[x] = acc;
  }
  return v;
}

Valuation LiftedSAlgebra::middle_valuation(std::size_t p, std::size_t q) const {
  return lift(base_.coordinate_valuation(p, q));
}

namespace {

// A binary operation on {0..n-1} replaced by its table.
std::function<Elem(Elem, Elem)> tabulate(std::size_t n, const std::function<Elem(Elem, Elem)>& op) {
  auto table = std::make_shared<std::vector<Elem>>(n * n);
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) (*table)[x * n + y] = op(x, y);
  return [table, n](Elem x, Elem y) { return (*table)[x * n + y]; };
}

}  // namespace

LiftedSAlgebra lift_algebra(const StarProduct& sp) {
  LiftedSAlgebra out;
  out.base_ = sp;
  const DMonoid& b = sp.monoid();
  const std::size_t k = b.size();
  auto alg = std::make_shared<SAlgebra>();

  switch (b.variety().kind()) {
    case VarietyKind::Set:
    case VarietyKind::Pos: {
      if (k > kLiftBaseGuard)
        throw SizeGuardError("lifted algebra too large: 2^" + std::to_string(k) + " subsets (limit 2^" +
                             std::to_string(kLiftBaseGuard) + ")");
      const bool pos = b.variety().kind() == VarietyKind::Pos;
      std::vector<std::uint32_t> down(k, 0);
      for (Elem x = 0; x < k; ++x)
        for (Elem y = 0; y < k; ++y)
          if (pos ? b.carrier().leq(y, x) : x == y) down[x] |= std::uint32_t{1} << y;
      auto complex = [b, down](std::uint32_t x, std::uint32_t y) {
        std::uint32_t z = 0;
        for (std::uint32_t xs = x; xs; xs &= xs - 1) {
          const Elem i = static_cast<Elem>(std::countr_zero(xs));
          for (std::uint32_t ys = y; ys; ys &= ys - 1) z |= down[b.mult(i, static_cast<Elem>(std::countr_zero(ys)))];
        }
        return z;
      };
      if (!pos) {
        alg->carrier = FiniteObject::set(std::size_t{1} << k);
        alg->add = [](Elem x, Elem y) { return x | y; };
        alg->mul = complex;
        alg->zero = 0;
        for (Elem x = 0; x < k; ++x) out.eta_.push_back(std::uint32_t{1} << x);
      } else {
        auto masks = std::make_shared<std::vector<std::uint32_t>>();
        for (std::uint32_t m = 0; m < (std::uint32_t{1} << k); ++m) {
          bool closed = true;
          for (std::uint32_t bits = m; bits && closed; bits &= bits - 1)
            closed = (down[std::countr_zero(bits)] & ~m) == 0;
          if (!closed) continue;
          masks->push_back(m);
          if (masks->size() > kStarSizeGuard)
            throw SizeGuardError("lifted algebra too large: more than " + std::to_string(kStarSizeGuard) +
                                 " down-sets");
        }
        const std::size_t n = masks->size();
        std::vector<bool> leq(n * n);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) leq[i * n + j] = ((*masks)[i] & ~(*masks)[j]) == 0;
        alg->carrier = FiniteObject::poset_from_relation(n, std::move(leq));
        std::shared_ptr<const std::vector<std::uint32_t>> ms = masks;
        auto index = [ms](std::uint32_t m) {
          return static_cast<Elem>(std::lower_bound(ms->begin(), ms->end(), m) - ms->begin());
        };
        alg->add = [ms, index](Elem x, Elem y) { return index((*ms)[x] | (*ms)[y]); };
        alg->mul = [ms, index, complex](Elem x, Elem y) { return index(complex((*ms)[x], (*ms)[y])); };
        alg->zero = 0;
        for (Elem x = 0; x < k; ++x) out.eta_.push_back(index(down[x]));
        out.masks_ = ms;
      }
      alg->one = out.eta_[b.unit()];
      break;
    }
    case VarietyKind::Jsl: {
      const FiniteObject c = b.carrier();
      alg->carrier = c;
      alg->add = [c](Elem x, Elem y) { return c.join(x, y); };
      alg->mul = [b](Elem x, Elem y) { return b.mult(x, y); };
      alg->zero = c.bottom();
      alg->one = b.unit();
      out.eta_.resize(k);
      std::iota(out.eta_.begin(), out.eta_.end(), Elem{0});
      break;
    }
    case VarietyKind::Vect: {
      const FiniteObject c = b.carrier();
      alg->carrier = c;
      alg->add = [c](Elem x, Elem y) { return c.add(x, y); };
      alg->mul = [b](Elem x, Elem y) { return b.mult(x, y); };
      alg->zero = 0;
      alg->one = b.unit();
      out.eta_.resize(k);
      std::iota(out.eta_.begin(), out.eta_.end(), Elem{0});
      break;
    }
  }
  const std::size_t n = alg->carrier.size();
  if (n * n <= kTabulateLimit) {
    alg->add = tabulate(n, alg->add);
    alg->mul = tabulate(n, alg->mul);
  }
  out.algebra_ = std::move(alg);
  return out;
}

// ---------------------------------------------------------------------------
// triangular monoids

DMonoid triangular_monoid(const SAlgebra& a, std::span<const Elem> f, std::span<const Elem> g,
                          const DMonoid& m, const DMonoid& n) {
  require_same_variety(m, n);
  if (!(a.carrier.variety() == m.variety())) throw InputError("variety mismatch: middle algebra");
  if (f.size() != m.size() || g.size() != n.size()) throw InputError("f and g must be total");
  const std::size_t sm = m.size(), sa = a.carrier.size();
  FiniteObject carrier = FiniteObject::product({m.carrier(), a.carrier, n.carrier()});
  std::vector<Elem> fv(f.begin(), f.end()), gv(g.begin(), g.end());
  auto mult = [a, fv = std::move(fv), gv = std::move(gv), m, n, sm, sa](Elem x, Elem y) {
    const Elem xm = x % sm, xa = (x / sm) % sa, xn = x / (sm * sa);
    const Elem ym = y % sm, ya = (y / sm) % sa, yn = y / (sm * sa);
    const Elem mid = a.add(a.mul(fv[xm], ya), a.mul(xa, gv[yn]));
    return static_cast<Elem>(m.mult(xm, ym) + sm * (mid + sa * n.mult(xn, yn)));
  };
  const Elem unit = static_cast<Elem>(m.unit() + sm * (a.zero + sa * n.unit()));
  return DMonoid(carrier, unit, std::move(mult));
}

// ---------------------------------------------------------------------------
// Schützenberger product

Elem SchutzProduct::compose(Elem m, Elem a, Elem n) const {
  return static_cast<Elem>(m + left().size() * (a + lifted_.size() * n));
}

std::tuple<Elem, Elem, Elem> SchutzProduct::split(Elem x) const {
  const std::size_t sm = left().size(), sa = lifted_.size();
  return {static_cast<Elem>(x % sm), static_cast<Elem>((x / sm) % sa), static_cast<Elem>(x / (sm * sa))};
}

std::vector<Elem> SchutzProduct::left_projection() const {
  std::vector<Elem> out(size());
  for (Elem x = 0; x < size(); ++x) out[x] = left_of(x);
  return out;
}

std::vector<Elem> SchutzProduct::right_projection() const {
  std::vector<Elem> out(size());
  for (Elem x = 0; x < size(); ++x) out[x] = right_of(x);
  return out;
}

SchutzProduct schutzenberger(const DMonoid& m, const DMonoid& n) {
  SchutzProduct s;
  s.lifted_ = lift_algebra(star_product(m, n));
  const StarProduct& sp = s.lifted_.base();
  for (Elem x = 0; x < m.size(); ++x) s.f_.push_back(s.lifted_.eta(sp.gen(x, n.unit())));
  for (Elem y = 0; y < n.size(); ++y) s.g_.push_back(s.lifted_.eta(sp.gen(m.unit(), y)));
  s.monoid_ = triangular_monoid(s.lifted_.algebra(), s.f_, s.g_, m, n);
  return s;
}

namespace {

// Monoid-morphism laws of `values` from `src` into the multiplicative monoid
// (mul, one), on all pairs or a seeded sample of pairs.
void check_multiplicative(const std::string& what, std::size_t n, Elem src_unit,
                          const std::function<Elem(Elem, Elem)>& src_mul, Elem one,
                          const std::function<Elem(Elem, Elem)>& dst_mul, std::span<const Elem> values,
                          const CheckBudget& budget, ValidationReport& r) {
  if (values[src_unit] != one) r.add(what + " does not preserve the unit");
  LawCounter c{r};
  auto check = [&](Elem x, Elem y) {
    if (values[src_mul(x, y)] != dst_mul(values[x], values[y]))
      c.fail(what + " not multiplicative at (" + std::to_string(x) + "," + std::to_string(y) + ")");
  };
  if (std::uint64_t{n} * n <= budget.exhaustive_budget) {
    for (Elem x = 0; x < n; ++x)
      for (Elem y = 0; y < n; ++y) check(x, y);
    return;
  }
  r.sampled = true;
  r.notes.push_back(what + " checked on " + std::to_string(budget.samples) + " seeded random pairs");
  std::mt19937_64 rng(budget.seed);
  std::uniform_int_distribution<Elem> pick(0, static_cast<Elem>(n - 1));
  for (std::uint64_t i = 0; i < budget.samples; ++i) {
    const Elem x = pick(rng), y = pick(rng);
    check(x, y);
  }
}

}  // namespace

ValidationReport validate_schutz_structure(const SchutzProduct& s, const CheckBudget& budget) {
  ValidationReport r;
  const SAlgebra& a = s.middle().algebra();
  r.merge(validate_salgebra(a, budget), "middle algebra: ");

  const DMonoid& m = s.left();
  const DMonoid& n = s.right();
  const DMonoid& b = s.star().monoid();
  auto mm = [&](Elem x, Elem y) { return m.mult(x, y); };
  auto nm = [&](Elem x, Elem y) { return n.mult(x, y); };
  auto bm = [&](Elem x, Elem y) { return b.mult(x, y); };
  std::vector<Elem> f, g;
  for (Elem x = 0; x < m.size(); ++x) f.push_back(s.f(x));
  for (Elem y = 0; y < n.size(); ++y) g.push_back(s.g(y));
  check_multiplicative("f", m.size(), m.unit(), mm, a.one, a.mul, f, budget, r);
  check_multiplicative("g", n.size(), n.unit(), nm, a.one, a.mul, g, budget, r);
  check_multiplicative("eta", b.size(), b.unit(), bm, a.one, a.mul, s.middle().eta_table(), budget, r);
  if (!is_structure_morphism(m.carrier(), a.carrier, f)) r.add("f is not a morphism of the variety");
  if (!is_structure_morphism(n.carrier(), a.carrier, g)) r.add("g is not a morphism of the variety");
  if (!is_structure_morphism(b.carrier(), a.carrier, s.middle().eta_table()))
    r.add("eta is not a morphism of the variety");

  const DMonoid& p = s.monoid();
  auto pm = [&](Elem x, Elem y) { return p.mult(x, y); };
  const auto left = s.left_projection();
  const auto right = s.right_projection();
  check_multiplicative("left projection", p.size(), p.unit(), pm, m.unit(), mm, left, budget, r);
  check_multiplicative("right projection", p.size(), p.unit(), pm, n.unit(), nm, right, budget, r);
  if (!is_structure_morphism(p.carrier(), m.carrier(), left)) r.add("left projection is not a morphism of the variety");
  if (!is_structure_morphism(p.carrier(), n.carrier(), right)) r.add("right projection is not a morphism of the variety");
  return r;
}

}  // namespace schutzkit
