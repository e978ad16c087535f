#include "schutzkit/algebra_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "schutzkit/errors.hpp"

namespace schutzkit {

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Variety Variety::vect(std::uint32_t modulus) {
  if (!is_prime(modulus))
    throw InputError("modulus must be prime (got " + std::to_string(modulus) + ")");
  return Variety(VarietyKind::Vect, modulus);
}

std::string Variety::name() const {
  switch (kind_) {
    case VarietyKind::Set: return "set";
    case VarietyKind::Pos: return "pos";
    case VarietyKind::Jsl: return "jsl";
    case VarietyKind::Vect: return "vect";
  }
  return "?";
}

Semiring Semiring::for_variety(const Variety& v) {
  switch (v.kind()) {
    case VarietyKind::Set: return Semiring(true, false, 2);
    case VarietyKind::Pos:
    case VarietyKind::Jsl: return Semiring(true, true, 2);
    case VarietyKind::Vect: return Semiring(false, false, v.modulus());
  }
  throw InternalError("unknown variety");
}

void ValidationReport::merge(const ValidationReport& other, const std::string& prefix) {
  for (const auto& v : other.violations) violations.push_back(prefix + v);
  for (const auto& n : other.notes) notes.push_back(prefix + n);
  sampled = sampled || other.sampled;
}

// ---------------------------------------------------------------------------
// FiniteObject

FiniteObject FiniteObject::set(std::size_t n) {
  FiniteObject o;
  o.variety_ = Variety::set();
  o.size_ = n;
  return o;
}

FiniteObject FiniteObject::poset(std::size_t n, const std::vector<std::pair<Elem, Elem>>& pairs) {
  std::vector<bool> leq(n * n, false);
  for (std::size_t x = 0; x < n; ++x) leq[x * n + x] = true;
  for (auto [x, y] : pairs) {
    if (x >= n || y >= n) throw InputError("order pair out of range");
    leq[x * n + y] = true;
  }
  // Warshall
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (leq[i * n + k])
        for (std::size_t j = 0; j < n; ++j)
          if (leq[k * n + j]) leq[i * n + j] = true;
  return poset_from_relation(n, std::move(leq));
}

FiniteObject FiniteObject::poset_from_relation(std::size_t n, std::vector<bool> leq) {
  if (leq.size() != n * n) throw InputError("order relation has wrong size");
  FiniteObject o;
  o.variety_ = Variety::pos();
  o.size_ = n;
  o.order_ = std::make_shared<const std::vector<bool>>(std::move(leq));
  return o;
}

FiniteObject FiniteObject::semilattice(std::size_t n, std::vector<Elem> join, Elem bottom) {
  if (join.size() != n * n) throw InputError("join table has wrong size");
  if (n > 0 && bottom >= n) throw InputError("bottom element out of range");
  for (Elem e : join)
    if (e >= n) throw InputError("join table entry out of range");
  FiniteObject o;
  o.variety_ = Variety::jsl();
  o.size_ = n;
  o.join_ = std::make_shared<const std::vector<Elem>>(std::move(join));
  o.bottom_ = bottom;
  return o;
}

FiniteObject FiniteObject::vector_space(std::uint32_t modulus, std::size_t dimension) {
  Variety v = Variety::vect(modulus);
  const double bits = static_cast<double>(dimension) * std::log2(static_cast<double>(modulus));
  if (bits > 12.0 + 1e-9)
    throw SizeGuardError("vector space too large: " + std::to_string(modulus) + "^" +
                         std::to_string(dimension) + " exceeds 2^12 elements");
  FiniteObject o;
  o.variety_ = v;
  o.dimension_ = dimension;
  std::size_t n = 1;
  for (std::size_t i = 0; i < dimension; ++i) n *= modulus;
  o.size_ = n;
  return o;
}

FiniteObject FiniteObject::product(const std::vector<FiniteObject>& factors) {
  if (factors.empty()) throw InputError("empty product");
  const Variety v = factors.front().variety();
  for (const auto& f : factors)
    if (!(f.variety() == v)) throw InputError("variety mismatch in product");

  std::size_t n = 1;
  for (const auto& f : factors) n *= f.size();

  auto split = [&](std::size_t x) {
    std::vector<Elem> parts(factors.size());
    for (std::size_t i = 0; i < factors.size(); ++i) {
      parts[i] = static_cast<Elem>(x % factors[i].size());
      x /= factors[i].size();
    }
    return parts;
  };
  auto combine = [&](const std::vector<Elem>& parts) {
    std::size_t x = 0;
    for (std::size_t i = factors.size(); i-- > 0;) x = x * factors[i].size() + parts[i];
    return static_cast<Elem>(x);
  };

  switch (v.kind()) {
    case VarietyKind::Set: return set(n);
    case VarietyKind::Pos: {
      if (n > 4096) throw SizeGuardError("poset product too large: " + std::to_string(n));
      std::vector<bool> leq(n * n);
      for (std::size_t x = 0; x < n; ++x) {
        auto px = split(x);
        for (std::size_t y = 0; y < n; ++y) {
          auto py = split(y);
          bool ok = true;
          for (std::size_t i = 0; i < factors.size() && ok; ++i) ok = factors[i].leq(px[i], py[i]);
          leq[x * n + y] = ok;
        }
      }
      return poset_from_relation(n, std::move(leq));
    }
    case VarietyKind::Jsl: {
      if (n > 4096) throw SizeGuardError("semilattice product too large: " + std::to_string(n));
      std::vector<Elem> join(n * n);
      for (std::size_t x = 0; x < n; ++x) {
        auto px = split(x);
        for (std::size_t y = 0; y < n; ++y) {
          auto py = split(y);
          std::vector<Elem> pz(factors.size());
          for (std::size_t i = 0; i < factors.size(); ++i) pz[i] = factors[i].join(px[i], py[i]);
          join[x * n + y] = combine(pz);
        }
      }
      std::vector<Elem> bottoms;
      for (const auto& f : factors) bottoms.push_back(f.bottom());
      return semilattice(n, std::move(join), combine(bottoms));
    }
    case VarietyKind::Vect: {
      std::size_t d = 0;
      for (const auto& f : factors) d += f.dimension();
      return vector_space(v.modulus(), d);
    }
  }
  throw InternalError("unknown variety");
}

bool FiniteObject::leq(Elem x, Elem y) const {
  switch (variety_.kind()) {
    case VarietyKind::Pos: return (*order_)[x * size_ + y];
    case VarietyKind::Jsl: return join(x, y) == y;
    default: return x == y;
  }
}

std::vector<Scalar> FiniteObject::coords(Elem x) const {
  std::vector<Scalar> c(dimension_);
  const Scalar p = variety_.modulus();
  for (std::size_t i = 0; i < dimension_; ++i) {
    c[i] = x % p;
    x /= p;
  }
  return c;
}

Elem FiniteObject::from_coords(std::span<const Scalar> c) const {
  const Scalar p = variety_.modulus();
  Elem x = 0;
  for (std::size_t i = c.size(); i-- > 0;) x = x * p + (c[i] % p);
  return x;
}

Elem FiniteObject::add(Elem x, Elem y) const {
  const Scalar p = variety_.modulus();
  Elem r = 0, place = 1;
  for (std::size_t i = 0; i < dimension_; ++i) {
    r += ((x % p + y % p) % p) * place;
    x /= p;
    y /= p;
    place *= p;
  }
  return r;
}

Elem FiniteObject::scale(Scalar s, Elem x) const {
  const Scalar p = variety_.modulus();
  Elem r = 0, place = 1;
  for (std::size_t i = 0; i < dimension_; ++i) {
    r += ((s % p) * (x % p) % p) * place;
    x /= p;
    place *= p;
  }
  return r;
}

Elem FiniteObject::basis(std::size_t i) const {
  Elem e = 1;
  for (std::size_t k = 0; k < i; ++k) e *= variety_.modulus();
  return e;
}

// ---------------------------------------------------------------------------
// validation

ValidationReport validate_object(const FiniteObject& obj) {
  ValidationReport r;
  const std::size_t n = obj.size();
  auto pair = [](Elem x, Elem y) {
    return "(" + std::to_string(x) + "," + std::to_string(y) + ")";
  };
  switch (obj.variety().kind()) {
    case VarietyKind::Set: break;
    case VarietyKind::Pos:
      for (Elem x = 0; x < n; ++x)
        if (!obj.leq(x, x)) r.add("reflexivity violated at " + std::to_string(x));
      for (Elem x = 0; x < n; ++x)
        for (Elem y = x + 1; y < n; ++y)
          if (obj.leq(x, y) && obj.leq(y, x)) r.add("antisymmetry violated at " + pair(x, y));
      for (Elem x = 0; x < n; ++x)
        for (Elem y = 0; y < n; ++y)
          if (obj.leq(x, y))
            for (Elem z = 0; z < n; ++z)
              if (obj.leq(y, z) && !obj.leq(x, z))
                r.add("transitivity violated at (" + std::to_string(x) + "," + std::to_string(y) +
                      "," + std::to_string(z) + ")");
      break;
    case VarietyKind::Jsl:
      if (n == 0) {
        r.add("semilattice must be nonempty");
        break;
      }
      for (Elem x = 0; x < n; ++x) {
        if (obj.join(x, x) != x) r.add("join not idempotent at " + std::to_string(x));
        if (obj.join(obj.bottom(), x) != x) r.add("bottom not neutral at " + std::to_string(x));
        for (Elem y = 0; y < n; ++y) {
          if (obj.join(x, y) != obj.join(y, x)) r.add("join not commutative at " + pair(x, y));
          for (Elem z = 0; z < n; ++z)
            if (obj.join(obj.join(x, y), z) != obj.join(x, obj.join(y, z)))
              r.add("join not associative at (" + std::to_string(x) + "," + std::to_string(y) +
                    "," + std::to_string(z) + ")");
        }
      }
      break;
    case VarietyKind::Vect: {
      std::size_t expect = 1;
      for (std::size_t i = 0; i < obj.dimension(); ++i) expect *= obj.variety().modulus();
      if (expect != n) r.add("vector space carrier size is not p^d");
      break;
    }
  }
  return r;
}

bool is_valuation(const FiniteObject& obj, const Valuation& v) {
  const std::size_t n = obj.size();
  if (v.values.size() != n) return false;
  const Semiring s = Semiring::for_variety(obj.variety());
  for (Scalar x : v.values)
    if (x >= s.size()) return false;
  switch (obj.variety().kind()) {
    case VarietyKind::Set: return true;
    case VarietyKind::Pos:
      for (Elem x = 0; x < n; ++x)
        for (Elem y = 0; y < n; ++y)
          if (obj.leq(x, y) && !s.leq(v(x), v(y))) return false;
      return true;
    case VarietyKind::Jsl:
      if (v(obj.bottom()) != 0) return false;
      for (Elem x = 0; x < n; ++x)
        for (Elem y = 0; y < n; ++y)
          if (v(obj.join(x, y)) != s.add(v(x), v(y))) return false;
      return true;
    case VarietyKind::Vect:
      for (Elem x = 0; x < n; ++x) {
        for (Elem y = 0; y < n; ++y)
          if (v(obj.add(x, y)) != s.add(v(x), v(y))) return false;
        for (Scalar c = 0; c < s.size(); ++c)
          if (v(obj.scale(c, x)) != s.mul(c, v(x))) return false;
      }
      return true;
  }
  return false;
}

bool is_structure_morphism(const FiniteObject& src, const FiniteObject& dst,
                           std::span<const Elem> map) {
  const std::size_t n = src.size();
  if (map.size() != n || !(src.variety() == dst.variety())) return false;
  for (Elem y : map)
    if (y >= dst.size()) return false;
  switch (src.variety().kind()) {
    case VarietyKind::Set: return true;
    case VarietyKind::Pos:
      for (Elem x = 0; x < n; ++x)
        for (Elem y = 0; y < n; ++y)
          if (src.leq(x, y) && !dst.leq(map[x], map[y])) return false;
      return true;
    case VarietyKind::Jsl:
      if (map[src.bottom()] != dst.bottom()) return false;
      for (Elem x = 0; x < n; ++x)
        for (Elem y = 0; y < n; ++y)
          if (map[src.join(x, y)] != dst.join(map[x], map[y])) return false;
      return true;
    case VarietyKind::Vect: {
      for (Elem x = 0; x < n; ++x) {
        for (Elem y = 0; y < n; ++y)
          if (map[src.add(x, y)] != dst.add(map[x], map[y])) return false;
        for (Scalar c = 0; c < src.variety().modulus(); ++c)
          if (map[src.scale(c, x)] != dst.scale(c, map[x])) return false;
      }
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// valuations

namespace {

[[noreturn]] void too_large(std::size_t count, std::size_t cap) {
  throw SizeGuardError("enumeration too large: more than " + std::to_string(cap) +
                       " candidates (at least " + std::to_string(count) + ")");
}

// Assign values element by element, 0 before 1, pruning monotonicity
// violations against already-assigned elements. Yields lexicographic order.
std::vector<Valuation> enumerate_boolean(const FiniteObject& obj, std::size_t cap) {
  const std::size_t n = obj.size();
  const bool ordered = obj.variety().kind() == VarietyKind::Pos;
  std::vector<Valuation> out;
  std::vector<Scalar> cur(n, 0);

  auto consistent = [&](std::size_t i) {
    if (!ordered) return true;
    for (std::size_t j = 0; j < i; ++j) {
      if (obj.leq(static_cast<Elem>(j), static_cast<Elem>(i)) && cur[j] > cur[i]) return false;
      if (obj.leq(static_cast<Elem>(i), static_cast<Elem>(j)) && cur[i] > cur[j]) return false;
    }
    return true;
  };

  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      if (out.size() >= cap) too_large(out.size() + 1, cap);
      out.push_back(Valuation{cur});
      return;
    }
    for (Scalar v = 0; v <= 1; ++v) {
      cur[i] = v;
      if (consistent(i)) self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace

std::vector<Valuation> enumerate_valuations(const FiniteObject& obj, std::size_t cap) {
  const std::size_t n = obj.size();
  std::vector<Valuation> out;
  switch (obj.variety().kind()) {
    case VarietyKind::Set:
      if (n >= 63 || (std::size_t{1} << n) > cap) too_large(n >= 63 ? cap + 1 : std::size_t{1} << n, cap);
      return enumerate_boolean(obj, cap);
    case VarietyKind::Pos: return enumerate_boolean(obj, cap);
    case VarietyKind::Jsl: {
      // Every ideal of a finite join-semilattice with bottom is principal,
      // so the morphisms into {0<1} are exactly y |-> [y not <= x].
      if (n > cap) too_large(n, cap);
      for (Elem x = 0; x < n; ++x) {
        Valuation v{std::vector<Scalar>(n)};
        for (Elem y = 0; y < n; ++y) v.values[y] = obj.leq(y, x) ? 0 : 1;
        out.push_back(std::move(v));
      }
      break;
    }
    case VarietyKind::Vect: {
      const Scalar p = obj.variety().modulus();
      const std::size_t d = obj.dimension();
      if (n > cap) too_large(n, cap);
      // Functionals are coefficient vectors c with value sum_i c_i x_i.
      for (Elem c = 0; c < n; ++c) {
        const auto cc = obj.coords(c);
        Valuation v{std::vector<Scalar>(n)};
        for (Elem x = 0; x < n; ++x) {
          const auto xc = obj.coords(x);
          Scalar s = 0;
          for (std::size_t i = 0; i < d; ++i) s = (s + cc[i] * xc[i]) % p;
          v.values[x] = s;
        }
        out.push_back(std::move(v));
      }
      break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_separating(std::span<const Valuation> family, const FiniteObject& obj) {
  const std::size_t n = obj.size();
  const Semiring s = Semiring::for_variety(obj.variety());
  for (const auto& f : family)
    if (f.values.size() != n) throw InputError("valuation source mismatch");

  if (obj.variety().kind() == VarietyKind::Pos) {
    for (Elem x = 0; x < n; ++x)
      for (Elem y = 0; y < n; ++y) {
        bool all = true;
        for (const auto& f : family) all = all && s.leq(f(x), f(y));
        if (all != obj.leq(x, y)) return false;
      }
    return true;
  }
  for (Elem x = 0; x < n; ++x)
    for (Elem y = x + 1; y < n; ++y) {
      bool differ = false;
      for (const auto& f : family)
        if (f(x) != f(y)) {
          differ = true;
          break;
        }
      if (!differ) return false;
    }
  return true;
}

}  // namespace schutzkit
