#include "schutzkit/dmonoid.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "detail/sampling.hpp"
#include "schutzkit/errors.hpp"
#include "schutzkit/gfp.hpp"

namespace schutzkit {

DMonoid::DMonoid(FiniteObject carrier, Elem unit, std::vector<Elem> table,
                 std::vector<std::string> names)
    : carrier_(std::move(carrier)), unit_(unit) {
  const std::size_t n = carrier_.size();
  if (table.size() != n * n) throw InputError("multiplication table has wrong size");
  if (n > 0 && unit >= n) throw InputError("unit out of range");
  for (Elem e : table)
    if (e >= n) throw InputError("multiplication table entry out of range");
  table_ = std::make_shared<const std::vector<Elem>>(std::move(table));
  if (!names.empty()) {
    if (names.size() != n) throw InputError("name list has wrong size");
    names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
  }
}

DMonoid::DMonoid(FiniteObject carrier, Elem unit, MultFn mult, std::vector<std::string> names)
    : carrier_(std::move(carrier)), unit_(unit) {
  const std::size_t n = carrier_.size();
  if (n > 0 && unit >= n) throw InputError("unit out of range");
  if (n * n <= kTabulateLimit) {
    std::vector<Elem> table(n * n);
    for (Elem x = 0; x < n; ++x)
      for (Elem y = 0; y < n; ++y) table[x * n + y] = mult(x, y);
    table_ = std::make_shared<const std::vector<Elem>>(std::move(table));
  } else {
    fn_ = std::make_shared<const MultFn>(std::move(mult));
  }
  if (!names.empty()) {
    if (names.size() != carrier_.size()) throw InputError("name list has wrong size");
    names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
  }
}

DMonoid DMonoid::from_structure_constants(
    std::uint32_t modulus, const std::vector<std::vector<std::vector<Scalar>>>& constants,
    const std::vector<Scalar>& unit) {
  const std::size_t d = constants.size();
  FiniteObject space = FiniteObject::vector_space(modulus, d);
  if (unit.size() != d) throw InputError("unit vector has wrong dimension");
  for (const auto& row : constants) {
    if (row.size() != d) throw InputError("structure constants must be d x d x d");
    for (const auto& v : row)
      if (v.size() != d) throw InputError("structure constants must be d x d x d");
  }
  const std::size_t n = space.size();
  std::vector<Elem> basis_products(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) basis_products[i * d + j] = space.from_coords(constants[i][j]);

  std::vector<Elem> table(n * n);
  for (Elem x = 0; x < n; ++x) {
    const auto xc = space.coords(x);
    for (Elem y = 0; y < n; ++y) {
      const auto yc = space.coords(y);
      Elem acc = 0;
      for (std::size_t i = 0; i < d; ++i) {
        if (xc[i] == 0) continue;
        for (std::size_t j = 0; j < d; ++j) {
          if (yc[j] == 0) continue;
          acc = space.add(acc, space.scale(xc[i] * yc[j] % modulus, basis_products[i * d + j]));
        }
      }
      table[x * n + y] = acc;
    }
  }
  return DMonoid(space, space.from_coords(unit), std::move(table));
}

DMonoid DMonoid::trivial(const Variety& variety) {
  FiniteObject obj;
  switch (variety.kind()) {
    case VarietyKind::Set: obj = FiniteObject::set(1); break;
    case VarietyKind::Pos: obj = FiniteObject::poset(1, {}); break;
    case VarietyKind::Jsl: obj = FiniteObject::semilattice(1, {0}, 0); break;
    case VarietyKind::Vect: obj = FiniteObject::vector_space(variety.modulus(), 0); break;
  }
  return DMonoid(obj, 0, std::vector<Elem>{0}, {"1"});
}

std::string DMonoid::name(Elem x) const {
  if (names_) return (*names_)[x];
  if (variety().is_vect()) {
    const auto c = carrier_.coords(x);
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) s += '.';
      s += std::to_string(c[i]);
    }
    return s.empty() ? "0" : s;
  }
  return std::to_string(x);
}

std::optional<Elem> DMonoid::find(std::string_view name) const {
  for (Elem x = 0; x < size(); ++x)
    if (this->name(x) == name) return x;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// validation

using detail::for_triples;
using detail::LawCounter;
using detail::triple;

ValidationReport validate_dmonoid(const DMonoid& m, const CheckBudget& budget) {
  ValidationReport r = validate_object(m.carrier());
  if (!r.ok()) return r;
  const std::size_t n = m.size();
  const FiniteObject& obj = m.carrier();
  if (n == 0) {
    r.add("carrier is empty");
    return r;
  }
  if (m.unit() >= n) {
    r.add("unit out of range");
    return r;
  }

  LawCounter unit_law{r};
  for (Elem x = 0; x < n; ++x) {
    if (m.mult(m.unit(), x) != x) unit_law.fail("left unit law violated at " + std::to_string(x));
    if (m.mult(x, m.unit()) != x) unit_law.fail("right unit law violated at " + std::to_string(x));
  }

  LawCounter assoc{r};
  for_triples(n, budget, r, "associativity", [&](Elem a, Elem b, Elem c) {
    if (m.mult(m.mult(a, b), c) != m.mult(a, m.mult(b, c)))
      assoc.fail("associativity violated at " + triple(a, b, c));
  });

  switch (m.variety().kind()) {
    case VarietyKind::Set: break;
    case VarietyKind::Pos: {
      LawCounter mono{r};
      for_triples(n, budget, r, "monotonicity", [&](Elem x, Elem y, Elem z) {
        if (!obj.leq(x, y)) return;
        if (!obj.leq(m.mult(z, x), m.mult(z, y)) || !obj.leq(m.mult(x, z), m.mult(y, z)))
          mono.fail("multiplication not monotone at " + triple(x, y, z));
      });
      break;
    }
    case VarietyKind::Jsl: {
      LawCounter zero{r};
      for (Elem x = 0; x < n; ++x)
        if (m.mult(x, obj.bottom()) != obj.bottom() || m.mult(obj.bottom(), x) != obj.bottom())
          zero.fail("bottom not absorbing at " + std::to_string(x));
      LawCounter dist{r};
      for_triples(n, budget, r, "distributivity", [&](Elem x, Elem y, Elem z) {
        if (m.mult(x, obj.join(y, z)) != obj.join(m.mult(x, y), m.mult(x, z)))
          dist.fail("left distributivity violated at " + triple(x, y, z));
        if (m.mult(obj.join(y, z), x) != obj.join(m.mult(y, x), m.mult(z, x)))
          dist.fail("right distributivity violated at " + triple(x, y, z));
      });
      break;
    }
    case VarietyKind::Vect: {
      const Scalar p = m.variety().modulus();
      LawCounter lin{r};
      for_triples(n, budget, r, "bilinearity", [&](Elem x, Elem y, Elem z) {
        if (m.mult(x, obj.add(y, z)) != obj.add(m.mult(x, y), m.mult(x, z)))
          lin.fail("not additive in the right argument at " + triple(x, y, z));
        if (m.mult(obj.add(y, z), x) != obj.add(m.mult(y, x), m.mult(z, x)))
          lin.fail("not additive in the left argument at " + triple(x, y, z));
      });
      for_triples(n, budget, r, "homogeneity", [&](Elem x, Elem y, Elem s) {
        const Scalar c = s % p;
        const Elem xy = obj.scale(c, m.mult(x, y));
        if (m.mult(obj.scale(c, x), y) != xy || m.mult(x, obj.scale(c, y)) != xy)
          lin.fail("not homogeneous at " + triple(x, y, c));
      });
      break;
    }
  }
  return r;
}

bool is_monoid_morphism(const DMonoid& source, const DMonoid& target,
                        std::span<const Elem> values) {
  const std::size_t n = source.size();
  if (values.size() != n) return false;
  for (Elem v : values)
    if (v >= target.size()) return false;
  if (values[source.unit()] != target.unit()) return false;
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y)
      if (values[source.mult(x, y)] != target.mult(values[x], values[y])) return false;
  return is_structure_morphism(source.carrier(), target.carrier(), values);
}

bool is_isomorphism(const DMonoid& source, const DMonoid& target, std::span<const Elem> values) {
  if (source.size() != target.size()) return false;
  if (!is_monoid_morphism(source, target, values)) return false;
  std::vector<bool> hit(target.size(), false);
  for (Elem v : values) {
    if (hit[v]) return false;
    hit[v] = true;
  }
  if (source.variety().kind() == VarietyKind::Pos) {
    for (Elem x = 0; x < source.size(); ++x)
      for (Elem y = 0; y < source.size(); ++y)
        if (target.carrier().leq(values[x], values[y]) != source.carrier().leq(x, y)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// free morphisms

std::size_t LetterAssignment::letter(char symbol) const {
  const auto pos = alphabet.find(symbol);
  if (pos == std::string::npos)
    throw InputError(std::string("unknown symbol '") + symbol + "'");
  return pos;
}

Elem eval_word(const LetterAssignment& f, std::string_view word) {
  Elem acc = f.target.unit();
  for (char c : word) acc = f.target.mult(acc, f.images[f.letter(c)]);
  return acc;
}

FreeImage image_of_free_morphism(const LetterAssignment& f) {
  const DMonoid& t = f.target;
  const FiniteObject& obj = t.carrier();
  const std::size_t n = t.size();
  if (f.images.size() != f.alphabet.size()) throw InputError("one image per letter required");
  for (Elem e : f.images)
    if (e >= n) throw InputError("letter image out of range");

  std::vector<std::optional<std::string>> witness_of(n);
  std::vector<Elem> order;  // word images in BFS order
  std::deque<Elem> queue{t.unit()};
  witness_of[t.unit()] = "";
  order.push_back(t.unit());
  while (!queue.empty()) {
    const Elem x = queue.front();
    queue.pop_front();
    for (std::size_t c = 0; c < f.alphabet.size(); ++c) {
      const Elem y = t.mult(x, f.images[c]);
      if (witness_of[y]) continue;
      witness_of[y] = *witness_of[x] + f.alphabet[c];
      order.push_back(y);
      queue.push_back(y);
    }
  }

  FreeImage out;
  std::vector<Elem> members;
  std::vector<std::optional<Elem>> sub_of(n);

  if (t.variety().is_vect()) {
    const Scalar p = t.variety().modulus();
    std::vector<gfp::Vector> vecs;
    for (Elem x : order) vecs.push_back(obj.coords(x));
    const auto kept = gfp::greedy_basis(vecs, p);
    std::vector<Elem> basis;
    for (std::size_t i : kept) {
      basis.push_back(order[i]);
      out.basis_words.push_back(*witness_of[order[i]]);
    }
    FiniteObject sub = FiniteObject::vector_space(p, basis.size());
    for (Elem c = 0; c < sub.size(); ++c) {
      const auto cc = sub.coords(c);
      Elem v = 0;
      for (std::size_t i = 0; i < basis.size(); ++i) v = obj.add(v, obj.scale(cc[i], basis[i]));
      members.push_back(v);
      sub_of[v] = c;
    }
    std::vector<Elem> table(sub.size() * sub.size());
    for (Elem a = 0; a < sub.size(); ++a)
      for (Elem b = 0; b < sub.size(); ++b) {
        const auto r = sub_of[t.mult(members[a], members[b])];
        if (!r) throw InternalError("span of word images not closed under multiplication");
        table[a * sub.size() + b] = *r;
      }
    std::vector<std::string> names;
    for (Elem v : members) names.push_back(t.name(v));
    out.submonoid = DMonoid(sub, *sub_of[t.unit()], std::move(table), std::move(names));
  } else {
    std::vector<bool> in(n, false);
    for (Elem x : order) in[x] = true;
    if (t.variety().kind() == VarietyKind::Jsl) {
      in[obj.bottom()] = true;
      bool changed = true;
      while (changed) {
        changed = false;
        std::vector<Elem> cur;
        for (Elem x = 0; x < n; ++x)
          if (in[x]) cur.push_back(x);
        for (Elem x : cur)
          for (Elem y : cur) {
            for (Elem z : {obj.join(x, y), t.mult(x, y)})
              if (!in[z]) {
                in[z] = true;
                changed = true;
              }
          }
      }
    }
    for (Elem x = 0; x < n; ++x)
      if (in[x]) {
        sub_of[x] = static_cast<Elem>(members.size());
        members.push_back(x);
      }
    const std::size_t k = members.size();
    FiniteObject sub;
    switch (t.variety().kind()) {
      case VarietyKind::Set: sub = FiniteObject::set(k); break;
      case VarietyKind::Pos: {
        std::vector<bool> leq(k * k);
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t b = 0; b < k; ++b) leq[a * k + b] = obj.leq(members[a], members[b]);
        sub = FiniteObject::poset_from_relation(k, std::move(leq));
        break;
      }
      case VarietyKind::Jsl: {
        std::vector<Elem> join(k * k);
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t b = 0; b < k; ++b) join[a * k + b] = *sub_of[obj.join(members[a], members[b])];
        sub = FiniteObject::semilattice(k, std::move(join), *sub_of[obj.bottom()]);
        break;
      }
      case VarietyKind::Vect: break;
    }
    std::vector<Elem> table(k * k);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        const auto r = sub_of[t.mult(members[a], members[b])];
        if (!r) throw InternalError("image not closed under multiplication");
        table[a * k + b] = *r;
      }
    std::vector<std::string> names;
    for (Elem v : members) names.push_back(t.name(v));
    out.submonoid = DMonoid(sub, *sub_of[t.unit()], std::move(table), std::move(names));
  }

  out.embedding = members;
  for (Elem v : members) out.witnesses.push_back(witness_of[v]);
  out.corestriction = LetterAssignment{f.alphabet, out.submonoid, {}};
  for (Elem e : f.images) out.corestriction.images.push_back(*sub_of[e]);
  return out;
}

}  // namespace schutzkit
