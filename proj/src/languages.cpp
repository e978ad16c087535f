#include "schutzkit/languages.hpp"

#include <algorithm>
#include <map>

#include "schutzkit/errors.hpp"
#include "schutzkit/gfp.hpp"

namespace schutzkit {

// ---------------------------------------------------------------------------
// truncated languages

TruncLanguage::TruncLanguage(WordSpace space, Semiring s, std::vector<Scalar> values)
    : space_(std::move(space)), semiring_(s), values_(std::move(values)) {
  if (values_.size() != space_.size()) throw InputError("language must be total on its word space");
  for (Scalar v : values_)
    if (v >= semiring_.size()) throw InputError("language value outside the semiring");
}

TruncLanguage TruncLanguage::constant(const WordSpace& space, const Semiring& s, Scalar c) {
  return TruncLanguage(space, s, std::vector<Scalar>(space.size(), c));
}

TruncLanguage TruncLanguage::from_function(const WordSpace& space, const Semiring& s,
                                           const std::function<Scalar(std::string_view)>& fn) {
  std::vector<Scalar> v(space.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(space.word(i));
  return TruncLanguage(space, s, std::move(v));
}

TruncLanguage TruncLanguage::characteristic(const WordSpace& space, const Semiring& s,
                                            const std::vector<std::string>& words) {
  std::vector<Scalar> v(space.size(), 0);
  for (const auto& w : words) v[space.index(w)] = 1;
  return TruncLanguage(space, s, std::move(v));
}

namespace {

void require_compatible(const TruncLanguage& a, const TruncLanguage& b) {
  if (!(a.space() == b.space())) throw InputError("languages live on different word spaces");
  if (!(a.semiring() == b.semiring())) throw InputError("languages take values in different semirings");
}

}  // namespace

std::optional<std::string> first_difference(const TruncLanguage& a, const TruncLanguage& b) {
  require_compatible(a, b);
  for (std::size_t i = 0; i < a.space().size(); ++i)
    if (a.at(i) != b.at(i)) return a.space().word(i);
  return std::nullopt;
}

TruncLanguage truncate(const TruncLanguage& a, std::size_t bound) {
  if (bound > a.bound()) throw InputError("cannot extend a truncated language");
  const WordSpace space = a.space().with_bound(bound);
  auto vals = a.values();
  return TruncLanguage(space, a.semiring(), std::vector<Scalar>(vals.begin(), vals.begin() + space.size()));
}

TruncLanguage add(const TruncLanguage& a, const TruncLanguage& b) {
  require_compatible(a, b);
  std::vector<Scalar> v(a.space().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.semiring().add(a.at(i), b.at(i));
  return TruncLanguage(a.space(), a.semiring(), std::move(v));
}

TruncLanguage scale(Scalar c, const TruncLanguage& a) {
  if (c >= a.semiring().size()) throw InputError("scalar outside the semiring");
  std::vector<Scalar> v(a.space().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.semiring().mul(c, a.at(i));
  return TruncLanguage(a.space(), a.semiring(), std::move(v));
}

TruncLanguage pointwise_mul(const TruncLanguage& a, const TruncLanguage& b) {
  require_compatible(a, b);
  std::vector<Scalar> v(a.space().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.semiring().mul(a.at(i), b.at(i));
  return TruncLanguage(a.space(), a.semiring(), std::move(v));
}

TruncLanguage complement(const TruncLanguage& a) {
  if (!a.semiring().is_boolean()) throw InputError("complement needs Boolean values");
  std::vector<Scalar> v(a.space().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1 - a.at(i);
  return TruncLanguage(a.space(), a.semiring(), std::move(v));
}

TruncLanguage marked_product(const TruncLanguage& k, char a, const TruncLanguage& l) {
  require_compatible(k, l);
  const WordSpace& space = k.space();
  const std::size_t la = space.letter(a);
  const std::size_t q = space.letter_count();
  const Semiring& s = k.semiring();
  std::vector<std::size_t> pow{1};
  for (std::size_t i = 0; i < space.bound(); ++i) pow.push_back(pow.back() * q);
  std::vector<Scalar> v(space.size(), s.zero());
  // u = x a y with |x| = i; x and y are read off the digits of u's rank.
  for (std::size_t len = 1; len <= space.bound(); ++len)
    for (std::size_t rank = 0; rank < pow[len]; ++rank) {
      Scalar acc = s.zero();
      for (std::size_t i = 0; i < len; ++i) {
        const std::size_t tail = pow[len - 1 - i];
        if ((rank / tail) % q != la) continue;
        const std::size_t x = space.offset(i) + rank / (tail * q);
        const std::size_t y = space.offset(len - 1 - i) + rank % tail;
        acc = s.add(acc, s.mul(k.at(x), l.at(y)));
      }
      v[space.offset(len) + rank] = acc;
    }
  return TruncLanguage(space, s, std::move(v));
}

TruncLanguage derivative(const TruncLanguage& l, char a, Side side) {
  if (l.bound() == 0) throw InputError("derivative of a language truncated at length 0");
  l.space().letter(a);
  const WordSpace space = l.space().with_bound(l.bound() - 1);
  std::vector<Scalar> v(space.size());
  for (std::size_t u = 0; u < space.size(); ++u) {
    const std::string w = space.word(u);
    v[u] = side == Side::Left ? l(std::string(1, a) + w) : l(w + a);
  }
  return TruncLanguage(space, l.semiring(), std::move(v));
}

// ---------------------------------------------------------------------------
// expressions

Expr Expr::atom(std::string name) {
  Expr e;
  e.op_ = Op::Atom;
  e.name_ = std::move(name);
  return e;
}

Expr Expr::empty() {
  Expr e;
  e.op_ = Op::Empty;
  return e;
}

Expr Expr::full() {
  Expr e;
  e.op_ = Op::Full;
  return e;
}

Expr Expr::union_of(std::vector<Expr> operands) {
  if (operands.empty()) return empty();
  if (operands.size() == 1) return std::move(operands.front());
  Expr e;
  e.op_ = Op::Union;
  e.operands_ = std::move(operands);
  return e;
}

Expr Expr::intersection_of(std::vector<Expr> operands) {
  if (operands.empty()) return full();
  if (operands.size() == 1) return std::move(operands.front());
  Expr e;
  e.op_ = Op::Intersection;
  e.operands_ = std::move(operands);
  return e;
}

Expr Expr::complement(Expr operand) {
  Expr e;
  e.op_ = Op::Complement;
  e.operands_.push_back(std::move(operand));
  return e;
}

Expr Expr::sum(std::vector<Expr> operands) {
  if (operands.size() == 1) return std::move(operands.front());
  Expr e;
  e.op_ = Op::Sum;
  e.operands_ = std::move(operands);
  return e;
}

Expr Expr::scale(Scalar c, Expr operand) {
  Expr e;
  e.op_ = Op::Scale;
  e.coefficient_ = c;
  e.operands_.push_back(std::move(operand));
  return e;
}

Expr Expr::marked(Expr k, char a, Expr l) {
  Expr e;
  e.op_ = Op::Marked;
  e.mark_ = a;
  e.operands_.push_back(std::move(k));
  e.operands_.push_back(std::move(l));
  return e;
}

namespace {

std::string join_operands(const std::vector<Expr>& ops, const char* sep) {
  std::string s = "(";
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (i) s += sep;
    s += ops[i].to_string();
  }
  return s + ")";
}

}  // namespace

std::string Expr::to_string() const {
  switch (op_) {
    case Op::Atom: return name_;
    case Op::Empty: return "∅";
    case Op::Full: return "Σ*";
    case Op::Union: return join_operands(operands_, " ∪ ");
    case Op::Intersection: return join_operands(operands_, " ∩ ");
    case Op::Complement: return "¬" + operands_[0].to_string();
    case Op::Sum: return operands_.empty() ? "0" : join_operands(operands_, " + ");
    case Op::Scale: return std::to_string(coefficient_) + "·" + operands_[0].to_string();
    case Op::Marked:
      return "(" + operands_[0].to_string() + " " + std::string(1, mark_) + " " + operands_[1].to_string() + ")";
  }
  return {};
}

void Expr::collect_atoms(std::set<std::string>& out) const {
  if (op_ == Op::Atom) out.insert(name_);
  for (const auto& o : operands_) o.collect_atoms(out);
}

void Environment::bind(const std::string& name, TruncLanguage language) {
  atoms.insert_or_assign(name, std::move(language));
}

namespace {

bool allowed(VarietyKind v, Expr::Op op) {
  using Op = Expr::Op;
  switch (op) {
    case Op::Atom:
    case Op::Marked: return true;
    case Op::Empty:
    case Op::Union: return v != VarietyKind::Vect;
    case Op::Full:
    case Op::Intersection: return v == VarietyKind::Set || v == VarietyKind::Pos;
    case Op::Complement: return v == VarietyKind::Set;
    case Op::Sum:
    case Op::Scale: return v == VarietyKind::Vect;
  }
  return false;
}

std::string op_name(Expr::Op op) {
  switch (op) {
    case Expr::Op::Atom: return "atom";
    case Expr::Op::Empty: return "empty";
    case Expr::Op::Full: return "full";
    case Expr::Op::Union: return "union";
    case Expr::Op::Intersection: return "intersection";
    case Expr::Op::Complement: return "complement";
    case Expr::Op::Sum: return "sum";
    case Expr::Op::Scale: return "scalar multiple";
    case Expr::Op::Marked: return "marked product";
  }
  return "?";
}

}  // namespace

namespace {

// Evaluates one expression; atoms are read in place and marked products are
// memoized by their rendering.
class Evaluator {
 public:
  explicit Evaluator(const Environment& env) : env_(env), s_(Semiring::for_variety(env.variety)) {}

  TruncLanguage language(const Expr& expr) {
    std::vector<Scalar> tmp;
    const auto v = operand(expr, tmp);
    return TruncLanguage(env_.space, s_, std::vector<Scalar>(v.begin(), v.end()));
  }

 private:
  using Values = std::vector<Scalar>;

  // Values of `expr`, either borrowed (atoms, memoized products) or held in tmp.
  std::span<const Scalar> operand(const Expr& expr, Values& tmp) {
    using Op = Expr::Op;
    check_allowed(expr);
    if (expr.op() == Op::Atom) return atom(expr.name()).values();
    if (expr.op() == Op::Marked) return marked(expr).values();
    tmp = compound(expr);
    return tmp;
  }

  const TruncLanguage& atom(const std::string& name) const {
    const auto it = env_.atoms.find(name);
    if (it == env_.atoms.end()) throw InputError("unbound atom " + name);
    if (!(it->second.space() == env_.space) || !(it->second.semiring() == s_))
      throw InputError("atom " + name + " does not match the environment");
    return it->second;
  }

  const TruncLanguage& marked(const Expr& expr) {
    std::string key = expr.to_string();
    if (const auto it = memo_.find(key); it != memo_.end()) return it->second;
    const TruncLanguage k = language(expr.operands()[0]);
    const TruncLanguage l = language(expr.operands()[1]);
    return memo_.emplace(std::move(key), marked_product(k, expr.mark(), l)).first->second;
  }

  Values compound(const Expr& expr) {
    using Op = Expr::Op;
    const std::size_t n = env_.space.size();
    Values tmp;
    switch (expr.op()) {
      case Op::Empty: return Values(n, s_.zero());
      case Op::Full: return Values(n, s_.one());
      case Op::Union:
      case Op::Sum: {
        Values acc(n, s_.zero());
        for (const auto& o : expr.operands()) {
          const auto v = operand(o, tmp);
          for (std::size_t i = 0; i < n; ++i) acc[i] = s_.add(acc[i], v[i]);
        }
        return acc;
      }
      case Op::Intersection: {
        Values acc(n, s_.one());
        for (const auto& o : expr.operands()) {
          const auto v = operand(o, tmp);
          for (std::size_t i = 0; i < n; ++i) acc[i] = s_.mul(acc[i], v[i]);
        }
        return acc;
      }
      case Op::Complement: {
        const auto v = operand(expr.operands()[0], tmp);
        Values out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = s_.one() - v[i];
        return out;
      }
      case Op::Scale: {
        const Scalar c = expr.coefficient() % s_.size();
        const auto v = operand(expr.operands()[0], tmp);
        Values out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = s_.mul(c, v[i]);
        return out;
      }
      case Op::Atom:
      case Op::Marked: break;
    }
    throw InternalError("unknown operation");
  }

  void check_allowed(const Expr& expr) const {
    if (!allowed(env_.variety.kind(), expr.op()))
      throw InputError("operation " + op_name(expr.op()) + " is not available for " + env_.variety.name());
  }

  const Environment& env_;
  Semiring s_;
  std::map<std::string, TruncLanguage> memo_;
};

}  // namespace

TruncLanguage c_op_apply(const Expr& expr, const Environment& env) { return Evaluator(env).language(expr); }

// ---------------------------------------------------------------------------
// closure membership

namespace {

using Bits = std::vector<std::uint64_t>;

Bits make_bits(std::size_t n) { return Bits((n + 63) / 64, 0); }
void set_bit(Bits& b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }

Bits bits_and(const Bits& a, const Bits& b) {
  Bits c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] & b[i];
  return c;
}

Bits bits_or(const Bits& a, const Bits& b) {
  Bits c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] | b[i];
  return c;
}

}  // namespace

struct MembershipOracle::Impl {
  Variety variety = Variety::set();
  std::vector<NamedAtom> atoms;

  // SET and POS: words grouped by their values on all atoms.
  std::vector<std::size_t> block_of_word;
  std::size_t blocks = 0;
  std::vector<std::vector<Scalar>> block_signature;  // atom values per block

  // SET: atoms that refine the grouping, used for minterms.
  std::vector<std::size_t> literals;

  // POS: meets of atoms, then joins of meets, with derivation links.
  struct Derived {
    Bits bits;
    std::size_t parent;  // npos for the seed
    std::size_t step;    // atom index (meets) or meet index (joins)
  };
  std::vector<Derived> meets, joins;
  std::map<Bits, std::size_t> join_index;

  void group_words() {
    const std::size_t n = atoms.empty() ? 0 : atoms.front().language.space().size();
    std::map<std::vector<Scalar>, std::size_t> ids;
    block_of_word.resize(n);
    for (std::size_t w = 0; w < n; ++w) {
      std::vector<Scalar> sig;
      for (const auto& a : atoms) sig.push_back(a.language.at(w));
      const auto [it, fresh] = ids.emplace(sig, blocks);
      if (fresh) {
        ++blocks;
        block_signature.push_back(sig);
      }
      block_of_word[w] = it->second;
    }
  }

  void choose_literals() {
    const std::size_t n = block_of_word.size();
    std::vector<std::size_t> part(n, 0);
    std::size_t parts = 1;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      std::map<std::pair<std::size_t, Scalar>, std::size_t> refined;
      std::vector<std::size_t> next(n);
      for (std::size_t w = 0; w < n; ++w)
        next[w] = refined.emplace(std::pair{part[w], atoms[i].language.at(w)}, refined.size()).first->second;
      if (refined.size() > parts) {
        literals.push_back(i);
        parts = refined.size();
        part = std::move(next);
      }
    }
  }

  Expr minterm(std::size_t block) const {
    std::vector<Expr> lits;
    for (std::size_t i : literals)
      lits.push_back(block_signature[block][i] ? atoms[i].expr : Expr::complement(atoms[i].expr));
    return Expr::intersection_of(std::move(lits));
  }

  // Target as a set of blocks, or nullopt when it is not constant on some
  // block (then no combination of atoms can produce it).
  std::optional<std::vector<Scalar>> block_values(const TruncLanguage& target) const {
    std::vector<Scalar> val(blocks, 2);
    for (std::size_t w = 0; w < block_of_word.size(); ++w) {
      Scalar& v = val[block_of_word[w]];
      if (v == 2) v = target.at(w);
      else if (v != target.at(w)) return std::nullopt;
    }
    return val;
  }

  void build_lattice(std::size_t cap) {
    Bits full = make_bits(blocks);
    for (std::size_t b = 0; b < blocks; ++b) set_bit(full, b);
    std::vector<Bits> atom_bits;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      Bits a = make_bits(blocks);
      for (std::size_t b = 0; b < blocks; ++b)
        if (block_signature[b][i]) set_bit(a, b);
      atom_bits.push_back(std::move(a));
    }
    const std::size_t npos = static_cast<std::size_t>(-1);
    std::map<Bits, std::size_t> meet_index;
    auto too_large = [&](const char* what) {
      throw SizeGuardError(std::string("closure too large: more than ") + std::to_string(cap) + " " + what);
    };
    meets.push_back({full, npos, 0});
    meet_index.emplace(full, 0);
    for (std::size_t i = 0; i < meets.size(); ++i)
      for (std::size_t a = 0; a < atom_bits.size(); ++a) {
        Bits m = bits_and(meets[i].bits, atom_bits[a]);
        if (meet_index.emplace(m, meets.size()).second) {
          meets.push_back({std::move(m), i, a});
          if (meets.size() > cap) too_large("intersections");
        }
      }
    Bits none = make_bits(blocks);
    joins.push_back({none, npos, 0});
    join_index.emplace(none, 0);
    for (std::size_t i = 0; i < joins.size(); ++i)
      for (std::size_t m = 0; m < meets.size(); ++m) {
        Bits j = bits_or(joins[i].bits, meets[m].bits);
        if (join_index.emplace(j, joins.size()).second) {
          joins.push_back({std::move(j), i, m});
          if (joins.size() > cap) too_large("languages");
        }
      }
  }

  Expr meet_expr(std::size_t i) const {
    std::vector<Expr> ops;
    for (; meets[i].parent != static_cast<std::size_t>(-1); i = meets[i].parent)
      ops.push_back(atoms[meets[i].step].expr);
    std::reverse(ops.begin(), ops.end());
    return Expr::intersection_of(std::move(ops));
  }

  Expr join_expr(std::size_t i) const {
    std::vector<Expr> ops;
    for (; joins[i].parent != static_cast<std::size_t>(-1); i = joins[i].parent)
      ops.push_back(meet_expr(joins[i].step));
    std::reverse(ops.begin(), ops.end());
    return Expr::union_of(std::move(ops));
  }
};

MembershipOracle::MembershipOracle(Variety variety, std::vector<NamedAtom> atoms, std::size_t pos_cap)
    : impl_(std::make_unique<Impl>()) {
  impl_->variety = variety;
  const Semiring s = Semiring::for_variety(variety);
  for (auto& a : atoms) {
    if (!(a.language.semiring() == s)) throw InputError("atom values outside the variety's semiring");
    if (!impl_->atoms.empty() && !(impl_->atoms.front().language.space() == a.language.space()))
      throw InputError("atoms live on different word spaces");
    const bool dup = std::any_of(impl_->atoms.begin(), impl_->atoms.end(),
                                 [&](const NamedAtom& b) { return b.language == a.language; });
    if (!dup) impl_->atoms.push_back(std::move(a));
  }
  switch (variety.kind()) {
    case VarietyKind::Set:
      impl_->group_words();
      impl_->choose_literals();
      break;
    case VarietyKind::Pos:
      impl_->group_words();
      impl_->build_lattice(pos_cap);
      break;
    case VarietyKind::Jsl:
    case VarietyKind::Vect: break;
  }
}

MembershipOracle::~MembershipOracle() = default;
MembershipOracle::MembershipOracle(MembershipOracle&&) noexcept = default;
MembershipOracle& MembershipOracle::operator=(MembershipOracle&&) noexcept = default;

const std::vector<NamedAtom>& MembershipOracle::atoms() const { return impl_->atoms; }

std::optional<Expr> MembershipOracle::find(const TruncLanguage& target) const {
  const Impl& im = *impl_;
  const Semiring s = Semiring::for_variety(im.variety);
  if (!(target.semiring() == s)) throw InputError("target values outside the variety's semiring");
  if (!im.atoms.empty() && !(im.atoms.front().language.space() == target.space()))
    throw InputError("target lives on another word space");
  for (const auto& a : im.atoms)
    if (a.language == target) return a.expr;

  const std::size_t n = target.space().size();
  auto all_equal = [&](Scalar c) {
    return std::all_of(target.values().begin(), target.values().end(), [c](Scalar v) { return v == c; });
  };

  switch (im.variety.kind()) {
    case VarietyKind::Set: {
      if (im.atoms.empty()) {
        if (all_equal(0)) return Expr::empty();
        if (all_equal(1)) return Expr::full();
        return std::nullopt;
      }
      const auto val = im.block_values(target);
      if (!val) return std::nullopt;
      if (std::all_of(val->begin(), val->end(), [](Scalar v) { return v == 0; })) return Expr::empty();
      if (std::all_of(val->begin(), val->end(), [](Scalar v) { return v == 1; })) return Expr::full();
      std::vector<Expr> terms;
      for (std::size_t b = 0; b < im.blocks; ++b)
        if ((*val)[b] == 1) terms.push_back(im.minterm(b));
      return Expr::union_of(std::move(terms));
    }
    case VarietyKind::Pos: {
      if (im.atoms.empty()) {
        if (all_equal(0)) return Expr::empty();
        if (all_equal(1)) return Expr::full();
        return std::nullopt;
      }
      const auto val = im.block_values(target);
      if (!val) return std::nullopt;
      Bits b = make_bits(im.blocks);
      for (std::size_t i = 0; i < im.blocks; ++i)
        if ((*val)[i] == 1) set_bit(b, i);
      const auto it = im.join_index.find(b);
      if (it == im.join_index.end()) return std::nullopt;
      return im.join_expr(it->second);
    }
    case VarietyKind::Jsl: {
      std::vector<Expr> terms;
      std::vector<Scalar> acc(n, 0);
      for (const auto& a : im.atoms) {
        bool below = true;
        for (std::size_t w = 0; w < n && below; ++w) below = a.language.at(w) <= target.at(w);
        if (!below) continue;
        terms.push_back(a.expr);
        for (std::size_t w = 0; w < n; ++w) acc[w] |= a.language.at(w);
      }
      if (!std::equal(acc.begin(), acc.end(), target.values().begin())) return std::nullopt;
      return Expr::union_of(std::move(terms));
    }
    case VarietyKind::Vect: {
      const Scalar p = im.variety.modulus();
      std::vector<gfp::Vector> columns;
      for (const auto& a : im.atoms) columns.emplace_back(a.language.values().begin(), a.language.values().end());
      const auto c = gfp::solve(columns, target.values(), p);
      if (!c) return std::nullopt;
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < c->size(); ++i) {
        if ((*c)[i] == 0) continue;
        terms.push_back((*c)[i] == 1 ? im.atoms[i].expr : Expr::scale((*c)[i], im.atoms[i].expr));
      }
      return Expr::sum(std::move(terms));
    }
  }
  throw InternalError("unknown variety");
}

std::optional<Expr> closure_membership(const TruncLanguage& target, const std::vector<NamedAtom>& atoms,
                                       const Variety& variety) {
  return MembershipOracle(variety, atoms).find(target);
}

}  // namespace schutzkit
