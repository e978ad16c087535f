#include "schutzkit/document.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "schutzkit/errors.hpp"

namespace schutzkit {

using json = nlohmann::json;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t upto = e.byte == 0 ? 0 : std::min(e.byte - 1, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw InputError("syntax error at line " + std::to_string(line) + ", column " + std::to_string(column) +
                     ": " + e.what());
  }
}

const json& require(const json& doc, const char* key) {
  if (!doc.is_object()) throw InputError("document must be a JSON object");
  const auto it = doc.find(key);
  if (it == doc.end()) throw InputError(std::string("missing key \"") + key + "\"");
  return *it;
}

template <typename T>
T get_as(const json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw InputError("malformed " + what);
  }
}

struct Names {
  std::vector<std::string> list;
  std::map<std::string, Elem> index;

  Elem at(const json& j, const std::string& what) const {
    const auto name = get_as<std::string>(j, what);
    const auto it = index.find(name);
    if (it == index.end()) throw InputError("unknown element \"" + name + "\" in " + what);
    return it->second;
  }
};

std::vector<Elem> name_table(const json& j, const Names& names, const std::string& what) {
  const std::size_t n = names.list.size();
  if (!j.is_array() || j.size() != n) throw InputError(what + " must be a " + std::to_string(n) + "x" +
                                                       std::to_string(n) + " table");
  std::vector<Elem> table(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    const json& row = j[x];
    if (!row.is_array() || row.size() != n) throw InputError(what + " row " + std::to_string(x) + " has wrong length");
    for (std::size_t y = 0; y < n; ++y) table[x * n + y] = names.at(row[y], what);
  }
  return table;
}

DMonoid parse_named(const json& doc, const Variety& variety) {
  Names names;
  names.list = get_as<std::vector<std::string>>(require(doc, "elements"), "elements");
  if (names.list.empty()) throw InputError("elements must not be empty");
  for (Elem i = 0; i < names.list.size(); ++i)
    if (!names.index.emplace(names.list[i], i).second)
      throw InputError("duplicate element \"" + names.list[i] + "\"");
  const std::size_t n = names.list.size();

  const auto unit_name = get_as<std::string>(require(doc, "unit"), "unit");
  const auto uit = names.index.find(unit_name);
  if (uit == names.index.end()) throw InputError("unknown unit element \"" + unit_name + "\"");
  std::vector<Elem> mult = name_table(require(doc, "mult"), names, "mult");

  FiniteObject carrier;
  switch (variety.kind()) {
    case VarietyKind::Set: carrier = FiniteObject::set(n); break;
    case VarietyKind::Pos: {
      std::vector<std::pair<Elem, Elem>> pairs;
      const json& order = doc.contains("order") ? doc.at("order") : json::array();
      if (!order.is_array()) throw InputError("order must be a list of pairs");
      for (const auto& pr : order) {
        if (!pr.is_array() || pr.size() != 2) throw InputError("order entries must be [x, y] pairs");
        pairs.emplace_back(names.at(pr[0], "order"), names.at(pr[1], "order"));
      }
      carrier = FiniteObject::poset(n, pairs);
      break;
    }
    case VarietyKind::Jsl: {
      std::vector<Elem> join = name_table(require(doc, "join"), names, "join");
      // The bottom is the element whose join with everything is the other side.
      std::optional<Elem> bottom;
      for (Elem b = 0; b < n && !bottom; ++b) {
        bool neutral = true;
        for (Elem x = 0; x < n && neutral; ++x) neutral = join[b * n + x] == x && join[x * n + b] == x;
        if (neutral) bottom = b;
      }
      if (!bottom) throw InputError("join table has no neutral element");
      carrier = FiniteObject::semilattice(n, std::move(join), *bottom);
      break;
    }
    case VarietyKind::Vect: throw InternalError("vector spaces are not named");
  }
  return DMonoid(carrier, uit->second, std::move(mult), names.list);
}

std::vector<Scalar> coordinates(const json& j, std::size_t d, Scalar p, const std::string& what) {
  const auto v = get_as<std::vector<long long>>(j, what);
  if (v.size() != d) throw InputError(what + " must have " + std::to_string(d) + " coordinates");
  std::vector<Scalar> out;
  for (long long c : v) out.push_back(static_cast<Scalar>(((c % p) + p) % p));
  return out;
}

DMonoid parse_vect(const json& doc) {
  const auto modulus = get_as<long long>(require(doc, "field_modulus"), "field_modulus");
  if (modulus < 2 || modulus > (1 << 12) || !is_prime(static_cast<std::uint32_t>(modulus)))
    throw InputError("modulus must be prime (got " + std::to_string(modulus) + ")");
  const Scalar p = static_cast<Scalar>(modulus);
  const auto d = get_as<std::size_t>(require(doc, "dimension"), "dimension");
  const json& sc = require(doc, "structure_constants");
  if (!sc.is_array() || sc.size() != d) throw InputError("structure_constants must be d x d x d");
  std::vector<std::vector<std::vector<Scalar>>> constants(d);
  for (std::size_t i = 0; i < d; ++i) {
    if (!sc[i].is_array() || sc[i].size() != d) throw InputError("structure_constants must be d x d x d");
    for (std::size_t j = 0; j < d; ++j)
      constants[i].push_back(coordinates(sc[i][j], d, p, "structure_constants entry"));
  }
  const auto unit = coordinates(require(doc, "unit"), d, p, "unit");
  return DMonoid::from_structure_constants(p, constants, unit);
}

}  // namespace

DMonoid parse_monoid_spec(std::string_view text, bool validate) {
  const json doc = parse_json(text);
  const auto tag = get_as<std::string>(require(doc, "variety"), "variety");
  DMonoid m;
  if (tag == "set") m = parse_named(doc, Variety::set());
  else if (tag == "pos") m = parse_named(doc, Variety::pos());
  else if (tag == "jsl") m = parse_named(doc, Variety::jsl());
  else if (tag == "vect") m = parse_vect(doc);
  else throw InputError("unknown variety \"" + tag + "\"");
  if (validate) {
    const auto r = validate_dmonoid(m);
    if (!r.ok()) {
      std::string msg = "invalid " + tag + " monoid:";
      for (const auto& v : r.violations) msg += "\n  " + v;
      throw InputError(msg);
    }
  }
  return m;
}

DMonoid load_monoid_spec(const std::filesystem::path& path, bool validate) {
  return parse_monoid_spec(read_text_file(path), validate);
}

nlohmann::ordered_json monoid_to_json(const DMonoid& m) {
  nlohmann::ordered_json doc;
  const Variety& v = m.variety();
  doc["variety"] = v.name();
  const FiniteObject& c = m.carrier();
  if (v.is_vect()) {
    const std::size_t d = c.dimension();
    doc["field_modulus"] = v.modulus();
    doc["dimension"] = d;
    auto sc = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < d; ++i) {
      auto row = nlohmann::ordered_json::array();
      for (std::size_t j = 0; j < d; ++j) row.push_back(c.coords(m.mult(c.basis(i), c.basis(j))));
      sc.push_back(std::move(row));
    }
    doc["structure_constants"] = std::move(sc);
    doc["unit"] = c.coords(m.unit());
    return doc;
  }
  const std::size_t n = m.size();
  std::vector<std::string> names;
  for (Elem x = 0; x < n; ++x) names.push_back(m.name(x));
  doc["elements"] = names;
  doc["unit"] = names[m.unit()];
  auto table = [&](auto op) {
    auto t = nlohmann::ordered_json::array();
    for (Elem x = 0; x < n; ++x) {
      auto row = nlohmann::ordered_json::array();
      for (Elem y = 0; y < n; ++y) row.push_back(names[op(x, y)]);
      t.push_back(std::move(row));
    }
    return t;
  };
  doc["mult"] = table([&](Elem x, Elem y) { return m.mult(x, y); });
  if (v.kind() == VarietyKind::Pos) {
    auto order = nlohmann::ordered_json::array();
    for (Elem x = 0; x < n; ++x)
      for (Elem y = 0; y < n; ++y)
        if (x != y && c.leq(x, y)) order.push_back({names[x], names[y]});
    doc["order"] = std::move(order);
  }
  if (v.kind() == VarietyKind::Jsl) doc["join"] = table([&](Elem x, Elem y) { return c.join(x, y); });
  return doc;
}

std::string serialize_monoid_spec(const DMonoid& m) { return monoid_to_json(m).dump(2) + "\n"; }

TruncLanguage parse_language(std::string_view text, const WordSpace& space, const Semiring& s) {
  const json doc = parse_json(text);
  if (doc.contains("alphabet") && get_as<std::string>(doc.at("alphabet"), "alphabet") != space.alphabet())
    throw InputError("language alphabet differs from " + space.alphabet());
  const json& words = require(doc, "words");
  if (!words.is_object()) throw InputError("words must map words to values");
  std::vector<Scalar> vals(space.size(), 0);
  for (const auto& [w, value] : words.items()) {
    if (w.size() > space.bound()) continue;
    const auto c = get_as<long long>(value, "value of \"" + w + "\"");
    const long long m = s.size();
    vals[space.index(w)] = static_cast<Scalar>(((c % m) + m) % m);
  }
  return TruncLanguage(space, s, std::move(vals));
}

TruncLanguage load_language(const std::filesystem::path& path, const WordSpace& space, const Semiring& s) {
  return parse_language(read_text_file(path), space, s);
}

nlohmann::ordered_json language_to_json(const TruncLanguage& l) {
  nlohmann::ordered_json doc;
  doc["alphabet"] = l.alphabet();
  doc["bound"] = l.bound();
  auto words = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < l.space().size(); ++i)
    if (l.at(i) != 0) words[l.space().word(i)] = l.at(i);
  doc["words"] = std::move(words);
  return doc;
}

}  // namespace schutzkit
