#include "schutzkit/cli.hpp"

#include <chrono>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "schutzkit/document.hpp"
#include "schutzkit/errors.hpp"
#include "schutzkit/products.hpp"

namespace schutzkit {

namespace {

using ojson = nlohmann::ordered_json;

inline constexpr std::size_t kExportGuard = 1024;

std::string clean_alphabet(const std::string& raw) {
  std::string out;
  for (char c : raw)
    if (c != ',' && c != ' ') out += c;
  if (out.empty()) throw InputError("empty alphabet");
  return out;
}

DMonoid load_side(const std::optional<std::filesystem::path>& path, const char* flag) {
  if (!path) throw InputError(std::string("missing ") + flag);
  return load_monoid_spec(*path);
}

std::vector<std::map<char, std::string>> parse_image_groups(const std::string& text) {
  std::vector<std::map<char, std::string>> groups;
  std::stringstream gs(text);
  std::string group;
  while (std::getline(gs, group, ';')) {
    std::map<char, std::string> g;
    std::stringstream is(group);
    std::string item;
    while (std::getline(is, item, ',')) {
      const auto eq = item.find('=');
      if (eq != 1) throw InputError("malformed image \"" + item + "\" (expected letter=element)");
      if (!g.emplace(item[0], item.substr(2)).second)
        throw InputError(std::string("letter ") + item[0] + " assigned twice");
    }
    groups.push_back(std::move(g));
  }
  return groups;
}

LetterAssignment assignment_from(const std::map<char, std::string>& group, const std::string& alphabet,
                                 const DMonoid& m) {
  LetterAssignment f{alphabet, m, {}};
  for (const auto& [c, _] : group)
    if (alphabet.find(c) == std::string::npos) throw InputError(std::string("letter ") + c + " is not in the alphabet");
  for (char c : alphabet) {
    const auto it = group.find(c);
    if (it == group.end()) throw InputError(std::string("no image for letter ") + c);
    const auto x = m.find(it->second);
    if (!x) throw InputError("unknown element \"" + it->second + "\"");
    f.images.push_back(*x);
  }
  return f;
}

LetterAssignment random_assignment(const std::string& alphabet, const DMonoid& m, std::mt19937_64& rng) {
  LetterAssignment f{alphabet, m, {}};
  for (std::size_t i = 0; i < alphabet.size(); ++i) f.images.push_back(static_cast<Elem>(rng() % m.size()));
  return f;
}

std::string bits(const std::vector<bool>& v) {
  std::string s;
  for (bool b : v) s += b ? '1' : '0';
  return s;
}

// Canonical vector encoding of a middle element: its member mask over M*N
// (SET, POS), its vector in S^(P x Q) (JSL), or its coordinates (VECT).
std::string middle_name(const SchutzProduct& s, Elem a) {
  const LiftedSAlgebra& mid = s.middle();
  switch (s.monoid().variety().kind()) {
    case VarietyKind::Set:
    case VarietyKind::Pos: {
      std::vector<bool> v(s.star().size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = (mid.mask(a) >> i) & 1U;
      return bits(v);
    }
    case VarietyKind::Jsl: return bits(s.star().vector(a));
    case VarietyKind::Vect: return s.star().monoid().name(a);
  }
  return {};
}

DMonoid named_schutz(const SchutzProduct& s) {
  const DMonoid& t = s.monoid();
  std::vector<std::string> names;
  for (Elem x = 0; x < t.size(); ++x) {
    const auto [m, a, n] = s.split(x);
    names.push_back("(" + s.left().name(m) + "," + middle_name(s, a) + "," + s.right().name(n) + ")");
  }
  std::vector<Elem> table(t.size() * t.size());
  for (Elem x = 0; x < t.size(); ++x)
    for (Elem y = 0; y < t.size(); ++y) table[x * t.size() + y] = t.mult(x, y);
  return DMonoid(t.carrier(), t.unit(), std::move(table), std::move(names));
}

void require_exportable(const DMonoid& m) {
  if (!m.variety().is_vect() && m.size() > kExportGuard)
    throw SizeGuardError("export too large: " + std::to_string(m.size()) + " elements (limit " +
                         std::to_string(kExportGuard) + ")");
}

void emit_object(const ojson& doc, Format format, std::ostream& out) {
  if (format == Format::Json) {
    out << doc.dump(2) << "\n";
    return;
  }
  for (const auto& [key, value] : doc.items()) {
    if (value.is_object() || (value.is_array() && !value.empty() && value.front().is_array())) continue;
    out << key << std::string(key.size() < 16 ? 16 - key.size() : 1, ' ')
        << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
  }
}

int emit_reports(std::vector<VerificationReport>& reports, const CommandConfig& cfg, std::ostream& out) {
  if (cfg.format == Format::Json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r, cfg.timing));
    out << arr.dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (i) out << "\n";
      out << emit_report(reports[i], Format::Table, cfg.timing);
    }
  }
  int code = exit_code::kPass;
  for (const auto& r : reports) {
    if (r.verdict == Verdict::PreconditionViolated) return exit_code::kInput;
    if (!r.passed()) code = exit_code::kFail;
  }
  return code;
}

template <typename Fn>
VerificationReport timed(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport r = fn();
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

Semiring semiring_for_modulus(std::uint32_t modulus) {
  return Semiring::for_variety(modulus == 0 ? Variety::set() : Variety::vect(modulus));
}

// ---------------------------------------------------------------------------
// commands

int cmd_validate(const CommandConfig& cfg, std::ostream& out) {
  if (!cfg.left) throw InputError("missing --left");
  const DMonoid m = parse_monoid_spec(read_text_file(*cfg.left), false);
  CheckBudget budget;
  budget.seed = cfg.seed;
  const ValidationReport r = validate_dmonoid(m, budget);
  ojson doc;
  doc["command"] = "validate";
  doc["variety"] = m.variety().name();
  doc["size"] = m.size();
  doc["valid"] = r.ok();
  doc["violations"] = r.violations;
  doc["sampled"] = r.sampled;
  doc["notes"] = r.notes;
  emit_object(doc, cfg.format, out);
  return r.ok() ? exit_code::kPass : exit_code::kFail;
}

int cmd_star(const CommandConfig& cfg, std::ostream& out) {
  const DMonoid m = load_side(cfg.left, "--left");
  const DMonoid n = load_side(cfg.right, "--right");
  const StarProduct sp = star_product(m, n);
  CheckBudget budget;
  budget.seed = cfg.seed;
  const ValidationReport r = validate_dmonoid(sp.monoid(), budget);
  ojson doc;
  doc["command"] = "star";
  doc["variety"] = m.variety().name();
  doc["left_size"] = m.size();
  doc["right_size"] = n.size();
  doc["left_valuations"] = sp.left_valuations().size();
  doc["right_valuations"] = sp.right_valuations().size();
  doc["size"] = sp.size();
  doc["valid"] = r.ok();
  doc["violations"] = r.violations;
  doc["sampled"] = r.sampled;
  if (cfg.export_document) {
    require_exportable(sp.monoid());
    doc["monoid"] = monoid_to_json(sp.monoid());
  }
  emit_object(doc, cfg.format, out);
  return r.ok() ? exit_code::kPass : exit_code::kFail;
}

int cmd_schutzenberger(const CommandConfig& cfg, std::ostream& out) {
  const DMonoid m = load_side(cfg.left, "--left");
  const DMonoid n = load_side(cfg.right, "--right");
  const SchutzProduct s = schutzenberger(m, n);
  CheckBudget budget;
  budget.seed = cfg.seed;
  const ValidationReport r = validate_schutz_structure(s, budget);
  ojson doc;
  doc["command"] = "schutzenberger";
  doc["variety"] = m.variety().name();
  doc["left_size"] = m.size();
  doc["star_size"] = s.star().size();
  doc["middle_size"] = s.middle().size();
  doc["right_size"] = n.size();
  doc["size"] = s.size();
  doc["valid"] = r.ok();
  doc["violations"] = r.violations;
  doc["sampled"] = r.sampled;
  if (cfg.export_document) {
    require_exportable(s.monoid());
    doc["monoid"] = monoid_to_json(m.variety().is_vect() ? s.monoid() : named_schutz(s));
  }
  emit_object(doc, cfg.format, out);
  return r.ok() ? exit_code::kPass : exit_code::kFail;
}

int cmd_recognize(const CommandConfig& cfg, std::ostream& out) {
  const DMonoid m = load_side(cfg.left, "--left");
  if (cfg.inputs.size() != 1) throw InputError("recognize needs exactly one target language");
  if (!cfg.images) throw InputError("recognize needs --images");
  const std::string alphabet = clean_alphabet(cfg.alphabet);
  const auto groups = parse_image_groups(*cfg.images);
  if (groups.size() != 1) throw InputError("recognize takes one image group");
  const LetterAssignment f = assignment_from(groups[0], alphabet, m);
  const WordSpace space(alphabet, cfg.max_len);
  const TruncLanguage target = load_language(cfg.inputs[0], space, Semiring::for_variety(m.variety()));

  std::vector<VerificationReport> reports{timed([&] {
    VerificationReport r;
    r.theorem = "recognize";
    r.instance = m.variety().name() + " monoid with " + std::to_string(m.size()) + " elements";
    r.bound = cfg.max_len;
    r.notes.push_back("verified on all words of length at most " + std::to_string(cfg.max_len));
    if (const auto v = recognizes(f, target)) {
      std::string vals;
      for (Elem x = 0; x < m.size(); ++x) {
        if (x) vals += ", ";
        vals += m.name(x) + "->" + std::to_string(v->values[x]);
      }
      r.witnesses.emplace_back("valuation", vals);
    } else {
      r.fail("no valuation recognizes the target");
    }
    return r;
  })};
  return emit_reports(reports, cfg, out);
}

int cmd_marked_product(const CommandConfig& cfg, std::ostream& out) {
  if (cfg.inputs.size() != 2) throw InputError("marked-product needs two language files");
  if (!cfg.mark) throw InputError("marked-product needs --mark");
  const std::string alphabet = clean_alphabet(cfg.alphabet);
  const WordSpace space(alphabet, cfg.max_len);
  const Semiring sr = semiring_for_modulus(cfg.modulus);
  const TruncLanguage k = load_language(cfg.inputs[0], space, sr);
  const TruncLanguage l = load_language(cfg.inputs[1], space, sr);
  const TruncLanguage kal = marked_product(k, *cfg.mark, l);
  if (cfg.format == Format::Json) {
    out << language_to_json(kal).dump(2) << "\n";
  } else {
    for (std::size_t w = 0; w < space.size(); ++w)
      if (kal.at(w) != 0) out << (w == 0 ? "ε" : space.word(w)) << " " << kal.at(w) << "\n";
  }
  return exit_code::kPass;
}

// The letter assignment into M<>N used by verify: left and right components
// from --images (or the seed), middle components by the marked-letter rule
// when --mark is given and from the seed otherwise.
LetterAssignment verify_assignment(const CommandConfig& cfg, const SchutzProduct& s, const std::string& alphabet,
                                   std::mt19937_64& rng, LetterAssignment& g, LetterAssignment& h) {
  if (cfg.images) {
    const auto groups = parse_image_groups(*cfg.images);
    if (groups.size() != 2) throw InputError("verify takes two image groups: left;right");
    g = assignment_from(groups[0], alphabet, s.left());
    h = assignment_from(groups[1], alphabet, s.right());
  } else {
    g = random_assignment(alphabet, s.left(), rng);
    h = random_assignment(alphabet, s.right(), rng);
  }
  if (cfg.mark) return schurec_assignment(s, g, h, *cfg.mark);
  std::vector<Elem> middle;
  for (std::size_t i = 0; i < alphabet.size(); ++i) middle.push_back(static_cast<Elem>(rng() % s.middle().size()));
  return schutz_assignment(s, alphabet, g.images, middle, h.images);
}

std::vector<std::pair<std::size_t, std::size_t>> valuation_pairs(const CommandConfig& cfg, const SchutzProduct& s) {
  const std::size_t np = s.star().left_valuations().size(), nq = s.star().right_valuations().size();
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t p = 0; p < np; ++p)
    for (std::size_t q = 0; q < nq; ++q)
      if ((!cfg.p || *cfg.p == p) && (!cfg.q || *cfg.q == q)) out.emplace_back(p, q);
  if (out.empty()) throw InputError("valuation index out of range");
  return out;
}

int cmd_verify(const CommandConfig& cfg, std::ostream& out) {
  const DMonoid m = load_side(cfg.left, "--left");
  const DMonoid n = load_side(cfg.right, "--right");
  if (cfg.max_len < 1) throw InputError("--max-len must be at least 1");
  const std::string alphabet = clean_alphabet(cfg.alphabet);
  const SchutzProduct s = schutzenberger(m, n);
  std::mt19937_64 rng(cfg.seed);
  LetterAssignment g, h;
  std::vector<VerificationReport> reports;

  if (cfg.theorem == "schurec") {
    if (!cfg.mark) throw InputError("verify schurec needs --mark");
    verify_assignment(cfg, s, alphabet, rng, g, h);
    const WordSpace space(alphabet, cfg.max_len);
    for (const auto& [p, q] : valuation_pairs(cfg, s))
      reports.push_back(timed([&] { return schurec_witness(s, g, p, h, q, *cfg.mark, space).report; }));
  } else if (cfg.theorem == "reutenauer") {
    const LetterAssignment f = verify_assignment(cfg, s, alphabet, rng, g, h);
    reports.push_back(timed([&] { return reutenauer_check(s, f, cfg.max_len); }));
  } else if (cfg.theorem == "decompose") {
    const LetterAssignment f = verify_assignment(cfg, s, alphabet, rng, g, h);
    for (const auto& [p, q] : valuation_pairs(cfg, s))
      reports.push_back(timed([&] { return decompose_middle(s, f, p, q, cfg.max_len).report; }));
  } else if (cfg.theorem == "closure") {
    const LetterAssignment f = verify_assignment(cfg, s, alphabet, rng, g, h);
    reports.push_back(timed([&] { return closure_check(s, f, cfg.mode, cfg.max_len, cfg.seed); }));
  } else if (cfg.theorem == "universal") {
    const LetterAssignment f = verify_assignment(cfg, s, alphabet, rng, g, h);
    LetterAssignment e;
    if (cfg.e == "image") {
      e = image_of_free_morphism(f).corestriction;
    } else if (cfg.e == "trivial") {
      e = LetterAssignment{alphabet, DMonoid::trivial(m.variety()), std::vector<Elem>(alphabet.size(), 0)};
    } else {
      throw InputError("unknown --e \"" + cfg.e + "\" (expected image or trivial)");
    }
    reports.push_back(timed([&] { return universal_property_check(s, f, e, cfg.max_len).report; }));
  } else {
    throw InputError("unknown theorem \"" + cfg.theorem + "\"");
  }
  return emit_reports(reports, cfg, out);
}

}  // namespace

int run_command(const CommandConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "validate") return cmd_validate(cfg, out);
    if (cfg.command == "star") return cmd_star(cfg, out);
    if (cfg.command == "schutzenberger") return cmd_schutzenberger(cfg, out);
    if (cfg.command == "recognize") return cmd_recognize(cfg, out);
    if (cfg.command == "marked-product") return cmd_marked_product(cfg, out);
    if (cfg.command == "verify") return cmd_verify(cfg, out);
    throw InputError("unknown command \"" + cfg.command + "\"");
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kInput;
  } catch (const SizeGuardError& e) {
    err << "size guard: " << e.what() << "\n";
    return exit_code::kSizeGuard;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite D-monoids, Schützenberger products and their recognized languages"};
  app.require_subcommand(1);
  CommandConfig cfg;
  std::string format = "json", mode = "without";
  std::string mark;
  std::optional<std::string> target;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--left", cfg.left, "Left monoid document");
    sub->add_option("--right", cfg.right, "Right monoid document");
    sub->add_option("--alphabet", cfg.alphabet, "Alphabet symbols, e.g. ab or a,b")->capture_default_str();
    sub->add_option("--images", cfg.images, "Letter images: a=x,b=y[;a=...]");
    sub->add_option("--mark", mark, "Marked letter");
    sub->add_option("--max-len", cfg.max_len, "Word length bound")->capture_default_str();
    sub->add_option("--format", format, "json or table")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Seed for generated assignments and samples")->capture_default_str();
    sub->add_flag("--timing", cfg.timing, "Include elapsed_ms in reports");
  };
  CLI::App* validate = app.add_subcommand("validate", "Check a monoid document against the laws of its variety");
  common(validate);
  CLI::App* star = app.add_subcommand("star", "Build M*N");
  common(star);
  star->add_flag("--export", cfg.export_document, "Include the product as a monoid document");
  CLI::App* schutz = app.add_subcommand("schutzenberger", "Build the Schützenberger product of M and N");
  common(schutz);
  schutz->add_flag("--export", cfg.export_document, "Include the product as a monoid document");
  CLI::App* recognize = app.add_subcommand("recognize", "Find a valuation recognizing a language");
  common(recognize);
  recognize->add_option("--target", target, "Target language document")->required();
  CLI::App* marked = app.add_subcommand("marked-product", "Marked product of two language documents");
  common(marked);
  marked->add_option("languages", cfg.inputs, "K and L language documents")->expected(2);
  marked->add_option("--modulus", cfg.modulus, "0 for the Boolean semiring, else a prime p for GF(p)");
  CLI::App* verify = app.add_subcommand("verify", "Run a verification check");
  common(verify);
  verify->add_option("theorem", cfg.theorem, "schurec, reutenauer, decompose, closure or universal")->required();
  verify->add_option("--mode", mode, "with-derivatives or without (closure)")->capture_default_str();
  verify->add_option("--e", cfg.e, "image or trivial (universal)")->capture_default_str();
  verify->add_option("--p", cfg.p, "Only this left valuation index");
  verify->add_option("--q", cfg.q, "Only this right valuation index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::kPass : exit_code::kInput;
  }
  try {
    for (CLI::App* sub : app.get_subcommands()) cfg.command = sub->get_name();
    cfg.format = parse_format(format);
    if (mode == "with-derivatives") cfg.mode = ClosureMode::WithDerivatives;
    else if (mode == "without") cfg.mode = ClosureMode::WithoutDerivatives;
    else throw InputError("unknown --mode \"" + mode + "\"");
    if (!mark.empty()) {
      if (mark.size() != 1) throw InputError("--mark takes a single letter");
      cfg.mark = mark[0];
    }
    if (target) cfg.inputs.push_back(*target);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kInput;
  }
  return run_command(cfg, out, err);
}

}  // namespace schutzkit
