#include "schutzkit/report.hpp"

#include <sstream>

#include "schutzkit/errors.hpp"

namespace schutzkit {

using json = nlohmann::json;

Format parse_format(std::string_view name) {
  if (name == "json") return Format::Json;
  if (name == "table") return Format::Table;
  throw InputError("unknown format \"" + std::string(name) + "\"");
}

Verdict parse_verdict(std::string_view name) {
  for (Verdict v : {Verdict::Pass, Verdict::Fail, Verdict::Inconclusive, Verdict::PreconditionViolated})
    if (to_string(v) == name) return v;
  throw InputError("unknown verdict \"" + std::string(name) + "\"");
}

json report_to_json(const VerificationReport& r, bool timing) {
  json j;
  j["theorem"] = r.theorem;
  j["instance"] = r.instance;
  j["bound"] = r.bound;
  j["verdict"] = to_string(r.verdict);
  j["counterexample"] = r.counterexample ? json(*r.counterexample) : json(nullptr);
  json ws = json::array();
  for (const auto& [label, value] : r.witnesses) ws.push_back({{"label", label}, {"value", value}});
  j["witnesses"] = std::move(ws);
  j["notes"] = r.notes;
  j["sampled"] = r.sampled;
  if (timing && r.elapsed_ms) j["elapsed_ms"] = *r.elapsed_ms;
  return j;
}

VerificationReport report_from_json(const json& j) {
  try {
    VerificationReport r;
    r.theorem = j.at("theorem").get<std::string>();
    r.instance = j.at("instance").get<std::string>();
    r.bound = j.at("bound").get<std::size_t>();
    r.verdict = parse_verdict(j.at("verdict").get<std::string>());
    if (!j.at("counterexample").is_null()) r.counterexample = j.at("counterexample").get<std::string>();
    for (const auto& w : j.at("witnesses"))
      r.witnesses.emplace_back(w.at("label").get<std::string>(), w.at("value").get<std::string>());
    r.notes = j.at("notes").get<std::vector<std::string>>();
    r.sampled = j.at("sampled").get<bool>();
    if (j.contains("elapsed_ms")) r.elapsed_ms = j.at("elapsed_ms").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
}

std::string emit_report(const VerificationReport& r, Format format, bool timing) {
  if (format == Format::Json) return report_to_json(r, timing).dump(2) + "\n";
  std::ostringstream out;
  auto row = [&](std::string_view key, const std::string& value) {
    out << key << std::string(16 - key.size(), ' ') << value << "\n";
  };
  row("theorem", r.theorem);
  row("instance", r.instance);
  row("bound", std::to_string(r.bound));
  row("verdict", to_string(r.verdict));
  if (r.counterexample) row("counterexample", "\"" + *r.counterexample + "\"");
  if (r.sampled) row("sampled", "yes (seeded sample, not exhaustive)");
  if (timing && r.elapsed_ms) {
    std::ostringstream ms;
    ms << *r.elapsed_ms;
    row("elapsed_ms", ms.str());
  }
  for (const auto& n : r.notes) row("note", n);
  if (!r.witnesses.empty()) {
    out << "witnesses:\n";
    for (const auto& [label, value] : r.witnesses) out << "  " << label << " = " << value << "\n";
  }
  return out.str();
}

}  // namespace schutzkit
