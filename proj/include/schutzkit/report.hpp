#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "schutzkit/recognition.hpp"

namespace schutzkit {

enum class Format { Json, Table };

/// Throws InputError unless `name` is "json" or "table".
Format parse_format(std::string_view name);

/// Keys: theorem, instance, bound, verdict, counterexample (null when absent),
/// witnesses [{label, value}], notes, sampled, and elapsed_ms only when
/// `timing` is set. Keys are sorted, so equal reports dump identically.
nlohmann::json report_to_json(const VerificationReport& r, bool timing = false);
/// Inverse of report_to_json; throws InputError on a malformed document.
VerificationReport report_from_json(const nlohmann::json& j);

/// JSON (indented, newline-terminated) or an aligned key/value table.
std::string emit_report(const VerificationReport& r, Format format, bool timing = false);

Verdict parse_verdict(std::string_view name);

}  // namespace schutzkit
