#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "schutzkit/dmonoid.hpp"
#include "schutzkit/languages.hpp"

namespace schutzkit {

/// Reads a monoid document:
///
///   set/pos/jsl: {"variety", "elements", "unit", "mult"} plus "order"
///                (list of [x, y] meaning x <= y) for pos and "join" (table by
///                names) for jsl.
///   vect:        {"variety", "field_modulus", "dimension",
///                 "structure_constants", "unit"} where structure_constants
///                [i][j] and unit are coordinate arrays.
///
/// Throws InputError on a syntax error (with line and column), on malformed
/// content, and with `validate` set on any law violation.
DMonoid parse_monoid_spec(std::string_view text, bool validate = true);
DMonoid load_monoid_spec(const std::filesystem::path& path, bool validate = true);

/// The document of `m`, with the order given as all strict pairs. VECT
/// monoids are written through structure constants, which requires
/// evaluating the multiplication on basis pairs only.
nlohmann::ordered_json monoid_to_json(const DMonoid& m);
std::string serialize_monoid_spec(const DMonoid& m);

/// Reads a language document {"alphabet"?: string, "words": {word: value}}
/// onto the given word space (absent words take value 0).
TruncLanguage parse_language(std::string_view text, const WordSpace& space, const Semiring& s);
TruncLanguage load_language(const std::filesystem::path& path, const WordSpace& space, const Semiring& s);
nlohmann::ordered_json language_to_json(const TruncLanguage& l);

/// Reads a file into a string; throws InputError when it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace schutzkit
