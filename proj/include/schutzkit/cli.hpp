#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "schutzkit/recognition.hpp"
#include "schutzkit/report.hpp"

namespace schutzkit {

namespace exit_code {
inline constexpr int kPass = 0;
inline constexpr int kFail = 1;
inline constexpr int kInput = 2;
inline constexpr int kSizeGuard = 3;
}  // namespace exit_code

struct CommandConfig {
  /// validate, star, schutzenberger, recognize, marked-product or verify.
  std::string command;
  /// For verify: schurec, reutenauer, decompose, closure or universal.
  std::string theorem;
  std::optional<std::filesystem::path> left, right;
  /// Language documents (marked-product) or the target language (recognize).
  std::vector<std::filesystem::path> inputs;
  /// Single-character symbols; commas and spaces are ignored.
  std::string alphabet = "ab";
  /// "a=x,b=y" groups separated by ';', by element name. In verify the first
  /// group maps into the left monoid and the second into the right one.
  std::optional<std::string> images;
  std::optional<char> mark;
  std::size_t max_len = kDefaultBound;
  ClosureMode mode = ClosureMode::WithoutDerivatives;
  Format format = Format::Json;
  std::uint64_t seed = 0;
  bool timing = false;
  /// schutzenberger and star: include the product as a monoid document.
  bool export_document = false;
  /// universal: "image" (the corestriction of f) or "trivial".
  std::string e = "image";
  /// marked-product and recognize without --left: 0 for Boolean S, else GF(p).
  std::uint32_t modulus = 0;
  /// Restricts schurec and decompose to one valuation pair.
  std::optional<std::size_t> p, q;
};

/// Runs one command and returns its exit code: 0 when every verdict passes,
/// 1 on a failing or inconclusive verdict, 2 on input errors and violated
/// preconditions, 3 when a size guard trips. Errors go to `err`.
int run_command(const CommandConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv into a CommandConfig and runs it.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace schutzkit
