#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace schutzkit {

inline constexpr std::size_t kDefaultBound = 8;

/// The words of length at most `bound` over an alphabet of single-character
/// symbols, indexed in shortlex order (shorter first, then by letter index
/// with the first letter most significant).
class WordSpace {
 public:
  WordSpace() = default;
  /// Throws InputError on an empty alphabet or a repeated symbol, and
  /// SizeGuardError past 2^22 words.
  WordSpace(std::string alphabet, std::size_t bound);

  const std::string& alphabet() const { return alphabet_; }
  std::size_t bound() const { return bound_; }
  std::size_t size() const { return offsets_.back(); }
  std::size_t letter_count() const { return alphabet_.size(); }

  /// Index of the first word of length k; offset(bound + 1) == size().
  std::size_t offset(std::size_t k) const { return offsets_[k]; }
  std::size_t index(std::string_view word) const;
  std::string word(std::size_t index) const;
  /// Index of symbol c in the alphabet; throws InputError when absent.
  std::size_t letter(char c) const;
  bool contains(char c) const { return alphabet_.find(c) != std::string::npos; }

  /// Index of w.c given the index of w (|w| < bound).
  std::size_t extend(std::size_t index, std::size_t letter) const;

  /// The same alphabet with another bound.
  WordSpace with_bound(std::size_t bound) const { return WordSpace(alphabet_, bound); }

  bool operator==(const WordSpace& o) const { return alphabet_ == o.alphabet_ && bound_ == o.bound_; }

 private:
  std::size_t length_of(std::size_t index) const;

  std::string alphabet_;
  std::size_t bound_ = 0;
  std::vector<std::size_t> offsets_{0};
};

}  // namespace schutzkit
