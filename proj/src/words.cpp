#include "schutzkit/words.hpp"

#include <algorithm>

#include "schutzkit/errors.hpp"

namespace schutzkit {

WordSpace::WordSpace(std::string alphabet, std::size_t bound)
    : alphabet_(std::move(alphabet)), bound_(bound) {
  if (alphabet_.empty()) throw InputError("alphabet is empty");
  std::string sorted = alphabet_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InputError("alphabet has a repeated symbol");
  std::size_t layer = 1;
  for (std::size_t k = 0; k <= bound_; ++k) {
    offsets_.push_back(offsets_.back() + layer);
    if (offsets_.back() > (std::size_t{1} << 22))
      throw SizeGuardError("word space too large: more than 2^22 words up to length " +
                           std::to_string(bound_));
    layer *= alphabet_.size();
  }
}

std::size_t WordSpace::letter(char c) const {
  const auto pos = alphabet_.find(c);
  if (pos == std::string::npos) throw InputError(std::string("unknown symbol '") + c + "'");
  return pos;
}

std::size_t WordSpace::index(std::string_view word) const {
  if (word.size() > bound_) throw InputError("word longer than the bound: " + std::string(word));
  std::size_t v = 0;
  for (char c : word) v = v * alphabet_.size() + letter(c);
  return offsets_[word.size()] + v;
}

std::size_t WordSpace::length_of(std::size_t index) const {
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
  return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

std::string WordSpace::word(std::size_t index) const {
  const std::size_t k = length_of(index);
  std::size_t v = index - offsets_[k];
  std::string w(k, ' ');
  for (std::size_t i = k; i-- > 0;) {
    w[i] = alphabet_[v % alphabet_.size()];
    v /= alphabet_.size();
  }
  return w;
}

std::size_t WordSpace::extend(std::size_t index, std::size_t letter) const {
  const std::size_t k = length_of(index);
  return offsets_[k + 1] + (index - offsets_[k]) * alphabet_.size() + letter;
}

}  // namespace schutzkit
