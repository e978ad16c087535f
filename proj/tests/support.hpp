#pragma once

// Corpus access and seeded generators shared by the test suites.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "schutzkit/dmonoid.hpp"
#include "schutzkit/document.hpp"
#include "schutzkit/languages.hpp"

namespace schutzkit::testing {

struct CorpusEntry {
  std::string name;
  DMonoid monoid;
};

inline std::filesystem::path corpus_dir() { return SCHUTZKIT_CORPUS_DIR; }

/// Every corpus document, sorted by file name.
inline std::vector<CorpusEntry> corpus() {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(corpus_dir()))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<CorpusEntry> out;
  for (const auto& f : files) out.push_back({f.stem().string(), load_monoid_spec(f)});
  return out;
}

inline DMonoid corpus_monoid(const std::string& name) {
  return load_monoid_spec(corpus_dir() / (name + ".json"));
}

/// Ordered pairs of corpus monoids sharing a variety.
inline std::vector<std::pair<CorpusEntry, CorpusEntry>> corpus_pairs() {
  const auto all = corpus();
  std::vector<std::pair<CorpusEntry, CorpusEntry>> out;
  for (const auto& a : all)
    for (const auto& b : all)
      if (a.monoid.variety() == b.monoid.variety()) out.emplace_back(a, b);
  return out;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }
  bool coin() { return gen_() & 1U; }

 private:
  std::mt19937_64 gen_;
};

inline LetterAssignment random_assignment(const std::string& alphabet, const DMonoid& m, Rng& rng) {
  LetterAssignment f{alphabet, m, {}};
  for (std::size_t i = 0; i < alphabet.size(); ++i) f.images.push_back(static_cast<Elem>(rng.below(m.size())));
  return f;
}

inline TruncLanguage random_language(const WordSpace& space, const Semiring& s, Rng& rng) {
  std::vector<Scalar> v(space.size());
  for (auto& x : v) x = static_cast<Scalar>(rng.below(s.size()));
  return TruncLanguage(space, s, std::move(v));
}

}  // namespace schutzkit::testing
