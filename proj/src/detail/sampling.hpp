#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "schutzkit/algebra_core.hpp"
#include "schutzkit/dmonoid.hpp"

namespace schutzkit::detail {

/// Runs `check` over all triples of 0..n-1, or over a seeded sample when n^3
/// exceeds the budget. Sampling flags the report and records a note.
template <typename Check>
void for_triples(std::size_t n, const CheckBudget& budget, ValidationReport& report,
                 const std::string& law, Check&& check) {
  const std::uint64_t cube = std::uint64_t{n} * n * n;
  if (cube <= budget.exhaustive_budget) {
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b)
        for (Elem c = 0; c < n; ++c) check(a, b, c);
    return;
  }
  report.sampled = true;
  report.notes.push_back(law + " checked on " + std::to_string(budget.samples) +
                         " seeded random triples (carrier size " + std::to_string(n) + ")");
  std::mt19937_64 rng(budget.seed);
  std::uniform_int_distribution<Elem> pick(0, static_cast<Elem>(n - 1));
  for (std::uint64_t i = 0; i < budget.samples; ++i) {
    const Elem a = pick(rng), b = pick(rng), c = pick(rng);
    check(a, b, c);
  }
}

inline constexpr std::size_t kMaxViolationsPerLaw = 8;

/// Caps the number of recorded violations of one law.
struct LawCounter {
  ValidationReport& report;
  std::size_t count = 0;
  void fail(const std::string& msg) {
    if (count++ < kMaxViolationsPerLaw) report.add(msg);
  }
};

inline std::string triple(Elem a, Elem b, Elem c) {
  return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
}

}  // namespace schutzkit::detail
