#pragma once
// Seeded random finite cases for the exhaustive check suite.

#include <cstdint>
#include <string>
#include <vector>

#include "bmo/filtration/process.hpp"
#include "bmo/filtration/space.hpp"

namespace bmo::analysis {

enum class ProcessKind { uniform_values, random_walk, martingale, rare_jumps, lazy_walk, deterministic };

const char* kind_name(ProcessKind kind) noexcept;

struct FiniteCase {
  std::string id;
  std::uint64_t seed = 0;
  ProcessKind kind = ProcessKind::uniform_values;
  filtration::FiniteFilteredSpace space;
  /// Process under test.
  filtration::AdaptedProcess v;
  /// Nondecreasing companion: either V* or a running sum of random increments.
  filtration::AdaptedProcess a;
};

struct CorpusOptions {
  std::size_t n_cases = 200;
  int min_depth = 1;
  int max_depth = 4;
  int branching = 2;
  std::uint64_t seed = 1;
};

/// Case i depends on (seed, i) only.
FiniteCase make_case(std::uint64_t seed, std::size_t index, const CorpusOptions& options);
std::vector<FiniteCase> make_corpus(const CorpusOptions& options);

}  // namespace bmo::analysis
