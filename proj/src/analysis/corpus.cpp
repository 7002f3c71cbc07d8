#include "bmo/analysis/corpus.hpp"

#include <random>

#include "bmo/error.hpp"

namespace bmo::analysis {

using filtration::AdaptedProcess;
using filtration::FiniteFilteredSpace;
using filtration::NodeId;
using filtration::TransitionSpec;

const char* kind_name(ProcessKind kind) noexcept {
  switch (kind) {
    case ProcessKind::uniform_values: return "uniform_values";
    case ProcessKind::random_walk: return "random_walk";
    case ProcessKind::martingale: return "martingale";
    case ProcessKind::rare_jumps: return "rare_jumps";
    case ProcessKind::lazy_walk: return "lazy_walk";
    case ProcessKind::deterministic: return "deterministic";
  }
  return "unknown";
}

namespace {

constexpr int kKinds = 6;

FiniteFilteredSpace random_space(std::mt19937_64& rng, int depth, int branching) {
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  if (std::bernoulli_distribution(0.5)(rng))
    return FiniteFilteredSpace::build(depth, branching, TransitionSpec::fair(branching));
  std::size_t internal = 0, level = 1;
  for (int k = 0; k < depth; ++k, level *= static_cast<std::size_t>(branching)) internal += level;
  std::vector<std::vector<double>> probs(internal);
  for (auto& row : probs) {
    row.resize(static_cast<std::size_t>(branching));
    double total = 0.0;
    for (auto& p : row) total += (p = weight(rng));
    for (auto& p : row) p /= total;
  }
  return FiniteFilteredSpace::build(depth, branching, TransitionSpec::explicit_nodes(std::move(probs)));
}

AdaptedProcess random_process(std::mt19937_64& rng, const FiniteFilteredSpace& space,
                              ProcessKind kind) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> values(space.node_count());
  switch (kind) {
    case ProcessKind::uniform_values:
      for (auto& x : values) x = unit(rng);
      break;
    case ProcessKind::random_walk:
      values[0] = unit(rng);
      for (NodeId n = 1; n < values.size(); ++n) values[n] = values[space.parent(n)] + unit(rng);
      break;
    case ProcessKind::martingale: {
      std::vector<double> leaves(space.level_size(space.depth()));
      for (auto& x : leaves) x = 2.0 * unit(rng);
      return AdaptedProcess::martingale(space, leaves);
    }
    case ProcessKind::rare_jumps: {
      std::bernoulli_distribution jump(0.15);
      for (NodeId n = 1; n < values.size(); ++n)
        values[n] = values[space.parent(n)] + 0.05 * unit(rng) + (jump(rng) ? 3.0 * unit(rng) : 0.0);
      break;
    }
    case ProcessKind::lazy_walk: {
      std::bernoulli_distribution move(0.4);
      for (NodeId n = 1; n < values.size(); ++n)
        values[n] = values[space.parent(n)] + (move(rng) ? (unit(rng) < 0.0 ? -1.0 : 1.0) : 0.0);
      break;
    }
    case ProcessKind::deterministic: {
      std::vector<double> by_level(static_cast<std::size_t>(space.depth()) + 1);
      for (auto& x : by_level) x = unit(rng);
      return AdaptedProcess::deterministic(space, by_level);
    }
  }
  return AdaptedProcess(space, std::move(values));
}

AdaptedProcess random_increasing(std::mt19937_64& rng, const FiniteFilteredSpace& space) {
  std::uniform_real_distribution<double> height(0.0, 1.0);
  const double q = std::uniform_real_distribution<double>(0.2, 0.8)(rng);
  std::bernoulli_distribution step(q);
  std::vector<double> values(space.node_count());
  for (NodeId n = 1; n < values.size(); ++n)
    values[n] = values[space.parent(n)] + (step(rng) ? height(rng) : 0.0);
  return AdaptedProcess(space, std::move(values));
}

}  // namespace

FiniteCase make_case(std::uint64_t seed, std::size_t index, const CorpusOptions& options) {
  if (options.min_depth < 0 || options.max_depth < options.min_depth)
    throw ValidationError("corpus: need 0 <= min_depth <= max_depth");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  const int depth =
      std::uniform_int_distribution<int>(options.min_depth, options.max_depth)(rng);

  FiniteCase c;
  c.seed = rng();
  c.kind = static_cast<ProcessKind>(index % kKinds);
  c.space = random_space(rng, depth, options.branching);
  c.v = random_process(rng, c.space, c.kind);
  c.a = (index / kKinds) % 2 == 0 ? filtration::maximal_process(c.space, c.v)
                                  : random_increasing(rng, c.space);
  c.id = "case-" + std::to_string(index) + "-" + kind_name(c.kind) + "-d" + std::to_string(depth);
  return c;
}

std::vector<FiniteCase> make_corpus(const CorpusOptions& options) {
  std::vector<FiniteCase> out;
  out.reserve(options.n_cases);
  for (std::size_t i = 0; i < options.n_cases; ++i) out.push_back(make_case(options.seed, i, options));
  return out;
}

}  // namespace bmo::analysis
