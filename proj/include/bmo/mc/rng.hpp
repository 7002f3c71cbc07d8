#pragma once
// Counter-based seed derivation. Every path (or inner path) gets its own
// engine seeded from (master, indices), so a path's draws never depend on
// which worker produced it or in what order.

#include <cstdint>
#include <random>
#include <span>

namespace bmo::mc {

/// splitmix64 finaliser.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t i) noexcept {
  return splitmix64(splitmix64(master) ^ splitmix64(i + 0x632BE59BD9B4E019ull));
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t i,
                                    std::uint64_t j) noexcept {
  return derive_seed(derive_seed(master, i), j);
}

/// Standard normal draws from a mt19937_64 engine.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
  double next() { return normal_(engine_); }
  /// out[i] = scale * Z_i.
  void fill(std::span<double> out, double scale) {
    for (auto& x : out) x = scale * normal_(engine_);
  }
  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace bmo::mc
