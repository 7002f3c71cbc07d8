#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bmo {

/// Invalid input: bad probabilities, out-of-range levels, malformed config.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The number of stopping times to enumerate exceeds the configured cap.
class EnumerationInfeasible : public std::runtime_error {
 public:
  EnumerationInfeasible(std::uint64_t count, std::uint64_t cap, bool saturated)
      : std::runtime_error("enumeration infeasible: " + std::string(saturated ? ">= " : "") +
                           std::to_string(count) + " stopping times exceed the cap of " +
                           std::to_string(cap)),
        count_(count),
        cap_(cap) {}

  std::uint64_t count() const noexcept { return count_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t count_;
  std::uint64_t cap_;
};

/// A lemma's hypothesis does not hold for the supplied data; what() names the
/// witness.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A requested allocation exceeds the configured memory cap.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bmo
