#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace xorwl {

std::uint64_t fnv1a64(std::string_view bytes);

/// splitmix64 finaliser applied to seed ^ fnv1a64(stream).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream);

/// Platform-stable random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Bounded draws use rejection sampling on raw engine output
/// rather than std::uniform_int_distribution, whose algorithm varies
/// between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  bool coin() { return (engine_() >> 63) != 0; }

  /// Independent generator for a named component.
  Rng split(std::string_view stream) const { return Rng(derive_seed(seed_, stream)); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace xorwl
