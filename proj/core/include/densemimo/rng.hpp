#pragma once

#include <cstdint>
#include <random>

namespace densemimo {

using Rng = std::mt19937_64;

/// Substream tags. Each (seed, tag, trial, item) tuple maps to its own generator, so a
/// trial's draws do not depend on which worker runs it or in which order.
enum class Stream : std::uint64_t {
  kBaseStations = 1,
  kUserPlacement = 2,
  kPilots = 3,
  kFading = 4,
  kPilotSharing = 5,
};

[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t trial,
                                                  std::uint64_t item = 0) noexcept {
  std::uint64_t state = master;
  std::uint64_t h = splitmix64(state);
  for (std::uint64_t word : {static_cast<std::uint64_t>(stream), trial, item}) {
    state = h ^ word;
    h = splitmix64(state);
  }
  return h;
}

[[nodiscard]] inline Rng make_rng(std::uint64_t master, Stream stream, std::uint64_t trial,
                                  std::uint64_t item = 0) {
  return Rng(derive_seed(master, stream, trial, item));
}

}  // namespace densemimo
