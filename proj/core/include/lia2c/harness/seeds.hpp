#pragma once

#include <cstdint>

namespace lia2c::harness {

/// Named random streams carved out of one master seed.
enum class Stream : std::uint64_t { kEnv = 1, kInit = 2, kPolicy = 3, kLatent = 4, kNoise = 5 };

std::uint64_t splitmix64(std::uint64_t x);

/// Counter-based derivation: the stream id and learner index are mixed into
/// the master seed through two SplitMix64 rounds, so every (master, stream,
/// index) triple names an independent mt19937_64 seed.
std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index = 0);

}  // namespace lia2c::harness
