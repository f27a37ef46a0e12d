#pragma once

#include <cstdint>
#include <random>

namespace lsm {

using Engine = std::mt19937_64;

/// Independent purposes a master seed is split into. Changing how one stage
/// consumes randomness never perturbs the streams of the others.
enum class Stream : std::uint64_t {
  kLabels = 1,
  kLatents = 2,
  kEdges = 3,
  kMoments = 4,
  kCell = 5,
  kTrial = 6,
};

/// SplitMix64 finalizer; a bijective 64-bit mix.
std::uint64_t mix64(std::uint64_t x);

/// Deterministically derives a child seed from a parent seed and a
/// (stream, index) pair.
std::uint64_t derive_seed(std::uint64_t parent, Stream stream, std::uint64_t index = 0);

inline Engine make_engine(std::uint64_t parent, Stream stream, std::uint64_t index = 0) {
  return Engine(derive_seed(parent, stream, index));
}

}  // namespace lsm
