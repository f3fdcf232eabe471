#pragma once

#include <cstdint>
#include <random>

namespace rrdlab {

using Seed = std::uint64_t;

// All randomness flows through this engine. Streams are never shared between
// trials; each trial gets its own engine seeded from derive_seed().
using Engine = std::mt19937_64;

// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Seed for stream `index` under `master`. Same (master, index) gives the same
// seed on any thread schedule.
Seed derive_seed(Seed master, std::uint64_t index) noexcept;

Engine make_engine(Seed seed);

}  // namespace rrdlab
