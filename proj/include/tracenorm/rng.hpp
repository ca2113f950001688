#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "tracenorm/types.hpp"

namespace tracenorm::rng {

// splitmix64 finalizer; decorrelates nearby seeds.
std::uint64_t mix(std::uint64_t z);

// Derives an independent stream seed from a root seed and a stream name,
// so that e.g. data generation and solver initialization can be re-seeded
// separately while everything still flows from one 64-bit seed.
std::uint64_t stream_seed(std::uint64_t root, std::string_view name);

inline std::mt19937_64 engine(std::uint64_t seed) { return std::mt19937_64(seed); }

Matrix gaussian(Index rows, Index cols, std::mt19937_64& eng);

// Orthonormal columns from a QR factorization of a Gaussian draw, with the
// sign fixed so the result is deterministic for a given engine state.
Matrix orthonormal(Index rows, Index cols, std::mt19937_64& eng);

}  // namespace tracenorm::rng
