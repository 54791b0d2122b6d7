#pragma once

#include <cstdint>

#include "b2dt/bit_matrix.hpp"

namespace b2dt {

/// Uniform-random matrix at the given density of 1s.
BitMatrix gen_uniform(std::uint32_t side, double density, std::uint64_t seed, std::uint32_t k);

/// One random block_side×block_side pattern repeated across the whole matrix.
BitMatrix gen_tiled(std::uint32_t side, std::uint32_t block_side, double density,
                    std::uint64_t seed, std::uint32_t k);

/// One random pattern placed at the origin plus `copies` further copies at
/// non-grid-aligned offsets, to exercise the up-walk of linked queries.
BitMatrix gen_shifted(std::uint32_t side, std::uint32_t block_side, double density,
                      std::uint32_t copies, std::uint64_t seed, std::uint32_t k);

} // namespace b2dt
