#pragma once

#include <cstdint>
#include <vector>

#include "b2dt/bit_matrix.hpp"

namespace b2dt {

/// Karp-Rabin parameters. The base is drawn uniformly from [2, modulus-2]
/// per build and recorded in the serialized header for reproducibility.
struct KRParams {
    std::uint64_t modulus = (1ull << 61) - 1;
    std::uint64_t base = 0;

    static KRParams seeded(std::uint64_t seed, std::uint64_t modulus = (1ull << 61) - 1);
};

std::uint64_t kr_mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t mod);
std::uint64_t kr_powmod(std::uint64_t b, std::uint64_t e, std::uint64_t mod);

/// Polynomial hash of the region's cells in row-major order, mod modulus.
/// The non-rolling reference implementation.
std::uint64_t fingerprint_direct(const BitMatrix& m, const Region& r, const KRParams& p);

/// Two-phase rolling fingerprints of every side×side submatrix.
///
/// Phase 1 rolls a column-strip fingerprint downward (base^side as radix so
/// strips compose into the row-major block hash); phase 2 rolls the block
/// fingerprint rightward. Both phases are O(1) per step, O(n²) total.
/// Grids are recomputed from scratch per level; this is the known
/// construction bottleneck.
class FingerprintGrid {
public:
    FingerprintGrid(const BitMatrix& m, std::uint32_t side, const KRParams& p);

    std::uint32_t side() const { return side_; }
    std::uint32_t positions() const { return positions_; } // n - side + 1 per axis

    /// Fingerprint of the side×side submatrix with top-left (x=col, y=row).
    std::uint64_t block(std::uint32_t row, std::uint32_t col) const {
        return block_fp_[std::size_t(row) * positions_ + col];
    }

    /// Fingerprint of the vertical strip M[row .. row+side-1][col].
    std::uint64_t strip(std::uint32_t row, std::uint32_t col) const {
        return col_fp_[std::size_t(row) * n_ + col];
    }

private:
    std::uint32_t side_ = 0, n_ = 0, positions_ = 0;
    std::vector<std::uint64_t> col_fp_;   // (n-side+1) x n
    std::vector<std::uint64_t> block_fp_; // (n-side+1) x (n-side+1)
};

/// Cell-by-cell equality of two same-side square regions. Fingerprint matches
/// are never trusted without this check.
bool verify_equal(const BitMatrix& m, const Region& a, const Region& b);

} // namespace b2dt
