#include "b2dt/fingerprint.hpp"

#include <random>
#include <stdexcept>

namespace b2dt {

KRParams KRParams::seeded(std::uint64_t seed, std::uint64_t modulus) {
    if (modulus < 5) throw std::invalid_argument("KRParams: modulus too small");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> dist(2, modulus - 2);
    return {modulus, dist(rng)};
}

std::uint64_t kr_mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t mod) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % mod);
}

std::uint64_t kr_powmod(std::uint64_t b, std::uint64_t e, std::uint64_t mod) {
    std::uint64_t r = 1 % mod;
    b %= mod;
    while (e) {
        if (e & 1) r = kr_mulmod(r, b, mod);
        b = kr_mulmod(b, b, mod);
        e >>= 1;
    }
    return r;
}

std::uint64_t fingerprint_direct(const BitMatrix& m, const Region& r, const KRParams& p) {
    m.check_region(r);
    if (r.width() != r.height()) throw std::invalid_argument("fingerprint_direct: region not square");
    std::uint64_t f = 0;
    for (std::uint32_t y = r.y_min; y <= r.y_max; ++y)
        for (std::uint32_t x = r.x_min; x <= r.x_max; ++x) {
            f = kr_mulmod(f, p.base, p.modulus);
            if (m.get(x, y)) f = (f + 1) % p.modulus;
        }
    return f;
}

FingerprintGrid::FingerprintGrid(const BitMatrix& m, std::uint32_t side, const KRParams& p) {
    if (side == 0 || side > m.side()) throw std::invalid_argument("FingerprintGrid: bad side");
    side_ = side;
    n_ = m.side();
    positions_ = n_ - side + 1;
    const std::uint64_t mod = p.modulus;
    const std::uint64_t base_strip = kr_powmod(p.base, side, mod); // radix between rows
    const std::uint64_t strip_top = kr_powmod(base_strip, side - 1, mod);
    const std::uint64_t block_top = kr_powmod(p.base, side - 1, mod);

    col_fp_.assign(std::size_t(positions_) * n_, 0);
    // Phase 1: vertical strips, rolled downward per column.
    for (std::uint32_t col = 0; col < n_; ++col) {
        std::uint64_t f = 0;
        for (std::uint32_t row = 0; row < side; ++row) {
            f = kr_mulmod(f, base_strip, mod);
            if (m.get(col, row)) f = (f + 1) % mod;
        }
        col_fp_[col] = f;
        for (std::uint32_t row = 1; row < positions_; ++row) {
            if (m.get(col, row - 1)) f = (f + mod - strip_top) % mod;
            f = kr_mulmod(f, base_strip, mod);
            if (m.get(col, row + side - 1)) f = (f + 1) % mod;
            col_fp_[std::size_t(row) * n_ + col] = f;
        }
    }

    block_fp_.assign(std::size_t(positions_) * positions_, 0);
    // Phase 2: compose strips rightward per row of positions.
    for (std::uint32_t row = 0; row < positions_; ++row) {
        const std::uint64_t* strips = &col_fp_[std::size_t(row) * n_];
        std::uint64_t f = 0;
        for (std::uint32_t col = 0; col < side; ++col)
            f = (kr_mulmod(f, p.base, mod) + strips[col]) % mod;
        block_fp_[std::size_t(row) * positions_] = f;
        for (std::uint32_t col = 1; col < positions_; ++col) {
            f = (f + mod - kr_mulmod(strips[col - 1] % mod, block_top, mod)) % mod;
            f = kr_mulmod(f, p.base, mod);
            f = (f + strips[col + side - 1]) % mod;
            block_fp_[std::size_t(row) * positions_ + col] = f;
        }
    }
}

bool verify_equal(const BitMatrix& m, const Region& a, const Region& b) {
    if (a.width() != b.width() || a.height() != b.height() || a.width() != a.height())
        throw std::invalid_argument("verify_equal: size mismatch");
    m.check_region(a);
    m.check_region(b);
    return m.blocks_equal(a.x_min, a.y_min, b.x_min, b.y_min, a.width());
}

} // namespace b2dt
