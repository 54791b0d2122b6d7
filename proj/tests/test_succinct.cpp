#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <random>
#include <vector>

#include "b2dt/bit_vector.hpp"
#include "b2dt/packed_array.hpp"

using b2dt::BitVector;
using b2dt::PackedIntArray;

namespace {

// linear-scan reference for rank; select is checked via the inverse property
std::uint64_t rank_oracle(const std::vector<bool>& bits, bool b, std::size_t p) {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < p; ++i) r += bits[i] == b;
    return r;
}

BitVector make(const std::vector<bool>& bits) {
    BitVector bv;
    for (bool b : bits) bv.push_back(b);
    bv.finalize();
    return bv;
}

} // namespace

TEST_CASE("rank matches a linear scan on random vectors") {
    std::mt19937_64 rng(42);
    for (int iter = 0; iter < 1000; ++iter) {
        std::size_t n = 1 + rng() % 700;
        double density = (iter % 4) * 0.33; // includes all-zero vectors
        std::vector<bool> bits(n);
        for (std::size_t i = 0; i < n; ++i) bits[i] = (rng() % 100) < density * 100;
        BitVector bv = make(bits);

        REQUIRE(bv.size() == n);
        // every position plus the end, on a sample of vectors; all positions otherwise
        for (std::size_t p = 0; p <= n; ++p) {
            REQUIRE(bv.rank1(p) == rank_oracle(bits, true, p));
            REQUIRE(bv.rank0(p) == rank_oracle(bits, false, p));
        }
    }
}

TEST_CASE("rank at word and superblock boundaries") {
    // sizes straddling the 64-bit word and 512-bit superblock boundaries
    for (std::size_t n : {63, 64, 65, 511, 512, 513, 1024, 4096}) {
        BitVector ones(n, true);
        ones.finalize();
        BitVector zeros(n, false);
        zeros.finalize();
        for (std::size_t p : {std::size_t(0), n / 2, n - 1, n}) {
            CHECK(ones.rank1(p) == p);
            CHECK(zeros.rank1(p) == 0);
            CHECK(zeros.rank0(p) == p);
        }
        CHECK(ones.ones() == n);
        CHECK(zeros.zeros() == n);
    }
}

TEST_CASE("select is the inverse of rank") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 200; ++iter) {
        std::size_t n = 1 + rng() % 3000;
        std::vector<bool> bits(n);
        for (std::size_t i = 0; i < n; ++i) bits[i] = rng() & 1;
        BitVector bv = make(bits);

        for (std::uint64_t j = 1; j <= bv.ones(); ++j) {
            std::size_t p = bv.select1(j);
            REQUIRE(bv.get(p));
            REQUIRE(bv.rank1(p + 1) == j);
            REQUIRE(bv.rank1(p) == j - 1);
        }
        for (std::uint64_t j = 1; j <= bv.zeros(); ++j) {
            std::size_t p = bv.select0(j);
            REQUIRE(!bv.get(p));
            REQUIRE(bv.rank0(p + 1) == j);
        }
    }
}

TEST_CASE("bounds and state errors throw") {
    BitVector bv;
    bv.push_back(true);
    CHECK_THROWS_AS(bv.rank1(0), std::logic_error); // not finalized
    bv.finalize();
    CHECK_THROWS_AS(bv.rank1(2), std::out_of_range);
    CHECK_THROWS_AS(bv.select1(0), std::out_of_range);
    CHECK_THROWS_AS(bv.select1(2), std::out_of_range);
    CHECK_THROWS_AS(bv.select0(1), std::out_of_range);
    CHECK_THROWS_AS(bv.get(1), std::out_of_range);
}

TEST_CASE("set after finalize invalidates the index") {
    BitVector bv(10);
    bv.finalize();
    CHECK(bv.rank1(10) == 0);
    bv.set(3, true);
    CHECK_THROWS_AS(bv.rank1(10), std::logic_error);
    bv.finalize();
    CHECK(bv.rank1(10) == 1);
    CHECK(bv.select1(1) == 3);
}

TEST_CASE("packed array round-trips random values at every width") {
    std::mt19937_64 rng(99);
    for (unsigned width = 1; width <= 64; ++width) {
        std::size_t n = 1 + rng() % 200;
        std::uint64_t mask = width == 64 ? ~0ull : (1ull << width) - 1;
        std::vector<std::uint64_t> values(n);
        for (auto& v : values) v = rng() & mask;
        PackedIntArray a = PackedIntArray::pack(width, values);
        REQUIRE(a.size() == n);
        REQUIRE(a.width() == width);
        for (std::size_t i = 0; i < n; ++i) REQUIRE(a.get(i) == values[i]);
        // overwrite in a random order and re-check
        for (std::size_t i = 0; i < n; ++i) values[i] = rng() & mask;
        for (std::size_t i = 0; i < n; ++i) a.set(n - 1 - i, values[n - 1 - i]);
        for (std::size_t i = 0; i < n; ++i) REQUIRE(a.get(i) == values[i]);
    }
}

TEST_CASE("width-7 entries spill across word boundaries correctly") {
    // 7-bit entries hit every alignment mod 64; store i^2 mod 128 exhaustively
    PackedIntArray a(7, 640);
    for (std::size_t i = 0; i < 640; ++i) a.set(i, (i * i) % 128);
    for (std::size_t i = 0; i < 640; ++i) CHECK(a.get(i) == (i * i) % 128);
}

TEST_CASE("packed array rejects bad widths and oversized values") {
    CHECK_THROWS_AS(PackedIntArray(0, 4), std::invalid_argument);
    CHECK_THROWS_AS(PackedIntArray(65, 4), std::invalid_argument);
    PackedIntArray a(3, 2);
    CHECK_THROWS_AS(a.set(0, 8), std::invalid_argument);
    CHECK_THROWS_AS(a.get(2), std::out_of_range);
    CHECK_THROWS_AS(a.set(2, 0), std::out_of_range);
}

TEST_CASE("bit_width") {
    CHECK(PackedIntArray::bit_width(0) == 1);
    CHECK(PackedIntArray::bit_width(1) == 1);
    CHECK(PackedIntArray::bit_width(2) == 2);
    CHECK(PackedIntArray::bit_width(255) == 8);
    CHECK(PackedIntArray::bit_width(256) == 9);
    CHECK(PackedIntArray::bit_width(~0ull) == 64);
}
