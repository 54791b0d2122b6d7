#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>

#include "b2dt/generate.hpp"
#include "b2dt/k2_tree.hpp"

using namespace b2dt;

namespace {

std::string bits_of(const BitVector& bv) {
    std::string s;
    for (std::size_t i = 0; i < bv.size(); ++i) s += bv[i] ? '1' : '0';
    return s;
}

} // namespace

TEST_CASE("hand-checked tiny trees") {
    SUBCASE("all-zero 8x8: root children only, no leaves") {
        BitMatrix m(8, 8, 2);
        K2Tree t = K2Tree::build(m, 2);
        CHECK(bits_of(t.T()) == "0000");
        CHECK(t.L().size() == 0);
        CHECK(t.total_bits() == 4);
    }
    SUBCASE("all-ones 4x4") {
        BitMatrix m(4, 4, 2);
        for (std::uint32_t y = 0; y < 4; ++y)
            for (std::uint32_t x = 0; x < 4; ++x) m.set(x, y);
        K2Tree t = K2Tree::build(m, 2);
        CHECK(bits_of(t.T()) == "1111");
        CHECK(bits_of(t.L()) == "1111111111111111");
    }
    SUBCASE("single 1 at the origin of a 4x4") {
        BitMatrix m(4, 4, 2);
        m.set(0, 0);
        K2Tree t = K2Tree::build(m, 2);
        CHECK(bits_of(t.T()) == "1000");
        CHECK(bits_of(t.L()) == "1000");
    }
    SUBCASE("matrix of side k has no internal levels") {
        BitMatrix m(2, 2, 2);
        m.set(1, 0);
        K2Tree t = K2Tree::build(m, 2);
        CHECK(t.T().size() == 0);
        CHECK(bits_of(t.L()) == "0100");
    }
}

TEST_CASE("children/parent navigation on a known shape") {
    // 8x8 with 1s confined to the top-left and bottom-right quadrants
    BitMatrix m(8, 8, 2);
    m.set(0, 0);
    m.set(7, 7);
    K2Tree t = K2Tree::build(m, 2);
    // level 1: 1001; level 2: 1000 0001
    CHECK(bits_of(t.T()) == "100110000001");
    auto [f0, l0] = t.children(0);
    CHECK(f0 == 4);
    CHECK(l0 == 7);
    auto [f3, l3] = t.children(3);
    CHECK(f3 == 8);
    CHECK(l3 == 11);
    CHECK(t.parent(4) == 0);
    CHECK(t.parent(7) == 0);
    CHECK(t.parent(8) == 3);
    CHECK(t.parent(11) == 3);
    // children of level-2 nodes land in L
    auto [f4, l4] = t.children(4);
    CHECK(f4 == 12); // first L position, offset past |T|
    CHECK(l4 == 15);
}

TEST_CASE("parent is the inverse of children on random trees") {
    std::mt19937_64 rng(17);
    for (int iter = 0; iter < 30; ++iter) {
        std::uint32_t k = iter % 2 ? 2 : 4;
        std::uint32_t side = k * k * k;
        BitMatrix m = gen_uniform(side, 0.15, iter, k);
        K2Tree t = K2Tree::build(m, k);
        for (std::uint64_t p = 0; p < t.T().size(); ++p) {
            if (!t.T()[p]) continue;
            auto [first, last] = t.children(p);
            REQUIRE(last - first + 1 == std::uint64_t(k) * k);
            if (first < t.T().size())
                for (std::uint64_t c = first; c <= last; ++c) REQUIRE(t.parent(c) == p);
        }
    }
}

TEST_CASE("cell and region queries match the oracle") {
    std::mt19937_64 rng(23);
    for (int iter = 0; iter < 40; ++iter) {
        std::uint32_t k = iter % 3 ? 2 : 4;
        std::uint32_t side = k == 2 ? 32 : 64;
        double density = (iter % 5) * 0.12;
        BitMatrix m = gen_uniform(side, density, 100 + iter, k);
        K2Tree t = K2Tree::build(m, k);

        for (std::uint32_t y = 0; y < side; ++y)
            for (std::uint32_t x = 0; x < side; ++x) REQUIRE(t.cell(x, y) == m.get(x, y));

        for (int q = 0; q < 25; ++q) {
            Region r;
            r.x_min = rng() % side;
            r.y_min = rng() % side;
            r.x_max = r.x_min + rng() % (side - r.x_min);
            r.y_max = r.y_min + rng() % (side - r.y_min);
            REQUIRE(t.region(r) == extract_region_oracle(m, r));
        }
    }
}

TEST_CASE("neighbor queries match row/column scans") {
    BitMatrix m = gen_uniform(64, 0.1, 5, 2);
    K2Tree t = K2Tree::build(m, 2);
    for (std::uint32_t v = 0; v < 64; ++v) {
        std::vector<std::uint32_t> direct, reverse;
        for (std::uint32_t u = 0; u < 64; ++u) {
            if (m.get(u, v)) direct.push_back(u);
            if (m.get(v, u)) reverse.push_back(u);
        }
        REQUIRE(t.direct_neighbors(v) == direct);
        REQUIRE(t.reverse_neighbors(v) == reverse);
    }
}

TEST_CASE("subtree_bit_cost equals build-and-count") {
    std::mt19937_64 rng(31);
    for (int iter = 0; iter < 60; ++iter) {
        std::uint32_t k = iter % 2 ? 2 : 4;
        std::uint32_t big = k == 2 ? 64 : 64;
        BitMatrix m = gen_uniform(big, 0.2, 200 + iter, k);

        // pick an aligned block, copy it into its own matrix, build, count
        std::uint32_t s = k;
        while (s * k <= big && rng() % 2) s *= k;
        std::uint32_t bx = (rng() % (big / s)) * s, by = (rng() % (big / s)) * s;
        Region r = Region::square(bx, by, s);

        BitMatrix sub(s, s, k);
        for (std::uint32_t y = 0; y < s; ++y)
            for (std::uint32_t x = 0; x < s; ++x)
                if (m.get(bx + x, by + y)) sub.set(x, y);

        std::uint64_t expected;
        if (sub.count_ones() == 0) {
            expected = 1;
        } else if (s == k) {
            expected = 1 + std::uint64_t(k) * k;
        } else {
            K2Tree t = K2Tree::build(sub, k);
            expected = 1 + t.total_bits();
        }
        REQUIRE(subtree_bit_cost(m, r, k) == expected);
    }

    BitMatrix m(8, 8, 2);
    CHECK(subtree_bit_cost(m, Region::square(3, 3, 1), 2) == 1);
    CHECK_THROWS_AS(subtree_bit_cost(m, Region{0, 0, 3, 1}, 2), std::invalid_argument);
    CHECK_THROWS_AS(subtree_bit_cost(m, Region::square(1, 0, 2), 2), std::invalid_argument);
}

TEST_CASE("from_parts reproduces a built tree") {
    BitMatrix m = gen_tiled(32, 8, 0.3, 77, 2);
    K2Tree t = K2Tree::build(m, 2);
    BitVector tc = t.T(), lc = t.L();
    K2Tree u = K2Tree::from_parts(2, 32, 32, 32, std::move(tc), std::move(lc));
    CHECK(t == u);
    for (std::uint32_t y = 0; y < 32; ++y)
        for (std::uint32_t x = 0; x < 32; ++x) REQUIRE(u.cell(x, y) == m.get(x, y));
}
