#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "b2dt/bit_matrix.hpp"
#include "b2dt/generate.hpp"

using namespace b2dt;

TEST_CASE("side padding rounds up to a power of k") {
    CHECK(BitMatrix::side_for(1, 1, 2) == 2);
    CHECK(BitMatrix::side_for(2, 2, 2) == 2);
    CHECK(BitMatrix::side_for(3, 2, 2) == 4);
    CHECK(BitMatrix::side_for(5, 9, 2) == 16);
    CHECK(BitMatrix::side_for(5, 9, 4) == 16);
    CHECK(BitMatrix::side_for(17, 3, 4) == 64);
    CHECK_THROWS_AS(BitMatrix::side_for(4, 4, 1), std::invalid_argument);
}

TEST_CASE("edgelist parsing: comments, coordinates, errors") {
    std::istringstream in("# header\n0 1\n% other comment style\n2 0\n\n3 3\n");
    BitMatrix m = parse_edgelist(in, 2);
    CHECK(m.rows() == 4);
    CHECK(m.cols() == 4);
    CHECK(m.side() == 4);
    CHECK(m.count_ones() == 3);
    // edge u -> v is stored at column v, row u
    CHECK(m.get(1, 0));
    CHECK(m.get(0, 2));
    CHECK(m.get(3, 3));
    CHECK(!m.get(0, 0));

    std::istringstream bad("0 1\nnot numbers\n");
    CHECK_THROWS_WITH_AS(parse_edgelist(bad, 2), doctest::Contains("line 2"), std::runtime_error);

    std::istringstream missing("0 1\n5\n");
    CHECK_THROWS_AS(parse_edgelist(missing, 2), std::runtime_error);

    std::istringstream empty("# only comments\n");
    CHECK_THROWS_AS(parse_edgelist(empty, 2), std::runtime_error);
}

TEST_CASE("P1 parsing with interleaved comments") {
    std::istringstream in("P1\n# a comment\n3 # width\n2\n1 0 1\n0\n1 0\n");
    BitMatrix m = parse_pbm(in, 2);
    CHECK(m.cols() == 3);
    CHECK(m.rows() == 2);
    CHECK(m.side() == 4);
    CHECK(m.get(0, 0));
    CHECK(!m.get(1, 0));
    CHECK(m.get(2, 0));
    CHECK(!m.get(0, 1));
    CHECK(m.get(1, 1));
    CHECK(!m.get(2, 1));
}

TEST_CASE("P4 rows are MSB-first and byte padded") {
    // 9x2: row 0 = 100000001, row 1 = 010000000
    std::string data = "P4\n9 2\n";
    data += char(0x80); data += char(0x80);
    data += char(0x40); data += char(0x00);
    std::istringstream in(data);
    BitMatrix m = parse_pbm(in, 2);
    CHECK(m.cols() == 9);
    CHECK(m.rows() == 2);
    CHECK(m.count_ones() == 3);
    CHECK(m.get(0, 0));
    CHECK(m.get(8, 0));
    CHECK(m.get(1, 1));
}

TEST_CASE("PBM writers round-trip through the parser") {
    std::mt19937_64 rng(3);
    for (int iter = 0; iter < 50; ++iter) {
        std::uint32_t w = 1 + rng() % 40, h = 1 + rng() % 40;
        Grid g(w, h);
        for (auto& c : g.cells) c = rng() & 1;

        std::ostringstream p4, p1;
        write_pbm_p4(g, p4);
        write_pbm_p1(g, p1);
        for (const std::string& s : {p4.str(), p1.str()}) {
            std::istringstream in(s);
            BitMatrix m = parse_pbm(in, 2);
            REQUIRE(m.cols() == w);
            REQUIRE(m.rows() == h);
            for (std::uint32_t y = 0; y < h; ++y)
                for (std::uint32_t x = 0; x < w; ++x)
                    REQUIRE(m.get(x, y) == (g.at(x, y) != 0));
        }
    }
}

TEST_CASE("parser rejects malformed bitmaps") {
    std::istringstream wrong_magic("P5\n2 2\nxxxx");
    CHECK_THROWS_AS(parse_pbm(wrong_magic, 2), std::runtime_error);
    std::istringstream truncated("P4\n16 2\n\x01");
    CHECK_THROWS_AS(parse_pbm(truncated, 2), std::runtime_error);
    std::istringstream bad_p1("P1\n2 2\n1 0 1 2\n");
    CHECK_THROWS_AS(parse_pbm(bad_p1, 2), std::runtime_error);
}

TEST_CASE("region oracle extracts verbatim cells") {
    BitMatrix m(8, 8, 2);
    m.set(2, 1);
    m.set(3, 2);
    m.set(7, 7);
    Grid g = extract_region_oracle(m, {2, 1, 4, 3});
    CHECK(g.width == 3);
    CHECK(g.height == 3);
    CHECK(g.at(0, 0) == 1);
    CHECK(g.at(1, 1) == 1);
    CHECK(g.at(2, 2) == 0);
    CHECK_THROWS_AS(extract_region_oracle(m, {0, 0, 8, 8}), std::out_of_range);
    CHECK_THROWS_AS(extract_region_oracle(m, {4, 0, 3, 0}), std::out_of_range);
}

TEST_CASE("block helpers agree with cell loops") {
    std::mt19937_64 rng(11);
    BitMatrix m = gen_uniform(16, 0.3, 5, 2);
    for (int iter = 0; iter < 200; ++iter) {
        std::uint32_t s = 1u << (rng() % 4);
        std::uint32_t ax = rng() % (17 - s), ay = rng() % (17 - s);
        std::uint32_t bx = rng() % (17 - s), by = rng() % (17 - s);
        bool zero = true, equal = true;
        for (std::uint32_t y = 0; y < s; ++y)
            for (std::uint32_t x = 0; x < s; ++x) {
                zero &= !m.get(ax + x, ay + y);
                equal &= m.get(ax + x, ay + y) == m.get(bx + x, by + y);
            }
        REQUIRE(m.block_is_zero(ax, ay, s) == zero);
        REQUIRE(m.blocks_equal(ax, ay, bx, by, s) == equal);
    }
}

TEST_CASE("generators produce what they claim") {
    BitMatrix tiled = gen_tiled(64, 8, 0.4, 21, 2);
    for (std::uint32_t y = 0; y < 64; ++y)
        for (std::uint32_t x = 0; x < 64; ++x)
            REQUIRE(tiled.get(x, y) == tiled.get(x % 8, y % 8));

    BitMatrix a = gen_uniform(32, 0.5, 9, 2);
    BitMatrix b = gen_uniform(32, 0.5, 9, 2);
    BitMatrix c = gen_uniform(32, 0.5, 10, 2);
    CHECK(a == b); // same seed, same matrix
    CHECK(a != c);

    BitMatrix s = gen_shifted(128, 16, 0.5, 3, 13, 2);
    CHECK(s.count_ones() > 0);
    CHECK(s.count_ones() % 4 == 0); // pattern weight times (1 + copies)
}
