#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "b2dt/bit_vector.hpp"

namespace b2dt {

/// Axis-aligned rectangle in (x, y) cell coordinates, corners inclusive.
/// x is the column index, y is the row index.
struct Region {
    std::uint32_t x_min = 0, y_min = 0, x_max = 0, y_max = 0;

    std::uint32_t width() const { return x_max - x_min + 1; }
    std::uint32_t height() const { return y_max - y_min + 1; }

    static Region row(std::uint32_t y, std::uint32_t side) { return {0, y, side - 1, y}; }
    static Region col(std::uint32_t x, std::uint32_t side) { return {x, 0, x, side - 1}; }
    static Region square(std::uint32_t x, std::uint32_t y, std::uint32_t side) {
        return {x, y, x + side - 1, y + side - 1};
    }

    bool operator==(const Region&) const = default;
};

/// Dense row-major grid of 0/1 cells, the result type of region queries.
struct Grid {
    std::uint32_t width = 0, height = 0;
    std::vector<std::uint8_t> cells;

    Grid() = default;
    Grid(std::uint32_t w, std::uint32_t h) : width(w), height(h), cells(std::size_t(w) * h, 0) {}

    std::uint8_t& at(std::uint32_t x, std::uint32_t y) { return cells[std::size_t(y) * width + x]; }
    std::uint8_t at(std::uint32_t x, std::uint32_t y) const { return cells[std::size_t(y) * width + x]; }

    bool operator==(const Grid&) const = default;
};

/// Dense binary matrix with logical dimensions and a side padded to the next
/// power of k. Padding cells are always zero. Serves as the construction-time
/// ground truth and the brute-force oracle for every query operation.
class BitMatrix {
public:
    BitMatrix() = default;

    BitMatrix(std::uint32_t rows, std::uint32_t cols, std::uint32_t k)
        : rows_(rows), cols_(cols), side_(side_for(rows, cols, k)) {
        bits_.assign((std::uint64_t(side_) * side_ + 63) / 64, 0);
    }

    static std::uint32_t side_for(std::uint32_t rows, std::uint32_t cols, std::uint32_t k) {
        if (k < 2) throw std::invalid_argument("BitMatrix: k must be >= 2");
        std::uint64_t need = rows > cols ? rows : cols;
        std::uint64_t s = k;
        while (s < need) s *= k;
        return static_cast<std::uint32_t>(s);
    }

    std::uint32_t rows() const { return rows_; }
    std::uint32_t cols() const { return cols_; }
    std::uint32_t side() const { return side_; }

    bool get(std::uint32_t x, std::uint32_t y) const {
        std::uint64_t i = std::uint64_t(y) * side_ + x;
        return (bits_[i / 64] >> (i % 64)) & 1ull;
    }

    void set(std::uint32_t x, std::uint32_t y, bool v = true) {
        if (x >= side_ || y >= side_) throw std::out_of_range("BitMatrix::set: cell out of bounds");
        std::uint64_t i = std::uint64_t(y) * side_ + x;
        if (v)
            bits_[i / 64] |= 1ull << (i % 64);
        else
            bits_[i / 64] &= ~(1ull << (i % 64));
    }

    std::uint64_t count_ones() const;

    bool block_is_zero(std::uint32_t x, std::uint32_t y, std::uint32_t s) const;
    bool blocks_equal(std::uint32_t ax, std::uint32_t ay,
                      std::uint32_t bx, std::uint32_t by, std::uint32_t s) const;

    void check_region(const Region& r) const {
        if (r.x_min > r.x_max || r.y_min > r.y_max || r.x_max >= side_ || r.y_max >= side_)
            throw std::out_of_range("BitMatrix: region out of bounds");
    }

    bool operator==(const BitMatrix&) const = default;

private:
    std::uint32_t rows_ = 0, cols_ = 0, side_ = 0;
    std::vector<std::uint64_t> bits_;
};

/// Parses "u v" edge lines (source node, destination node); '#' and '%' start
/// comment lines. Cell (x=v, y=u) is set, so row u holds u's direct neighbors.
BitMatrix parse_edgelist(std::istream& in, std::uint32_t k);

/// Parses a P1 (ASCII) or P4 (binary) portable bitmap; black pixels become 1s.
BitMatrix parse_pbm(std::istream& in, std::uint32_t k);

void write_pbm_p4(const Grid& g, std::ostream& out);
void write_pbm_p1(const Grid& g, std::ostream& out);

/// Verbatim row-major copy of the cells in r; the test oracle for all
/// compressed-structure queries.
Grid extract_region_oracle(const BitMatrix& m, const Region& r);

Grid matrix_to_grid(const BitMatrix& m);

} // namespace b2dt
