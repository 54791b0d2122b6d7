#pragma once

#include <cstdint>
#include <vector>

#include "b2dt/bit_matrix.hpp"
#include "b2dt/bit_vector.hpp"

namespace b2dt {

/// Baseline k²-tree: a compressed quadtree over a binary matrix.
///
/// T holds the bits of every level except the last, in levelwise order,
/// starting with the root's k² children; L holds the cell bits of surviving
/// side-k blocks. A node is 0 in T iff its submatrix is all zeros. Navigation
/// uses rank/select on T: children of the 1 at p start at rank1(T, p+1) * k²
/// in the T:L concatenation, and parent(p) = select1(T, floor(p / k²)).
class K2Tree {
public:
    K2Tree() = default;

    static K2Tree build(const BitMatrix& m, std::uint32_t k);

    std::uint32_t k() const { return k_; }
    std::uint32_t side() const { return side_; }
    std::uint32_t height() const { return height_; }
    std::uint32_t logical_rows() const { return rows_; }
    std::uint32_t logical_cols() const { return cols_; }
    const BitVector& T() const { return t_; }
    const BitVector& L() const { return l_; }

    /// First and last position of p's children in the T:L concatenation.
    std::pair<std::uint64_t, std::uint64_t> children(std::uint64_t p) const;

    std::uint64_t parent(std::uint64_t p) const;

    bool cell(std::uint32_t x, std::uint32_t y) const;

    Grid region(const Region& r) const;

    std::vector<std::uint32_t> direct_neighbors(std::uint32_t node) const;
    std::vector<std::uint32_t> reverse_neighbors(std::uint32_t node) const;

    std::uint64_t total_bits() const { return t_.size() + l_.size(); }

    bool operator==(const K2Tree& o) const {
        return k_ == o.k_ && side_ == o.side_ && rows_ == o.rows_ && cols_ == o.cols_ &&
               t_ == o.t_ && l_ == o.l_;
    }

    /// Used by the container loader.
    static K2Tree from_parts(std::uint32_t k, std::uint32_t side,
                             std::uint32_t rows, std::uint32_t cols,
                             BitVector t, BitVector l);

private:
    void region_rec(std::uint64_t first_child, std::uint32_t child_level,
                    std::uint32_t child_side, const Region& rel,
                    Grid& out, std::uint32_t out_x, std::uint32_t out_y) const;

    std::uint32_t k_ = 0;
    std::uint32_t side_ = 0;
    std::uint32_t height_ = 0;
    std::uint32_t rows_ = 0, cols_ = 0;
    BitVector t_, l_;
};

/// Exact number of T+L bits the square block at r would occupy if expanded as
/// a pure k²-tree subtree: 1 bit per node, k² cell bits per surviving side-k
/// block. The block must be aligned to the grid of its own side.
std::uint64_t subtree_bit_cost(const BitMatrix& m, const Region& r, std::uint32_t k);

} // namespace b2dt
