#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "b2dt/bit_matrix.hpp"
#include "b2dt/bit_vector.hpp"
#include "b2dt/fingerprint.hpp"
#include "b2dt/packed_array.hpp"

namespace b2dt {

enum class NodeClass { Internal, EmptyLeaf, BackRefLeaf, CellLevel };

/// A decoded back-reference: the target block copies the content of an
/// earlier, possibly unaligned, source occurrence.
struct CopyLink {
    std::uint64_t target_pos = 0; // position in T
    std::uint64_t ptr_pos = 0;    // top-left block containing the source, same level
    std::uint32_t level = 0;
    std::uint32_t off_x = 0, off_y = 0; // source origin within the ptr block
};

struct BuildParams {
    std::uint64_t modulus = (1ull << 61) - 1;
    std::uint64_t seed = 0;
    /// Block side at which cell bits are emitted verbatim into L; 0 means k.
    std::uint32_t leaf_side = 0;
    /// When false, every nonzero block is a copy candidate regardless of its
    /// k²-subtree cost (the paper's toy example builds this way).
    bool cost_filter = true;
};

/// Per-query instrumentation; optional, queries are stateless without it.
struct QueryStats {
    std::uint64_t link_hops = 0;
    std::uint64_t upwalk_calls = 0;
    std::uint64_t upwalk_levels = 0; // sum of (d - d') over back() calls

    double mean_upwalk() const {
        return upwalk_calls ? double(upwalk_levels) / double(upwalk_calls) : 0.0;
    }
};

struct SizeBreakdown {
    std::uint64_t t_bits = 0, l_bits = 0, n_bits = 0;
    std::uint64_t p_bits = 0, o_bits = 0, d_bits = 0;
    std::uint64_t total() const { return t_bits + l_bits + n_bits + p_bits + o_bits + d_bits; }
};

/// The 2D Block Tree / k²-tree hybrid. Layout:
///   T — internal(1) / leaf(0) bits, levelwise, levels 1..dmax;
///   L — verbatim cell bits of internal nodes at level dmax;
///   N — over the 0s of T: 0 = empty node, 1 = back-reference leaf;
///   P_d — backward distances in T positions, one packed array per level;
///   O_d — interleaved offsets (even x, odd y), one packed array per level;
///   D — D[d] = back-reference leaves in all levels before d.
/// Level d holds blocks of side n/k^d; the root's k² children are level 1.
class TwoDBlockTree {
public:
    TwoDBlockTree() = default;

    static TwoDBlockTree build(const BitMatrix& m, std::uint32_t k, const BuildParams& params = {});

    std::uint32_t k() const { return k_; }
    std::uint32_t side() const { return side_; }
    std::uint32_t height() const { return height_; }
    std::uint32_t max_level() const { return dmax_; }
    std::uint32_t leaf_side() const { return leaf_side_; }
    std::uint32_t logical_rows() const { return rows_; }
    std::uint32_t logical_cols() const { return cols_; }
    std::uint64_t kr_modulus() const { return kr_.modulus; }
    std::uint64_t kr_base() const { return kr_.base; }

    const BitVector& T() const { return t_; }
    const BitVector& L() const { return l_; }
    const BitVector& N() const { return n_; }
    const std::vector<std::uint64_t>& D() const { return d_; }
    const PackedIntArray& P(std::uint32_t d) const { return p_.at(d); }
    const PackedIntArray& O(std::uint32_t d) const { return o_.at(d); }
    std::uint64_t level_start(std::uint32_t d) const { return level_start_.at(d); }
    std::uint64_t level_size(std::uint32_t d) const { return level_size_.at(d); }

    NodeClass classify(std::uint64_t p, std::uint32_t d) const;

    CopyLink decode_link(std::uint64_t p, std::uint32_t d) const;

    /// Writes the cells of r into a fresh grid; equals the matrix oracle.
    Grid access(const Region& r, QueryStats* stats = nullptr) const;

    bool cell(std::uint32_t x, std::uint32_t y, QueryStats* stats = nullptr) const;

    std::vector<std::uint32_t> direct_neighbors(std::uint32_t node, QueryStats* stats = nullptr) const;
    std::vector<std::uint32_t> reverse_neighbors(std::uint32_t node, QueryStats* stats = nullptr) const;

    SizeBreakdown size_breakdown() const;
    std::uint64_t total_bits() const { return size_breakdown().total(); }

    /// Structural post-build audit; returns human-readable violations
    /// (empty = pass). When m is given, also checks link content against it.
    std::vector<std::string> audit(const BitMatrix* m = nullptr) const;

    /// All links decoded from the structure itself, with block origins
    /// recovered by traversal.
    struct LinkInfo {
        CopyLink link;
        std::uint32_t target_x = 0, target_y = 0;
        std::uint32_t source_x = 0, source_y = 0;
        std::uint32_t block_side = 0;
    };
    std::vector<LinkInfo> collect_links() const;

    static TwoDBlockTree from_parts(std::uint32_t k, std::uint32_t side,
                                    std::uint32_t rows, std::uint32_t cols,
                                    std::uint32_t leaf_side, KRParams kr,
                                    BitVector t, BitVector l, BitVector n,
                                    std::vector<std::uint64_t> d,
                                    std::vector<PackedIntArray> p,
                                    std::vector<PackedIntArray> o);

    bool operator==(const TwoDBlockTree& o) const;

private:
    void finish();
    void access_children(std::uint64_t first_child, std::uint32_t child_level,
                         std::uint32_t child_side, const Region& rel, Grid& out,
                         std::uint32_t out_x, std::uint32_t out_y,
                         std::uint32_t chain_hops, QueryStats* stats) const;
    void access_node(std::uint64_t p, std::uint32_t d, const Region& rel, Grid& out,
                     std::uint32_t out_x, std::uint32_t out_y,
                     std::uint32_t chain_hops, QueryStats* stats) const;

    std::uint32_t k_ = 0, side_ = 0, height_ = 0, dmax_ = 0, leaf_side_ = 0;
    std::uint32_t rows_ = 0, cols_ = 0;
    KRParams kr_;
    BitVector t_, l_, n_;
    std::vector<std::uint64_t> d_;        // index 0 unused; d_[d] valid for 1..dmax
    std::vector<PackedIntArray> p_, o_;   // index 0 unused; [d] valid for 1..dmax
    std::vector<std::uint64_t> level_start_, level_size_; // [d] for 1..dmax
};

} // namespace b2dt
