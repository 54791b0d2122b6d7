#include "b2dt/k2_tree.hpp"

#include <stdexcept>

namespace b2dt {

namespace {

std::uint32_t log_base(std::uint64_t n, std::uint32_t k) {
    std::uint32_t h = 0;
    std::uint64_t s = 1;
    while (s < n) { s *= k; ++h; }
    if (s != n) throw std::invalid_argument("side is not a power of k");
    return h;
}

} // namespace

K2Tree K2Tree::build(const BitMatrix& m, std::uint32_t k) {
    if (k < 2) throw std::invalid_argument("K2Tree: k must be >= 2");
    K2Tree t;
    t.k_ = k;
    t.side_ = m.side();
    t.rows_ = m.rows();
    t.cols_ = m.cols();
    t.height_ = log_base(t.side_, k);

    struct Block { std::uint32_t x, y; };
    std::vector<Block> cur;
    cur.reserve(std::size_t(k) * k);
    std::uint32_t s = t.side_ / k;
    for (std::uint32_t cy = 0; cy < k; ++cy)
        for (std::uint32_t cx = 0; cx < k; ++cx)
            cur.push_back({cx * s, cy * s});

    while (!cur.empty()) {
        std::vector<Block> next;
        for (const Block& b : cur) {
            if (s == 1) {
                t.l_.push_back(m.get(b.x, b.y));
                continue;
            }
            bool nonzero = !m.block_is_zero(b.x, b.y, s);
            t.t_.push_back(nonzero);
            if (nonzero) {
                std::uint32_t cs = s / k;
                for (std::uint32_t cy = 0; cy < k; ++cy)
                    for (std::uint32_t cx = 0; cx < k; ++cx)
                        next.push_back({b.x + cx * cs, b.y + cy * cs});
            }
        }
        cur = std::move(next);
        s /= k;
    }
    t.t_.finalize();
    t.l_.finalize();
    return t;
}

K2Tree K2Tree::from_parts(std::uint32_t k, std::uint32_t side,
                          std::uint32_t rows, std::uint32_t cols,
                          BitVector t, BitVector l) {
    K2Tree r;
    r.k_ = k;
    r.side_ = side;
    r.rows_ = rows;
    r.cols_ = cols;
    r.height_ = log_base(side, k);
    r.t_ = std::move(t);
    r.l_ = std::move(l);
    r.t_.finalize();
    r.l_.finalize();
    return r;
}

std::pair<std::uint64_t, std::uint64_t> K2Tree::children(std::uint64_t p) const {
    std::uint64_t kk = std::uint64_t(k_) * k_;
    if (p >= t_.size() || !t_[p])
        throw std::invalid_argument("K2Tree::children: position is not an internal node");
    std::uint64_t start = t_.rank1(p + 1) * kk;
    return {start, start + kk - 1};
}

std::uint64_t K2Tree::parent(std::uint64_t p) const {
    std::uint64_t kk = std::uint64_t(k_) * k_;
    if (p < kk) throw std::invalid_argument("K2Tree::parent: root-level positions have no parent");
    return t_.select1(p / kk);
}

Grid K2Tree::region(const Region& r) const {
    if (r.x_min > r.x_max || r.y_min > r.y_max || r.x_max >= side_ || r.y_max >= side_)
        throw std::out_of_range("K2Tree::region: region out of bounds");
    Grid g(r.width(), r.height());
    region_rec(0, 1, side_ / k_, r, g, 0, 0);
    return g;
}

void K2Tree::region_rec(std::uint64_t first_child, std::uint32_t child_level,
                        std::uint32_t child_side, const Region& rel,
                        Grid& out, std::uint32_t out_x, std::uint32_t out_y) const {
    std::uint64_t kk = std::uint64_t(k_) * k_;
    for (std::uint32_t i = 0; i < kk; ++i) {
        std::uint32_t bx = (i % k_) * child_side;
        std::uint32_t by = (i / k_) * child_side;
        std::uint32_t ix0 = rel.x_min > bx ? rel.x_min : bx;
        std::uint32_t iy0 = rel.y_min > by ? rel.y_min : by;
        std::uint32_t ix1 = rel.x_max < bx + child_side - 1 ? rel.x_max : bx + child_side - 1;
        std::uint32_t iy1 = rel.y_max < by + child_side - 1 ? rel.y_max : by + child_side - 1;
        if (ix0 > ix1 || iy0 > iy1) continue;
        std::uint64_t pos = first_child + i;
        if (child_level == height_) {
            if (l_[pos - t_.size()])
                out.at(out_x + (ix0 - rel.x_min), out_y + (iy0 - rel.y_min)) = 1;
            continue;
        }
        if (!t_[pos]) continue;
        Region child_rel{ix0 - bx, iy0 - by, ix1 - bx, iy1 - by};
        region_rec(t_.rank1(pos + 1) * kk, child_level + 1, child_side / k_, child_rel,
                   out, out_x + (ix0 - rel.x_min), out_y + (iy0 - rel.y_min));
    }
}

bool K2Tree::cell(std::uint32_t x, std::uint32_t y) const {
    Grid g = region({x, y, x, y});
    return g.at(0, 0) != 0;
}

std::vector<std::uint32_t> K2Tree::direct_neighbors(std::uint32_t node) const {
    if (node >= rows_) throw std::out_of_range("K2Tree::direct_neighbors: node out of bounds");
    Grid g = region(Region::row(node, side_));
    std::vector<std::uint32_t> out;
    for (std::uint32_t x = 0; x < side_; ++x)
        if (g.at(x, 0)) out.push_back(x);
    return out;
}

std::vector<std::uint32_t> K2Tree::reverse_neighbors(std::uint32_t node) const {
    if (node >= cols_) throw std::out_of_range("K2Tree::reverse_neighbors: node out of bounds");
    Grid g = region(Region::col(node, side_));
    std::vector<std::uint32_t> out;
    for (std::uint32_t y = 0; y < side_; ++y)
        if (g.at(0, y)) out.push_back(y);
    return out;
}

std::uint64_t subtree_bit_cost(const BitMatrix& m, const Region& r, std::uint32_t k) {
    m.check_region(r);
    std::uint32_t s = r.width();
    if (s != r.height()) throw std::invalid_argument("subtree_bit_cost: region is not square");
    if (r.x_min % s != 0 || r.y_min % s != 0)
        throw std::invalid_argument("subtree_bit_cost: region is not grid-aligned");
    std::uint32_t p = s;
    while (p > 1) {
        if (p % k != 0) throw std::invalid_argument("subtree_bit_cost: side is not a power of k");
        p /= k;
    }
    if (s == 1) return 1;
    if (m.block_is_zero(r.x_min, r.y_min, s)) return 1;
    if (s == k) return 1 + std::uint64_t(k) * k;
    std::uint64_t total = 1;
    std::uint32_t cs = s / k;
    for (std::uint32_t cy = 0; cy < k; ++cy)
        for (std::uint32_t cx = 0; cx < k; ++cx)
            total += subtree_bit_cost(
                m, Region::square(r.x_min + cx * cs, r.y_min + cy * cs, cs), k);
    return total;
}

} // namespace b2dt
