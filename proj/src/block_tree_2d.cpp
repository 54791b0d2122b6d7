#include "b2dt/block_tree_2d.hpp"

#include <cassert>
#include <stdexcept>
#include <unordered_map>

#include "b2dt/k2_tree.hpp"

namespace b2dt {

namespace {

std::uint32_t log_base(std::uint64_t n, std::uint32_t k) {
    std::uint32_t h = 0;
    std::uint64_t s = 1;
    while (s < n) { s *= k; ++h; }
    if (s != n) throw std::invalid_argument("side is not a power of k");
    return h;
}

enum class Cls : std::uint8_t { Candidate, Empty, Internal, BackRef };

struct PendingLink {
    std::uint64_t dist = 0;
    std::uint32_t off_x = 0, off_y = 0;
};

struct Group {
    std::uint32_t wx, wy; // witness block origin
    std::vector<std::uint32_t> targets;
};

} // namespace

TwoDBlockTree TwoDBlockTree::build(const BitMatrix& m, std::uint32_t k, const BuildParams& params) {
    if (k < 2) throw std::invalid_argument("TwoDBlockTree: k must be >= 2");
    TwoDBlockTree t;
    t.k_ = k;
    t.side_ = m.side();
    t.rows_ = m.rows();
    t.cols_ = m.cols();
    t.height_ = log_base(t.side_, k);
    t.leaf_side_ = params.leaf_side == 0 ? k : params.leaf_side;
    std::uint32_t leaf_levels = log_base(t.leaf_side_, k);
    if (t.leaf_side_ < k || leaf_levels > t.height_)
        throw std::invalid_argument("TwoDBlockTree: leaf_side must be a power of k in [k, side]");
    t.dmax_ = t.height_ - leaf_levels;
    t.kr_ = KRParams::seeded(params.seed, params.modulus);

    const std::uint64_t kk = std::uint64_t(k) * k;
    const std::uint32_t n = t.side_;
    const std::uint32_t ls = t.leaf_side_;

    t.d_.assign(t.dmax_ + 1, 0);
    t.p_.resize(t.dmax_ + 1);
    t.o_.resize(t.dmax_ + 1);

    if (t.dmax_ == 0) {
        // Whole matrix stored verbatim in L.
        for (std::uint32_t y = 0; y < n; ++y)
            for (std::uint32_t x = 0; x < n; ++x)
                t.l_.push_back(m.get(x, y));
        t.finish();
        return t;
    }

    struct Node { std::uint32_t x, y; };
    std::vector<Node> cur;
    {
        std::uint32_t s1 = n / k;
        for (std::uint32_t cy = 0; cy < k; ++cy)
            for (std::uint32_t cx = 0; cx < k; ++cx)
                cur.push_back({cx * s1, cy * s1});
    }

    std::uint64_t links_so_far = 0;
    std::uint32_t s = n / k;
    for (std::uint32_t d = 1; d <= t.dmax_; ++d, s /= k) {
        const std::uint32_t gs = n / s;
        t.d_[d] = links_so_far;

        std::vector<Cls> cls(cur.size(), Cls::Candidate);
        std::vector<PendingLink> links(cur.size());

        // origin grid -> node index at this level (absent blocks stay -1)
        std::vector<std::int64_t> gidx(std::size_t(gs) * gs, -1);
        for (std::size_t i = 0; i < cur.size(); ++i)
            gidx[std::size_t(cur[i].y / s) * gs + cur[i].x / s] = static_cast<std::int64_t>(i);

        const std::uint32_t off_width = PackedIntArray::bit_width(s - 1);
        const std::uint64_t span = cur.size();
        const std::uint32_t dist_width_est = PackedIntArray::bit_width(span > 1 ? span - 1 : 1);
        const std::uint64_t ptr_cost = std::uint64_t(dist_width_est) + 2ull * off_width + 1;

        std::size_t n_candidates = 0;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            if (m.block_is_zero(cur[i].x, cur[i].y, s)) {
                cls[i] = Cls::Empty;
            } else if (params.cost_filter &&
                       subtree_bit_cost(m, Region::square(cur[i].x, cur[i].y, s), k) <= ptr_cost) {
                cls[i] = Cls::Internal;
            } else {
                ++n_candidates;
            }
        }

        if (n_candidates > 0) {
            FingerprintGrid fg(m, s, t.kr_);
            std::unordered_map<std::uint64_t, std::vector<Group>> table;
            table.reserve(n_candidates * 2);
            std::vector<std::uint64_t> node_fp(cur.size(), 0);
            for (std::size_t i = 0; i < cur.size(); ++i) {
                if (cls[i] != Cls::Candidate) continue;
                std::uint64_t fp = fg.block(cur[i].y, cur[i].x);
                node_fp[i] = fp;
                auto& groups = table[fp];
                bool placed = false;
                for (auto& g : groups) {
                    if (m.blocks_equal(g.wx, g.wy, cur[i].x, cur[i].y, s)) {
                        g.targets.push_back(static_cast<std::uint32_t>(i));
                        placed = true;
                        break;
                    }
                }
                if (!placed) groups.push_back({cur[i].x, cur[i].y, {static_cast<std::uint32_t>(i)}});
            }

            auto purge_from_table = [&](std::uint32_t idx) {
                auto it = table.find(node_fp[idx]);
                if (it == table.end()) return;
                auto& groups = it->second;
                for (std::size_t g = 0; g < groups.size(); ++g) {
                    auto& ts = groups[g].targets;
                    for (std::size_t q = 0; q < ts.size(); ++q) {
                        if (ts[q] == idx) {
                            ts.erase(ts.begin() + static_cast<std::ptrdiff_t>(q));
                            if (ts.empty()) groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(g));
                            if (groups.empty()) table.erase(it);
                            return;
                        }
                    }
                }
            };

            std::size_t unresolved = n_candidates;
            const std::uint32_t positions = n - s + 1;
            for (std::uint32_t i = 0; i < positions && unresolved > 0; ++i) {
                for (std::uint32_t j = 0; j < positions && unresolved > 0; ++j) {
                    auto it = table.find(fg.block(i, j));
                    if (it == table.end()) continue;
                    auto& groups = it->second;
                    std::size_t gi = groups.size();
                    for (std::size_t g = 0; g < groups.size(); ++g) {
                        if (m.blocks_equal(groups[g].wx, groups[g].wy, j, i, s)) { gi = g; break; }
                    }
                    if (gi == groups.size()) continue; // fingerprint collision, content differs

                    // source candidate R = [(j, i), (j+s-1, i+s-1)]
                    const std::uint32_t bx0 = j / s, bx1 = (j + s - 1) / s;
                    const std::uint32_t by0 = i / s, by1 = (i + s - 1) / s;
                    bool valid = true;
                    for (std::uint32_t by = by0; by <= by1 && valid; ++by)
                        for (std::uint32_t bx = bx0; bx <= bx1 && valid; ++bx) {
                            std::int64_t idx = gidx[std::size_t(by) * gs + bx];
                            if (idx < 0 || cls[idx] == Cls::Empty || cls[idx] == Cls::BackRef)
                                valid = false;
                        }
                    if (!valid) continue; // excluded: overlaps leaves or absent nodes

                    const std::int64_t ptr_idx = gidx[std::size_t(by0) * gs + bx0];
                    std::vector<std::uint32_t> deferred;
                    for (std::uint32_t tgt : groups[gi].targets) {
                        std::uint32_t tbx = cur[tgt].x / s, tby = cur[tgt].y / s;
                        bool overlaps = tbx >= bx0 && tbx <= bx1 && tby >= by0 && tby <= by1;
                        if (overlaps) {
                            cls[tgt] = Cls::Internal;
                            --unresolved;
                        } else if (static_cast<std::int64_t>(tgt) <= ptr_idx) {
                            // backward distances only; wait for a later source
                            deferred.push_back(tgt);
                        } else {
                            cls[tgt] = Cls::BackRef;
                            links[tgt] = {std::uint64_t(tgt) - std::uint64_t(ptr_idx),
                                          j - bx0 * s, i - by0 * s};
                            --unresolved;
                        }
                    }
                    if (deferred.empty()) {
                        groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(gi));
                        if (groups.empty()) table.erase(it);
                    } else {
                        groups[gi].targets = std::move(deferred);
                    }

                    // force the blocks covered by the source to stay internal
                    for (std::uint32_t by = by0; by <= by1; ++by)
                        for (std::uint32_t bx = bx0; bx <= bx1; ++bx) {
                            std::int64_t idx = gidx[std::size_t(by) * gs + bx];
                            if (cls[idx] == Cls::Candidate) {
                                purge_from_table(static_cast<std::uint32_t>(idx));
                                cls[idx] = Cls::Internal;
                                --unresolved;
                            }
                        }
                }
            }
            if (unresolved != 0)
                throw std::logic_error("TwoDBlockTree::build: unresolved copy candidates after scan");
        }

        // emit this level
        t.level_start_.resize(t.dmax_ + 1, 0);
        t.level_size_.resize(t.dmax_ + 1, 0);
        t.level_start_[d] = t.t_.size();
        t.level_size_[d] = cur.size();
        std::vector<std::uint64_t> dists, offs;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            bool internal = cls[i] == Cls::Internal;
            t.t_.push_back(internal);
            if (!internal) {
                bool is_link = cls[i] == Cls::BackRef;
                t.n_.push_back(is_link);
                if (is_link) {
                    dists.push_back(links[i].dist);
                    offs.push_back(links[i].off_x);
                    offs.push_back(links[i].off_y);
                }
            }
        }
        std::uint32_t dist_width = 1;
        for (std::uint64_t v : dists) dist_width = std::max(dist_width, PackedIntArray::bit_width(v));
        assert(dist_width <= dist_width_est);
        t.p_[d] = PackedIntArray::pack(dist_width, dists);
        t.o_[d] = PackedIntArray::pack(off_width, offs);
        links_so_far += dists.size();

        // descend into internal blocks
        std::vector<Node> next;
        if (d < t.dmax_) {
            std::uint32_t cs = s / k;
            for (std::size_t i = 0; i < cur.size(); ++i) {
                if (cls[i] != Cls::Internal) continue;
                for (std::uint32_t cy = 0; cy < k; ++cy)
                    for (std::uint32_t cx = 0; cx < k; ++cx)
                        next.push_back({cur[i].x + cx * cs, cur[i].y + cy * cs});
            }
        } else {
            for (std::size_t i = 0; i < cur.size(); ++i) {
                if (cls[i] != Cls::Internal) continue;
                for (std::uint32_t cy = 0; cy < ls; ++cy)
                    for (std::uint32_t cx = 0; cx < ls; ++cx)
                        t.l_.push_back(m.get(cur[i].x + cx, cur[i].y + cy));
            }
        }
        cur = std::move(next);
    }

    t.finish();
    return t;
}

void TwoDBlockTree::finish() {
    t_.finalize();
    l_.finalize();
    n_.finalize();
    const std::uint64_t kk = std::uint64_t(k_) * k_;
    level_start_.assign(dmax_ + 1, 0);
    level_size_.assign(dmax_ + 1, 0);
    std::uint64_t start = 0;
    std::uint64_t size = dmax_ >= 1 ? kk : 0;
    for (std::uint32_t d = 1; d <= dmax_; ++d) {
        level_start_[d] = start;
        level_size_[d] = size;
        std::uint64_t ones = t_.rank1(start + size) - t_.rank1(start);
        start += size;
        size = ones * kk;
    }
    if (dmax_ >= 1 && level_start_[dmax_] + level_size_[dmax_] != t_.size())
        throw std::runtime_error("TwoDBlockTree: inconsistent T level layout");
    if (n_.size() != t_.zeros())
        throw std::runtime_error("TwoDBlockTree: |N| != zeros(T)");
}

TwoDBlockTree TwoDBlockTree::from_parts(std::uint32_t k, std::uint32_t side,
                                        std::uint32_t rows, std::uint32_t cols,
                                        std::uint32_t leaf_side, KRParams kr,
                                        BitVector t, BitVector l, BitVector n,
                                        std::vector<std::uint64_t> d,
                                        std::vector<PackedIntArray> p,
                                        std::vector<PackedIntArray> o) {
    TwoDBlockTree r;
    r.k_ = k;
    r.side_ = side;
    r.rows_ = rows;
    r.cols_ = cols;
    r.height_ = log_base(side, k);
    r.leaf_side_ = leaf_side;
    r.dmax_ = r.height_ - log_base(leaf_side, k);
    r.kr_ = kr;
    r.t_ = std::move(t);
    r.l_ = std::move(l);
    r.n_ = std::move(n);
    r.d_ = std::move(d);
    r.p_ = std::move(p);
    r.o_ = std::move(o);
    if (r.d_.size() != r.dmax_ + 1 || r.p_.size() != r.dmax_ + 1 || r.o_.size() != r.dmax_ + 1)
        throw std::invalid_argument("TwoDBlockTree::from_parts: per-level array count mismatch");
    r.finish();
    return r;
}

NodeClass TwoDBlockTree::classify(std::uint64_t p, std::uint32_t d) const {
    if (d > dmax_ || d == 0 || p < level_start_[d] || p >= level_start_[d] + level_size_[d])
        return NodeClass::CellLevel;
    if (t_[p]) return NodeClass::Internal;
    std::uint64_t p0 = t_.rank0(p + 1);
    return n_[p0 - 1] ? NodeClass::BackRefLeaf : NodeClass::EmptyLeaf;
}

CopyLink TwoDBlockTree::decode_link(std::uint64_t p, std::uint32_t d) const {
    if (d == 0 || d > dmax_)
        throw std::invalid_argument("TwoDBlockTree::decode_link: bad level");
    if (t_[p]) throw std::invalid_argument("TwoDBlockTree::decode_link: position is internal");
    std::uint64_t p0 = t_.rank0(p + 1);
    if (!n_[p0 - 1]) throw std::invalid_argument("TwoDBlockTree::decode_link: position is an empty leaf");
    std::uint64_t q = n_.rank1(p0) - d_[d];
    std::uint64_t dist = p_[d].get(q - 1);
    CopyLink link;
    link.target_pos = p;
    link.ptr_pos = p - dist;
    link.level = d;
    link.off_x = static_cast<std::uint32_t>(o_[d].get(2 * (q - 1)));
    link.off_y = static_cast<std::uint32_t>(o_[d].get(2 * (q - 1) + 1));
    return link;
}

Grid TwoDBlockTree::access(const Region& r, QueryStats* stats) const {
    if (r.x_min > r.x_max || r.y_min > r.y_max || r.x_max >= side_ || r.y_max >= side_)
        throw std::out_of_range("TwoDBlockTree::access: region out of bounds");
    Grid g(r.width(), r.height());
    if (dmax_ == 0) {
        for (std::uint32_t y = r.y_min; y <= r.y_max; ++y)
            for (std::uint32_t x = r.x_min; x <= r.x_max; ++x)
                if (l_[std::uint64_t(y) * side_ + x])
                    g.at(x - r.x_min, y - r.y_min) = 1;
        return g;
    }
    access_children(0, 1, side_ / k_, r, g, 0, 0, 0, stats);
    return g;
}

void TwoDBlockTree::access_children(std::uint64_t first_child, std::uint32_t child_level,
                                    std::uint32_t child_side, const Region& rel, Grid& out,
                                    std::uint32_t out_x, std::uint32_t out_y,
                                    std::uint32_t chain_hops, QueryStats* stats) const {
    const std::uint64_t kk = std::uint64_t(k_) * k_;
    for (std::uint32_t i = 0; i < kk; ++i) {
        std::uint32_t bx = (i % k_) * child_side;
        std::uint32_t by = (i / k_) * child_side;
        std::uint32_t ix0 = rel.x_min > bx ? rel.x_min : bx;
        std::uint32_t iy0 = rel.y_min > by ? rel.y_min : by;
        std::uint32_t ix1 = rel.x_max < bx + child_side - 1 ? rel.x_max : bx + child_side - 1;
        std::uint32_t iy1 = rel.y_max < by + child_side - 1 ? rel.y_max : by + child_side - 1;
        if (ix0 > ix1 || iy0 > iy1) continue;
        access_node(first_child + i, child_level,
                    Region{ix0 - bx, iy0 - by, ix1 - bx, iy1 - by}, out,
                    out_x + (ix0 - rel.x_min), out_y + (iy0 - rel.y_min), chain_hops, stats);
    }
}

void TwoDBlockTree::access_node(std::uint64_t p, std::uint32_t d, const Region& rel, Grid& out,
                                std::uint32_t out_x, std::uint32_t out_y,
                                std::uint32_t chain_hops, QueryStats* stats) const {
    const std::uint64_t kk = std::uint64_t(k_) * k_;
    std::uint32_t s = side_;
    for (std::uint32_t i = 0; i < d; ++i) s /= k_;

    if (t_[p]) {
        if (d == dmax_) {
            // verbatim leaf content in L
            std::uint64_t cell_base = (t_.rank1(p + 1) - t_.size() / kk) *
                                      (std::uint64_t(leaf_side_) * leaf_side_);
            for (std::uint32_t y = rel.y_min; y <= rel.y_max; ++y)
                for (std::uint32_t x = rel.x_min; x <= rel.x_max; ++x)
                    if (l_[cell_base + std::uint64_t(y) * leaf_side_ + x])
                        out.at(out_x + (x - rel.x_min), out_y + (y - rel.y_min)) = 1;
            return;
        }
        access_children(t_.rank1(p + 1) * kk, d + 1, s / k_, rel, out, out_x, out_y,
                        chain_hops, stats);
        return;
    }

    std::uint64_t p0 = t_.rank0(p + 1);
    if (!n_[p0 - 1]) return; // empty node, result stays zero

    CopyLink link = decode_link(p, d);
    ++chain_hops;
    if (stats) ++stats->link_hops;
    assert(chain_hops <= std::uint64_t(height_) * kk);
    if (chain_hops > t_.size() + l_.size() + 1024)
        throw std::logic_error("TwoDBlockTree::access: link chain does not terminate");

    Region r2{rel.x_min + link.off_x, rel.y_min + link.off_y,
              rel.x_max + link.off_x, rel.y_max + link.off_y};
    std::uint64_t cur = link.ptr_pos;
    std::uint32_t cur_d = d, cur_side = s;
    while (r2.x_max >= cur_side || r2.y_max >= cur_side) {
        std::uint32_t i = static_cast<std::uint32_t>(cur % kk);
        r2.x_min += (i % k_) * cur_side;
        r2.x_max += (i % k_) * cur_side;
        r2.y_min += (i / k_) * cur_side;
        r2.y_max += (i / k_) * cur_side;
        cur_side *= k_;
        --cur_d;
        cur = cur_d == 0 ? ~0ull : t_.select1(cur / kk);
    }
    if (stats) {
        ++stats->upwalk_calls;
        stats->upwalk_levels += d - cur_d;
    }
    if (cur_d == 0)
        access_children(0, 1, side_ / k_, r2, out, out_x, out_y, chain_hops, stats);
    else
        access_node(cur, cur_d, r2, out, out_x, out_y, chain_hops, stats);
}

bool TwoDBlockTree::cell(std::uint32_t x, std::uint32_t y, QueryStats* stats) const {
    Grid g = access({x, y, x, y}, stats);
    return g.at(0, 0) != 0;
}

std::vector<std::uint32_t> TwoDBlockTree::direct_neighbors(std::uint32_t node, QueryStats* stats) const {
    if (node >= rows_) throw std::out_of_range("TwoDBlockTree::direct_neighbors: node out of bounds");
    Grid g = access(Region::row(node, side_), stats);
    std::vector<std::uint32_t> out;
    for (std::uint32_t x = 0; x < side_; ++x)
        if (g.at(x, 0)) out.push_back(x);
    return out;
}

std::vector<std::uint32_t> TwoDBlockTree::reverse_neighbors(std::uint32_t node, QueryStats* stats) const {
    if (node >= cols_) throw std::out_of_range("TwoDBlockTree::reverse_neighbors: node out of bounds");
    Grid g = access(Region::col(node, side_), stats);
    std::vector<std::uint32_t> out;
    for (std::uint32_t y = 0; y < side_; ++y)
        if (g.at(0, y)) out.push_back(y);
    return out;
}

SizeBreakdown TwoDBlockTree::size_breakdown() const {
    SizeBreakdown b;
    b.t_bits = t_.size();
    b.l_bits = l_.size();
    b.n_bits = n_.size();
    for (std::uint32_t d = 1; d <= dmax_; ++d) {
        b.p_bits += p_[d].payload_bits();
        b.o_bits += o_[d].payload_bits();
    }
    b.d_bits = std::uint64_t(dmax_) * 64;
    return b;
}

std::vector<TwoDBlockTree::LinkInfo> TwoDBlockTree::collect_links() const {
    std::vector<LinkInfo> out;
    const std::uint64_t kk = std::uint64_t(k_) * k_;
    if (dmax_ == 0) return out;
    // reconstruct block origins level by level
    std::vector<std::pair<std::uint32_t, std::uint32_t>> origins(t_.size());
    std::uint32_t s = side_ / k_;
    for (std::uint32_t i = 0; i < kk; ++i)
        origins[i] = {(i % k_) * s, (i / k_) * s};
    for (std::uint32_t d = 1; d <= dmax_; ++d) {
        s = side_;
        for (std::uint32_t i = 0; i < d; ++i) s /= k_;
        std::uint64_t start = level_start_[d], size = level_size_[d];
        for (std::uint64_t p = start; p < start + size; ++p) {
            if (t_[p]) {
                if (d < dmax_) {
                    std::uint64_t base = t_.rank1(p + 1) * kk;
                    std::uint32_t cs = s / k_;
                    for (std::uint32_t i = 0; i < kk; ++i)
                        origins[base + i] = {origins[p].first + (i % k_) * cs,
                                             origins[p].second + (i / k_) * cs};
                }
                continue;
            }
            std::uint64_t p0 = t_.rank0(p + 1);
            if (!n_[p0 - 1]) continue;
            LinkInfo info;
            info.link = decode_link(p, d);
            info.block_side = s;
            info.target_x = origins[p].first;
            info.target_y = origins[p].second;
            info.source_x = origins[info.link.ptr_pos].first + info.link.off_x;
            info.source_y = origins[info.link.ptr_pos].second + info.link.off_y;
            out.push_back(info);
        }
    }
    return out;
}

std::vector<std::string> TwoDBlockTree::audit(const BitMatrix* m) const {
    std::vector<std::string> bad;
    auto fail = [&](const std::string& s) { bad.push_back(s); };

    if (n_.size() != t_.zeros()) fail("|N| != zeros(T)");

    // per-level link counts vs P/O/D
    std::uint64_t cum = 0;
    for (std::uint32_t d = 1; d <= dmax_; ++d) {
        std::uint64_t links_d = 0;
        for (std::uint64_t p = level_start_[d]; p < level_start_[d] + level_size_[d]; ++p) {
            if (!t_[p] && n_[t_.rank0(p + 1) - 1]) ++links_d;
        }
        if (p_[d].size() != links_d) fail("P_" + std::to_string(d) + " entry count mismatch");
        if (o_[d].size() != 2 * links_d) fail("O_" + std::to_string(d) + " entry count mismatch");
        if (d_[d] != cum) fail("D[" + std::to_string(d) + "] inconsistent");
        cum += links_d;
    }

    // per-level origin -> position maps for coverage checks
    std::vector<std::unordered_map<std::uint64_t, std::uint64_t>> by_origin(dmax_ + 1);
    auto key = [this](std::uint32_t x, std::uint32_t y) {
        return (std::uint64_t(y) << 32) | x;
    };
    std::vector<LinkInfo> links = collect_links();
    {
        const std::uint64_t kk = std::uint64_t(k_) * k_;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> origins(t_.size());
        std::uint32_t s = side_ / k_;
        for (std::uint32_t i = 0; i < kk && i < t_.size(); ++i) {
            origins[i] = {(i % k_) * s, (i / k_) * s};
            by_origin[1][key(origins[i].first, origins[i].second)] = i;
        }
        for (std::uint32_t d = 1; d < dmax_; ++d) {
            s = side_;
            for (std::uint32_t i = 0; i < d; ++i) s /= k_;
            std::uint32_t cs = s / k_;
            for (std::uint64_t p = level_start_[d]; p < level_start_[d] + level_size_[d]; ++p) {
                if (!t_[p]) continue;
                std::uint64_t base = t_.rank1(p + 1) * kk;
                for (std::uint32_t i = 0; i < kk; ++i) {
                    origins[base + i] = {origins[p].first + (i % k_) * cs,
                                         origins[p].second + (i / k_) * cs};
                    by_origin[d + 1][key(origins[base + i].first, origins[base + i].second)] = base + i;
                }
            }
        }
    }

    for (const LinkInfo& li : links) {
        const std::uint32_t d = li.link.level;
        const std::uint32_t s = li.block_side;
        std::string tag = "link at T[" + std::to_string(li.link.target_pos) + "] level " +
                          std::to_string(d) + ": ";
        if (li.link.ptr_pos < level_start_[d] ||
            li.link.ptr_pos >= level_start_[d] + level_size_[d])
            fail(tag + "ptr outside its level");
        else if (!t_[li.link.ptr_pos])
            fail(tag + "pointed block is not internal");
        if (li.link.ptr_pos >= li.link.target_pos) fail(tag + "distance not backward");
        if (li.link.off_x >= s || li.link.off_y >= s) fail(tag + "offset out of range");
        if (li.source_x + s > side_ || li.source_y + s > side_) {
            fail(tag + "source region out of bounds");
            continue;
        }
        // row-major scan order: source strictly before target
        if (!(li.source_y < li.target_y ||
              (li.source_y == li.target_y && li.source_x < li.target_x)))
            fail(tag + "source does not precede target in scan order");
        // every block covered by the source exists and is internal
        for (std::uint32_t by = li.source_y / s; by <= (li.source_y + s - 1) / s; ++by)
            for (std::uint32_t bx = li.source_x / s; bx <= (li.source_x + s - 1) / s; ++bx) {
                auto it = by_origin[d].find(key(bx * s, by * s));
                if (it == by_origin[d].end())
                    fail(tag + "source covers a block absent from level " + std::to_string(d));
                else if (!t_[it->second])
                    fail(tag + "source overlaps a leaf");
            }
        // self-consistency: target content equals source content via access
        Grid tgt = access(Region::square(li.target_x, li.target_y, s));
        Grid src = access(Region::square(li.source_x, li.source_y, s));
        if (!(tgt == src)) fail(tag + "target content != source content");
        if (m) {
            Grid oracle = extract_region_oracle(*m, Region::square(li.target_x, li.target_y, s));
            if (!(tgt == oracle)) fail(tag + "target content != matrix oracle");
        }
    }
    return bad;
}

bool TwoDBlockTree::operator==(const TwoDBlockTree& o) const {
    return k_ == o.k_ && side_ == o.side_ && rows_ == o.rows_ && cols_ == o.cols_ &&
           leaf_side_ == o.leaf_side_ && kr_.modulus == o.kr_.modulus && kr_.base == o.kr_.base &&
           t_ == o.t_ && l_ == o.l_ && n_ == o.n_ && d_ == o.d_ && p_ == o.p_ && o_ == o.o_;
}

} // namespace b2dt
