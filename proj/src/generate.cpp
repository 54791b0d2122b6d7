#include "b2dt/generate.hpp"

#include <random>
#include <stdexcept>
#include <vector>

namespace b2dt {

BitMatrix gen_uniform(std::uint32_t side, double density, std::uint64_t seed, std::uint32_t k) {
    if (density < 0.0 || density > 1.0) throw std::invalid_argument("gen_uniform: bad density");
    BitMatrix m(side, side, k);
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution bit(density);
    for (std::uint32_t y = 0; y < side; ++y)
        for (std::uint32_t x = 0; x < side; ++x)
            if (bit(rng)) m.set(x, y);
    return m;
}

BitMatrix gen_tiled(std::uint32_t side, std::uint32_t block_side, double density,
                    std::uint64_t seed, std::uint32_t k) {
    if (block_side == 0 || block_side > side || side % block_side != 0)
        throw std::invalid_argument("gen_tiled: block_side must divide side");
    BitMatrix m(side, side, k);
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution bit(density);
    std::vector<std::uint8_t> tile(std::size_t(block_side) * block_side);
    for (auto& c : tile) c = bit(rng) ? 1 : 0;
    for (std::uint32_t y = 0; y < side; ++y)
        for (std::uint32_t x = 0; x < side; ++x)
            if (tile[std::size_t(y % block_side) * block_side + x % block_side]) m.set(x, y);
    return m;
}

BitMatrix gen_shifted(std::uint32_t side, std::uint32_t block_side, double density,
                      std::uint32_t copies, std::uint64_t seed, std::uint32_t k) {
    if (block_side == 0 || block_side * 2 > side)
        throw std::invalid_argument("gen_shifted: pattern must fit twice");
    BitMatrix m(side, side, k);
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution bit(density);
    std::vector<std::uint8_t> pat(std::size_t(block_side) * block_side);
    for (auto& c : pat) c = bit(rng) ? 1 : 0;

    auto paste = [&](std::uint32_t px, std::uint32_t py) {
        for (std::uint32_t y = 0; y < block_side; ++y)
            for (std::uint32_t x = 0; x < block_side; ++x)
                if (pat[std::size_t(y) * block_side + x]) m.set(px + x, py + y);
    };

    struct Placed { std::uint32_t x, y; };
    std::vector<Placed> placed;
    paste(0, 0);
    placed.push_back({0, 0});

    std::uniform_int_distribution<std::uint32_t> pos(0, side - block_side);
    std::uint32_t done = 0;
    for (std::uint32_t attempt = 0; attempt < copies * 200 && done < copies; ++attempt) {
        std::uint32_t px = pos(rng), py = pos(rng);
        // force a non-aligned placement so copies straddle block boundaries
        if (px % block_side == 0) px = px + 1 + block_side / 3 <= side - block_side
                                           ? px + 1 + block_side / 3
                                           : px + 1;
        if (py % block_side == 0) py = py + 1 + block_side / 2 <= side - block_side
                                           ? py + 1 + block_side / 2
                                           : py + 1;
        if (px > side - block_side || py > side - block_side) continue;
        bool clash = false;
        for (const Placed& q : placed) {
            bool apart = px + block_side <= q.x || q.x + block_side <= px ||
                         py + block_side <= q.y || q.y + block_side <= py;
            if (!apart) { clash = true; break; }
        }
        if (clash) continue;
        paste(px, py);
        placed.push_back({px, py});
        ++done;
    }
    if (done < copies)
        throw std::runtime_error("gen_shifted: could not place all copies; lower `copies` or grow side");
    return m;
}

} // namespace b2dt
