#include "b2dt/bit_matrix.hpp"

#include <bit>
#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace b2dt {

std::uint64_t BitMatrix::count_ones() const {
    std::uint64_t c = 0;
    for (std::uint64_t w : bits_) c += std::popcount(w);
    return c;
}

bool BitMatrix::block_is_zero(std::uint32_t x, std::uint32_t y, std::uint32_t s) const {
    for (std::uint32_t dy = 0; dy < s; ++dy)
        for (std::uint32_t dx = 0; dx < s; ++dx)
            if (get(x + dx, y + dy)) return false;
    return true;
}

bool BitMatrix::blocks_equal(std::uint32_t ax, std::uint32_t ay,
                             std::uint32_t bx, std::uint32_t by, std::uint32_t s) const {
    for (std::uint32_t dy = 0; dy < s; ++dy)
        for (std::uint32_t dx = 0; dx < s; ++dx)
            if (get(ax + dx, ay + dy) != get(bx + dx, by + dy)) return false;
    return true;
}

BitMatrix parse_edgelist(std::istream& in, std::uint32_t k) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
    std::uint64_t max_id = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;
        if (line[pos] == '#' || line[pos] == '%') continue;
        std::istringstream ls(line);
        std::uint64_t u, v;
        if (!(ls >> u >> v)) {
            throw std::runtime_error("edgelist: malformed line " + std::to_string(lineno) +
                                     ": '" + line + "'");
        }
        std::string rest;
        if (ls >> rest)
            throw std::runtime_error("edgelist: trailing data on line " + std::to_string(lineno));
        edges.emplace_back(u, v);
        if (u > max_id) max_id = u;
        if (v > max_id) max_id = v;
    }
    if (edges.empty()) throw std::runtime_error("edgelist: no edges in input");
    std::uint64_t dim = max_id + 1;
    if (dim > 1u << 30) throw std::runtime_error("edgelist: node ids too large");
    BitMatrix m(static_cast<std::uint32_t>(dim), static_cast<std::uint32_t>(dim), k);
    for (auto [u, v] : edges)
        m.set(static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(u));
    return m;
}

namespace {

// Skips PBM whitespace and '#' comments, returns the next token.
std::string pbm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    if (tok.empty()) throw std::runtime_error("pbm: truncated header");
    return tok;
}

} // namespace

BitMatrix parse_pbm(std::istream& in, std::uint32_t k) {
    std::string magic = pbm_token(in);
    if (magic != "P1" && magic != "P4") throw std::runtime_error("pbm: bad magic '" + magic + "'");
    std::uint64_t width = std::stoull(pbm_token(in));
    std::uint64_t height = std::stoull(pbm_token(in));
    if (width == 0 || height == 0) throw std::runtime_error("pbm: empty image");
    if (width > 1u << 30 || height > 1u << 30) throw std::runtime_error("pbm: image too large");
    BitMatrix m(static_cast<std::uint32_t>(height), static_cast<std::uint32_t>(width), k);
    if (magic == "P1") {
        for (std::uint64_t y = 0; y < height; ++y) {
            for (std::uint64_t x = 0; x < width; ++x) {
                int c;
                do {
                    c = in.get();
                    if (c == '#')
                        while ((c = in.get()) != EOF && c != '\n') {}
                } while (c != EOF && std::isspace(c));
                if (c != '0' && c != '1') throw std::runtime_error("pbm: bad P1 pixel");
                if (c == '1') m.set(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y));
            }
        }
    } else {
        // single whitespace after height, then packed rows, MSB-first
        std::uint64_t row_bytes = (width + 7) / 8;
        std::vector<char> row(row_bytes);
        for (std::uint64_t y = 0; y < height; ++y) {
            if (!in.read(row.data(), static_cast<std::streamsize>(row_bytes)))
                throw std::runtime_error("pbm: truncated P4 payload");
            for (std::uint64_t x = 0; x < width; ++x) {
                if ((static_cast<unsigned char>(row[x / 8]) >> (7 - x % 8)) & 1)
                    m.set(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y));
            }
        }
    }
    return m;
}

void write_pbm_p4(const Grid& g, std::ostream& out) {
    out << "P4\n" << g.width << " " << g.height << "\n";
    std::uint64_t row_bytes = (g.width + 7) / 8;
    std::vector<char> row(row_bytes);
    for (std::uint32_t y = 0; y < g.height; ++y) {
        std::fill(row.begin(), row.end(), 0);
        for (std::uint32_t x = 0; x < g.width; ++x)
            if (g.at(x, y)) row[x / 8] |= static_cast<char>(1u << (7 - x % 8));
        out.write(row.data(), static_cast<std::streamsize>(row_bytes));
    }
}

void write_pbm_p1(const Grid& g, std::ostream& out) {
    out << "P1\n" << g.width << " " << g.height << "\n";
    for (std::uint32_t y = 0; y < g.height; ++y) {
        for (std::uint32_t x = 0; x < g.width; ++x)
            out << (g.at(x, y) ? '1' : '0');
        out << '\n';
    }
}

Grid extract_region_oracle(const BitMatrix& m, const Region& r) {
    m.check_region(r);
    Grid g(r.width(), r.height());
    for (std::uint32_t y = r.y_min; y <= r.y_max; ++y)
        for (std::uint32_t x = r.x_min; x <= r.x_max; ++x)
            g.at(x - r.x_min, y - r.y_min) = m.get(x, y) ? 1 : 0;
    return g;
}

Grid matrix_to_grid(const BitMatrix& m) {
    return extract_region_oracle(m, {0, 0, m.side() - 1, m.side() - 1});
}

} // namespace b2dt
