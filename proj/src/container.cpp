#include "b2dt/container.hpp"

#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace b2dt {

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(buf, 8);
}

void put_u8(std::ostream& out, std::uint8_t v) {
    out.put(static_cast<char>(v));
}

std::uint64_t get_u64(std::istream& in) {
    char buf[8];
    if (!in.read(buf, 8)) throw std::runtime_error("container: truncated file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(buf[i])) << (8 * i);
    return v;
}

std::uint8_t get_u8(std::istream& in) {
    int c = in.get();
    if (c == EOF) throw std::runtime_error("container: truncated file");
    return static_cast<std::uint8_t>(c);
}

void put_bitvector(std::ostream& out, const BitVector& bv) {
    put_u64(out, bv.size());
    std::size_t n_words = (bv.size() + 63) / 64;
    for (std::size_t i = 0; i < n_words; ++i) put_u64(out, bv.words()[i]);
}

BitVector get_bitvector(std::istream& in) {
    std::uint64_t bits = get_u64(in);
    BitVector bv(bits);
    std::size_t n_words = (bits + 63) / 64;
    for (std::size_t w = 0; w < n_words; ++w) {
        std::uint64_t word = get_u64(in);
        for (unsigned b = 0; b < 64; ++b) {
            std::uint64_t i = w * 64 + b;
            if (i >= bits) break;
            if ((word >> b) & 1) bv.set(i, true);
        }
    }
    return bv;
}

void put_packed_payload(std::ostream& out, const PackedIntArray& a) {
    put_u8(out, static_cast<std::uint8_t>(a.width()));
    std::size_t n_words = (a.payload_bits() + 63) / 64;
    for (std::size_t i = 0; i < n_words; ++i) put_u64(out, a.words()[i]);
}

PackedIntArray get_packed_payload(std::istream& in, std::uint64_t entries) {
    unsigned width = get_u8(in);
    PackedIntArray a(width, entries);
    std::size_t n_words = (a.payload_bits() + 63) / 64;
    for (std::size_t i = 0; i < n_words; ++i) a.words()[i] = get_u64(in);
    return a;
}

void put_header(std::ostream& out, StructureKind kind, std::uint32_t k,
                std::uint32_t rows, std::uint32_t cols, std::uint32_t side,
                std::uint64_t modulus, std::uint64_t base) {
    out.write(kContainerMagic, 4);
    put_u8(out, kContainerVersion);
    put_u8(out, static_cast<std::uint8_t>(kind));
    put_u8(out, static_cast<std::uint8_t>(k));
    put_u64(out, rows);
    put_u64(out, cols);
    put_u64(out, side);
    put_u64(out, modulus);
    put_u64(out, base);
}

constexpr std::uint64_t bv_section_bits(std::uint64_t bits) {
    return 64 + ((bits + 63) / 64) * 64;
}

constexpr std::uint64_t packed_payload_bits(std::uint64_t entries, unsigned width) {
    return 8 + ((entries * width + 63) / 64) * 64;
}

constexpr std::uint64_t kHeaderBits = (4 + 1 + 1 + 1 + 5 * 8) * 8;

} // namespace

void store(const K2Tree& t, std::ostream& out) {
    put_header(out, StructureKind::K2Tree, t.k(), t.logical_rows(), t.logical_cols(),
               t.side(), 0, 0);
    put_bitvector(out, t.T());
    put_bitvector(out, t.L());
    BitVector empty;
    put_bitvector(out, empty); // N
    put_u64(out, 0);           // D entries; zero levels follow
}

void store(const TwoDBlockTree& t, std::ostream& out) {
    put_header(out, StructureKind::BlockTree2D, t.k(), t.logical_rows(), t.logical_cols(),
               t.side(), t.kr_modulus(), t.kr_base());
    put_bitvector(out, t.T());
    put_bitvector(out, t.L());
    put_bitvector(out, t.N());
    put_u64(out, t.max_level());
    for (std::uint32_t d = 1; d <= t.max_level(); ++d) put_u64(out, t.D()[d]);
    for (std::uint32_t d = 1; d <= t.max_level(); ++d) {
        put_u64(out, t.P(d).size());
        put_packed_payload(out, t.P(d));
        put_packed_payload(out, t.O(d));
    }
}

Container load(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kContainerMagic, 4) != 0)
        throw std::runtime_error("container: bad magic");
    std::uint8_t version = get_u8(in);
    if (version != kContainerVersion)
        throw std::runtime_error("container: unsupported version " + std::to_string(version));
    std::uint8_t kind = get_u8(in);
    std::uint32_t k = get_u8(in);
    auto rows = static_cast<std::uint32_t>(get_u64(in));
    auto cols = static_cast<std::uint32_t>(get_u64(in));
    auto side = static_cast<std::uint32_t>(get_u64(in));
    std::uint64_t modulus = get_u64(in);
    std::uint64_t base = get_u64(in);
    BitVector t = get_bitvector(in);
    BitVector l = get_bitvector(in);
    BitVector n = get_bitvector(in);
    std::uint64_t dmax = get_u64(in);

    Container c{static_cast<StructureKind>(kind), std::nullopt, std::nullopt};
    if (kind == static_cast<std::uint8_t>(StructureKind::K2Tree)) {
        if (dmax != 0) throw std::runtime_error("container: k2tree with level sections");
        c.k2 = K2Tree::from_parts(k, side, rows, cols, std::move(t), std::move(l));
        return c;
    }
    if (kind != static_cast<std::uint8_t>(StructureKind::BlockTree2D))
        throw std::runtime_error("container: unknown structure kind");

    std::vector<std::uint64_t> d(dmax + 1, 0);
    for (std::uint64_t i = 1; i <= dmax; ++i) d[i] = get_u64(in);
    std::vector<PackedIntArray> p(dmax + 1), o(dmax + 1);
    for (std::uint64_t i = 1; i <= dmax; ++i) {
        std::uint64_t entries = get_u64(in);
        p[i] = get_packed_payload(in, entries);
        o[i] = get_packed_payload(in, 2 * entries);
    }
    // leaf side is implied by the level count
    std::uint32_t ls = side;
    for (std::uint64_t i = 0; i < dmax; ++i) ls /= k;
    c.bt = TwoDBlockTree::from_parts(k, side, rows, cols, ls, KRParams{modulus, base},
                                     std::move(t), std::move(l), std::move(n),
                                     std::move(d), std::move(p), std::move(o));
    return c;
}

void store_file(const K2Tree& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("container: cannot write " + path);
    store(t, out);
    if (!out) throw std::runtime_error("container: write failed for " + path);
}

void store_file(const TwoDBlockTree& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("container: cannot write " + path);
    store(t, out);
    if (!out) throw std::runtime_error("container: write failed for " + path);
}

Container load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("container: cannot read " + path);
    return load(in);
}

std::uint64_t container_bits(const K2Tree& t) {
    return kHeaderBits + bv_section_bits(t.T().size()) + bv_section_bits(t.L().size()) +
           bv_section_bits(0) + 64;
}

std::uint64_t container_bits(const TwoDBlockTree& t) {
    std::uint64_t bits = kHeaderBits + bv_section_bits(t.T().size()) +
                         bv_section_bits(t.L().size()) + bv_section_bits(t.N().size()) +
                         64 + std::uint64_t(t.max_level()) * 64;
    for (std::uint32_t d = 1; d <= t.max_level(); ++d) {
        bits += 64 + packed_payload_bits(t.P(d).size(), t.P(d).width());
        bits += packed_payload_bits(t.O(d).size(), t.O(d).width());
    }
    return bits;
}

std::uint32_t Container::k() const { return kind == StructureKind::K2Tree ? k2->k() : bt->k(); }
std::uint32_t Container::side() const { return kind == StructureKind::K2Tree ? k2->side() : bt->side(); }
std::uint32_t Container::logical_rows() const {
    return kind == StructureKind::K2Tree ? k2->logical_rows() : bt->logical_rows();
}
std::uint32_t Container::logical_cols() const {
    return kind == StructureKind::K2Tree ? k2->logical_cols() : bt->logical_cols();
}

} // namespace b2dt
