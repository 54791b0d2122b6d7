#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "b2dt/block_tree_2d.hpp"
#include "b2dt/k2_tree.hpp"

namespace b2dt {

/// Container file layout (all integers little-endian):
///   magic "B2DT", format_version u8, structure_kind u8 (0 = k²-tree,
///   1 = 2D-BT), k u8, logical_rows u64, logical_cols u64, side u64,
///   kr_modulus u64, kr_base u64 (zero for k²-tree); then length-prefixed
///   sections: T, L, N bitvectors (u64 bit count, payload as 64-bit words,
///   LSB-first), the D array (u64 entry count, u64 entries for levels
///   1..dmax), and per level: u64 entry count, u8 P width, packed P payload,
///   u8 O width, packed O payload.
enum class StructureKind : std::uint8_t { K2Tree = 0, BlockTree2D = 1 };

inline constexpr char kContainerMagic[4] = {'B', '2', 'D', 'T'};
inline constexpr std::uint8_t kContainerVersion = 1;

struct Container {
    StructureKind kind;
    std::optional<K2Tree> k2;
    std::optional<TwoDBlockTree> bt;

    std::uint32_t k() const;
    std::uint32_t side() const;
    std::uint32_t logical_rows() const;
    std::uint32_t logical_cols() const;
};

void store(const K2Tree& t, std::ostream& out);
void store(const TwoDBlockTree& t, std::ostream& out);
Container load(std::istream& in);

void store_file(const K2Tree& t, const std::string& path);
void store_file(const TwoDBlockTree& t, const std::string& path);
Container load_file(const std::string& path);

/// Exact serialized size in bits for a structure, header and framing included.
std::uint64_t container_bits(const K2Tree& t);
std::uint64_t container_bits(const TwoDBlockTree& t);

} // namespace b2dt
