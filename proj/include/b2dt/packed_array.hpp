#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace b2dt {

/// Fixed-width bit-packed integer array. Width is 1..64 bits per entry;
/// payload is contiguous little-endian 64-bit words, LSB-first.
class PackedIntArray {
public:
    PackedIntArray() = default;

    PackedIntArray(unsigned width, std::size_t entries)
        : width_(width), entries_(entries),
          words_((entries * width + 63) / 64, 0) {
        if (width == 0 || width > 64)
            throw std::invalid_argument("PackedIntArray: width must be in [1, 64]");
    }

    static PackedIntArray pack(unsigned width, const std::vector<std::uint64_t>& values) {
        PackedIntArray a(width, values.size());
        for (std::size_t i = 0; i < values.size(); ++i) a.set(i, values[i]);
        return a;
    }

    unsigned width() const { return width_; }
    std::size_t size() const { return entries_; }
    std::uint64_t payload_bits() const { return static_cast<std::uint64_t>(entries_) * width_; }
    const std::vector<std::uint64_t>& words() const { return words_; }
    std::vector<std::uint64_t>& words() { return words_; }

    std::uint64_t get(std::size_t i) const {
        if (i >= entries_) throw std::out_of_range("PackedIntArray::get: index past end");
        std::uint64_t bit = static_cast<std::uint64_t>(i) * width_;
        std::size_t w = bit / 64;
        unsigned off = bit % 64;
        std::uint64_t v = words_[w] >> off;
        if (off + width_ > 64) v |= words_[w + 1] << (64 - off);
        return v & mask();
    }

    void set(std::size_t i, std::uint64_t v) {
        if (i >= entries_) throw std::out_of_range("PackedIntArray::set: index past end");
        if (width_ < 64 && v > mask())
            throw std::invalid_argument("PackedIntArray::set: value exceeds width");
        std::uint64_t bit = static_cast<std::uint64_t>(i) * width_;
        std::size_t w = bit / 64;
        unsigned off = bit % 64;
        words_[w] = (words_[w] & ~(mask() << off)) | (v << off);
        if (off + width_ > 64) {
            unsigned spill = off + width_ - 64;
            std::uint64_t hi_mask = (1ull << spill) - 1;
            words_[w + 1] = (words_[w + 1] & ~hi_mask) | (v >> (64 - off));
        }
    }

    bool operator==(const PackedIntArray& o) const {
        return width_ == o.width_ && entries_ == o.entries_ && words_ == o.words_;
    }

    /// Bits required to represent v (at least 1).
    static unsigned bit_width(std::uint64_t v) {
        unsigned w = 0;
        while (v) { ++w; v >>= 1; }
        return w == 0 ? 1 : w;
    }

private:
    std::uint64_t mask() const {
        return width_ == 64 ? ~0ull : (1ull << width_) - 1;
    }

    unsigned width_ = 1;
    std::size_t entries_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace b2dt
