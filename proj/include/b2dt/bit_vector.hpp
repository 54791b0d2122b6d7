#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace b2dt {

/// Plain bitvector with constant-time rank and select.
///
/// Bits live LSB-first inside little-endian 64-bit words. rank uses a
/// two-level directory (superblocks of 512 bits, 16-bit in-superblock word
/// counts); select binary-searches the directory. All rank arguments use the
/// exclusive convention: rank_b(p) counts occurrences of b in [0, p).
class BitVector {
public:
    BitVector() = default;

    explicit BitVector(std::size_t n, bool fill = false) { resize(n, fill); }

    void resize(std::size_t n, bool fill = false) {
        size_ = n;
        words_.assign((n + 63) / 64, fill ? ~0ull : 0ull);
        if (fill && n % 64 != 0) words_.back() &= (1ull << (n % 64)) - 1;
        indexed_ = false;
    }

    void push_back(bool b) {
        if (size_ % 64 == 0) words_.push_back(0);
        if (b) words_.back() |= 1ull << (size_ % 64);
        ++size_;
        indexed_ = false;
    }

    void set(std::size_t i, bool b) {
        check_pos(i);
        if (b)
            words_[i / 64] |= 1ull << (i % 64);
        else
            words_[i / 64] &= ~(1ull << (i % 64));
        indexed_ = false;
    }

    bool operator[](std::size_t i) const {
        return (words_[i / 64] >> (i % 64)) & 1ull;
    }

    bool get(std::size_t i) const {
        check_pos(i);
        return (*this)[i];
    }

    std::size_t size() const { return size_; }
    const std::vector<std::uint64_t>& words() const { return words_; }

    /// Builds the rank/select directory. Queries require a finalized vector.
    void finalize() {
        std::size_t n_words = words_.size();
        std::size_t n_super = n_words / kWordsPerSuper + 1;
        super_.assign(n_super + 1, 0);
        blocks_.assign(n_words, 0);
        std::uint64_t total = 0;
        std::uint32_t in_super = 0;
        for (std::size_t w = 0; w < n_words; ++w) {
            if (w % kWordsPerSuper == 0) {
                super_[w / kWordsPerSuper] = total;
                in_super = 0;
            }
            blocks_[w] = static_cast<std::uint16_t>(in_super);
            std::uint32_t c = std::popcount(words_[w]);
            in_super += c;
            total += c;
        }
        super_[n_super] = total;
        if (n_words % kWordsPerSuper == 0 && n_super >= 1) super_[n_super - 1] = total;
        ones_ = total;
        indexed_ = true;
    }

    std::uint64_t ones() const { require_index(); return ones_; }
    std::uint64_t zeros() const { require_index(); return size_ - ones_; }

    /// Number of 1s in [0, p).
    std::uint64_t rank1(std::size_t p) const {
        require_index();
        if (p > size_) throw std::out_of_range("BitVector::rank1: position past end");
        if (p == size_) return ones_;
        std::size_t w = p / 64;
        std::uint64_t r = super_[w / kWordsPerSuper] + blocks_[w];
        if (p % 64 != 0) r += std::popcount(words_[w] & ((1ull << (p % 64)) - 1));
        return r;
    }

    /// Number of 0s in [0, p).
    std::uint64_t rank0(std::size_t p) const { return p - rank1(p); }

    std::uint64_t rank(bool b, std::size_t p) const { return b ? rank1(p) : rank0(p); }

    /// Position of the j-th 1 (1-based). rank1(select1(j) + 1) == j.
    std::size_t select1(std::uint64_t j) const {
        require_index();
        if (j == 0 || j > ones_) throw std::out_of_range("BitVector::select1: ordinal out of range");
        // last superblock with fewer than j ones before it
        std::size_t lo = 0, hi = super_.size() - 1;
        while (lo + 1 < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (super_[mid] < j) lo = mid; else hi = mid;
        }
        std::uint64_t target = j - super_[lo];
        std::size_t w = lo * kWordsPerSuper;
        for (;; ++w) {
            std::uint32_t c = std::popcount(words_[w]);
            std::uint64_t before = blocks_[w];
            if (before + c >= target && before < target)
                return w * 64 + nth_set_bit(words_[w], static_cast<std::uint32_t>(target - before));
        }
    }

    /// Position of the j-th 0 (1-based).
    std::size_t select0(std::uint64_t j) const {
        require_index();
        if (j == 0 || j > zeros()) throw std::out_of_range("BitVector::select0: ordinal out of range");
        std::size_t lo = 0, hi = super_.size() - 1;
        // zeros before superblock s = s*512 - super_[s]
        while (lo + 1 < hi) {
            std::size_t mid = (lo + hi) / 2;
            std::uint64_t z = std::min<std::uint64_t>(mid * kBitsPerSuper, size_) - super_[mid];
            if (z < j) lo = mid; else hi = mid;
        }
        std::uint64_t before_super = std::min<std::uint64_t>(lo * kBitsPerSuper, size_) - super_[lo];
        std::uint64_t target = j - before_super;
        std::size_t w = lo * kWordsPerSuper;
        for (;; ++w) {
            std::uint64_t inv = ~words_[w];
            if ((w + 1) * 64 > size_) inv &= (1ull << (size_ % 64)) - 1;
            std::uint32_t c = std::popcount(inv);
            if (c >= target) return w * 64 + nth_set_bit(inv, static_cast<std::uint32_t>(target));
            target -= c;
        }
    }

    std::size_t select(bool b, std::uint64_t j) const { return b ? select1(j) : select0(j); }

    bool operator==(const BitVector& o) const {
        return size_ == o.size_ && words_ == o.words_;
    }

private:
    static constexpr std::size_t kWordsPerSuper = 8;
    static constexpr std::size_t kBitsPerSuper = kWordsPerSuper * 64;

    static std::uint32_t nth_set_bit(std::uint64_t word, std::uint32_t n) {
        // n is 1-based and guaranteed <= popcount(word)
        for (std::uint32_t i = 1; i < n; ++i) word &= word - 1;
        return static_cast<std::uint32_t>(std::countr_zero(word));
    }

    void check_pos(std::size_t i) const {
        if (i >= size_) throw std::out_of_range("BitVector: index past end");
    }
    void require_index() const {
        if (!indexed_) throw std::logic_error("BitVector: finalize() before rank/select");
    }

    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
    bool indexed_ = false;
    std::uint64_t ones_ = 0;
    std::vector<std::uint64_t> super_;
    std::vector<std::uint16_t> blocks_;
};

} // namespace b2dt
