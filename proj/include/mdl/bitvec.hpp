#pragma once

#include "mdl/error.hpp"
#include "mdl/kernels.hpp"

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace mdl {

/// Packed bit vector. Feature vectors, label columns and per-feature columns
/// all use this representation; dimensions up to 2^16 are supported (larger
/// lengths are fine, that is just the guaranteed envelope). Bits past size()
/// are kept zero so word-level kernels need no masking.
class BitVec {
public:
    BitVec() = default;

    explicit BitVec(std::size_t size, bool fill = false)
        : size_(size), words_((size + 63) / 64, fill ? ~0ULL : 0ULL) {
        clear_tail();
    }

    static BitVec from_bits(std::initializer_list<int> bits) {
        BitVec v(bits.size());
        std::size_t i = 0;
        for (int b : bits) v.set(i++, b != 0);
        return v;
    }

    /// "0101..." text form, index 0 first.
    static BitVec parse(std::string_view text) {
        BitVec v(text.size());
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (text[i] != '0' && text[i] != '1')
                throw invalid_input("BitVec::parse: expected 0/1 characters");
            v.set(i, text[i] == '1');
        }
        return v;
    }

    std::size_t size() const { return size_; }
    std::size_t word_count() const { return words_.size(); }
    std::span<const std::uint64_t> words() const { return words_; }
    std::span<std::uint64_t> words() { return words_; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

    void set(std::size_t i, bool value) {
        std::uint64_t mask = 1ULL << (i & 63);
        if (value) words_[i >> 6] |= mask; else words_[i >> 6] &= ~mask;
    }

    std::uint64_t count_ones() const {
        return kern::active().popcount(words_.data(), words_.size());
    }

    std::string to_string() const {
        std::string s(size_, '0');
        for (std::size_t i = 0; i < size_; ++i)
            if (get(i)) s[i] = '1';
        return s;
    }

    friend bool operator==(const BitVec& a, const BitVec& b) {
        return a.size_ == b.size_ && a.words_ == b.words_;
    }

private:
    void clear_tail() {
        if (size_ & 63) words_.back() &= (~0ULL) >> (64 - (size_ & 63));
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

inline std::uint64_t hamming_distance(const BitVec& a, const BitVec& b) {
    if (a.size() != b.size()) throw invalid_input("hamming_distance: size mismatch");
    return kern::active().popcount_xor(a.words().data(), b.words().data(), a.word_count());
}

inline std::uint64_t count_and(const BitVec& a, const BitVec& b) {
    if (a.size() != b.size()) throw invalid_input("count_and: size mismatch");
    return kern::active().popcount_and(a.words().data(), b.words().data(), a.word_count());
}

inline std::uint64_t count_andnot(const BitVec& a, const BitVec& b) {
    if (a.size() != b.size()) throw invalid_input("count_andnot: size mismatch");
    return kern::active().popcount_andnot(a.words().data(), b.words().data(), a.word_count());
}

} // namespace mdl
