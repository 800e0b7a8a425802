// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace oral {

// Fixed-width dynamic bitset used for object sets and tuple sets.
// Binary operations require equal widths.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t bits)
        : bits_(bits)
        , words_((bits + 63) / 64, 0)
    { }

    [[nodiscard]] std::size_t size() const { return bits_; }
    [[nodiscard]] std::size_t word_count() const { return words_.size(); }
    [[nodiscard]] const std::uint64_t* data() const { return words_.data(); }
    [[nodiscard]] std::uint64_t* data() { return words_.data(); }

    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    [[nodiscard]] bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }

    void clear()
    {
        for (auto& w : words_) w = 0;
    }
    void fill()
    {
        for (auto& w : words_) w = ~std::uint64_t{0};
        trim();
    }

    [[nodiscard]] std::size_t count() const
    {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }
    [[nodiscard]] bool any() const
    {
        for (auto w : words_)
            if (w) return true;
        return false;
    }
    [[nodiscard]] bool none() const { return !any(); }

    Bitset& operator&=(const Bitset& o)
    {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    Bitset& operator|=(const Bitset& o)
    {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    Bitset& and_not(const Bitset& o)
    {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }

    [[nodiscard]] std::size_t count_and(const Bitset& o) const
    {
        std::size_t n = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            n += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
        return n;
    }
    [[nodiscard]] std::size_t count_and_not(const Bitset& o) const
    {
        std::size_t n = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            n += static_cast<std::size_t>(std::popcount(words_[i] & ~o.words_[i]));
        return n;
    }
    [[nodiscard]] bool intersects(const Bitset& o) const
    {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }
    [[nodiscard]] bool is_subset_of(const Bitset& o) const
    {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    template <typename F>
    void for_each(F&& f) const
    {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            auto word = words_[w];
            while (word) {
                auto bit = static_cast<std::size_t>(std::countr_zero(word));
                f(w * 64 + bit);
                word &= word - 1;
            }
        }
    }

    [[nodiscard]] std::size_t hash() const
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (auto w : words_) h = (h ^ w) * 0x100000001b3ULL;
        return static_cast<std::size_t>(h);
    }

    friend bool operator==(const Bitset&, const Bitset&) = default;

private:
    void trim()
    {
        if (bits_ % 64 != 0 && !words_.empty())
            words_.back() &= (std::uint64_t{1} << (bits_ % 64)) - 1;
    }

    std::size_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

inline Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
inline Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }

} // namespace oral
