#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "skewrec/error.hpp"

namespace skewrec {

/// Subset of the cells {0..N-1}, stored as a bit vector.
class CellSet {
public:
    explicit CellSet(std::uint32_t universe)
        : universe_(universe), words_((universe + 63) / 64, 0) {}

    static CellSet all(std::uint32_t universe) {
        CellSet s(universe);
        for (std::uint32_t c = 0; c < universe; ++c) s.insert(c);
        return s;
    }

    /// Cells in [lo, hi).
    static CellSet interval(std::uint32_t universe, std::uint32_t lo, std::uint32_t hi) {
        CellSet s(universe);
        for (std::uint32_t c = lo; c < hi; ++c) s.insert(c);
        return s;
    }

    template <typename Container>
    static CellSet of(std::uint32_t universe, const Container& cells) {
        CellSet s(universe);
        for (auto c : cells) s.insert((std::uint32_t)c);
        return s;
    }

    std::uint32_t universe() const { return universe_; }

    void insert(std::uint32_t c) {
        check(c);
        words_[c >> 6] |= (std::uint64_t)1 << (c & 63);
    }

    void erase(std::uint32_t c) {
        check(c);
        words_[c >> 6] &= ~((std::uint64_t)1 << (c & 63));
    }

    bool contains(std::uint32_t c) const {
        if (c >= universe_) return false;
        return (words_[c >> 6] >> (c & 63)) & 1;
    }

    std::uint32_t count() const {
        std::uint32_t n = 0;
        for (auto w : words_) n += (std::uint32_t)std::popcount(w);
        return n;
    }

    bool empty() const {
        for (auto w : words_) if (w) return false;
        return true;
    }

    CellSet operator&(const CellSet& o) const { return zip(o, [](std::uint64_t a, std::uint64_t b) { return a & b; }); }
    CellSet operator|(const CellSet& o) const { return zip(o, [](std::uint64_t a, std::uint64_t b) { return a | b; }); }
    CellSet operator^(const CellSet& o) const { return zip(o, [](std::uint64_t a, std::uint64_t b) { return a ^ b; }); }

    CellSet complement() const {
        CellSet r(universe_);
        for (size_t i = 0; i < words_.size(); ++i) r.words_[i] = ~words_[i];
        r.mask_tail();
        return r;
    }

    bool is_subset_of(const CellSet& o) const {
        require_same_universe(o);
        for (size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    bool intersects(const CellSet& o) const {
        require_same_universe(o);
        for (size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }

    bool operator==(const CellSet& o) const {
        return universe_ == o.universe_ && words_ == o.words_;
    }
    bool operator!=(const CellSet& o) const { return !(*this == o); }

    /// Sorted list of member cells.
    std::vector<std::uint32_t> to_list() const {
        std::vector<std::uint32_t> out;
        out.reserve(count());
        for_each([&](std::uint32_t c) { out.push_back(c); });
        return out;
    }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (size_t i = 0; i < words_.size(); ++i) {
            std::uint64_t w = words_[i];
            while (w) {
                int b = std::countr_zero(w);
                fn((std::uint32_t)(i * 64 + b));
                w &= w - 1;
            }
        }
    }

private:
    void check(std::uint32_t c) const {
        if (c >= universe_)
            throw argument_error("cell index " + std::to_string(c) + " out of range (universe " +
                                 std::to_string(universe_) + ")");
    }

    void require_same_universe(const CellSet& o) const {
        if (universe_ != o.universe_)
            throw space_mismatch("cell sets live on different universes");
    }

    void mask_tail() {
        std::uint32_t tail = universe_ & 63;
        if (tail && !words_.empty())
            words_.back() &= ((std::uint64_t)1 << tail) - 1;
    }

    template <typename Op>
    CellSet zip(const CellSet& o, Op op) const {
        require_same_universe(o);
        CellSet r(universe_);
        for (size_t i = 0; i < words_.size(); ++i) r.words_[i] = op(words_[i], o.words_[i]);
        return r;
    }

    std::uint32_t universe_;
    std::vector<std::uint64_t> words_;
};

} // namespace skewrec
