#pragma once

#include <cstdint>
#include <vector>

#include "skewrec/cellset.hpp"
#include "skewrec/rational.hpp"

namespace skewrec {

/// The probability space as N equal-mass cells, N a power of two.
/// Every measurable set is a union of cells; its measure is |set|/N.
class CellSpace {
public:
    explicit CellSpace(std::uint32_t cells);

    std::uint32_t cells() const { return cells_; }

    /// k, where cells() == 2^k.
    std::uint32_t depth() const { return depth_; }

    Rational mass(std::uint32_t cell_count) const {
        return Rational(cell_count, cells_);
    }

    bool operator==(const CellSpace& o) const { return cells_ == o.cells_; }
    bool operator!=(const CellSpace& o) const { return cells_ != o.cells_; }

private:
    std::uint32_t cells_;
    std::uint32_t depth_;
};

/// Measure-preserving automorphism of a CellSpace: a bijection of cells,
/// held together with its inverse so both directions are O(1).
class Perm {
public:
    Perm(CellSpace space, std::vector<std::uint32_t> forward);

    static Perm identity(CellSpace space);
    /// c -> c+1 mod N, a single N-cycle.
    static Perm full_cycle(CellSpace space);
    /// c -> c+shift mod N.
    static Perm rotation(CellSpace space, std::uint32_t shift);
    /// Exchanges a and b, fixes the rest.
    static Perm transposition(CellSpace space, std::uint32_t a, std::uint32_t b);
    /// Consecutive blocks of the given lengths, each a cycle; lengths must
    /// sum to N.
    static Perm concat_cycles(CellSpace space, const std::vector<std::uint32_t>& lengths);

    CellSpace space() const { return space_; }

    std::uint32_t operator()(std::uint32_t c) const { return fwd_[c]; }
    std::uint32_t preimage(std::uint32_t c) const { return inv_[c]; }

    const std::vector<std::uint32_t>& forward() const { return fwd_; }
    const std::vector<std::uint32_t>& backward() const { return inv_; }

    Perm inverse() const;
    bool is_identity() const;

    CellSet image(const CellSet& a) const;
    CellSet preimage_set(const CellSet& a) const;

    bool operator==(const Perm& o) const { return space_ == o.space_ && fwd_ == o.fwd_; }
    bool operator!=(const Perm& o) const { return !(*this == o); }

private:
    Perm(CellSpace space, std::vector<std::uint32_t> fwd, std::vector<std::uint32_t> inv)
        : space_(space), fwd_(std::move(fwd)), inv_(std::move(inv)) {}

    CellSpace space_;
    std::vector<std::uint32_t> fwd_;
    std::vector<std::uint32_t> inv_;
};

/// p after q: result(c) = p(q(c)). Throws space_mismatch if the spaces differ.
Perm compose(const Perm& p, const Perm& q);

/// p iterated n times; negative n iterates the inverse. O(N log |n|).
Perm power(const Perm& p, std::int64_t n);

/// Measure of the set where the two permutations disagree.
Rational uniform_distance(const Perm& p, const Perm& q);

/// Length of the shortest cycle.
std::int64_t min_cycle_length(const Perm& p);

/// Cycles of p, each listed starting from its smallest cell, cycles ordered
/// by that smallest cell.
std::vector<std::vector<std::uint32_t>> cycles_of(const Perm& p);

/// The fixed dense family used by the metric: all proper dyadic blocks,
/// breadth-first by level, left to right. Block i (1-based) carries weight
/// 2^-i. For N = 2^k there are 2^(k+1) - 2 blocks; the last N of them are
/// the singletons, so the family separates cells.
class DyadicFamily {
public:
    explicit DyadicFamily(CellSpace space);

    CellSpace space() const { return space_; }
    std::size_t size() const { return blocks_.size(); }

    /// 1-based, matching the weight exponent.
    const CellSet& block(std::size_t i) const { return blocks_[i - 1]; }

private:
    CellSpace space_;
    std::vector<CellSet> blocks_;
};

/// Weighted sum of symmetric differences of block images under both
/// permutations and their inverses. Exact; lies in [0, 2]; zero iff p == q.
Rational halmos_distance(const Perm& p, const Perm& q, const DyadicFamily& family);

/// FNV-1a over the forward array, for dedup pools and memo tables.
std::uint64_t perm_hash(const Perm& p);

} // namespace skewrec
