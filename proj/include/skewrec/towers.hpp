#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "skewrec/skew.hpp"

namespace skewrec {

/// A base set B whose images B, SB, ..., S^(height-1)B are pairwise
/// disjoint; residual is everything the levels miss.
struct RokhlinTower {
    CellSet base_set;
    std::int64_t height;
    std::vector<CellSet> levels;
    CellSet residual;
    Rational coverage;
};

/// Marks every height-th cell along each cycle, walking from the cycle's
/// smallest cell. Requires every cycle at least as long as the height;
/// additionally requires the constructed coverage to beat 1 - eps, and
/// reports the achievable eps when it does not.
RokhlinTower build_tower(const Perm& s, std::int64_t height, const Rational& eps);

/// The same construction without a coverage target; only the aperiodicity
/// requirement (no cycle shorter than the height) applies.
RokhlinTower build_tower_unchecked(const Perm& s, std::int64_t height);

/// Product automorphism over the identity base: (x, y) -> (x, J_x y).
/// Fixes every slice A x Y setwise.
class FiberConjugator {
public:
    FiberConjugator(CellSpace xspace, std::vector<Perm> fibers);

    static FiberConjugator identity(CellSpace xspace, CellSpace yspace);

    CellSpace xspace() const { return xspace_; }
    CellSpace yspace() const { return fibers_.front().space(); }

    const Perm& fiber(std::uint32_t x) const { return fibers_.at(x); }
    const std::vector<Perm>& fibers() const { return fibers_; }

    FiberConjugator inverse() const;

    bool operator==(const FiberConjugator& o) const {
        return xspace_ == o.xspace_ && fibers_ == o.fibers_;
    }

private:
    CellSpace xspace_;
    std::vector<Perm> fibers_;
};

/// Fiberwise composition (a ∘ b)_x = a_x ∘ b_x.
FiberConjugator compose(const FiberConjugator& a, const FiberConjugator& b);

/// J ∘ R ∘ J^{-1}: same base, fibers J_{Sx} ∘ T_x ∘ J_x^{-1}.
SkewProduct conjugate(const SkewProduct& r, const FiberConjugator& j);

/// Ordered partition of the X cells with one Y permutation per block.
class SimplePartition {
public:
    SimplePartition(std::vector<CellSet> blocks, std::vector<Perm> block_perms);

    std::size_t block_count() const { return blocks_.size(); }
    const CellSet& block(std::size_t k) const { return blocks_.at(k); }
    const Perm& block_perm(std::size_t k) const { return perms_.at(k); }
    std::size_t block_of(std::uint32_t x) const { return block_index_.at(x); }
    std::uint32_t xcells() const { return (std::uint32_t)block_index_.size(); }
    CellSpace yspace() const { return perms_.front().space(); }

    FiberConjugator as_conjugator() const;

private:
    std::vector<CellSet> blocks_;
    std::vector<Perm> perms_;
    std::vector<std::uint32_t> block_index_;
};

/// The block-constant conjugator pulled back over the base: the extension
/// with fibers T_x = J_{k(Sx)}^{-1} ∘ J_{k(x)}. Its cocycle telescopes, so
/// every return of x to its own block forces the cocycle back to the
/// identity.
SkewProduct simple_cocycle(const Perm& s, const SimplePartition& partition);

/// A checked recurrence witness: on W = B_k ∩ S^{-n}B_k (intersected with
/// the optional subset) the time-n cocycle is verified to equal the
/// identity.
struct RecurrenceCertificate {
    std::size_t block;
    std::int64_t return_time;
    CellSet witness;
};

/// Finds the lexicographically first (block, n) with n > n_floor and a
/// nonempty witness set, verifies the cocycle on it, and returns the
/// certificate. The subset form restricts witnesses to blocks' traces on
/// subset (the relative notion of recurrence on a set of positive measure).
RecurrenceCertificate certify_recurrence(const Perm& s, const SimplePartition& partition,
                                         std::int64_t n_floor);
RecurrenceCertificate certify_recurrence(const Perm& s, const SimplePartition& partition,
                                         std::int64_t n_floor, const CellSet& subset);

/// Fiber conjugator built down the tower: J is the inverse of the cocycle
/// accumulated from the tower base, the identity off the tower. Conjugating
/// by it matches the trivial extension everywhere except the top level and
/// the residual; the returned discrepancy is that product-cell distance.
std::pair<FiberConjugator, Rational> trivialize_on_tower(const SkewProduct& r,
                                                         const RokhlinTower& tower);

/// Groups cells by their conjugator fiber (first occurrence order).
SimplePartition partition_from_conjugator(const FiberConjugator& j);

/// If every cycle's loop cocycle is the identity, the extension is exactly
/// a simple-cocycle extension; returns the partition realizing it.
std::optional<SimplePartition> coboundary_partition(const SkewProduct& r);

struct RecurrentizeResult {
    enum class Path { already_simple, tower, per_cycle };

    SkewProduct result;
    SimplePartition partition;
    RecurrenceCertificate certificate;
    Rational distance;
    std::int64_t tower_height;  // 0 when no tower was needed
    Path path;
};

/// Replaces R by a certified-recurrent simple-cocycle extension within
/// product-cell distance delta. Requires every base cycle at least
/// ceil(2/delta) long.
RecurrentizeResult recurrentize(const SkewProduct& r, const Rational& delta,
                                std::int64_t n_floor);

} // namespace skewrec
