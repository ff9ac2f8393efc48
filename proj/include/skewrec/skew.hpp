#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "skewrec/measure.hpp"

namespace skewrec {

/// Extension of a base permutation S on the X space by one fiber
/// permutation of the Y space per X cell: (x, y) -> (S x, T_x y).
/// Distinct fiber permutations are stored once in a pool, in order of first
/// occurrence by cell index; per-cell indices point into it.
class SkewProduct {
public:
    SkewProduct(Perm base, const std::vector<Perm>& fibers);
    SkewProduct(Perm base, const std::vector<Perm>& pool, std::vector<std::uint32_t> fiber_indices);

    static SkewProduct trivial(Perm base, CellSpace yspace);

    const Perm& base() const { return base_; }
    CellSpace xspace() const { return base_.space(); }
    CellSpace yspace() const { return yspace_; }

    const Perm& fiber(std::uint32_t x) const { return pool_[fiber_idx_.at(x)]; }
    std::uint32_t fiber_index(std::uint32_t x) const { return fiber_idx_.at(x); }
    const std::vector<Perm>& pool() const { return pool_; }
    const std::vector<std::uint32_t>& fiber_indices() const { return fiber_idx_; }

    std::pair<std::uint32_t, std::uint32_t> apply(std::uint32_t x, std::uint32_t y) const;

    bool operator==(const SkewProduct& o) const;
    bool operator!=(const SkewProduct& o) const { return !(*this == o); }

private:
    void adopt(const std::vector<Perm>& fibers);

    Perm base_;
    CellSpace yspace_;
    std::vector<Perm> pool_;
    std::vector<std::uint32_t> fiber_idx_;
};

/// Cocycle value of the extension along the base orbit of x:
/// the composition of the n fiber maps met between x and S^n x, the one at
/// x applied first. n = 0 gives the identity.
Perm cocycle(const SkewProduct& r, std::uint32_t x, std::int64_t n);

using CocycleValue = Perm;

/// Where and how much of A the time-n cocycle returns to within 1/m of the
/// identity. measure = |hit_set| / N_X (over the whole X space).
struct RecurrenceReport {
    std::int64_t m;
    std::int64_t n;
    CellSet subset;
    CellSet hit_set;
    Rational measure;
};

/// hit_set = { x in A : halmos_distance(cocycle(r, x, n), Id) < 1/m },
/// strict inequality decided in exact arithmetic.
RecurrenceReport recurrence_set(const SkewProduct& r, std::int64_t m, std::int64_t n,
                                const CellSet& subset, const DyadicFamily& family);

struct ProfilePoint {
    std::int64_t n;
    Rational measure;
};

/// recurrence_set measure for every n in [n_lo, n_hi], in order.
std::vector<ProfilePoint> recurrence_profile(const SkewProduct& r, std::int64_t m,
                                             std::int64_t n_lo, std::int64_t n_hi,
                                             const CellSet& subset);

struct ProfileRow {
    std::int64_t m;
    std::int64_t n;
    Rational measure;
};

/// One sweep per m value, m-major, n ascending within each m. Cocycles are
/// assembled once per (x, n) from per-cycle prefix products and shared
/// across the m values.
std::vector<ProfileRow> recurrence_profile_many(const SkewProduct& r,
                                                const std::vector<std::int64_t>& ms,
                                                std::int64_t n_lo, std::int64_t n_hi,
                                                const CellSet& subset);

/// Outcome of a bounded search for a recurrence time. Exhaustion is a
/// result, not an error: in the finite model a witness always exists at
/// some multiple of a cycle length, but the search stops at the horizon.
struct WitnessResult {
    std::optional<std::int64_t> n;      // smallest witness in (floor, horizon]
    Rational measure;                   // measure of D at that n (0 if exhausted)
    std::int64_t floor;
    std::int64_t horizon;
    bool found() const { return n.has_value(); }
};

WitnessResult find_recurrence_witness(const SkewProduct& r, std::int64_t m,
                                      std::int64_t n_floor, std::int64_t horizon,
                                      const CellSet& subset);

/// Measure of the set of product cells where the two extensions disagree.
Rational product_uniform_distance(const SkewProduct& a, const SkewProduct& b);

} // namespace skewrec
