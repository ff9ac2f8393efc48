#include "skewrec/skew.hpp"

#include <unordered_map>

namespace skewrec {

namespace {

void require_valid_fiber_space(const std::vector<Perm>& fibers) {
    for (const auto& f : fibers)
        if (f.space() != fibers.front().space())
            throw space_mismatch("all fibers must share one Y space");
}

} // namespace

SkewProduct::SkewProduct(Perm base, const std::vector<Perm>& fibers)
    : base_(std::move(base)), yspace_(fibers.empty() ? CellSpace(2) : fibers.front().space()) {
    if (fibers.size() != base_.space().cells())
        throw argument_error("need one fiber per base cell: got " + std::to_string(fibers.size()) +
                             " for " + std::to_string(base_.space().cells()) + " cells");
    require_valid_fiber_space(fibers);
    adopt(fibers);
}

SkewProduct::SkewProduct(Perm base, const std::vector<Perm>& pool,
                         std::vector<std::uint32_t> fiber_indices)
    : base_(std::move(base)), yspace_(pool.empty() ? CellSpace(2) : pool.front().space()) {
    if (pool.empty())
        throw argument_error("fiber pool is empty");
    if (fiber_indices.size() != base_.space().cells())
        throw argument_error("need one pool index per base cell");
    require_valid_fiber_space(pool);
    std::vector<Perm> fibers;
    fibers.reserve(fiber_indices.size());
    for (auto idx : fiber_indices) {
        if (idx >= pool.size())
            throw argument_error("fiber pool index " + std::to_string(idx) + " out of range");
        fibers.push_back(pool[idx]);
    }
    adopt(fibers);  // re-dedups, so identical pool entries collapse
}

// Pool construction: first occurrence by cell index wins a pool slot.
void SkewProduct::adopt(const std::vector<Perm>& fibers) {
    pool_.clear();
    fiber_idx_.assign(fibers.size(), 0);
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> slots;
    for (std::uint32_t x = 0; x < fibers.size(); ++x) {
        std::uint64_t h = perm_hash(fibers[x]);
        auto& bucket = slots[h];
        std::uint32_t found = (std::uint32_t)pool_.size();
        for (auto slot : bucket)
            if (pool_[slot] == fibers[x]) { found = slot; break; }
        if (found == pool_.size()) {
            pool_.push_back(fibers[x]);
            bucket.push_back(found);
        }
        fiber_idx_[x] = found;
    }
}

SkewProduct SkewProduct::trivial(Perm base, CellSpace yspace) {
    std::vector<Perm> fibers(base.space().cells(), Perm::identity(yspace));
    return SkewProduct(std::move(base), fibers);
}

std::pair<std::uint32_t, std::uint32_t> SkewProduct::apply(std::uint32_t x, std::uint32_t y) const {
    if (x >= xspace().cells() || y >= yspace_.cells())
        throw argument_error("product cell (" + std::to_string(x) + "," + std::to_string(y) +
                             ") out of range");
    return {base_(x), fiber(x)(y)};
}

bool SkewProduct::operator==(const SkewProduct& o) const {
    if (base_ != o.base_ || yspace_ != o.yspace_) return false;
    for (std::uint32_t x = 0; x < fiber_idx_.size(); ++x)
        if (fiber(x) != o.fiber(x)) return false;
    return true;
}

Perm cocycle(const SkewProduct& r, std::uint32_t x, std::int64_t n) {
    if (x >= r.xspace().cells())
        throw argument_error("base cell out of range");
    if (n < 0)
        throw argument_error("cocycle needs n >= 0");
    Perm acc = Perm::identity(r.yspace());
    std::uint32_t cur = x;
    for (std::int64_t i = 0; i < n; ++i) {
        acc = compose(r.fiber(cur), acc);
        cur = r.base()(cur);
    }
    return acc;
}

namespace {

// Memo for halmos_distance(c, Id) < 1/m decisions, keyed by the cocycle
// permutation. A profile revisits few distinct cocycle values.
class NearIdentityOracle {
public:
    explicit NearIdentityOracle(const DyadicFamily& family)
        : family_(family), id_(Perm::identity(family.space())) {}

    const Rational& distance(const Perm& c) {
        auto h = perm_hash(c);
        auto& bucket = memo_[h];
        for (auto& [perm, dist] : bucket)
            if (perm == c) return dist;
        bucket.emplace_back(c, halmos_distance(c, id_, family_));
        return bucket.back().second;
    }

private:
    const DyadicFamily& family_;
    Perm id_;
    std::unordered_map<std::uint64_t, std::vector<std::pair<Perm, Rational>>> memo_;
};

void check_recurrence_args(const SkewProduct& r, std::int64_t m, std::int64_t n,
                           const CellSet& subset) {
    if (m < 1) throw argument_error("recurrence threshold index m must be >= 1");
    if (n < 1) throw argument_error("recurrence time n must be >= 1");
    if (subset.universe() != r.xspace().cells())
        throw space_mismatch("subset universe differs from the base space");
    if (subset.empty()) throw argument_error("recurrence subset A is empty");
}

// Prefix products of the fiber maps along one base cycle.
// prefix[j] = composition of the fibers at cyc[0..j-1], earliest first;
// prefix[L] is the full loop at cyc[0]. The cocycle at cyc[j] over any time
// q*L + s is then  segment(j, s) ∘ prefix[j] ∘ loop^q ∘ prefix[j]^{-1}.
struct CyclePrefixes {
    std::vector<std::uint32_t> cells;
    std::vector<Perm> prefix;
    std::vector<Perm> prefix_inv;

    CyclePrefixes(const SkewProduct& r, std::vector<std::uint32_t> cyc)
        : cells(std::move(cyc)) {
        Perm acc = Perm::identity(r.yspace());
        prefix.push_back(acc);
        prefix_inv.push_back(acc);
        for (std::uint32_t c : cells) {
            acc = compose(r.fiber(c), acc);
            prefix.push_back(acc);
            prefix_inv.push_back(acc.inverse());
        }
    }

    std::size_t length() const { return cells.size(); }

    // Cocycle at cells[j] over s steps, 0 <= s <= length.
    Perm segment(std::size_t j, std::size_t s) const {
        std::size_t L = length();
        if (j + s <= L)
            return compose(prefix[j + s], prefix_inv[j]);
        return compose(prefix[j + s - L], compose(prefix[L], prefix_inv[j]));
    }

    Perm cocycle_at(std::size_t j, const Perm& loop_pow, std::int64_t rem) const {
        // prefix[j] ∘ loop^q ∘ prefix[j]^{-1} conjugates the loop power to
        // base point cells[j]; the remainder segment finishes the walk.
        Perm conj = compose(prefix[j], compose(loop_pow, prefix_inv[j]));
        if (rem == 0) return conj;
        return compose(segment(j, (std::size_t)rem), conj);
    }
};

} // namespace

RecurrenceReport recurrence_set(const SkewProduct& r, std::int64_t m, std::int64_t n,
                                const CellSet& subset, const DyadicFamily& family) {
    check_recurrence_args(r, m, n, subset);
    if (family.space() != r.yspace())
        throw space_mismatch("metric family must live on the Y space");
    NearIdentityOracle oracle(family);
    Rational threshold(1, m);
    CellSet hits(subset.universe());
    subset.for_each([&](std::uint32_t x) {
        if (oracle.distance(cocycle(r, x, n)) < threshold) hits.insert(x);
    });
    return RecurrenceReport{m, n, subset, hits, r.xspace().mass(hits.count())};
}

std::vector<ProfileRow> recurrence_profile_many(const SkewProduct& r,
                                                const std::vector<std::int64_t>& ms,
                                                std::int64_t n_lo, std::int64_t n_hi,
                                                const CellSet& subset) {
    if (ms.empty()) throw argument_error("profile needs at least one m");
    if (n_lo > n_hi) throw argument_error("profile range is empty");
    for (auto m : ms) check_recurrence_args(r, m, 1, subset);
    if (n_lo < 1) throw argument_error("recurrence time n must be >= 1");

    DyadicFamily family(r.yspace());
    NearIdentityOracle oracle(family);

    struct SweepCycle {
        CyclePrefixes pre;
        std::vector<std::size_t> members;  // positions j of subset cells
        Perm loop_pow;
        std::int64_t q = 0;
    };
    std::vector<SweepCycle> sweeps;
    for (auto& cyc : cycles_of(r.base())) {
        std::vector<std::size_t> members;
        for (std::size_t j = 0; j < cyc.size(); ++j)
            if (subset.contains(cyc[j])) members.push_back(j);
        if (members.empty()) continue;
        CyclePrefixes pre(r, std::move(cyc));
        Perm loop0 = pre.prefix[pre.length()];
        std::int64_t q0 = n_lo / (std::int64_t)pre.length();
        sweeps.push_back(SweepCycle{std::move(pre), std::move(members),
                                    power(loop0, q0), q0});
    }

    // hit counts per (m, n); decided once per x via the memoized metric
    std::vector<ProfileRow> rows;
    std::vector<std::vector<std::uint32_t>> counts(ms.size());
    for (auto& c : counts) c.assign((std::size_t)(n_hi - n_lo + 1), 0);

    for (std::int64_t n = n_lo; n <= n_hi; ++n) {
        std::size_t slot = (std::size_t)(n - n_lo);
        for (auto& sw : sweeps) {
            std::int64_t L = (std::int64_t)sw.pre.length();
            while (sw.q < n / L) {
                sw.loop_pow = compose(sw.pre.prefix[sw.pre.length()], sw.loop_pow);
                ++sw.q;
            }
            for (auto j : sw.members) {
                Perm c = sw.pre.cocycle_at(j, sw.loop_pow, n % L);
                const Rational& d = oracle.distance(c);
                for (std::size_t mi = 0; mi < ms.size(); ++mi)
                    if (d < Rational(1, ms[mi])) ++counts[mi][slot];
            }
        }
    }

    for (std::size_t mi = 0; mi < ms.size(); ++mi)
        for (std::int64_t n = n_lo; n <= n_hi; ++n)
            rows.push_back(ProfileRow{ms[mi], n,
                                      r.xspace().mass(counts[mi][(std::size_t)(n - n_lo)])});
    return rows;
}

std::vector<ProfilePoint> recurrence_profile(const SkewProduct& r, std::int64_t m,
                                             std::int64_t n_lo, std::int64_t n_hi,
                                             const CellSet& subset) {
    std::vector<ProfilePoint> out;
    for (auto& row : recurrence_profile_many(r, {m}, n_lo, n_hi, subset))
        out.push_back(ProfilePoint{row.n, row.measure});
    return out;
}

WitnessResult find_recurrence_witness(const SkewProduct& r, std::int64_t m,
                                      std::int64_t n_floor, std::int64_t horizon,
                                      const CellSet& subset) {
    if (horizon <= n_floor)
        throw argument_error("witness search needs horizon > floor");
    check_recurrence_args(r, m, 1, subset);
    DyadicFamily family(r.yspace());
    // Bounded scan; exhaustion is reported, not raised.
    for (std::int64_t n = n_floor + 1; n <= horizon; ++n) {
        auto report = recurrence_set(r, m, n, subset, family);
        if (!report.measure.is_zero())
            return WitnessResult{n, report.measure, n_floor, horizon};
    }
    return WitnessResult{std::nullopt, Rational(0), n_floor, horizon};
}

Rational product_uniform_distance(const SkewProduct& a, const SkewProduct& b) {
    if (a.xspace() != b.xspace() || a.yspace() != b.yspace())
        throw space_mismatch("product distance needs matching spaces");
    const std::uint32_t nx = a.xspace().cells(), ny = a.yspace().cells();
    std::uint64_t diff = 0;
    for (std::uint32_t x = 0; x < nx; ++x) {
        if (a.base()(x) != b.base()(x)) {
            diff += ny;  // the whole fiber column moves to a different slice
            continue;
        }
        const Perm& ta = a.fiber(x);
        const Perm& tb = b.fiber(x);
        if (ta == tb) continue;
        for (std::uint32_t y = 0; y < ny; ++y)
            if (ta(y) != tb(y)) ++diff;
    }
    return Rational((std::int64_t)diff, (std::int64_t)nx * ny);
}

} // namespace skewrec
