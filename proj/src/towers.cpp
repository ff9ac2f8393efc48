#include "skewrec/towers.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>
#include <utility>

#include "skewrec/error.hpp"

namespace skewrec {

namespace {

// Integer bound on the trivialization mismatch for height n towers over
// this cycle type: residual cells (L mod n) plus top-level cells (L / n)
// per cycle. The interior levels intertwine exactly, so only these cells
// can disagree with the trivial extension after conjugation.
std::int64_t mismatch_cells(const std::vector<std::vector<std::uint32_t>>& cycles,
                            std::int64_t n) {
    std::int64_t total = 0;
    for (const auto& cyc : cycles) {
        auto len = (std::int64_t)cyc.size();
        total += len % n + len / n;
    }
    return total;
}

} // namespace

RokhlinTower build_tower_unchecked(const Perm& s, std::int64_t height) {
    if (height < 1) throw argument_error("tower height must be positive");
    const std::uint32_t nx = s.space().cells();

    CellSet base(nx);
    for (const auto& cyc : cycles_of(s)) {
        auto len = (std::int64_t)cyc.size();
        if (len < height)
            throw precondition_error(
                "cycle through cell " + std::to_string(cyc.front()) + " has length " +
                std::to_string(len) + ", shorter than the tower height " +
                std::to_string(height));
        for (std::int64_t pos = 0; pos + height <= len; pos += height)
            base.insert(cyc[(std::size_t)pos]);
    }

    RokhlinTower t{base, height, {}, CellSet(nx), Rational(0)};
    t.levels.reserve((std::size_t)height);
    CellSet covered(nx);
    CellSet level = base;
    for (std::int64_t i = 0; i < height; ++i) {
        if (i > 0) level = s.image(level);
        covered = covered | level;
        t.levels.push_back(level);
    }
    t.residual = covered.complement();
    t.coverage = s.space().mass(covered.count());
    return t;
}

RokhlinTower build_tower(const Perm& s, std::int64_t height, const Rational& eps) {
    if (!(eps > Rational(0) && eps < Rational(1)))
        throw argument_error("eps must lie in (0, 1), got " + eps.str());
    RokhlinTower t = build_tower_unchecked(s, height);
    Rational residual_mass = Rational(1) - t.coverage;
    if (!(t.coverage > Rational(1) - eps))
        throw precondition_error(
            "coverage " + t.coverage.str() + " does not exceed 1 - eps; the residual has measure " +
            residual_mass.str() + ", so only eps greater than " + residual_mass.str() +
            " is achievable for height " + std::to_string(height));
    return t;
}

FiberConjugator::FiberConjugator(CellSpace xspace, std::vector<Perm> fibers)
    : xspace_(xspace), fibers_(std::move(fibers)) {
    if (fibers_.size() != xspace_.cells())
        throw space_mismatch("conjugator needs one fiber per X cell: got " +
                             std::to_string(fibers_.size()) + " for " +
                             std::to_string(xspace_.cells()) + " cells");
    for (const auto& f : fibers_)
        if (f.space() != fibers_.front().space())
            throw space_mismatch("conjugator fibers live on different Y spaces");
}

FiberConjugator FiberConjugator::identity(CellSpace xspace, CellSpace yspace) {
    return FiberConjugator(xspace, std::vector<Perm>(xspace.cells(), Perm::identity(yspace)));
}

FiberConjugator FiberConjugator::inverse() const {
    std::vector<Perm> inv;
    inv.reserve(fibers_.size());
    for (const auto& f : fibers_) inv.push_back(f.inverse());
    return FiberConjugator(xspace_, std::move(inv));
}

FiberConjugator compose(const FiberConjugator& a, const FiberConjugator& b) {
    if (a.xspace() != b.xspace() || a.yspace() != b.yspace())
        throw space_mismatch("conjugators live on different spaces");
    std::vector<Perm> fibers;
    fibers.reserve(a.xspace().cells());
    for (std::uint32_t x = 0; x < a.xspace().cells(); ++x)
        fibers.push_back(compose(a.fiber(x), b.fiber(x)));
    return FiberConjugator(a.xspace(), std::move(fibers));
}

SkewProduct conjugate(const SkewProduct& r, const FiberConjugator& j) {
    if (j.xspace() != r.xspace() || j.yspace() != r.yspace())
        throw space_mismatch("conjugator does not match the extension's spaces");
    std::vector<Perm> fibers;
    fibers.reserve(r.xspace().cells());
    for (std::uint32_t x = 0; x < r.xspace().cells(); ++x)
        fibers.push_back(compose(j.fiber(r.base()(x)), compose(r.fiber(x), j.fiber(x).inverse())));
    return SkewProduct(r.base(), fibers);
}

SimplePartition::SimplePartition(std::vector<CellSet> blocks, std::vector<Perm> block_perms)
    : blocks_(std::move(blocks)), perms_(std::move(block_perms)) {
    if (blocks_.empty()) throw argument_error("partition needs at least one block");
    if (blocks_.size() != perms_.size())
        throw argument_error("partition has " + std::to_string(blocks_.size()) + " blocks but " +
                             std::to_string(perms_.size()) + " block permutations");
    const std::uint32_t nx = blocks_.front().universe();
    block_index_.assign(nx, (std::uint32_t)blocks_.size());
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
        if (blocks_[k].universe() != nx)
            throw space_mismatch("partition blocks live on different universes");
        if (blocks_[k].empty())
            throw argument_error("partition block " + std::to_string(k) + " is empty");
        if (perms_[k].space() != perms_.front().space())
            throw space_mismatch("block permutations live on different Y spaces");
        blocks_[k].for_each([&](std::uint32_t x) {
            if (block_index_[x] != blocks_.size())
                throw argument_error("cell " + std::to_string(x) + " appears in blocks " +
                                     std::to_string(block_index_[x]) + " and " + std::to_string(k));
            block_index_[x] = (std::uint32_t)k;
        });
    }
    for (std::uint32_t x = 0; x < nx; ++x)
        if (block_index_[x] == blocks_.size())
            throw argument_error("cell " + std::to_string(x) + " is not covered by any block");
}

FiberConjugator SimplePartition::as_conjugator() const {
    std::vector<Perm> fibers;
    fibers.reserve(block_index_.size());
    for (std::uint32_t x = 0; x < block_index_.size(); ++x)
        fibers.push_back(perms_[block_index_[x]]);
    return FiberConjugator(CellSpace(xcells()), std::move(fibers));
}

SkewProduct simple_cocycle(const Perm& s, const SimplePartition& partition) {
    if (s.space().cells() != partition.xcells())
        throw space_mismatch("partition does not cover the base's X space");
    std::vector<Perm> inverses;
    inverses.reserve(partition.block_count());
    for (std::size_t k = 0; k < partition.block_count(); ++k)
        inverses.push_back(partition.block_perm(k).inverse());
    std::vector<Perm> fibers;
    fibers.reserve(s.space().cells());
    for (std::uint32_t x = 0; x < s.space().cells(); ++x)
        fibers.push_back(compose(inverses[partition.block_of(s(x))],
                                 partition.block_perm(partition.block_of(x))));
    return SkewProduct(s, fibers);
}

RecurrenceCertificate certify_recurrence(const Perm& s, const SimplePartition& partition,
                                         std::int64_t n_floor) {
    return certify_recurrence(s, partition, n_floor, CellSet::all(s.space().cells()));
}

RecurrenceCertificate certify_recurrence(const Perm& s, const SimplePartition& partition,
                                         std::int64_t n_floor, const CellSet& subset) {
    if (s.space().cells() != partition.xcells())
        throw space_mismatch("partition does not cover the base's X space");
    if (subset.universe() != s.space().cells())
        throw space_mismatch("subset lives on a different universe than the base");
    if (subset.empty()) throw argument_error("subset must be nonempty");
    if (n_floor < 1) throw argument_error("n_floor must be positive");

    const std::uint32_t nx = s.space().cells();
    SkewProduct r = simple_cocycle(s, partition);

    // Any cell of B_k inside the subset comes back to itself at the multiple
    // of its cycle length in (n_floor, n_floor + L], so the first block that
    // meets the subset certifies within n_floor + N_X steps.
    std::vector<Perm> powers;
    powers.reserve(nx);
    Perm p = power(s, n_floor + 1);
    for (std::uint32_t j = 0; j < nx; ++j) {
        powers.push_back(p);
        if (j + 1 < nx) p = compose(s, p);
    }

    for (std::size_t k = 0; k < partition.block_count(); ++k) {
        CellSet candidates = partition.block(k) & subset;
        if (candidates.empty()) continue;
        for (std::uint32_t j = 0; j < nx; ++j) {
            const std::int64_t n = n_floor + 1 + j;
            CellSet witness(nx);
            candidates.for_each([&](std::uint32_t x) {
                if (partition.block(k).contains(powers[j](x))) witness.insert(x);
            });
            if (witness.empty()) continue;
            bool verified = true;
            witness.for_each([&](std::uint32_t x) {
                if (!cocycle(r, x, n).is_identity()) verified = false;
            });
            if (!verified)
                throw precondition_error("cocycle verification failed on a return set; "
                                         "the partition data is inconsistent");
            return RecurrenceCertificate{k, n, witness};
        }
    }
    throw precondition_error("no block of the partition meets the subset on a return; "
                             "this cannot happen for a nonempty subset");
}

std::pair<FiberConjugator, Rational> trivialize_on_tower(const SkewProduct& r,
                                                         const RokhlinTower& tower) {
    const std::uint32_t nx = r.xspace().cells();
    if (tower.base_set.universe() != nx)
        throw space_mismatch("tower lives on a different universe than the extension's base");
    if (tower.height < 1 || (std::int64_t)tower.levels.size() != tower.height)
        throw precondition_error("tower has " + std::to_string(tower.levels.size()) +
                                 " levels for height " + std::to_string(tower.height));
    if (tower.levels.front() != tower.base_set)
        throw precondition_error("tower's first level is not its base set");
    CellSet covered(nx);
    for (std::size_t i = 0; i < tower.levels.size(); ++i) {
        if (i > 0 && tower.levels[i] != r.base().image(tower.levels[i - 1]))
            throw precondition_error("tower level " + std::to_string(i) +
                                     " is not the base image of level " + std::to_string(i - 1) +
                                     "; the tower was not built over this base");
        if (covered.intersects(tower.levels[i]))
            throw precondition_error("tower levels are not pairwise disjoint");
        covered = covered | tower.levels[i];
    }
    if (tower.residual != covered.complement())
        throw precondition_error("tower residual is not the complement of its levels");

    std::vector<Perm> fibers(nx, Perm::identity(r.yspace()));
    tower.base_set.for_each([&](std::uint32_t b) {
        std::uint32_t x = b;
        Perm acc = Perm::identity(r.yspace());
        for (std::int64_t i = 0; i < tower.height; ++i) {
            if (i > 0) {
                acc = compose(r.fiber(x), acc);
                x = r.base()(x);
            }
            fibers[x] = acc.inverse();
        }
    });

    FiberConjugator j(r.xspace(), std::move(fibers));
    Rational discrepancy =
        product_uniform_distance(conjugate(r, j), SkewProduct::trivial(r.base(), r.yspace()));
    return {std::move(j), discrepancy};
}

SimplePartition partition_from_conjugator(const FiberConjugator& j) {
    std::vector<CellSet> blocks;
    std::vector<Perm> perms;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_hash;
    for (std::uint32_t x = 0; x < j.xspace().cells(); ++x) {
        const Perm& f = j.fiber(x);
        auto& bucket = by_hash[perm_hash(f)];
        std::size_t found = blocks.size();
        for (auto k : bucket)
            if (perms[k] == f) {
                found = k;
                break;
            }
        if (found == blocks.size()) {
            bucket.push_back(found);
            blocks.emplace_back(j.xspace().cells());
            perms.push_back(f);
        }
        blocks[found].insert(x);
    }
    return SimplePartition(std::move(blocks), std::move(perms));
}

std::optional<SimplePartition> coboundary_partition(const SkewProduct& r) {
    std::vector<Perm> fibers(r.xspace().cells(), Perm::identity(r.yspace()));
    for (const auto& cyc : cycles_of(r.base())) {
        Perm acc = Perm::identity(r.yspace());
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            fibers[cyc[i]] = acc.inverse();
            acc = compose(r.fiber(cyc[i]), acc);
        }
        if (!acc.is_identity()) return std::nullopt;  // nontrivial holonomy
    }
    return partition_from_conjugator(FiberConjugator(r.xspace(), std::move(fibers)));
}

RecurrentizeResult recurrentize(const SkewProduct& r, const Rational& delta,
                                std::int64_t n_floor) {
    if (!(delta > Rational(0) && delta < Rational(1)))
        throw argument_error("delta must lie in (0, 1), got " + delta.str());
    if (n_floor < 1) throw argument_error("n_floor must be positive");

    const std::uint32_t nx = r.xspace().cells();

    // Exact coboundaries need no approximation and no aperiodicity.
    if (auto part = coboundary_partition(r)) {
        SkewProduct exact = simple_cocycle(r.base(), *part);
        Rational dist = product_uniform_distance(r, exact);
        auto cert = certify_recurrence(r.base(), *part, n_floor);
        return RecurrentizeResult{std::move(exact), std::move(*part), std::move(cert),
                                  dist, 0, RecurrentizeResult::Path::already_simple};
    }

    const std::int64_t required = (Rational(2) / delta).ceil();
    const std::int64_t min_cycle = min_cycle_length(r.base());
    if (min_cycle < required)
        throw precondition_error(
            "base has a cycle of length " + std::to_string(min_cycle) +
            " but every cycle must have length at least " + std::to_string(required) +
            " (2/delta) for delta = " + delta.str());

    const auto cycles = cycles_of(r.base());

    // Pick the tower height with the smallest mismatch guarantee; on ties
    // prefer the taller tower.
    std::int64_t best_height = 1;
    std::int64_t best_cells = mismatch_cells(cycles, 1);
    for (std::int64_t h = 2; h <= min_cycle; ++h) {
        std::int64_t cells = mismatch_cells(cycles, h);
        if (cells <= best_cells) {
            best_cells = cells;
            best_height = h;
        }
    }

    if (Rational(best_cells, nx) < delta) {
        RokhlinTower tower = build_tower_unchecked(r.base(), best_height);
        auto [j, disc] = trivialize_on_tower(r, tower);
        SimplePartition part = partition_from_conjugator(j);
        SkewProduct approx = simple_cocycle(r.base(), part);
        Rational dist = product_uniform_distance(r, approx);
        auto cert = certify_recurrence(r.base(), part, n_floor);
        return RecurrentizeResult{std::move(approx), std::move(part), std::move(cert),
                                  dist, best_height, RecurrentizeResult::Path::tower};
    }

    // Fall back to trivializing each cycle in full. Only the cycle-closing
    // cells can then disagree, so dist <= (#cycles)/N_X <= 1/min_cycle <=
    // delta/2.
    std::vector<Perm> fibers(nx, Perm::identity(r.yspace()));
    for (const auto& cyc : cycles) {
        Perm acc = Perm::identity(r.yspace());
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            fibers[cyc[i]] = acc.inverse();
            acc = compose(r.fiber(cyc[i]), acc);
        }
    }
    SimplePartition part = partition_from_conjugator(FiberConjugator(r.xspace(), std::move(fibers)));
    SkewProduct approx = simple_cocycle(r.base(), part);
    Rational dist = product_uniform_distance(r, approx);
    auto cert = certify_recurrence(r.base(), part, n_floor);
    return RecurrentizeResult{std::move(approx), std::move(part), std::move(cert),
                              dist, 0, RecurrentizeResult::Path::per_cycle};
}

} // namespace skewrec
