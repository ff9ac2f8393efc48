#include "skewrec/sampling.hpp"

#include <numeric>
#include <string>

#include "skewrec/error.hpp"

namespace skewrec {

std::uint64_t SplitMix64::below(std::uint64_t bound) {
    if (bound == 0) throw argument_error("bound must be positive");
    // Draws above the largest multiple of bound are rejected, so every
    // residue is equally likely.
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
        v = next();
    } while (v >= limit);
    return v % bound;
}

Perm random_perm(CellSpace space, SplitMix64& rng) {
    std::vector<std::uint32_t> fwd(space.cells());
    std::iota(fwd.begin(), fwd.end(), 0u);
    for (std::uint32_t i = space.cells() - 1; i > 0; --i)
        std::swap(fwd[i], fwd[rng.below(i + 1)]);
    return Perm(space, std::move(fwd));
}

Perm random_aperiodic_perm(CellSpace space, std::int64_t horizon, SplitMix64& rng) {
    if (horizon < 1 || horizon > space.cells())
        throw argument_error("aperiodicity horizon " + std::to_string(horizon) +
                             " is outside [1, " + std::to_string(space.cells()) + "]");
    for (;;) {
        Perm p = random_perm(space, rng);
        if (min_cycle_length(p) >= horizon) return p;
    }
}

std::vector<Perm> random_fibers(CellSpace xspace, CellSpace yspace, SplitMix64& rng) {
    std::vector<Perm> fibers;
    fibers.reserve(xspace.cells());
    for (std::uint32_t x = 0; x < xspace.cells(); ++x)
        fibers.push_back(random_perm(yspace, rng));
    return fibers;
}

FiberConjugator random_conjugator(CellSpace xspace, CellSpace yspace, SplitMix64& rng) {
    return FiberConjugator(xspace, random_fibers(xspace, yspace, rng));
}

CellSet random_subset(std::uint32_t universe, std::uint32_t size, SplitMix64& rng) {
    if (size > universe)
        throw argument_error("subset size " + std::to_string(size) +
                             " exceeds the universe " + std::to_string(universe));
    // Partial Fisher-Yates: the first `size` entries are a uniform sample.
    std::vector<std::uint32_t> cells(universe);
    std::iota(cells.begin(), cells.end(), 0u);
    for (std::uint32_t i = 0; i < size; ++i)
        std::swap(cells[i], cells[i + rng.below(universe - i)]);
    cells.resize(size);
    return CellSet::of(universe, cells);
}

} // namespace skewrec
