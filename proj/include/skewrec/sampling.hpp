#pragma once

#include <cstdint>
#include <vector>

#include "skewrec/measure.hpp"
#include "skewrec/skew.hpp"
#include "skewrec/towers.hpp"

namespace skewrec {

/// SplitMix64: state advances by the golden-gamma constant, output is a
/// 64-bit finalizer of the new state (Steele, Lea & Flood, "Fast splittable
/// pseudorandom number generators", OOPSLA 2014). Chosen because the whole
/// algorithm fits in four lines and gives identical streams on every
/// platform; std::mt19937_64 would too, but the distribution adapters on
/// top of it are not portable across standard libraries.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, bound), bound >= 1, by rejection of the biased tail.
    std::uint64_t below(std::uint64_t bound);

private:
    std::uint64_t state_;
};

/// Uniform random permutation (Fisher-Yates driven by the generator).
Perm random_perm(CellSpace space, SplitMix64& rng);

/// Uniform over permutations with min_cycle_length >= horizon, by
/// rejection. horizon must not exceed the cell count.
Perm random_aperiodic_perm(CellSpace space, std::int64_t horizon, SplitMix64& rng);

/// One independent uniform fiber permutation per X cell.
std::vector<Perm> random_fibers(CellSpace xspace, CellSpace yspace, SplitMix64& rng);

/// One independent uniform Y permutation per X cell, as a conjugator.
FiberConjugator random_conjugator(CellSpace xspace, CellSpace yspace, SplitMix64& rng);

/// Uniform random subset of exactly `size` cells.
CellSet random_subset(std::uint32_t universe, std::uint32_t size, SplitMix64& rng);

} // namespace skewrec
