#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skewrec/cellset.hpp"
#include "skewrec/skew.hpp"

namespace skewrec {

/// Parsed experiment description. Flat "key = value" lines; '#' starts a
/// comment; unknown or duplicate keys are parse errors. See the README for
/// the full key reference.
struct ExperimentConfig {
    enum class BaseKind { cycle, cycles, random, file };
    enum class ExtKind { trivial, random, file, partition, simple };

    std::uint32_t nx = 0;
    std::uint32_t ny = 0;
    std::optional<std::uint64_t> seed;

    BaseKind base_kind = BaseKind::cycle;
    std::vector<std::uint32_t> cycle_lengths;  // base = cycles:...
    std::int64_t base_horizon = 0;             // base = random:H
    std::string base_path;                     // base = file:...

    ExtKind ext_kind = ExtKind::trivial;
    std::string ext_path;                        // file / partition
    std::vector<std::vector<std::uint32_t>> blocks;  // extension = simple
    std::vector<std::string> block_perm_specs;       // id | swap:a,b | rot:k | random

    std::vector<std::int64_t> ms;   // m = 1,10,100
    std::int64_t n_lo = 0;          // n = lo..hi
    std::int64_t n_hi = -1;
    bool has_n_range() const { return n_lo >= 1 && n_hi >= n_lo; }

    std::optional<std::vector<std::uint32_t>> subset_cells;  // absent or "all" = all of X

    std::string dir;  // directory of the config file; file paths resolve against it
};

ExperimentConfig parse_config(const std::string& text, const std::string& dir);
ExperimentConfig load_config(const std::string& path);

/// The instance a config describes. Randomness comes from one SplitMix64
/// stream seeded with `seed`, consumed in a fixed order (base, then fibers,
/// then block permutations), so equal configs give equal instances.
struct Instance {
    SkewProduct r;
    CellSet subset;
};

Instance build_instance(const ExperimentConfig& cfg);

} // namespace skewrec
