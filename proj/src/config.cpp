#include "skewrec/config.hpp"

#include <algorithm>
#include <filesystem>
#include <set>
#include <sstream>

#include "skewrec/error.hpp"
#include "skewrec/sampling.hpp"
#include "skewrec/serialize.hpp"
#include "skewrec/towers.hpp"

namespace skewrec {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

std::int64_t parse_int(const std::string& text, const std::string& field) {
    try {
        std::size_t used = 0;
        std::int64_t v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw parse_error("config field " + field + ": '" + text + "' is not an integer");
    }
}

std::uint64_t parse_uint64(const std::string& text, const std::string& field) {
    try {
        std::size_t used = 0;
        std::uint64_t v = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw parse_error("config field " + field + ": '" + text +
                          "' is not an unsigned integer");
    }
}

std::vector<std::uint32_t> parse_cells(const std::string& text, const std::string& field) {
    std::vector<std::uint32_t> out;
    for (const auto& part : split(text, ',')) {
        std::int64_t v = parse_int(part, field);
        if (v < 0) throw parse_error("config field " + field + ": cell indices are nonnegative");
        out.push_back((std::uint32_t)v);
    }
    return out;
}

/// id | swap:a,b | rot:k | random, shared by block_perms.
Perm build_perm_spec(const std::string& spec, CellSpace space, SplitMix64* rng,
                     const std::string& field) {
    auto colon = spec.find(':');
    std::string head = colon == std::string::npos ? spec : spec.substr(0, colon);
    std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (head == "id") {
        if (!args.empty()) throw parse_error("config field " + field + ": id takes no arguments");
        return Perm::identity(space);
    }
    if (head == "swap") {
        auto cells = parse_cells(args, field);
        if (cells.size() != 2)
            throw parse_error("config field " + field + ": swap needs exactly two cells");
        return Perm::transposition(space, cells[0], cells[1]);
    }
    if (head == "rot") {
        std::int64_t k = parse_int(args, field);
        std::int64_t n = space.cells();
        return Perm::rotation(space, (std::uint32_t)(((k % n) + n) % n));
    }
    if (head == "random") {
        if (!args.empty())
            throw parse_error("config field " + field + ": random takes no arguments");
        if (!rng)
            throw parse_error("config field " + field + ": random requires a seed");
        return random_perm(space, *rng);
    }
    throw parse_error("config field " + field + ": unknown permutation spec '" + spec + "'");
}

} // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& dir) {
    ExperimentConfig cfg;
    cfg.dir = dir;
    std::set<std::string> seen;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw parse_error("config line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw parse_error("config line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        if (!seen.insert(key).second)
            throw parse_error("config line " + std::to_string(lineno) + ": duplicate key '" +
                              key + "'");

        if (key == "nx" || key == "ny") {
            std::int64_t v = parse_int(value, key);
            if (v < 2 || v > UINT32_MAX)
                throw parse_error("config field " + key + ": " + value + " is out of range");
            (key == "nx" ? cfg.nx : cfg.ny) = (std::uint32_t)v;
        } else if (key == "seed") {
            cfg.seed = parse_uint64(value, key);
        } else if (key == "base") {
            auto colon = value.find(':');
            std::string head = colon == std::string::npos ? value : value.substr(0, colon);
            std::string args = colon == std::string::npos ? "" : value.substr(colon + 1);
            if (head == "cycle" && args.empty()) {
                cfg.base_kind = ExperimentConfig::BaseKind::cycle;
            } else if (head == "cycles") {
                cfg.base_kind = ExperimentConfig::BaseKind::cycles;
                for (auto len : parse_cells(args, key)) {
                    if (len == 0) throw parse_error("config field base: zero cycle length");
                    cfg.cycle_lengths.push_back(len);
                }
                if (cfg.cycle_lengths.empty())
                    throw parse_error("config field base: cycles needs at least one length");
            } else if (head == "random") {
                cfg.base_kind = ExperimentConfig::BaseKind::random;
                cfg.base_horizon = args.empty() ? 1 : parse_int(args, key);
                if (cfg.base_horizon < 1)
                    throw parse_error("config field base: random horizon must be positive");
            } else if (head == "file" && !args.empty()) {
                cfg.base_kind = ExperimentConfig::BaseKind::file;
                cfg.base_path = args;
            } else {
                throw parse_error("config field base: expected cycle, cycles:L1,L2,..., "
                                  "random:H, or file:PATH, got '" + value + "'");
            }
        } else if (key == "extension") {
            auto colon = value.find(':');
            std::string head = colon == std::string::npos ? value : value.substr(0, colon);
            std::string args = colon == std::string::npos ? "" : value.substr(colon + 1);
            if (head == "trivial" && args.empty()) {
                cfg.ext_kind = ExperimentConfig::ExtKind::trivial;
            } else if (head == "random" && args.empty()) {
                cfg.ext_kind = ExperimentConfig::ExtKind::random;
            } else if (head == "simple" && args.empty()) {
                cfg.ext_kind = ExperimentConfig::ExtKind::simple;
            } else if (head == "file" && !args.empty()) {
                cfg.ext_kind = ExperimentConfig::ExtKind::file;
                cfg.ext_path = args;
            } else if (head == "partition" && !args.empty()) {
                cfg.ext_kind = ExperimentConfig::ExtKind::partition;
                cfg.ext_path = args;
            } else {
                throw parse_error("config field extension: expected trivial, random, simple, "
                                  "file:PATH, or partition:PATH, got '" + value + "'");
            }
        } else if (key == "blocks") {
            for (const auto& group : split(value, '|')) {
                auto cells = parse_cells(group, key);
                if (cells.empty())
                    throw parse_error("config field blocks: empty block");
                cfg.blocks.push_back(std::move(cells));
            }
        } else if (key == "block_perms") {
            for (const auto& spec : split(value, '|')) {
                if (spec.empty()) throw parse_error("config field block_perms: empty spec");
                cfg.block_perm_specs.push_back(spec);
            }
        } else if (key == "m") {
            for (const auto& part : split(value, ',')) {
                std::int64_t m = parse_int(part, key);
                if (m < 1) throw parse_error("config field m: values must be positive");
                cfg.ms.push_back(m);
            }
        } else if (key == "n") {
            auto dots = value.find("..");
            if (dots == std::string::npos)
                throw parse_error("config field n: expected 'lo..hi', got '" + value + "'");
            cfg.n_lo = parse_int(trim(value.substr(0, dots)), key);
            cfg.n_hi = parse_int(trim(value.substr(dots + 2)), key);
            if (cfg.n_lo < 1 || cfg.n_hi < cfg.n_lo)
                throw parse_error("config field n: need 1 <= lo <= hi, got '" + value + "'");
        } else if (key == "subset") {
            if (value == "all")
                cfg.subset_cells.reset();
            else
                cfg.subset_cells = parse_cells(value, key);
        } else {
            throw parse_error("config line " + std::to_string(lineno) + ": unknown key '" +
                              key + "'");
        }
    }

    if (cfg.nx == 0) throw parse_error("config field nx: missing");
    if (cfg.ny == 0 && cfg.ext_kind != ExperimentConfig::ExtKind::file)
        throw parse_error("config field ny: missing");

    bool base_random = cfg.base_kind == ExperimentConfig::BaseKind::random;
    bool ext_random = cfg.ext_kind == ExperimentConfig::ExtKind::random;
    bool perm_random = std::any_of(cfg.block_perm_specs.begin(), cfg.block_perm_specs.end(),
                                   [](const std::string& s) { return s == "random"; });
    if ((base_random || ext_random || perm_random) && !cfg.seed)
        throw parse_error("config field seed: required whenever base, extension, or "
                          "block_perms uses 'random'");

    if (cfg.ext_kind == ExperimentConfig::ExtKind::simple) {
        if (cfg.blocks.empty())
            throw parse_error("config field blocks: required for extension = simple");
        if (cfg.blocks.size() != cfg.block_perm_specs.size())
            throw parse_error("config field block_perms: need exactly one spec per block (" +
                              std::to_string(cfg.blocks.size()) + " blocks, " +
                              std::to_string(cfg.block_perm_specs.size()) + " specs)");
    } else if (!cfg.blocks.empty() || !cfg.block_perm_specs.empty()) {
        throw parse_error("config fields blocks/block_perms: only valid with "
                          "extension = simple");
    }

    if (cfg.ext_kind == ExperimentConfig::ExtKind::file && seen.count("base"))
        throw parse_error("config field base: an extension file carries its own base; "
                          "remove the base key");

    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    namespace fs = std::filesystem;
    return parse_config(read_text_file(path), fs::path(path).parent_path().string());
}

namespace {

std::string resolve(const std::string& dir, const std::string& rel) {
    namespace fs = std::filesystem;
    fs::path p(rel);
    if (p.is_absolute() || dir.empty()) return rel;
    return (fs::path(dir) / p).string();
}

} // namespace

Instance build_instance(const ExperimentConfig& cfg) {
    SplitMix64 rng(cfg.seed.value_or(0));
    CellSpace xspace(cfg.nx);

    if (cfg.ext_kind == ExperimentConfig::ExtKind::file) {
        SkewProduct r = skew_from_json(parse_json(
            read_text_file(resolve(cfg.dir, cfg.ext_path)), "extension file " + cfg.ext_path));
        if (r.xspace() != xspace)
            throw parse_error("extension file " + cfg.ext_path + " has " +
                              std::to_string(r.xspace().cells()) + " base cells, config says " +
                              std::to_string(cfg.nx));
        if (cfg.ny != 0 && r.yspace().cells() != cfg.ny)
            throw parse_error("extension file " + cfg.ext_path + " has " +
                              std::to_string(r.yspace().cells()) + " fiber cells, config says " +
                              std::to_string(cfg.ny));
        CellSet subset = cfg.subset_cells ? CellSet::of(cfg.nx, *cfg.subset_cells)
                                          : CellSet::all(cfg.nx);
        return Instance{std::move(r), std::move(subset)};
    }

    Perm base = [&] {
        switch (cfg.base_kind) {
            case ExperimentConfig::BaseKind::cycle:
                return Perm::full_cycle(xspace);
            case ExperimentConfig::BaseKind::cycles:
                return Perm::concat_cycles(xspace, cfg.cycle_lengths);
            case ExperimentConfig::BaseKind::random:
                return random_aperiodic_perm(xspace, cfg.base_horizon, rng);
            default:
                return perm_from_json(parse_json(
                    read_text_file(resolve(cfg.dir, cfg.base_path)),
                    "base file " + cfg.base_path));
        }
    }();
    if (base.space() != xspace)
        throw parse_error("base file " + cfg.base_path + " has " +
                          std::to_string(base.space().cells()) + " cells, config says " +
                          std::to_string(cfg.nx));

    CellSpace yspace(cfg.ny);
    SkewProduct r = [&] {
        switch (cfg.ext_kind) {
            case ExperimentConfig::ExtKind::trivial:
                return SkewProduct::trivial(base, yspace);
            case ExperimentConfig::ExtKind::random:
                return SkewProduct(base, random_fibers(xspace, yspace, rng));
            case ExperimentConfig::ExtKind::partition: {
                SimplePartition part = partition_from_json(
                    parse_json(read_text_file(resolve(cfg.dir, cfg.ext_path)),
                               "partition file " + cfg.ext_path),
                    cfg.nx);
                if (part.yspace() != yspace)
                    throw parse_error("partition file " + cfg.ext_path + " has " +
                                      std::to_string(part.yspace().cells()) +
                                      " fiber cells, config says " + std::to_string(cfg.ny));
                return simple_cocycle(base, part);
            }
            default: {  // simple, from inline blocks
                std::vector<CellSet> blocks;
                for (const auto& cells : cfg.blocks)
                    blocks.push_back(CellSet::of(cfg.nx, cells));
                std::vector<Perm> perms;
                for (const auto& spec : cfg.block_perm_specs)
                    perms.push_back(build_perm_spec(spec, yspace,
                                                    cfg.seed ? &rng : nullptr, "block_perms"));
                return simple_cocycle(base, SimplePartition(std::move(blocks),
                                                            std::move(perms)));
            }
        }
    }();

    CellSet subset = cfg.subset_cells ? CellSet::of(cfg.nx, *cfg.subset_cells)
                                      : CellSet::all(cfg.nx);
    return Instance{std::move(r), std::move(subset)};
}

} // namespace skewrec
