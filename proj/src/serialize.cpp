#include "skewrec/serialize.hpp"

#include <fstream>
#include <sstream>

#include "skewrec/error.hpp"

namespace skewrec {

namespace {

const json& need(const json& j, const char* key, const std::string& what) {
    if (!j.is_object())
        throw parse_error(what + ": expected an object");
    auto it = j.find(key);
    if (it == j.end())
        throw parse_error(what + ": missing key \"" + key + "\"");
    return *it;
}

std::int64_t need_int(const json& j, const char* key, const std::string& what) {
    const json& v = need(j, key, what);
    if (!v.is_number_integer())
        throw parse_error(what + ": key \"" + key + "\" must be an integer");
    return v.get<std::int64_t>();
}

std::vector<std::uint32_t> need_cell_list(const json& j, const char* key,
                                          const std::string& what) {
    const json& v = need(j, key, what);
    if (!v.is_array())
        throw parse_error(what + ": key \"" + key + "\" must be an array");
    std::vector<std::uint32_t> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number_integer() || e.get<std::int64_t>() < 0)
            throw parse_error(what + ": key \"" + key + "\" must hold nonnegative integers");
        out.push_back((std::uint32_t)e.get<std::int64_t>());
    }
    return out;
}

json cells_json(const CellSet& s) {
    return json(s.to_list());
}

CellSet cells_from(const json& j, const char* key, std::uint32_t universe,
                   const std::string& what) {
    CellSet s(universe);
    for (auto c : need_cell_list(j, key, what)) {
        if (c >= universe)
            throw parse_error(what + ": cell " + std::to_string(c) + " is outside the universe " +
                              std::to_string(universe));
        s.insert(c);
    }
    return s;
}

} // namespace

json perm_to_json(const Perm& p) {
    return json{{"cells", p.space().cells()}, {"forward", p.forward()}};
}

Perm perm_from_json(const json& j) {
    auto cells = need_int(j, "cells", "permutation");
    if (cells < 2 || cells > UINT32_MAX)
        throw parse_error("permutation: bad cell count " + std::to_string(cells));
    auto fwd = need_cell_list(j, "forward", "permutation");
    return Perm(CellSpace((std::uint32_t)cells), std::move(fwd));
}

json skew_to_json(const SkewProduct& r) {
    json pool = json::array();
    for (const auto& p : r.pool()) pool.push_back(perm_to_json(p));
    return json{{"base", perm_to_json(r.base())},
                {"fibers", r.fiber_indices()},
                {"pool", pool}};
}

SkewProduct skew_from_json(const json& j) {
    Perm base = perm_from_json(need(j, "base", "skew product"));
    const json& pool_j = need(j, "pool", "skew product");
    if (!pool_j.is_array() || pool_j.empty())
        throw parse_error("skew product: key \"pool\" must be a nonempty array");
    std::vector<Perm> pool;
    pool.reserve(pool_j.size());
    for (const auto& e : pool_j) pool.push_back(perm_from_json(e));
    auto indices = need_cell_list(j, "fibers", "skew product");
    for (auto i : indices)
        if (i >= pool.size())
            throw parse_error("skew product: fiber index " + std::to_string(i) +
                              " is outside the pool of " + std::to_string(pool.size()));
    return SkewProduct(std::move(base), pool, std::move(indices));
}

json tower_to_json(const RokhlinTower& t) {
    return json{{"base_set", cells_json(t.base_set)},
                {"height", t.height},
                {"residual", cells_json(t.residual)}};
}

RokhlinTower tower_from_json(const json& j, const Perm& s) {
    auto height = need_int(j, "height", "tower");
    if (height < 1) throw parse_error("tower: height must be positive");
    const std::uint32_t nx = s.space().cells();
    CellSet base = cells_from(j, "base_set", nx, "tower");
    CellSet residual = cells_from(j, "residual", nx, "tower");

    RokhlinTower t{base, height, {}, CellSet(nx), Rational(0)};
    CellSet covered(nx);
    CellSet level = base;
    for (std::int64_t i = 0; i < height; ++i) {
        if (i > 0) level = s.image(level);
        if (covered.intersects(level))
            throw parse_error("tower: levels overlap under the given base permutation");
        covered = covered | level;
        t.levels.push_back(level);
    }
    t.residual = covered.complement();
    t.coverage = s.space().mass(covered.count());
    if (t.residual != residual)
        throw parse_error("tower: stored residual does not match the levels");
    return t;
}

json certificate_to_json(const RecurrenceCertificate& c, std::uint32_t universe) {
    (void)universe;
    return json{{"block", c.block}, {"n", c.return_time}, {"witness", cells_json(c.witness)}};
}

RecurrenceCertificate certificate_from_json(const json& j, std::uint32_t universe) {
    auto block = need_int(j, "block", "certificate");
    auto n = need_int(j, "n", "certificate");
    if (block < 0) throw parse_error("certificate: block index must be nonnegative");
    if (n < 1) throw parse_error("certificate: n must be positive");
    CellSet witness = cells_from(j, "witness", universe, "certificate");
    if (witness.empty()) throw parse_error("certificate: witness set is empty");
    return RecurrenceCertificate{(std::size_t)block, n, witness};
}

json partition_to_json(const SimplePartition& p) {
    json blocks = json::array();
    json perms = json::array();
    for (std::size_t k = 0; k < p.block_count(); ++k) {
        blocks.push_back(cells_json(p.block(k)));
        perms.push_back(perm_to_json(p.block_perm(k)));
    }
    return json{{"block_perms", perms}, {"blocks", blocks}};
}

SimplePartition partition_from_json(const json& j) {
    const json& blocks_j = need(j, "blocks", "partition");
    if (!blocks_j.is_array())
        throw parse_error("partition: \"blocks\" must be an array");
    // A partition covers X exactly, so the universe is the total cell count.
    std::uint32_t universe = 0;
    for (const auto& b : blocks_j) {
        if (!b.is_array())
            throw parse_error("partition: each block must be an array of cells");
        universe += (std::uint32_t)b.size();
    }
    return partition_from_json(j, universe);
}

SimplePartition partition_from_json(const json& j, std::uint32_t universe) {
    const json& blocks_j = need(j, "blocks", "partition");
    const json& perms_j = need(j, "block_perms", "partition");
    if (!blocks_j.is_array() || !perms_j.is_array())
        throw parse_error("partition: \"blocks\" and \"block_perms\" must be arrays");
    if (blocks_j.empty())
        throw parse_error("partition: needs at least one block");

    std::vector<Perm> perms;
    perms.reserve(perms_j.size());
    for (const auto& e : perms_j) perms.push_back(perm_from_json(e));
    std::vector<CellSet> blocks;
    blocks.reserve(blocks_j.size());
    for (const auto& b : blocks_j) {
        if (!b.is_array())
            throw parse_error("partition: each block must be an array of cells");
        CellSet s(universe);
        for (const auto& e : b) {
            if (!e.is_number_integer() || e.get<std::int64_t>() < 0 ||
                e.get<std::int64_t>() >= universe)
                throw parse_error("partition: block cell out of range for universe " +
                                  std::to_string(universe));
            s.insert((std::uint32_t)e.get<std::int64_t>());
        }
        blocks.push_back(s);
    }
    return SimplePartition(std::move(blocks), std::move(perms));
}

json rational_to_json(const Rational& r) {
    return json{{"den", r.den()}, {"num", r.num()}};
}

Rational rational_from_json(const json& j) {
    return Rational(need_int(j, "num", "rational"), need_int(j, "den", "rational"));
}

json recurrentize_to_json(const RecurrentizeResult& res) {
    const char* path = "tower";
    if (res.path == RecurrentizeResult::Path::already_simple) path = "already_simple";
    if (res.path == RecurrentizeResult::Path::per_cycle) path = "per_cycle";
    return json{{"certificate", certificate_to_json(res.certificate, res.partition.xcells())},
                {"distance", rational_to_json(res.distance)},
                {"partition", partition_to_json(res.partition)},
                {"path", path},
                {"result", skew_to_json(res.result)},
                {"tower_height", res.tower_height}};
}

std::string to_text(const json& j) {
    return j.dump() + "\n";
}

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw parse_error(what + ": " + e.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write " + path);
    out << text;
    if (!out) throw error("failed writing " + path);
}

} // namespace skewrec
