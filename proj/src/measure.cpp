#include "skewrec/measure.hpp"

#include <algorithm>
#include <bit>

namespace skewrec {

CellSpace::CellSpace(std::uint32_t cells) : cells_(cells) {
    if (cells < 2 || !std::has_single_bit(cells))
        throw argument_error("cell space size must be a power of two >= 2, got " +
                             std::to_string(cells));
    depth_ = (std::uint32_t)std::countr_zero(cells);
}

Perm::Perm(CellSpace space, std::vector<std::uint32_t> forward)
    : space_(space), fwd_(std::move(forward)) {
    const std::uint32_t n = space_.cells();
    if (fwd_.size() != n)
        throw argument_error("permutation array has " + std::to_string(fwd_.size()) +
                             " entries, space has " + std::to_string(n) + " cells");
    inv_.assign(n, n);
    for (std::uint32_t c = 0; c < n; ++c) {
        std::uint32_t v = fwd_[c];
        if (v >= n)
            throw argument_error("permutation image " + std::to_string(v) + " out of range");
        if (inv_[v] != n)
            throw argument_error("not a bijection: cell " + std::to_string(v) + " hit twice");
        inv_[v] = c;
    }
}

Perm Perm::identity(CellSpace space) {
    std::vector<std::uint32_t> f(space.cells());
    for (std::uint32_t c = 0; c < space.cells(); ++c) f[c] = c;
    return Perm(space, f, f);
}

Perm Perm::full_cycle(CellSpace space) {
    return rotation(space, 1);
}

Perm Perm::rotation(CellSpace space, std::uint32_t shift) {
    const std::uint32_t n = space.cells();
    std::vector<std::uint32_t> f(n), b(n);
    for (std::uint32_t c = 0; c < n; ++c) {
        f[c] = (c + shift) % n;
        b[f[c]] = c;
    }
    return Perm(space, std::move(f), std::move(b));
}

Perm Perm::transposition(CellSpace space, std::uint32_t a, std::uint32_t b) {
    const std::uint32_t n = space.cells();
    if (a >= n || b >= n)
        throw argument_error("transposition cell out of range");
    std::vector<std::uint32_t> f(n);
    for (std::uint32_t c = 0; c < n; ++c) f[c] = c;
    std::swap(f[a], f[b]);
    std::vector<std::uint32_t> inv = f;  // involution
    return Perm(space, std::move(f), std::move(inv));
}

Perm Perm::concat_cycles(CellSpace space, const std::vector<std::uint32_t>& lengths) {
    const std::uint32_t n = space.cells();
    std::uint64_t total = 0;
    for (auto l : lengths) {
        if (l == 0) throw argument_error("cycle length 0");
        total += l;
    }
    if (total != n)
        throw argument_error("cycle lengths sum to " + std::to_string(total) +
                             ", space has " + std::to_string(n) + " cells");
    std::vector<std::uint32_t> f(n);
    std::uint32_t start = 0;
    for (auto l : lengths) {
        for (std::uint32_t i = 0; i < l; ++i)
            f[start + i] = start + (i + 1) % l;
        start += l;
    }
    return Perm(space, std::move(f));
}

Perm Perm::inverse() const {
    return Perm(space_, inv_, fwd_);
}

bool Perm::is_identity() const {
    for (std::uint32_t c = 0; c < fwd_.size(); ++c)
        if (fwd_[c] != c) return false;
    return true;
}

CellSet Perm::image(const CellSet& a) const {
    if (a.universe() != space_.cells())
        throw space_mismatch("set universe differs from permutation space");
    CellSet out(a.universe());
    a.for_each([&](std::uint32_t c) { out.insert(fwd_[c]); });
    return out;
}

CellSet Perm::preimage_set(const CellSet& a) const {
    if (a.universe() != space_.cells())
        throw space_mismatch("set universe differs from permutation space");
    CellSet out(a.universe());
    a.for_each([&](std::uint32_t c) { out.insert(inv_[c]); });
    return out;
}

Perm compose(const Perm& p, const Perm& q) {
    if (p.space() != q.space())
        throw space_mismatch("cannot compose permutations on different spaces");
    const std::uint32_t n = p.space().cells();
    std::vector<std::uint32_t> f(n);
    for (std::uint32_t c = 0; c < n; ++c) f[c] = p(q(c));
    return Perm(p.space(), std::move(f));
}

Perm power(const Perm& p, std::int64_t n) {
    Perm base = n < 0 ? p.inverse() : p;
    std::uint64_t e = n < 0 ? (std::uint64_t)(-(n + 1)) + 1 : (std::uint64_t)n;
    Perm acc = Perm::identity(p.space());
    while (e) {
        if (e & 1) acc = compose(acc, base);
        base = compose(base, base);
        e >>= 1;
    }
    return acc;
}

Rational uniform_distance(const Perm& p, const Perm& q) {
    if (p.space() != q.space())
        throw space_mismatch("uniform distance needs a shared space");
    std::uint32_t diff = 0;
    for (std::uint32_t c = 0; c < p.space().cells(); ++c)
        if (p(c) != q(c)) ++diff;
    return p.space().mass(diff);
}

std::vector<std::vector<std::uint32_t>> cycles_of(const Perm& p) {
    const std::uint32_t n = p.space().cells();
    std::vector<bool> seen(n, false);
    std::vector<std::vector<std::uint32_t>> out;
    for (std::uint32_t c = 0; c < n; ++c) {
        if (seen[c]) continue;
        std::vector<std::uint32_t> cyc;
        std::uint32_t x = c;
        while (!seen[x]) {
            seen[x] = true;
            cyc.push_back(x);
            x = p(x);
        }
        out.push_back(std::move(cyc));
    }
    return out;
}

std::int64_t min_cycle_length(const Perm& p) {
    std::int64_t best = p.space().cells();
    for (const auto& cyc : cycles_of(p))
        best = std::min<std::int64_t>(best, (std::int64_t)cyc.size());
    return best;
}

DyadicFamily::DyadicFamily(CellSpace space) : space_(space) {
    const std::uint32_t n = space.cells();
    blocks_.reserve(2 * n - 2);
    for (std::uint32_t level = 1; level <= space.depth(); ++level) {
        std::uint32_t width = n >> level;
        for (std::uint32_t j = 0; j < ((std::uint32_t)1 << level); ++j)
            blocks_.push_back(CellSet::interval(n, j * width, (j + 1) * width));
    }
}

Rational halmos_distance(const Perm& p, const Perm& q, const DyadicFamily& family) {
    if (p.space() != q.space() || p.space() != family.space())
        throw space_mismatch("metric needs permutations and family on one space");
    const std::uint32_t n = p.space().cells();
    Rational total(0);
    for (std::size_t i = 1; i <= family.size(); ++i) {
        const CellSet& a = family.block(i);
        std::uint32_t d = (p.image(a) ^ q.image(a)).count() +
                          (p.preimage_set(a) ^ q.preimage_set(a)).count();
        if (d == 0) continue;
        if (i >= 63 - p.space().depth())
            throw value_overflow("metric term denominator exceeds 64-bit range");
        total = total + Rational(d, (std::int64_t)n << i);
    }
    return total;
}

std::uint64_t perm_hash(const Perm& p) {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint32_t v : p.forward()) {
        for (int byte = 0; byte < 4; ++byte) {
            h ^= (v >> (8 * byte)) & 0xff;
            h *= 1099511628211ull;
        }
    }
    return h;
}

} // namespace skewrec
