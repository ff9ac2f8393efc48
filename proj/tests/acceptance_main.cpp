// Acceptance harness: one line per criterion, nonzero exit if any fails.
// Every bound checked here is exact rational arithmetic; the only inputs
// are fixed seeds, so a pass is reproducible bit for bit.
//
// Usage: acceptance <path-to-skewrec-cli> <fixture-dir>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "skewrec/csv.hpp"
#include "skewrec/sampling.hpp"
#include "skewrec/serialize.hpp"
#include "skewrec/towers.hpp"

using namespace skewrec;

namespace {

struct check_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
    if (!ok) throw check_failure(what);
}

std::vector<Perm> all_perms(CellSpace space) {
    std::vector<std::uint32_t> fwd(space.cells());
    for (std::uint32_t i = 0; i < space.cells(); ++i) fwd[i] = i;
    std::vector<Perm> out;
    do {
        out.emplace_back(space, fwd);
    } while (std::next_permutation(fwd.begin(), fwd.end()));
    return out;
}

// --- criterion 1: metric axioms at N=4, domination by 4x uniform ---------

void criterion_metric() {
    CellSpace s4(4);
    DyadicFamily family(s4);
    auto perms = all_perms(s4);
    const std::size_t n = perms.size();
    expect(n == 24, "expected 24 permutations of 4 cells");

    std::vector<std::vector<Rational>> rho(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            rho[i][j] = halmos_distance(perms[i], perms[j], family);

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            expect((rho[i][j] == Rational(0)) == (perms[i] == perms[j]),
                   "rho(p,q)=0 must hold exactly when p=q");
            expect(rho[i][j] == rho[j][i], "rho must be symmetric");
            expect(rho[i][j] <= Rational(4) * uniform_distance(perms[i], perms[j]),
                   "rho must be dominated by 4 x uniform distance");
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                expect(rho[i][k] <= rho[i][j] + rho[j][k], "triangle inequality failed");
}

// --- criterion 2: cocycle law over 100 seeded skew products --------------

void criterion_cocycle_law() {
    CellSpace s4(4);
    SplitMix64 rng(2026);
    for (int trial = 0; trial < 100; ++trial) {
        SkewProduct r(random_perm(s4, rng), random_fibers(s4, s4, rng));
        for (std::uint32_t x = 0; x < 4; ++x)
            for (std::int64_t n = 0; n <= 8; ++n) {
                std::uint32_t snx = x;
                for (std::int64_t i = 0; i < n; ++i) snx = r.base()(snx);
                for (std::int64_t k = 0; n + k <= 8; ++k)
                    expect(cocycle(r, x, n + k) ==
                               compose(cocycle(r, snx, k), cocycle(r, x, n)),
                           "C(x,n+k) != C(S^n x,k) o C(x,n)");
            }
    }
}

// --- criterion 3: Rokhlin-Halmos towers on the full small grid -----------

void partitions_into(std::uint32_t remaining, std::uint32_t minpart,
                     std::vector<std::uint32_t>& cur,
                     std::vector<std::vector<std::uint32_t>>& out) {
    if (remaining == 0) {
        out.push_back(cur);
        return;
    }
    for (std::uint32_t p = minpart; p <= remaining; ++p) {
        cur.push_back(p);
        partitions_into(remaining - p, p, cur, out);
        cur.pop_back();
    }
}

void check_tower_shape(const Perm& s, std::int64_t height, const Rational& eps) {
    RokhlinTower t = build_tower(s, height, eps);
    CellSet covered(s.space().cells());
    for (std::size_t i = 0; i < t.levels.size(); ++i) {
        expect(!t.levels[i].intersects(covered), "tower levels overlap");
        covered = covered | t.levels[i];
        if (i > 0)
            expect(t.levels[i] == s.image(t.levels[i - 1]),
                   "level i is not the image of level i-1");
    }
    expect(t.coverage > Rational(1) - eps, "coverage must exceed 1 - eps");
    expect(t.coverage == s.space().mass(covered.count()), "coverage mismatch");
    expect(t.residual == covered.complement(), "residual mismatch");
}

void criterion_rokhlin() {
    SplitMix64 rng(2028);
    // every cycle type of every power-of-two space through 16, as the
    // canonical concatenation and as a seeded relabeling of it
    for (std::uint32_t nx : {2u, 4u, 8u, 16u}) {
        CellSpace space(nx);
        for (std::int64_t height = 1; height <= 4; ++height)
            for (Rational eps : {Rational(1, 2), Rational(1, 4)}) {
                // min cycle >= height/eps keeps the residual under eps
                std::uint32_t minpart = (std::uint32_t)(Rational(height) / eps).ceil();
                std::vector<std::vector<std::uint32_t>> types;
                std::vector<std::uint32_t> cur;
                partitions_into(nx, minpart, cur, types);
                for (const auto& type : types) {
                    Perm s = Perm::concat_cycles(space, type);
                    check_tower_shape(s, height, eps);
                    Perm g = random_perm(space, rng);
                    check_tower_shape(compose(compose(g, s), g.inverse()), height, eps);
                }
            }
    }
    // pinned instance: 8-cycle, height 3, eps 1/2 covers exactly 3/4
    RokhlinTower t = build_tower(Perm::full_cycle(CellSpace(8)), 3, Rational(1, 2));
    expect(t.coverage == Rational(3, 4), "8-cycle/N=3 coverage must be exactly 3/4");
}

// --- criterion 4: Lemma 1 discrepancy bound eps + 1/N --------------------

void criterion_lemma1() {
    CellSpace s16(16);
    SplitMix64 rng(2027);
    for (int trial = 0; trial < 100; ++trial) {
        // towers need min cycle >= N/eps: 6 for (3, 1/2), 16 for (4, 1/4)
        bool tall = trial % 2;
        std::int64_t height = tall ? 4 : 3;
        Rational eps = tall ? Rational(1, 4) : Rational(1, 2);
        Perm base = random_aperiodic_perm(s16, tall ? 16 : 8, rng);

        FiberConjugator j = random_conjugator(s16, s16, rng);
        SkewProduct r = conjugate(SkewProduct::trivial(base, s16), j);

        RokhlinTower tower = build_tower(base, height, eps);
        auto [jt, disc] = trivialize_on_tower(r, tower);
        expect(disc <= eps + Rational(1, height),
               "trivialization discrepancy exceeds eps + 1/N");
        expect(disc == product_uniform_distance(conjugate(r, jt),
                                                SkewProduct::trivial(base, s16)),
               "reported discrepancy must equal the measured one");
    }
}

// --- criterion 5: certified recurrence for every simple cocycle ----------

void verify_certificate(const Perm& s, const SimplePartition& part,
                        const SkewProduct& r, const RecurrenceCertificate& cert,
                        std::int64_t floor, const CellSet* subset) {
    expect(cert.return_time > floor, "certificate time must exceed the floor");
    expect(cert.return_time <= floor + (std::int64_t)s.space().cells(),
           "certificate time must land within one full period of the floor");
    expect(!cert.witness.empty(), "certificate witness must be nonempty");
    expect(cert.block < part.block_count(), "certificate block out of range");
    expect(cert.witness.is_subset_of(part.block(cert.block)),
           "witness must sit inside its block");
    if (subset)
        expect(cert.witness.is_subset_of(*subset), "witness must sit inside the subset");
    for (std::uint32_t x : cert.witness.to_list()) {
        std::uint32_t sx = x;
        for (std::int64_t i = 0; i < cert.return_time; ++i) sx = s(sx);
        expect(part.block(cert.block).contains(sx), "witness must return to its block");
        expect(cocycle(r, x, cert.return_time).is_identity(),
               "cocycle must be the identity on the witness");
    }
}

void criterion_lemma3() {
    SplitMix64 rng(2030);
    for (std::uint32_t n : {2u, 4u, 8u, 16u}) {
        CellSpace space(n);
        std::vector<Perm> bases{Perm::full_cycle(space),
                                Perm::concat_cycles(space, {n / 2, n / 2}),
                                random_aperiodic_perm(space, std::max(2u, n / 2), rng)};

        std::vector<SimplePartition> partitions;
        // one block
        partitions.emplace_back(std::vector<CellSet>{CellSet::all(n)},
                                std::vector<Perm>{Perm::rotation(space, 1)});
        // halves
        if (n >= 4)
            partitions.emplace_back(
                std::vector<CellSet>{CellSet::interval(n, 0, n / 2),
                                     CellSet::interval(n, n / 2, n)},
                std::vector<Perm>{Perm::identity(space),
                                  Perm::transposition(space, 0, 1)});
        // singletons
        {
            std::vector<CellSet> blocks;
            std::vector<Perm> perms;
            for (std::uint32_t i = 0; i < n; ++i) {
                blocks.push_back(CellSet::of(n, std::vector<std::uint32_t>{i}));
                perms.push_back(Perm::rotation(space, i % n));
            }
            partitions.emplace_back(std::move(blocks), std::move(perms));
        }
        // seeded random three-block partition
        if (n >= 4) {
            std::vector<CellSet> blocks(3, CellSet(n));
            for (std::uint32_t x = 0; x < n; ++x)
                blocks[x < 3 ? x : (std::uint32_t)rng.below(3)].insert(x);
            std::vector<Perm> perms;
            for (int k = 0; k < 3; ++k) perms.push_back(random_perm(space, rng));
            partitions.emplace_back(std::move(blocks), std::move(perms));
        }

        for (const Perm& s : bases)
            for (const SimplePartition& part : partitions) {
                SkewProduct r = simple_cocycle(s, part);
                DyadicFamily family(space);
                for (std::int64_t floor = 1; floor <= 32; ++floor) {
                    RecurrenceCertificate cert = certify_recurrence(s, part, floor);
                    verify_certificate(s, part, r, cert, floor, nullptr);
                    Rational witness_mass((std::int64_t)cert.witness.count(),
                                          (std::int64_t)n);
                    for (std::int64_t m : {1, 10, 100}) {
                        auto rep = recurrence_set(r, m, cert.return_time,
                                                  part.block(cert.block), family);
                        expect(rep.measure >= witness_mass,
                               "mu(D(m,n,R,B_k)) must be at least |W|/N_X");
                    }
                }
            }
    }
}

// --- criterion 6: recurrentize within delta plus a relative certificate --

void criterion_density() {
    CellSpace s16(16);
    SplitMix64 rng(2029);
    for (int trial = 0; trial < 50; ++trial) {
        Perm base = random_aperiodic_perm(s16, 8, rng);
        SkewProduct r(base, random_fibers(s16, s16, rng));
        // measure >= 1/4 means at least 4 of the 16 cells
        CellSet subset = random_subset(16, 4 + (std::uint32_t)rng.below(13), rng);

        for (Rational delta : {Rational(1, 2), Rational(1, 4)}) {
            RecurrentizeResult out = recurrentize(r, delta, 5);
            expect(out.distance < delta, "recurrentize distance must be under delta");
            expect(out.distance == product_uniform_distance(r, out.result),
                   "reported distance must equal the measured one");
            expect(out.result == simple_cocycle(base, out.partition),
                   "result must be the simple cocycle of its partition");
            verify_certificate(base, out.partition, out.result, out.certificate, 5,
                               nullptr);

            RecurrenceCertificate rel = certify_recurrence(base, out.partition, 5, subset);
            verify_certificate(base, out.partition, out.result, rel, 5, &subset);
        }
    }
}

// --- criterion 7: CLI byte determinism -----------------------------------

struct CliRun {
    int code;
    std::string out;
};

std::string g_cli, g_data, g_scratch;

CliRun run_cli(const std::string& args) {
    static int counter = 0;
    std::string capture = g_scratch + "/run" + std::to_string(++counter) + ".out";
    std::string cmd = "\"" + g_cli + "\" " + args + " > " + capture + " 2> " + capture + ".err";
    int status = std::system(cmd.c_str());
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return CliRun{code, read_text_file(capture)};
}

void criterion_cli_determinism() {
    expect(!g_cli.empty() && !g_data.empty(),
           "usage: acceptance <skewrec-cli> <fixture-dir>");
    expect(std::filesystem::exists(g_cli), "CLI binary not found: " + g_cli);
    std::filesystem::remove_all(g_scratch);
    std::filesystem::create_directories(g_scratch);

    auto fixture = [&](const char* name) { return g_data + "/" + name; };
    std::vector<std::string> invocations{
        "metric " + fixture("id2.json") + " " + fixture("swap2.json"),
        "tower " + fixture("cycle8.json") + " -N 3 -e 1/2",
        "profile " + fixture("example4.cfg"),
        "profile " + fixture("random16.cfg"),
        "witness " + fixture("example4.cfg") + " -m 10 -f 5 -H 16",
        "recurrentize " + fixture("random16.cfg") + " -d 1/2 -f 5",
        "certify " + fixture("cycle4.json") + " " + fixture("part4.json") + " -f 5 -A 3",
    };
    for (const auto& args : invocations) {
        CliRun first = run_cli(args);
        CliRun second = run_cli(args);
        expect(first.code == 0, "CLI exited nonzero: " + args);
        expect(second.code == 0, "CLI exited nonzero on rerun: " + args);
        expect(!first.out.empty(), "CLI produced no output: " + args);
        expect(first.out == second.out, "outputs differ between runs: " + args);
    }

    // plots go through a file; those bytes must agree as well
    std::string a = g_scratch + "/plot_a.svg", b = g_scratch + "/plot_b.svg";
    CliRun pa = run_cli("profile " + fixture("example4.cfg") + " --plot " + a);
    CliRun pb = run_cli("profile " + fixture("example4.cfg") + " --plot " + b);
    expect(pa.code == 0 && pb.code == 0, "plot invocation failed");
    expect(read_text_file(a) == read_text_file(b), "plot SVGs differ between runs");
}

// --- driver ---------------------------------------------------------------

struct Criterion {
    const char* name;
    void (*fn)();
};

} // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli = argv[1];
    if (argc > 2) g_data = argv[2];
    g_scratch = "acceptance_scratch";

    const Criterion criteria[] = {
        {"metric axioms and domination", criterion_metric},
        {"cocycle composition law", criterion_cocycle_law},
        {"Rokhlin tower grid", criterion_rokhlin},
        {"trivialization bound", criterion_lemma1},
        {"simple-cocycle certificates", criterion_lemma3},
        {"recurrentize density", criterion_density},
        {"CLI determinism", criterion_cli_determinism},
    };

    bool all_ok = true;
    for (std::size_t i = 0; i < std::size(criteria); ++i) {
        auto start = std::chrono::steady_clock::now();
        std::string failure;
        try {
            criteria[i].fn();
        } catch (const std::exception& e) {
            failure = e.what();
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        if (failure.empty()) {
            std::printf("criterion %zu (%s): PASS [%lld ms]\n", i + 1, criteria[i].name,
                        (long long)ms);
        } else {
            all_ok = false;
            std::printf("criterion %zu (%s): FAIL [%lld ms] %s\n", i + 1,
                        criteria[i].name, (long long)ms, failure.c_str());
        }
    }
    return all_ok ? 0 : 1;
}
