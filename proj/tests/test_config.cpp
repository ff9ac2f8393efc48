#include <doctest.h>

#include <filesystem>
#include <string>
#include <vector>

#include "skewrec/config.hpp"
#include "skewrec/serialize.hpp"
#include "skewrec/towers.hpp"

using namespace skewrec;

namespace {

SkewProduct example4() {
    CellSpace s4(4);
    Perm id = Perm::identity(s4);
    Perm swap01 = Perm::transposition(s4, 0, 1);
    return SkewProduct(Perm::full_cycle(s4), {id, swap01, id, swap01});
}

// scoped scratch directory for configs that reference other files
struct Scratch {
    std::string dir = "config_suite_scratch";
    Scratch() { std::filesystem::create_directories(dir); }
    ~Scratch() { std::filesystem::remove_all(dir); }
    std::string put(const std::string& name, const std::string& text) const {
        write_text_file(dir + "/" + name, text);
        return dir + "/" + name;
    }
};

} // namespace

TEST_SUITE("config") {

TEST_CASE("parse_config reads every key and tolerates comments") {
    std::string text =
        "# experiment description\n"
        "nx = 8\r\n"
        "ny = 4\n"
        "seed = 7   # trailing comment\n"
        "\n"
        "base = cycles: 3, 5\n"
        "extension = simple\n"
        "blocks = 0,1,3 | 2,4,5,6,7\n"
        "block_perms = rot:1 | swap:0,3\n"
        "m = 1, 10, 100\n"
        "n = 1..12\n"
        "subset = 0,1,2\n";
    ExperimentConfig cfg = parse_config(text, "somewhere");
    CHECK(cfg.nx == 8);
    CHECK(cfg.ny == 4);
    REQUIRE(cfg.seed.has_value());
    CHECK(*cfg.seed == 7);
    CHECK(cfg.base_kind == ExperimentConfig::BaseKind::cycles);
    CHECK(cfg.cycle_lengths == std::vector<std::uint32_t>{3, 5});
    CHECK(cfg.ext_kind == ExperimentConfig::ExtKind::simple);
    REQUIRE(cfg.blocks.size() == 2);
    CHECK(cfg.blocks[0] == std::vector<std::uint32_t>{0, 1, 3});
    CHECK(cfg.blocks[1] == std::vector<std::uint32_t>{2, 4, 5, 6, 7});
    CHECK(cfg.block_perm_specs == std::vector<std::string>{"rot:1", "swap:0,3"});
    CHECK(cfg.ms == std::vector<std::int64_t>{1, 10, 100});
    CHECK(cfg.has_n_range());
    CHECK(cfg.n_lo == 1);
    CHECK(cfg.n_hi == 12);
    REQUIRE(cfg.subset_cells.has_value());
    CHECK(*cfg.subset_cells == std::vector<std::uint32_t>{0, 1, 2});
    CHECK(cfg.dir == "somewhere");

    ExperimentConfig bare = parse_config("nx = 4\nny = 4\n", "");
    CHECK(bare.base_kind == ExperimentConfig::BaseKind::cycle);
    CHECK(bare.ext_kind == ExperimentConfig::ExtKind::trivial);
    CHECK(bare.ms.empty());
    CHECK(!bare.has_n_range());
    CHECK(!bare.subset_cells.has_value());
    CHECK(!bare.seed.has_value());

    ExperimentConfig sub = parse_config("nx = 4\nny = 4\nsubset = all\n", "");
    CHECK(!sub.subset_cells.has_value());
}

TEST_CASE("parse_config rejects malformed input with line context") {
    auto thrown = [](const std::string& text) -> std::string {
        try {
            parse_config(text, "");
        } catch (const parse_error& e) {
            return e.what();
        }
        return "";
    };

    CHECK(thrown("nx = 4\nny = 4\nbogus\n").find("line 3") != std::string::npos);
    CHECK(thrown("nx = 4\nwidth = 9\n").find("unknown key 'width'") != std::string::npos);
    CHECK(thrown("nx = 4\nnx = 8\n").find("duplicate key 'nx'") != std::string::npos);
    CHECK(thrown("ny = 4\n").find("nx") != std::string::npos);
    CHECK(thrown("nx = 4\n").find("ny") != std::string::npos);
    CHECK(thrown("nx = 1\nny = 4\n").find("out of range") != std::string::npos);
    CHECK(thrown("nx = 4\nny = 4\nnx =\n") != "");
    CHECK(thrown("nx = 4\nny = 4\nn = 5..2\n").find("lo <= hi") != std::string::npos);
    CHECK(thrown("nx = 4\nny = 4\nn = 5\n").find("lo..hi") != std::string::npos);
    CHECK(thrown("nx = 4\nny = 4\nm = 1,0\n").find("positive") != std::string::npos);
    CHECK(thrown("nx = 4\nny = 4\nm = 1,x\n").find("not an integer") != std::string::npos);
    CHECK(thrown("nx = 4\nny = 4\nbase = bogus\n").find("base") != std::string::npos);
    CHECK(thrown("nx = 4\nny = 4\nbase = cycles:3,0\n").find("zero cycle") !=
          std::string::npos);
    CHECK(thrown("nx = 4\nny = 4\nextension = bogus\n").find("extension") !=
          std::string::npos);

    // seed is demanded exactly when some component draws at random
    CHECK(thrown("nx = 4\nny = 4\nbase = random:2\n").find("seed") != std::string::npos);
    CHECK(thrown("nx = 4\nny = 4\nextension = random\n").find("seed") != std::string::npos);
    CHECK(thrown("nx = 4\nny = 4\nextension = simple\nblocks = 0,1,2,3\n"
                 "block_perms = random\n")
              .find("seed") != std::string::npos);
    parse_config("nx = 4\nny = 4\nseed = 1\nextension = random\n", "");

    // blocks and block_perms belong to extension = simple alone
    CHECK(thrown("nx = 4\nny = 4\nblocks = 0,1,2,3\n").find("extension = simple") !=
          std::string::npos);
    CHECK(thrown("nx = 4\nny = 4\nextension = simple\n").find("blocks") !=
          std::string::npos);
    CHECK(thrown("nx = 4\nny = 4\nextension = simple\nblocks = 0,1 | 2,3\n"
                 "block_perms = id\n")
              .find("one spec per block") != std::string::npos);
}

TEST_CASE("build_instance assembles deterministic skew products") {
    // the running example, spelled as a config
    ExperimentConfig cfg = parse_config(
        "nx = 4\nny = 4\nbase = cycle\nextension = simple\n"
        "blocks = 0,1 | 2,3\nblock_perms = id | swap:0,1\n",
        "");
    Instance inst = build_instance(cfg);
    CHECK(inst.r == example4());
    CHECK(inst.subset == CellSet::all(4));

    // trivial extension
    Instance triv = build_instance(parse_config("nx = 8\nny = 4\n", ""));
    CHECK(triv.r == SkewProduct::trivial(Perm::full_cycle(CellSpace(8)), CellSpace(4)));

    // explicit cycle type and subset
    Instance cyc = build_instance(
        parse_config("nx = 8\nny = 2\nbase = cycles:3,5\nsubset = 1,2\n", ""));
    CHECK(cyc.r.base() == Perm::concat_cycles(CellSpace(8), {3, 5}));
    CHECK(cyc.subset == CellSet::of(8, std::vector<int>{1, 2}));

    // seeded randomness is reproducible and respects the horizon
    std::string rnd = "nx = 16\nny = 4\nseed = 42\nbase = random:8\nextension = random\n";
    Instance a = build_instance(parse_config(rnd, ""));
    Instance b = build_instance(parse_config(rnd, ""));
    CHECK(a.r == b.r);
    CHECK(min_cycle_length(a.r.base()) >= 8);
    Instance c = build_instance(parse_config(
        "nx = 16\nny = 4\nseed = 43\nbase = random:8\nextension = random\n", ""));
    CHECK(c.r != a.r);

    // inline rotation specs normalize modulo the fiber count
    Instance rot = build_instance(parse_config(
        "nx = 4\nny = 4\nextension = simple\nblocks = 0,1,2,3\nblock_perms = rot:-1\n",
        ""));
    CHECK(rot.r == SkewProduct::trivial(Perm::full_cycle(CellSpace(4)), CellSpace(4)));

    // a non-power-of-two cell count survives parsing but not construction
    CHECK_THROWS_AS(build_instance(parse_config("nx = 12\nny = 4\n", "")),
                    skewrec::error);
}

TEST_CASE("file-backed bases and extensions resolve against the config directory") {
    Scratch scratch;
    scratch.put("base.json", to_text(perm_to_json(Perm::full_cycle(CellSpace(8)))));
    scratch.put("skew.json", to_text(skew_to_json(example4())));
    scratch.put("part.json", to_text(partition_to_json(SimplePartition(
                                 {CellSet::of(4, std::vector<int>{0, 1}),
                                  CellSet::of(4, std::vector<int>{2, 3})},
                                 {Perm::identity(CellSpace(4)),
                                  Perm::transposition(CellSpace(4), 0, 1)}))));

    Instance base = build_instance(
        parse_config("nx = 8\nny = 2\nbase = file:base.json\n", scratch.dir));
    CHECK(base.r.base() == Perm::full_cycle(CellSpace(8)));

    Instance whole = build_instance(
        parse_config("nx = 4\nextension = file:skew.json\n", scratch.dir));
    CHECK(whole.r == example4());

    Instance part = build_instance(parse_config(
        "nx = 4\nny = 4\nextension = partition:part.json\n", scratch.dir));
    CHECK(part.r == example4());

    // load_config pins the directory from the path itself
    std::string cfg_path =
        scratch.put("run.cfg", "nx = 4\nextension = file:skew.json\nm = 10\nn = 1..4\n");
    Instance loaded = build_instance(load_config(cfg_path));
    CHECK(loaded.r == example4());

    // declared sizes must match the file contents
    CHECK_THROWS_AS(build_instance(parse_config(
                        "nx = 8\nny = 2\nextension = file:skew.json\n", scratch.dir)),
                    parse_error);
    CHECK_THROWS_AS(build_instance(parse_config(
                        "nx = 4\nny = 8\nextension = file:skew.json\n", scratch.dir)),
                    parse_error);
    CHECK_THROWS_AS(build_instance(parse_config(
                        "nx = 4\nny = 2\nbase = file:base.json\n", scratch.dir)),
                    parse_error);
    CHECK_THROWS_AS(build_instance(parse_config(
                        "nx = 4\nny = 4\nextension = partition:missing.json\n", scratch.dir)),
                    parse_error);

    // an extension file brings its own base along
    CHECK_THROWS_AS(parse_config("nx = 4\nbase = cycle\nextension = file:skew.json\n",
                                 scratch.dir),
                    parse_error);
}

} // TEST_SUITE
