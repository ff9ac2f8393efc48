// skewrec: skew-product recurrence experiments on finite cell spaces.
//
// Subcommands: metric, tower, profile, witness, recurrentize, certify.
// All outputs are deterministic functions of the inputs and the seed.
// SKEWREC_OUT_DIR, when set, is prepended to relative output paths.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "skewrec/config.hpp"
#include "skewrec/csv.hpp"
#include "skewrec/error.hpp"
#include "skewrec/plot.hpp"
#include "skewrec/serialize.hpp"
#include "skewrec/towers.hpp"

namespace {

using namespace skewrec;

std::string out_path(const std::string& path) {
    namespace fs = std::filesystem;
    const char* dir = std::getenv("SKEWREC_OUT_DIR");
    if (!dir || !*dir || fs::path(path).is_absolute()) return path;
    return (fs::path(dir) / path).string();
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty())
        std::cout << text;
    else
        write_text_file(out_path(path), text);
}

Perm load_perm(const std::string& path) {
    return perm_from_json(parse_json(read_text_file(path), "permutation file " + path));
}

int run(int argc, char** argv) {
    CLI::App app{"skew-product recurrence experiments on finite cell spaces"};
    app.require_subcommand(1);

    std::string out, plot_path, perm_a, perm_b, config_path, partition_path;
    std::string eps_text = "1/2", delta_text;
    std::int64_t height = 1, m = 10, floor = 1, horizon = 0;
    std::vector<std::int64_t> subset_cells;

    auto* cmd_metric = app.add_subcommand(
        "metric", "distances (weighted-family and uniform) between two permutations");
    cmd_metric->add_option("perm_a", perm_a, "permutation JSON file")->required();
    cmd_metric->add_option("perm_b", perm_b, "permutation JSON file")->required();
    cmd_metric->add_option("-o,--out", out, "write the report here instead of stdout");

    auto* cmd_tower = app.add_subcommand("tower", "build a Rokhlin tower over a permutation");
    cmd_tower->add_option("perm", perm_a, "permutation JSON file")->required();
    cmd_tower->add_option("-N,--height", height, "tower height")->required();
    cmd_tower->add_option("-e,--eps", eps_text, "residual bound, a rational like 1/4");
    cmd_tower->add_option("-o,--out", out, "write the tower JSON here instead of stdout");

    auto* cmd_profile = app.add_subcommand(
        "profile", "recurrence-set measures over the config's m list and n range");
    cmd_profile->add_option("config", config_path, "experiment config file")->required();
    cmd_profile->add_option("-o,--out", out, "write the CSV here instead of stdout");
    cmd_profile->add_option("--plot", plot_path, "also render the CSV as an SVG line plot");

    auto* cmd_witness = app.add_subcommand(
        "witness", "first n past the floor where the recurrence set has positive measure");
    cmd_witness->add_option("config", config_path, "experiment config file")->required();
    cmd_witness->add_option("-m,--m", m, "precision parameter (threshold 1/m)")->required();
    cmd_witness->add_option("-f,--floor", floor, "search strictly above this n")->required();
    cmd_witness->add_option("-H,--horizon", horizon, "search up to this n inclusive")->required();
    cmd_witness->add_option("-o,--out", out, "write the report here instead of stdout");

    auto* cmd_rec = app.add_subcommand(
        "recurrentize", "replace the extension by a nearby certified-recurrent one");
    cmd_rec->add_option("config", config_path, "experiment config file")->required();
    cmd_rec->add_option("-d,--delta", delta_text, "distance budget, a rational in (0,1)")
        ->required();
    cmd_rec->add_option("-f,--floor", floor, "certificate must use n above this floor");
    cmd_rec->add_option("-o,--out", out, "write the report here instead of stdout");

    auto* cmd_certify = app.add_subcommand(
        "certify", "recurrence certificate for a simple-cocycle extension");
    cmd_certify->add_option("perm", perm_a, "base permutation JSON file")->required();
    cmd_certify->add_option("partition", partition_path, "partition JSON file")->required();
    cmd_certify->add_option("-f,--floor", floor, "certificate must use n above this floor");
    cmd_certify->add_option("-A,--subset", subset_cells,
                            "restrict witnesses to these X cells")->delimiter(',');
    cmd_certify->add_option("-o,--out", out, "write the certificate here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    if (cmd_metric->parsed()) {
        Perm a = load_perm(perm_a);
        Perm b = load_perm(perm_b);
        DyadicFamily family(a.space());
        json report{{"halmos", rational_to_json(halmos_distance(a, b, family))},
                    {"uniform", rational_to_json(uniform_distance(a, b))}};
        emit(to_text(report), out);
    } else if (cmd_tower->parsed()) {
        Perm s = load_perm(perm_a);
        RokhlinTower t = build_tower(s, height, Rational::parse(eps_text));
        emit(to_text(tower_to_json(t)), out);
    } else if (cmd_profile->parsed()) {
        ExperimentConfig cfg = load_config(config_path);
        if (cfg.ms.empty())
            throw parse_error("config field m: required for profile");
        if (!cfg.has_n_range())
            throw parse_error("config field n: required for profile");
        Instance inst = build_instance(cfg);
        auto rows = recurrence_profile_many(inst.r, cfg.ms, cfg.n_lo, cfg.n_hi, inst.subset);
        std::string csv = profile_to_csv(rows);
        emit(csv, out);
        if (!plot_path.empty()) write_text_file(out_path(plot_path), plot_profile_svg(csv));
    } else if (cmd_witness->parsed()) {
        ExperimentConfig cfg = load_config(config_path);
        Instance inst = build_instance(cfg);
        WitnessResult w = find_recurrence_witness(inst.r, m, floor, horizon, inst.subset);
        json report{{"floor", w.floor},
                    {"horizon", w.horizon},
                    {"m", m},
                    {"measure", rational_to_json(w.measure)}};
        if (w.found()) {
            report["n"] = *w.n;
        } else {
            report["n"] = nullptr;
            report["exhausted"] = true;
        }
        emit(to_text(report), out);
    } else if (cmd_rec->parsed()) {
        ExperimentConfig cfg = load_config(config_path);
        Instance inst = build_instance(cfg);
        Rational delta = Rational::parse(delta_text);
        RecurrentizeResult res = recurrentize(inst.r, delta, floor);
        emit(to_text(recurrentize_to_json(res)), out);
        if (!(res.distance < delta)) return 1;  // unreachable by construction; exit contract
    } else if (cmd_certify->parsed()) {
        Perm s = load_perm(perm_a);
        SimplePartition part = partition_from_json(
            parse_json(read_text_file(partition_path), "partition file " + partition_path),
            s.space().cells());
        RecurrenceCertificate cert = [&] {
            if (subset_cells.empty()) return certify_recurrence(s, part, floor);
            CellSet subset(s.space().cells());
            for (auto c : subset_cells) {
                if (c < 0 || c >= s.space().cells())
                    throw argument_error("subset cell " + std::to_string(c) + " out of range");
                subset.insert((std::uint32_t)c);
            }
            return certify_recurrence(s, part, floor, subset);
        }();
        emit(to_text(certificate_to_json(cert, s.space().cells())), out);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const skewrec::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
