// congsieve: discover, certify and filter congruences between weight-2
// newform orbits from line-oriented datasets.

#include <CLI11.hpp>

#include <iostream>

#include "congsieve/commands.hpp"

using congsieve::cli::RunConfig;

int main(int argc, char** argv) {
    CLI::App app{"congruence sieve and visibility filter for weight-2 newform datasets"};
    app.require_subcommand(1);

    RunConfig config;
    std::string sets_arg = "default";
    std::string candidate_file;
    std::string certificate_file;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--dataset", config.dataset_path, "newform dataset file");
        cmd->add_option("--tamagawa", config.tamagawa_path, "Tamagawa side table");
        cmd->add_option("--curves", config.curves_path, "genus-2 curve side table");
        cmd->add_option("--principality", config.principality_path, "principality side table");
        cmd->add_option("--p-min", config.p_min, "smallest residue characteristic");
        cmd->add_option("--p-max", config.p_max, "largest residue characteristic");
        cmd->add_option("--refine-bound", config.refine_bound, "coefficient bound used by refinement");
        cmd->add_option("--sets", sets_arg, "prime-set file, or 'default'");
        cmd->add_option("--out", config.out_dir, "output directory");
        cmd->add_option("--jobs", config.jobs, "worker count");
    };

    CLI::App* cover = app.add_subcommand("cover", "verify pairwise coverage of the prime-set family");
    cover->add_option("--level-max", config.level_max, "largest level to cover");
    add_common(cover);

    CLI::App* sieve = app.add_subcommand("sieve", "hash-sieve the dataset for congruent pairs");
    add_common(sieve);

    CLI::App* certify = app.add_subcommand("certify", "certify candidates against the finite criterion");
    certify->add_option("candidates", candidate_file, "candidate file from sieve")->required();
    add_common(certify);

    CLI::App* match = app.add_subcommand("match", "match genus-2 curves to degree-2 orbits");
    add_common(match);

    CLI::App* visibility = app.add_subcommand("visibility", "run the visibility filter cascade");
    visibility->add_option("certificates", certificate_file, "certificate file from certify")->required();
    add_common(visibility);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sets_arg != "default") config.sets = congsieve::cli::load_prime_sets(sets_arg);
        if (cover->parsed()) return congsieve::cli::cmd_cover(config, std::cout);
        if (sieve->parsed()) return congsieve::cli::cmd_sieve(config);
        if (certify->parsed()) return congsieve::cli::cmd_certify(config, candidate_file);
        if (match->parsed()) return congsieve::cli::cmd_match(config);
        if (visibility->parsed()) return congsieve::cli::cmd_visibility(config, certificate_file);
    } catch (const congsieve::cli::usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const congsieve::store::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
