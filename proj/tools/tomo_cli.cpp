#include <CLI11.hpp>
#include <iostream>

#include "tomo/error.hpp"
#include "tomo/experiment.hpp"

// Exit codes: 0 success, 2 validation error, 3 reconstruction failure,
// 4 oracle residual exceeded.
int main(int argc, char** argv) {
    CLI::App app{"multicast delay tomography: simulate, reconstruct, infer"};
    app.require_subcommand(1);

    std::string config_path;
    std::string samples_path;
    std::string out_override;
    std::string mode = "general";
    std::uint64_t seed_override = 0;
    bool has_seed_override = false;
    bool exact_metric = false;
    int jobs = 1;
    double tolerance = 1e-9;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config JSON")->required();
        cmd->add_option("--out", out_override, "output directory override");
        cmd->add_option_function<std::uint64_t>(
            "--seed",
            [&](std::uint64_t s) {
                seed_override = s;
                has_seed_override = true;
            },
            "seed override");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "draw leaf-delay samples");
    add_common(simulate);

    CLI::App* reconstruct = app.add_subcommand("reconstruct", "recover the routing tree");
    add_common(reconstruct);
    reconstruct->add_option("--samples", samples_path, "samples CSV (else simulated from config)");
    reconstruct->add_flag("--exact-metric", exact_metric,
                          "use the model's true variance metric instead of samples");

    CLI::App* infer = app.add_subcommand("infer-moments", "estimate per-edge central moments");
    add_common(infer);
    infer->add_option("--samples", samples_path, "samples CSV (else simulated from config)");
    infer->add_option("--mode", mode, "sym | general")->check(CLI::IsMember({"sym", "general"}));

    CLI::App* sweep = app.add_subcommand("sweep", "grid over n and k with repeated seeds");
    add_common(sweep);
    sweep->add_option("--jobs", jobs, "parallel grid cells")->check(CLI::PositiveNumber);

    CLI::App* oracle = app.add_subcommand("oracle-check", "exact identity checks");
    add_common(oracle);
    oracle->add_option("--tolerance", tolerance, "residual tolerance");

    CLI11_PARSE(app, argc, argv);

    try {
        tomo::ExperimentConfig cfg = tomo::load_config(config_path);
        if (has_seed_override) cfg.seed = seed_override;
        if (!out_override.empty()) cfg.out_dir = out_override;

        tomo::CommandResult r;
        if (simulate->parsed()) r = tomo::cmd_simulate(cfg);
        else if (reconstruct->parsed()) r = tomo::cmd_reconstruct(cfg, samples_path, exact_metric);
        else if (infer->parsed()) r = tomo::cmd_infer_moments(cfg, samples_path, mode);
        else if (sweep->parsed()) r = tomo::cmd_sweep(cfg, jobs);
        else r = tomo::cmd_oracle_check(cfg, tolerance);

        if (r.exit_code == 0) std::cout << r.message << "\n";
        else std::cerr << r.message << "\n";
        return r.exit_code;
    } catch (const tomo::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const tomo::ReconstructionError& e) {
        std::cerr << "reconstruction error: " << e.what() << "\n";
        return 3;
    } catch (const tomo::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
