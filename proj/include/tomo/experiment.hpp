#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "tomo/delay.hpp"
#include "tomo/dmr.hpp"
#include "tomo/families.hpp"
#include "tomo/moments.hpp"
#include "tomo/tree.hpp"

namespace tomo {

inline constexpr const char* kArtifactVersion = "0.1.0";

/// Parsed experiment configuration (JSON file). All paths are resolved
/// relative to the config file's directory.
struct ExperimentConfig {
    std::filesystem::path base_dir;
    std::uint64_t config_hash = 0;

    // tree source: either a Newick file or a generator spec
    std::optional<std::string> newick_file;
    std::string shape = "random";
    int receivers = 0;
    std::uint64_t tree_seed = 0;

    // model
    double bound = 1.0;
    double variance_floor = 0.0;
    std::optional<DelayDistribution> default_dist;
    std::map<std::pair<int, int>, DelayDistribution> per_edge; // (parent, child)
    std::optional<UniformFamilySpec> uniform_family;
    std::optional<DiscreteFamilySpec> discrete_family;

    std::size_t k = 0;
    std::uint64_t seed = 0;
    int J = 2;

    // dmr parameter recipe inputs / overrides
    std::optional<double> dmr_f, dmr_g;
    std::optional<int> dmr_depth_bound;

    // sweep grid
    std::vector<int> grid_n;
    std::vector<std::size_t> grid_k;
    int sweep_seeds = 1;

    std::filesystem::path out_dir;

    RoutingTree build_tree() const;
    DelayModel build_model(const RoutingTree& tree) const;
    /// Recipe parameters: f/g from config or from the model's edge
    /// variances (widened when equal), depth bound from config or the tree.
    DmrParams dmr_params(const RoutingTree& tree, const DelayModel* model) const;
};

ExperimentConfig load_config(const std::filesystem::path& file);

struct CommandResult {
    int exit_code = 0; // 0 ok, 2 validation, 3 reconstruction, 4 oracle residual
    std::string message;
};

/// simulate: samples.csv + samples.meta.json under the output directory.
CommandResult cmd_simulate(const ExperimentConfig& cfg);

/// reconstruct: tree.nwk + report.json. With exact_metric the metric comes
/// from the model's true edge variances instead of samples. `samples_csv`
/// empty means "simulate in memory from the config". When the config
/// supplies the true tree it doubles as the reference for the success flag.
CommandResult cmd_reconstruct(const ExperimentConfig& cfg, const std::string& samples_csv,
                              bool exact_metric);

/// infer-moments: moments.json (+ per-edge family parameter estimates when
/// the config declares a family).
CommandResult cmd_infer_moments(const ExperimentConfig& cfg, const std::string& samples_csv,
                                const std::string& mode);

/// oracle-check: oracle_report.json; exit code 4 when a residual exceeds
/// the tolerance.
CommandResult cmd_oracle_check(const ExperimentConfig& cfg, double tolerance = 1e-9);

/// sweep: sweep.csv with one row per (n, k) cell.
CommandResult cmd_sweep(const ExperimentConfig& cfg, int jobs);

} // namespace tomo
