#include "tomo/experiment.hpp"

#include <chrono>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "tomo/error.hpp"
#include "tomo/generate.hpp"
#include "tomo/newick.hpp"
#include "tomo/oracle.hpp"
#include "tomo/random.hpp"
#include "tomo/stats.hpp"

namespace tomo {

namespace {

using nlohmann::json;

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t s = seed;
    splitmix64(s);
    s ^= a * 0x9e3779b97f4a7c15ULL;
    splitmix64(s);
    s ^= b * 0xc2b2ae3d27d4eb4fULL;
    splitmix64(s);
    s ^= c * 0x165667b19e3779f9ULL;
    return splitmix64(s);
}

DelayDistribution parse_dist(const json& j) {
    std::string type = j.at("type").get<std::string>();
    double shift = j.value("shift", 0.0);
    if (type == "uniform") return BoundedUniform{j.at("theta").get<double>(), shift};
    if (type == "discrete")
        return BoundedDiscrete{j.at("probs").get<std::vector<double>>(), shift};
    throw ValidationError("unknown distribution type '" + type + "'");
}

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary);
    if (!os) throw ValidationError("cannot write " + p.string());
    os << content;
}

json report_header(const ExperimentConfig& cfg) {
    json j;
    j["version"] = kArtifactVersion;
    j["config_hash"] = cfg.config_hash;
    j["seed"] = cfg.seed;
    return j;
}

} // namespace

RoutingTree ExperimentConfig::build_tree() const {
    if (newick_file) {
        std::ifstream is(base_dir / *newick_file);
        if (!is) throw ValidationError("cannot open tree file " + *newick_file);
        std::stringstream buf;
        buf << is.rdbuf();
        return from_newick(buf.str()).tree;
    }
    if (receivers <= 0) throw ValidationError("config has no tree source");
    return make_tree(shape, receivers, tree_seed);
}

DelayModel ExperimentConfig::build_model(const RoutingTree& tree) const {
    std::map<Edge, DelayDistribution> dists;
    for (const Edge& e : tree.edges()) {
        auto po = per_edge.find({e.u, e.v});
        if (po == per_edge.end()) po = per_edge.find({e.v, e.u});
        if (po != per_edge.end()) {
            dists.emplace(e, po->second);
        } else if (default_dist) {
            dists.emplace(e, *default_dist);
        } else {
            throw ValidationError("no distribution configured for edge (" +
                                  std::to_string(e.u) + "," + std::to_string(e.v) + ")");
        }
    }
    return DelayModel(tree, std::move(dists), bound, variance_floor);
}

DmrParams ExperimentConfig::dmr_params(const RoutingTree& tree, const DelayModel* model) const {
    double f, g;
    if (dmr_f && dmr_g) {
        f = *dmr_f;
        g = *dmr_g;
    } else if (model) {
        f = std::numeric_limits<double>::infinity();
        g = 0;
        for (const auto& [e, d] : model->dists()) {
            f = std::min(f, d.variance());
            g = std::max(g, d.variance());
        }
        if (!(g > f)) { // uniform weights: widen so 0 < f < g holds strictly
            f *= 0.95;
            g = g * 1.05 + 1e-12;
        }
    } else {
        throw ValidationError("dmr parameters need f and g (config or model)");
    }
    int depth = dmr_depth_bound ? *dmr_depth_bound : tree.chord_depth();
    return DmrParams::defaults(f, g, depth);
}

ExperimentConfig load_config(const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is) throw ValidationError("cannot open config " + file.string());
    std::stringstream buf;
    buf << is.rdbuf();
    json j;
    try {
        j = json::parse(buf.str());
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad config JSON: ") + e.what());
    }

    ExperimentConfig cfg;
    cfg.base_dir = file.has_parent_path() ? file.parent_path() : ".";
    cfg.config_hash = fnv1a(buf.str());
    try {
        if (j.contains("tree")) {
            const json& t = j["tree"];
            if (t.contains("newick_file"))
                cfg.newick_file = t["newick_file"].get<std::string>();
            cfg.shape = t.value("shape", std::string("random"));
            cfg.receivers = t.value("receivers", 0);
            cfg.tree_seed = t.value("tree_seed", 0ULL);
        }
        if (j.contains("model")) {
            const json& m = j["model"];
            cfg.bound = m.value("bound", 1.0);
            cfg.variance_floor = m.value("variance_floor", 0.0);
            if (m.contains("dist")) cfg.default_dist = parse_dist(m["dist"]);
            if (m.contains("per_edge"))
                for (const json& rec : m["per_edge"])
                    cfg.per_edge.emplace(
                        std::pair{rec.at("parent").get<int>(), rec.at("child").get<int>()},
                        parse_dist(rec.at("dist")));
            if (m.contains("uniform_family"))
                cfg.uniform_family =
                    UniformFamilySpec{m["uniform_family"].at("theta_min").get<double>(),
                                      m["uniform_family"].at("theta_max").get<double>()};
            if (m.contains("discrete_family"))
                cfg.discrete_family =
                    DiscreteFamilySpec{m["discrete_family"].at("max_value").get<int>(),
                                       m["discrete_family"].at("theta0_min").get<double>()};
        }
        cfg.k = j.value("k", 0ULL);
        cfg.seed = j.value("seed", 0ULL);
        cfg.J = j.value("J", 2);
        if (j.contains("dmr")) {
            const json& d = j["dmr"];
            if (d.contains("f")) cfg.dmr_f = d["f"].get<double>();
            if (d.contains("g")) cfg.dmr_g = d["g"].get<double>();
            if (d.contains("depth_bound")) cfg.dmr_depth_bound = d["depth_bound"].get<int>();
        }
        if (j.contains("grid")) {
            cfg.grid_n = j["grid"].value("n", std::vector<int>{});
            cfg.grid_k = j["grid"].value("k", std::vector<std::size_t>{});
            cfg.sweep_seeds = j["grid"].value("seeds", 1);
        }
        cfg.out_dir = cfg.base_dir / j.value("out", std::string("out"));
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad config field: ") + e.what());
    }
    return cfg;
}

CommandResult cmd_simulate(const ExperimentConfig& cfg) {
    if (cfg.k < 2) throw ValidationError("simulate needs k >= 2");
    RoutingTree tree = cfg.build_tree();
    DelayModel model = cfg.build_model(tree);
    SampleMatrix m = sample_delays(model, cfg.k, cfg.seed);

    std::ostringstream csv;
    write_samples_csv(m, csv);
    write_file(cfg.out_dir / "samples.csv", csv.str());

    json meta = report_header(cfg);
    meta["k"] = cfg.k;
    meta["M"] = model.bound();
    meta["newick"] = to_newick(tree);
    write_file(cfg.out_dir / "samples.meta.json", meta.dump(2) + "\n");
    return {0, "wrote samples.csv"};
}

CommandResult cmd_reconstruct(const ExperimentConfig& cfg, const std::string& samples_csv,
                              bool exact_metric) {
    RoutingTree reference = cfg.build_tree();
    DelayModel model = cfg.build_model(reference);
    DmrParams params = cfg.dmr_params(reference, &model);

    DistortedMetric metric(reference.leaves(), params.tau, params.m_tilde);
    if (exact_metric) {
        std::map<Edge, double> var_weights;
        for (const auto& [e, d] : model.dists()) var_weights[e] = d.variance();
        AdditiveFunction w = exact_tree_metric(reference, var_weights);
        const auto& ls = reference.leaves();
        for (std::size_t i = 0; i < ls.size(); ++i)
            for (std::size_t j = i + 1; j < ls.size(); ++j)
                metric.set(ls[i], ls[j], w.at(ls[i], ls[j]));
    } else {
        SampleMatrix m;
        if (samples_csv.empty()) {
            if (cfg.k < 2) throw ValidationError("reconstruct needs samples or k >= 2");
            m = sample_delays(model, cfg.k, cfg.seed);
        } else {
            std::ifstream is(cfg.base_dir / samples_csv);
            if (!is) throw ValidationError("cannot open samples " + samples_csv);
            m = read_samples_csv(is);
        }
        metric = estimated_variance_metric(m, params.tau, params.m_tilde);
    }

    json rep = report_header(cfg);
    ProximityGraph graph = proximity_graph(metric, params);
    rep["pairs_processed"] = graph.edges.size();
    try {
        if (graph.leaves.size() > 1 && graph.edges.empty())
            throw ReconstructionError("proximity graph has no edges");
        std::set<Bipartition> parts = dmr_bipartitions(metric, params);
        rep["bipartitions_found"] = parts.size();
        RoutingTree result = tree_from_bipartitions(metric.leaves(), parts);
        bool match = result.same_topology(reference);
        rep["success"] = match;
        rep["failure_mode"] = match ? "" : "wrong_tree";
        write_file(cfg.out_dir / "tree.nwk", to_newick(result) + "\n");
        write_file(cfg.out_dir / "report.json", rep.dump(2) + "\n");
        return {0, match ? "reconstructed tree matches reference"
                         : "reconstructed tree differs from reference"};
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        rep["success"] = false;
        rep["failure_mode"] = "inconsistency";
        rep["error"] = e.what();
        write_file(cfg.out_dir / "report.json", rep.dump(2) + "\n");
        return {3, std::string("reconstruction failed: ") + e.what()};
    }
}

CommandResult cmd_infer_moments(const ExperimentConfig& cfg, const std::string& samples_csv,
                                const std::string& mode) {
    if (mode != "sym" && mode != "general")
        throw ValidationError("mode must be 'sym' or 'general'");
    RoutingTree tree = cfg.build_tree();
    SampleMatrix m;
    if (samples_csv.empty()) {
        DelayModel model = cfg.build_model(tree);
        if (cfg.k < 2) throw ValidationError("infer-moments needs samples or k >= 2");
        m = sample_delays(model, cfg.k, cfg.seed);
    } else {
        std::ifstream is(cfg.base_dir / samples_csv);
        if (!is) throw ValidationError("cannot open samples " + samples_csv);
        m = read_samples_csv(is);
    }
    for (int l : tree.leaves())
        m.col_of(l); // mismatched leaf sets -> ValidationError

    MomentTable table = (mode == "sym") ? sym_er(m, tree, cfg.J) : er(m, tree, cfg.J);
    std::ostringstream os;
    write_moment_table_json(table, tree, os);
    write_file(cfg.out_dir / "moments.json", os.str() + "\n");

    // Optional family inversion when the model declares one.
    if (cfg.uniform_family || cfg.discrete_family) {
        std::optional<DelayModel> model; // mu comes from the declared model
        if (cfg.discrete_family) model = cfg.build_model(tree);
        json fams = report_header(cfg);
        json per_edge = json::array();
        for (const auto& [e, row] : table.entries()) {
            json rec;
            rec["parent"] = tree.parent(e.u) == e.v ? e.v : e.u;
            rec["child"] = tree.parent(e.u) == e.v ? e.u : e.v;
            if (cfg.uniform_family) {
                rec["theta_hat"] = psi_uniform(row[2], *cfg.uniform_family);
            }
            if (cfg.discrete_family) {
                const int M = cfg.discrete_family->max_value;
                if (cfg.J < 2 * M)
                    throw ValidationError("discrete inversion needs J >= 2M");
                double mean = model->dist(e).mean();
                if (std::abs(mean - std::round(mean)) > 1e-9)
                    throw ValidationError("discrete family inversion needs an integer mean");
                std::vector<double> ws(row.begin() + 2, row.begin() + 2 * M + 1);
                DiscreteInversion inv =
                    psi_discrete(ws, *cfg.discrete_family, static_cast<int>(std::round(mean)));
                rec["probs_hat"] = inv.probs;
            }
            per_edge.push_back(rec);
        }
        fams["edges"] = per_edge;
        write_file(cfg.out_dir / "families.json", fams.dump(2) + "\n");
    }
    return {0, "wrote moments.json"};
}

CommandResult cmd_oracle_check(const ExperimentConfig& cfg, double tolerance) {
    RoutingTree tree = cfg.build_tree();
    DelayModel model = cfg.build_model(tree);
    IdentityReport idrep = check_lemma_identities(model, cfg.J);

    // Four-point round trip on the exact moment functions.
    double afi_residual = 0;
    for (int j = 2; j <= cfg.J; ++j) {
        std::map<Edge, double> wj;
        for (const auto& [e, d] : model.dists())
            wj[e] = static_cast<double>(exact_central_moment(d, j));
        AdditiveFunction W = exact_tree_metric(tree, wj);
        for (const auto& [e, w] : afi(tree, W))
            afi_residual = std::max(afi_residual, std::abs(w - wj[e]));
    }

    // Family inverter round trips on the declared members.
    double family_residual = 0;
    for (const auto& [e, d] : model.dists()) {
        if (d.is_uniform() && cfg.uniform_family) {
            double theta = psi_uniform(d.central_moment(2), *cfg.uniform_family);
            family_residual = std::max(family_residual, std::abs(theta - d.uniform().theta));
        } else if (!d.is_uniform() && cfg.discrete_family) {
            const auto& spec = *cfg.discrete_family;
            if (!discrete_family_member(d.discrete().probs, spec))
                throw ValidationError("declared discrete distribution is outside the family");
            double mean = d.mean() - d.discrete().shift;
            std::vector<double> ws;
            for (int j = 2; j <= 2 * spec.max_value; ++j) ws.push_back(d.central_moment(j));
            DiscreteInversion inv =
                psi_discrete(ws, spec, static_cast<int>(std::round(mean)));
            for (std::size_t i = 0; i < inv.probs.size(); ++i)
                family_residual =
                    std::max(family_residual, std::abs(inv.probs[i] - d.discrete().probs[i]));
        }
    }

    json rep = report_header(cfg);
    rep["identities"] = json::array({
        json{{"identity", "moment-recursion-even"},
             {"max_residual", idrep.max_even_residual},
             {"instances", idrep.pairs_checked}},
        json{{"identity", "moment-recursion-odd"},
             {"max_residual", idrep.max_odd_residual},
             {"instances", idrep.triples_checked}},
        json{{"identity", "four-point-round-trip"},
             {"max_residual", afi_residual},
             {"instances", static_cast<int>(model.dists().size()) * (cfg.J - 1)}},
        json{{"identity", "family-round-trip"},
             {"max_residual", family_residual},
             {"instances", static_cast<int>(model.dists().size())}},
    });
    double worst = std::max({idrep.max_even_residual, idrep.max_odd_residual, afi_residual,
                             family_residual});
    rep["max_residual"] = worst;
    rep["tolerance"] = tolerance;
    write_file(cfg.out_dir / "oracle_report.json", rep.dump(2) + "\n");
    if (worst > tolerance)
        return {4, "oracle residual " + std::to_string(worst) + " exceeds tolerance"};
    return {0, "all oracle identities hold"};
}

CommandResult cmd_sweep(const ExperimentConfig& cfg, int jobs) {
    if (cfg.grid_n.empty() || cfg.grid_k.empty())
        throw ValidationError("sweep needs grid.n and grid.k");
    if (cfg.sweep_seeds < 1) throw ValidationError("sweep needs seeds >= 1");
    if (jobs < 1) jobs = 1;

    struct Cell {
        int n;
        std::size_t k;
    };
    std::vector<Cell> cells;
    for (int n : cfg.grid_n)
        for (std::size_t k : cfg.grid_k) cells.push_back({n, k});

    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream csv(cfg.out_dir / "sweep.csv", std::ios::binary);
    csv.precision(17);
    csv << "n,k,success_rate,max_moment_error,wallclock_s\n";
    csv.flush();

    std::mutex mu;
    std::map<std::size_t, std::string> done;
    std::size_t cursor = 0;
    std::size_t next = 0;

    auto run_cell = [&](std::size_t ci) {
        const Cell cell = cells[ci];
        auto t0 = std::chrono::steady_clock::now();
        int successes = 0;
        double max_moment_error = 0;
        for (int s = 0; s < cfg.sweep_seeds; ++s) {
            std::uint64_t cell_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(cell.n),
                                               cell.k, static_cast<std::uint64_t>(s));
            RoutingTree tree = make_tree(cfg.shape, cell.n, cell_seed);
            DelayModel model = cfg.build_model(tree);
            SampleMatrix m = sample_delays(model, cell.k, cell_seed);
            DmrParams params = cfg.dmr_params(tree, &model);
            try {
                DistortedMetric metric =
                    estimated_variance_metric(m, params.tau, params.m_tilde);
                RoutingTree result = dmr_reconstruct(metric, params);
                if (result.same_topology(tree)) ++successes;
            } catch (const ReconstructionError&) {
                // counted as a failure
            }
            if (cfg.J >= 2) {
                MomentTable table = er(m, tree, cfg.J);
                for (const auto& [e, row] : table.entries())
                    for (int j = 2; j <= cfg.J; ++j)
                        max_moment_error = std::max(
                            max_moment_error, std::abs(row[j] - model.dist(e).central_moment(j)));
            }
        }
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ostringstream row;
        row.precision(17);
        row << cell.n << ',' << cell.k << ','
            << static_cast<double>(successes) / cfg.sweep_seeds << ',' << max_moment_error << ','
            << wall << '\n';

        std::unique_lock<std::mutex> lock(mu);
        done[ci] = row.str();
        while (done.count(cursor)) {
            csv << done[cursor];
            csv.flush(); // partial results survive an interrupt
            done.erase(cursor);
            ++cursor;
        }
    };

    std::vector<std::thread> pool;
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), cells.size());
    for (std::size_t t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            while (true) {
                std::size_t ci;
                {
                    std::lock_guard<std::mutex> lock(mu);
                    if (next >= cells.size()) return;
                    ci = next++;
                }
                run_cell(ci);
            }
        });
    }
    for (auto& th : pool) th.join();
    return {0, "wrote sweep.csv"};
}

} // namespace tomo
