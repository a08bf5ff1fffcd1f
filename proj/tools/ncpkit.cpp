#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <ncpkit/ncpkit.hpp>

using namespace ncpkit;

namespace {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,
    kBadInput = 3,
    kBadParameter = 4,
    kInfeasible = 5,
};

struct GraphInput {
    std::string path;
    bool lcc = false;
};

struct MethodOptions {
    std::string method = "aclcut";
    std::size_t eps_count = kDefaultGridCount;
    std::size_t alpha_count = kDefaultGridCount;
    std::string eps_list;
    std::string alpha_list;
    double alpha_lazy = 0.001;
    std::string lengths = "inverse_weight";
    double volume_cap = 0.0;
};

struct SamplingOptions {
    std::size_t coverage = 10;
    std::size_t max_seeds = 0;
    bool connected_only = false;
    bool degree_normalized = false;
};

struct Common {
    std::uint64_t rng_seed = 42;
    std::size_t threads = default_thread_count();
    std::string output;
};

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) {
            continue;
        }
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw GraphError("--" + flag + ": '" + item + "' is not a number");
        }
    }
    return out;
}

LengthMode parse_lengths(const std::string& s) {
    if (s == "unit") {
        return LengthMode::unit;
    }
    if (s == "inverse_weight") {
        return LengthMode::inverse_weight;
    }
    throw GraphError("unknown length mode '" + s + "'");
}

Graph load_graph(const GraphInput& in) {
    auto g = read_edge_list(in.path);
    if (in.lcc) {
        return largest_connected_component(g).graph;
    }
    return g;
}

/// Output stream: the named file, or stdout when no path is given.
class Output {
public:
    explicit Output(const std::string& path) : path_(path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) {
                throw ParseError("cannot write '" + path + "'");
            }
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    [[nodiscard]] std::string name() const { return path_.empty() ? "stdout" : path_; }

private:
    std::string path_;
    std::unique_ptr<std::ofstream> file_;
};

std::vector<MethodConfig> method_configs(const Graph& g, const MethodOptions& opt,
                                         std::optional<double>& lambda2_cache) {
    std::vector<Method> methods;
    if (opt.method == "all") {
        methods = {Method::aclcut, Method::movcut, Method::egonet};
    } else {
        methods = {parse_method(opt.method)};
    }
    std::vector<MethodConfig> out;
    for (auto m : methods) {
        MethodConfig cfg;
        cfg.method = m;
        cfg.alpha_lazy = opt.alpha_lazy;
        cfg.lengths = parse_lengths(opt.lengths);
        if (opt.volume_cap > 0.0) {
            cfg.volume_cap = opt.volume_cap;
        }
        if (m == Method::aclcut) {
            cfg.grid = opt.eps_list.empty() ? epsilon_grid(g, opt.eps_count) : parse_list(opt.eps_list, "eps");
        } else if (m == Method::movcut) {
            if (!is_connected(g)) {
                throw GraphError("movcut needs a connected graph; pass --lcc");
            }
            if (!lambda2_cache) {
                lambda2_cache = lambda2(g);
            }
            cfg.grid = opt.alpha_list.empty() ? alpha_grid(*lambda2_cache, opt.alpha_count)
                                              : parse_list(opt.alpha_list, "alpha");
            for (double a : cfg.grid) {
                if (a == 0.0 || !(gamma_from_alpha(a) < *lambda2_cache)) {
                    throw GraphError("alpha " + format_number(a) + " gives gamma at or above lambda_2 = " +
                                     format_number(*lambda2_cache));
                }
            }
        }
        out.push_back(std::move(cfg));
    }
    return out;
}

InternalMode parse_internal(const std::string& s) {
    if (s == "auto") {
        return InternalMode::automatic;
    }
    if (s == "exact") {
        return InternalMode::exact;
    }
    if (s == "spectral") {
        return InternalMode::spectral;
    }
    throw GraphError("unknown internal-conductance mode '" + s + "'");
}

void add_graph_options(CLI::App* cmd, GraphInput& in) {
    cmd->add_option("--input", in.path, "Edge-list file (u v [w] per line)")->required();
    cmd->add_flag("--lcc", in.lcc, "Analyse the largest connected component only");
}

void add_method_options(CLI::App* cmd, MethodOptions& m) {
    cmd->add_option("--method", m.method, "aclcut, movcut, egonet or all")
        ->check(CLI::IsMember({"aclcut", "movcut", "egonet", "all"}));
    cmd->add_option("--eps-count", m.eps_count, "Size of the default epsilon grid")->check(CLI::Range(2, 100000));
    cmd->add_option("--alpha-count", m.alpha_count, "Size of the default alpha grid")->check(CLI::Range(2, 100000));
    cmd->add_option("--eps", m.eps_list, "Explicit comma-separated epsilon values");
    cmd->add_option("--alpha", m.alpha_list, "Explicit comma-separated alpha values");
    cmd->add_option("--alpha-lazy", m.alpha_lazy, "Lazy teleportation constant of the push procedure");
    cmd->add_option("--lengths", m.lengths, "Edge lengths for geodesics: unit or inverse_weight")
        ->check(CLI::IsMember({"unit", "inverse_weight"}));
    cmd->add_option("--volume-cap", m.volume_cap, "Largest sweep-set volume for movcut (0 disables)");
}

void add_sampling_options(CLI::App* cmd, SamplingOptions& s) {
    cmd->add_option("--coverage", s.coverage, "Stop once every node sits in this many best communities");
    cmd->add_option("--max-seeds", s.max_seeds, "Cap on seeds per parameter value (0 = no cap)");
    cmd->add_flag("--connected-only", s.connected_only, "Discard disconnected sweep sets");
    cmd->add_flag("--degree-normalized", s.degree_normalized, "Sweep by score divided by strength");
}

void add_common_options(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.rng_seed, "Random seed");
    cmd->add_option("--threads", c.threads, "Worker threads (default: NCPKIT_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--output", c.output, "Output path (default: stdout)");
}

/// Prepends `key = value` lines of a config file to the arguments that follow
/// the subcommand, so command-line values override them.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (config_path.empty()) {
        return args;
    }
    std::ifstream in(config_path);
    if (!in) {
        throw ParseError("cannot open config '" + config_path + "'");
    }
    std::vector<std::string> injected;
    std::string line;
    std::size_t lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(config_path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        std::replace(key.begin(), key.end(), '_', '-');
        injected.push_back("--" + key + "=" + value);
    }
    // args[0] is the subcommand
    const auto at = args.empty() ? args.begin() : args.begin() + 1;
    args.insert(at, injected.begin(), injected.end());
    return args;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    [[nodiscard]] double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void summary(std::size_t rows, const std::string& where, const Timer& t) {
    std::fprintf(stderr, "wrote %zu rows to %s in %.3f s\n", rows, where.c_str(), t.seconds());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Network community profiles from local graph clustering dynamics"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    GraphInput gin;
    MethodOptions mopt;
    SamplingOptions sopt;
    Common common;
    std::string internal_mode = "auto";
    std::string unfiltered_output;

    auto* stats = app.add_subcommand("stats", "n, m, mean strength, lambda_2, mean clustering coefficient");
    double tol = 1e-8;
    add_graph_options(stats, gin);
    add_common_options(stats, common);
    stats->add_option("--tol", tol, "Eigensolver tolerance");

    auto* ncp = app.add_subcommand("ncp", "Global network community profile");
    auto* crp_cmd = app.add_subcommand("crp", "Conductance-ratio profile of the global NCP witnesses");
    for (auto* cmd : {ncp, crp_cmd}) {
        add_graph_options(cmd, gin);
        add_method_options(cmd, mopt);
        add_sampling_options(cmd, sopt);
        add_common_options(cmd, common);
        cmd->add_option("--internal", internal_mode, "Internal conductance: auto, exact or spectral")
            ->check(CLI::IsMember({"auto", "exact", "spectral"}));
    }
    ncp->add_option("--unfiltered-output", unfiltered_output,
                    "With --connected-only, also write the envelope that admits disconnected sets");

    auto* local = app.add_subcommand("local-ncp", "NCP from a single seed node");
    std::string seed_node;
    add_graph_options(local, gin);
    add_method_options(local, mopt);
    add_common_options(local, common);
    local->add_option("--seed-node", seed_node, "Seed node label")->required();
    local->add_flag("--connected-only", sopt.connected_only, "Discard disconnected sweep sets");
    local->add_flag("--degree-normalized", sopt.degree_normalized, "Sweep by score divided by strength");
    local->add_option("--internal", internal_mode, "Internal conductance: auto, exact or spectral")
        ->check(CLI::IsMember({"auto", "exact", "spectral"}));

    auto* compare = app.add_subcommand("compare-methods", "Spearman comparison of the three ranking vectors");
    std::size_t num_seeds = 50;
    bool global_rank = false;
    std::string cmp_eps = "1e-3,1e-4,1e-5,1e-6";
    std::string cmp_alpha = "0.6,0.7,0.8,0.9,0.99";
    std::string cmp_lengths = "inverse_weight";
    add_graph_options(compare, gin);
    add_common_options(compare, common);
    compare->add_option("--num-seeds", num_seeds, "Seeds sampled without replacement");
    compare->add_option("--eps", cmp_eps, "Comma-separated epsilon values");
    compare->add_option("--alpha", cmp_alpha, "Comma-separated teleportation values");
    compare->add_option("--lengths", cmp_lengths, "Edge lengths for EgoRank")
        ->check(CLI::IsMember({"unit", "inverse_weight"}));
    compare->add_flag("--global-rank", global_rank, "Rank over all nodes before restricting to the push support");

    auto* assoc = app.add_subcommand("association", "Association matrix of sampled best communities");
    std::string order_output;
    std::string reweighted_output;
    bool above_mean = false;
    add_graph_options(assoc, gin);
    add_method_options(assoc, mopt);
    add_sampling_options(assoc, sopt);
    add_common_options(assoc, common);
    assoc->add_option("--order-output", order_output, "Write the dendrogram node order here");
    assoc->add_option("--reweighted-output", reweighted_output, "Write the association-weighted edge list here");
    assoc->add_flag("--above-mean", above_mean, "Keep only reweighted edges above the mean weight");

    auto* lfr = app.add_subcommand("generate-lfr", "LFR benchmark graph with planted communities");
    LfrParams lp;
    std::string preset;
    std::string communities_output;
    std::uint64_t lfr_seed = 1;
    lfr->add_option("--preset", preset, "fig17a, fig17b or fig17c")
        ->check(CLI::IsMember({"fig17a", "fig17b", "fig17c"}));
    auto* o_n = lfr->add_option("--n", lp.n, "Node count");
    auto* o_tau1 = lfr->add_option("--tau1", lp.tau1, "Degree exponent");
    auto* o_tau2 = lfr->add_option("--tau2", lp.tau2, "Community-size exponent");
    auto* o_kmean = lfr->add_option("--k-mean", lp.k_mean, "Mean degree");
    auto* o_kmax = lfr->add_option("--k-max", lp.k_max, "Maximum degree");
    auto* o_cmin = lfr->add_option("--c-min", lp.c_min, "Smallest community");
    auto* o_cmax = lfr->add_option("--c-max", lp.c_max, "Largest community");
    auto* o_mu = lfr->add_option("--mu", lp.mu, "Mixing parameter");
    lfr->add_option("--seed", lfr_seed, "Random seed");
    lfr->add_option("--output", common.output, "Edge-list output (default: stdout)");
    lfr->add_option("--communities", communities_output, "Community file output");

    auto* votes = app.add_subcommand("ingest-votes", "Multilayer vote-similarity graph from a roll-call CSV");
    std::string votes_path;
    double omega = 1.0;
    votes->add_option("--input", votes_path, "Vote CSV (actor_id, layer, one column per bill)")->required();
    votes->add_option("--omega", omega, "Interlayer coupling weight")->check(CLI::NonNegativeNumber);
    votes->add_option("--output", common.output, "Edge-list output (default: stdout)");

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = expand_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    }

    const Timer timer;
    try {
        if (stats->parsed()) {
            const auto g = load_graph(gin);
            const auto s = graph_stats(g, tol);
            Output out(common.output);
            out.stream() << "n,m,mean_strength,lambda2,mean_clustering\n"
                         << s.n << ',' << s.m << ',' << format_number(s.mean_strength) << ','
                         << format_number(s.lambda2) << ',' << format_number(s.mean_clustering) << '\n';
            summary(1, out.name(), timer);
        } else if (ncp->parsed() || crp_cmd->parsed()) {
            const auto g = load_graph(gin);
            std::optional<double> l2;
            const auto configs = method_configs(g, mopt, l2);
            CoverageBudget budget;
            budget.coverage = sopt.coverage;
            budget.max_seeds = sopt.max_seeds;
            budget.rng_seed = common.rng_seed;
            budget.threads = common.threads;
            SweepOptions sw;
            sw.connected_only = sopt.connected_only;
            sw.degree_normalized = sopt.degree_normalized;
            auto result = global_ncp(g, configs, budget, sw, l2);
            annotate_witnesses(g, result.curve, parse_internal(internal_mode));
            Output out(common.output);
            std::size_t rows = 0;
            if (ncp->parsed()) {
                rows = write_ncp_csv(out.stream(), g, result.curve);
                if (!unfiltered_output.empty()) {
                    if (!result.unfiltered) {
                        throw GraphError("--unfiltered-output requires --connected-only");
                    }
                    annotate_witnesses(g, *result.unfiltered, parse_internal(internal_mode));
                    Output extra(unfiltered_output);
                    write_ncp_csv(extra.stream(), g, *result.unfiltered);
                }
            } else {
                rows = write_crp_csv(out.stream(), crp(result.curve));
            }
            summary(rows, out.name(), timer);
        } else if (local->parsed()) {
            const auto g = load_graph(gin);
            const auto seed = g.find_label(seed_node);
            if (!seed) {
                throw GraphError("seed node '" + seed_node + "' is not in the graph");
            }
            std::optional<double> l2;
            const auto configs = method_configs(g, mopt, l2);
            SweepOptions sw;
            sw.connected_only = sopt.connected_only;
            sw.degree_normalized = sopt.degree_normalized;
            NcpCurve curve(g.num_nodes());
            for (const auto& cfg : configs) {
                curve.merge(local_ncp(g, cfg, *seed, sw, l2));
            }
            annotate_witnesses(g, curve, parse_internal(internal_mode));
            Output out(common.output);
            summary(write_ncp_csv(out.stream(), g, curve), out.name(), timer);
        } else if (compare->parsed()) {
            const auto g = load_graph(gin);
            const auto seeds = sample_seeds(g.num_nodes(), num_seeds, common.rng_seed);
            CompareOptions copt;
            copt.rerank_within_support = !global_rank;
            copt.lengths = parse_lengths(cmp_lengths);
            copt.threads = common.threads;
            const auto eps = parse_list(cmp_eps, "eps");
            const auto alphas = parse_list(cmp_alpha, "alpha");
            const auto grid = compare_methods(g, seeds, eps, alphas, copt);
            Output out(common.output);
            auto& os = out.stream();
            os << "epsilon,alpha,pair,stat,value,n_seeds_valid\n";
            std::size_t rows = 0;
            for (const auto& cell : grid.cells) {
                for (auto p : kMethodPairs) {
                    const auto s = cell.summary(p);
                    const std::pair<const char*, double> stats_row[] = {{"max", s.max}, {"mean", s.mean}, {"min", s.min}};
                    for (const auto& [name, value] : stats_row) {
                        os << format_number(cell.epsilon) << ',' << format_number(cell.alpha) << ',' << pair_name(p)
                           << ',' << name << ',' << (cell.skipped ? std::string("skipped") : format_number(value))
                           << ',' << s.valid << '\n';
                        ++rows;
                    }
                }
            }
            summary(rows, out.name(), timer);
        } else if (assoc->parsed()) {
            const auto g = load_graph(gin);
            std::optional<double> l2;
            const auto configs = method_configs(g, mopt, l2);
            CoverageBudget budget;
            budget.coverage = sopt.coverage;
            budget.max_seeds = sopt.max_seeds;
            budget.rng_seed = common.rng_seed;
            budget.threads = common.threads;
            budget.collect_samples = true;
            SweepOptions sw;
            sw.connected_only = sopt.connected_only;
            sw.degree_normalized = sopt.degree_normalized;
            const auto result = global_ncp(g, configs, budget, sw, l2);
            const auto a = AssociationMatrix::accumulate(g.num_nodes(), result.samples);
            Output out(common.output);
            const auto rows = write_association(out.stream(), g, a);
            if (!order_output.empty()) {
                Output o(order_output);
                write_permutation(o.stream(), g, order_nodes(a));
            }
            if (!reweighted_output.empty()) {
                Output o(reweighted_output);
                write_edge_list(o.stream(), reweight_graph(g, a, above_mean));
            }
            summary(rows, out.name(), timer);
        } else if (lfr->parsed()) {
            LfrParams p = preset.empty() ? LfrParams{} : lfr_preset(preset);
            // explicit flags override the preset
            auto take = [](CLI::Option* o, auto& dst, const auto& src) {
                if (o->count() > 0) {
                    dst = src;
                }
            };
            take(o_n, p.n, lp.n);
            take(o_tau1, p.tau1, lp.tau1);
            take(o_tau2, p.tau2, lp.tau2);
            take(o_kmean, p.k_mean, lp.k_mean);
            take(o_kmax, p.k_max, lp.k_max);
            take(o_cmin, p.c_min, lp.c_min);
            take(o_cmax, p.c_max, lp.c_max);
            take(o_mu, p.mu, lp.mu);
            p.rng_seed = lfr_seed;
            const auto result = generate_lfr(p);
            Output out(common.output);
            write_edge_list(out.stream(), result.graph);
            if (!communities_output.empty()) {
                Output c(communities_output);
                write_communities(c.stream(), result.graph, result.partition.community);
            }
            summary(result.graph.num_edges(), out.name(), timer);
        } else if (votes->parsed()) {
            const auto table = read_votes_csv(votes_path);
            const auto g = build_supra(multilayer_from_votes(table, omega));
            Output out(common.output);
            write_edge_list(out.stream(), g);
            summary(g.num_edges(), out.name(), timer);
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const InfeasibleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInfeasible;
    } catch (const GraphError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadParameter;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kOk;
}
