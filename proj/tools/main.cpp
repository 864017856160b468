#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ranktraffic/analysis.hpp"
#include "ranktraffic/click_models.hpp"
#include "ranktraffic/csv.hpp"
#include "ranktraffic/experiment.hpp"
#include "ranktraffic/graph.hpp"
#include "ranktraffic/hit_sim.hpp"
#include "ranktraffic/pagerank.hpp"
#include "ranktraffic/ranking.hpp"
#include "ranktraffic/version.hpp"

namespace {

using namespace ranktraffic;

void write_traffic_vector(const std::vector<double>& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "node,t\n";
    for (std::size_t i = 0; i < t.size(); ++i)
        out << i << "," << format_double(t[i]) << "\n";
}

struct CliArgs {
    // generate-graph
    std::size_t nodes = 100'000;
    std::size_t out_degree = 7;
    double attractiveness = 0.7;
    std::uint64_t seed = 0;
    std::string output;
    // pagerank / rank / baseline
    std::string graph_path;
    std::string scores_path;
    double damping = 0.85;
    double tol = 1e-8;
    std::string model = "surf";
    double lambda = 0.5;
    // simulator
    std::size_t n_pages = 100'000;
    double h = 0.01;
    double alpha = 1.63;
    double beta = 1.1;
    double delta = 1.1;
    double h_min = -1.0;
    double h_max = 0.1;
    std::uint64_t queries = 1'000'000;
    int threads = 1;
    bool no_cap = false;
    bool page_grouped = false;
    int page_size = 10;
    std::size_t display_cap = 1000;
    int bins_per_decade = 10;
    std::string binned_output;
    // collapse / fit
    std::vector<std::string> inputs;
    std::string input;
    std::vector<double> fit_range;
    // run / validate
    std::string config_path;
    int threads_override = 0;
};

SimOptions make_sim_options(const CliArgs& args) {
    SimOptions opt;
    opt.queries = args.queries;
    opt.seed = args.seed;
    opt.threads = args.threads;
    opt.display_cap = args.display_cap;
    opt.cap_enabled = !args.no_cap;
    opt.page_grouped = args.page_grouped;
    opt.page_size = args.page_size;
    return opt;
}

void emit_curve(const TrafficCurve& curve, const CliArgs& args) {
    if (!args.output.empty()) write_traffic_csv(curve, args.output);
    if (!args.binned_output.empty()) {
        std::vector<double> r(curve.t.size());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = static_cast<double>(i + 1);
        write_binned_csv(log_bin(r, curve.t, args.bins_per_decade),
                         args.binned_output);
    }
    if (args.output.empty() && args.binned_output.empty()) {
        std::cout << "R,t\n";
        for (std::size_t i = 0; i < curve.t.size(); ++i)
            std::cout << (i + 1) << "," << format_double(curve.t[i]) << "\n";
    }
}

std::vector<double> read_scores_csv(const std::string& path) {
    // per-node CSV as written by the pagerank subcommand: node,k,p
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<double> scores;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        const auto last_comma = line.rfind(',');
        if (last_comma == std::string::npos)
            throw std::runtime_error("malformed scores row in " + path);
        scores.push_back(std::stod(line.substr(last_comma + 1)));
    }
    return scores;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ranktraffic: search-traffic models over ranked indexes"};
    app.set_version_flag("--version", ranktraffic::kVersion);
    app.require_subcommand(1);
    CliArgs args;

    // long-only help on subcommands so that `--h` stays available as an option
    auto add_sub = [&app](const std::string& name, const std::string& desc) {
        auto* sub = app.add_subcommand(name, desc);
        sub->set_help_flag("--help", "print this help message and exit");
        return sub;
    };

    auto* gen = add_sub("generate-graph",
                        "generate a scale-free directed graph");
    gen->add_option("--nodes", args.nodes)->required();
    gen->add_option("--out-degree", args.out_degree);
    gen->add_option("--attractiveness", args.attractiveness);
    gen->add_option("--seed", args.seed)->required();
    gen->add_option("--output", args.output)->required();

    auto* pr = add_sub("pagerank", "compute PageRank of a graph");
    pr->add_option("--graph", args.graph_path)->required();
    pr->add_option("--damping", args.damping);
    pr->add_option("--tol", args.tol);
    pr->add_option("--output", args.output)->required();

    auto* rank = add_sub("rank", "global rank table from scores");
    rank->add_option("--scores", args.scores_path)->required();
    rank->add_option("--beta", args.beta);
    rank->add_option("--output", args.output)->required();

    auto* baseline = add_sub("baseline",
                             "closed-form baseline traffic models");
    baseline->add_option("--model", args.model)
        ->check(CLI::IsMember({"surf", "search", "mixture"}));
    baseline->add_option("--graph", args.graph_path)->required();
    baseline->add_option("--alpha", args.alpha);
    baseline->add_option("--beta", args.beta);
    baseline->add_option("--lambda", args.lambda);
    baseline->add_option("--output", args.output)->required();

    auto* exact = add_sub("exact", "exact click probability curve");
    exact->add_option("--N", args.n_pages)->required();
    exact->add_option("--h", args.h)->required();
    exact->add_option("--alpha", args.alpha);
    exact->add_option("--output", args.output);
    exact->add_option("--binned-output", args.binned_output);
    exact->add_option("--bins-per-decade", args.bins_per_decade);

    auto* simulate = add_sub("simulate",
                             "Monte Carlo fixed-h traffic curve");
    simulate->add_option("--N", args.n_pages)->required();
    simulate->add_option("--h", args.h)->required();
    simulate->add_option("--alpha", args.alpha);
    simulate->add_option("--queries", args.queries)->required();
    simulate->add_option("--seed", args.seed)->required();
    simulate->add_option("--threads", args.threads);
    simulate->add_flag("--no-cap", args.no_cap);
    simulate->add_flag("--page-grouped", args.page_grouped);
    simulate->add_option("--page-size", args.page_size);
    simulate->add_option("--display-cap", args.display_cap);
    simulate->add_option("--output", args.output);
    simulate->add_option("--binned-output", args.binned_output);
    simulate->add_option("--bins-per-decade", args.bins_per_decade);

    auto* convolve = add_sub(
        "convolve", "traffic convolved over the hit-set-size distribution");
    convolve->add_option("--N", args.n_pages)->required();
    convolve->add_option("--delta", args.delta);
    convolve->add_option("--hmin", args.h_min);
    convolve->add_option("--hmax", args.h_max);
    convolve->add_option("--alpha", args.alpha);
    convolve->add_option("--queries", args.queries)->required();
    convolve->add_option("--seed", args.seed)->required();
    convolve->add_option("--threads", args.threads);
    convolve->add_flag("--no-cap", args.no_cap);
    convolve->add_option("--output", args.output);
    convolve->add_option("--binned-output", args.binned_output);
    convolve->add_option("--bins-per-decade", args.bins_per_decade);

    auto* collapse = add_sub("collapse", "scaling collapse of curves");
    auto* fixed_h = collapse->add_subcommand("fixed-h", "rescale to (Rh, t/h)");
    auto* over_n = collapse->add_subcommand("over-n", "rescale abscissa to R/N");
    collapse->require_subcommand(1);
    for (auto* sub : {fixed_h, over_n}) {
        sub->add_option("--inputs", args.inputs)->required()->expected(-1);
        sub->add_option("--output", args.output);
        sub->add_option("--bins-per-decade", args.bins_per_decade);
    }

    auto* fit = add_sub("fit", "power-law fit of a binned CSV curve");
    fit->add_option("--input", args.input)->required();
    fit->add_option("--range", args.fit_range)->required()->expected(2);

    auto* run = add_sub("run", "run a named experiment pipeline");
    run->add_option("--config", args.config_path)->required();
    run->add_option("--threads", args.threads_override);

    auto* validate = add_sub("validate", "check a config file");
    validate->add_option("--config", args.config_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) {
            GeneratorConfig config;
            config.n_nodes = args.nodes;
            config.out_links = args.out_degree;
            config.attractiveness = args.attractiveness;
            config.seed = args.seed;
            const GeneratedGraph result = generate_scale_free_digraph(config);
            save_graph(result.graph, args.output);
            std::cout << "nodes=" << result.graph.node_count()
                      << " edges=" << result.graph.edge_count()
                      << " duplicate_edges_kept=" << result.duplicate_edges_kept
                      << "\n";
        } else if (pr->parsed()) {
            const WebGraph graph = load_graph(args.graph_path);
            const PageRankResult result =
                compute_pagerank(graph, args.damping, args.tol, 1000);
            if (!result.converged) {
                std::cerr << "pagerank did not converge; residual "
                          << result.residual << "\n";
                return 2;
            }
            std::ofstream out(args.output);
            if (!out) throw std::runtime_error("cannot open " + args.output);
            out << "node,k,p\n";
            for (std::size_t i = 0; i < graph.node_count(); ++i)
                out << i << "," << graph.in_degree(i) << ","
                    << format_double(result.scores[i]) << "\n";
        } else if (rank->parsed()) {
            const std::vector<double> scores = read_scores_csv(args.scores_path);
            const RankTable table = build_rank_table(scores);
            std::ofstream out(args.output);
            if (!out) throw std::runtime_error("cannot open " + args.output);
            out << "node,R,score,k_est\n";
            for (std::size_t i = 0; i < table.n; ++i)
                out << i << "," << table.rank_of[i] << ","
                    << format_double(scores[i]) << ","
                    << format_double(rank_to_indegree(table.rank_of[i], table.n,
                                                      args.beta))
                    << "\n";
        } else if (baseline->parsed()) {
            const WebGraph graph = load_graph(args.graph_path);
            const auto& k = graph.in_degrees();
            std::vector<double> t;
            if (args.model == "surf") {
                t = surfing_traffic(k);
            } else if (args.model == "search") {
                t = naive_search_traffic(k, args.alpha, args.beta);
            } else {
                t = mixture_traffic(surfing_traffic(k),
                                    naive_search_traffic(k, args.alpha, args.beta),
                                    args.lambda);
            }
            write_traffic_vector(t, args.output);
        } else if (exact->parsed()) {
            emit_curve(exact_traffic(args.n_pages, args.h, args.alpha), args);
        } else if (simulate->parsed()) {
            emit_curve(monte_carlo_traffic(args.n_pages, args.h, args.alpha,
                                           make_sim_options(args)),
                       args);
        } else if (convolve->parsed()) {
            const double h_min = args.h_min > 0.0
                                     ? args.h_min
                                     : 1.0 / static_cast<double>(args.n_pages);
            const HitSetDistribution dist(args.delta, h_min, args.h_max);
            emit_curve(convolved_traffic(args.n_pages, dist, args.alpha,
                                         make_sim_options(args)),
                       args);
        } else if (collapse->parsed()) {
            std::vector<TrafficCurve> curves;
            for (const auto& path : args.inputs)
                curves.push_back(read_traffic_csv(path));
            const CollapseResult result =
                fixed_h->parsed() ? collapse_fixed_h(curves, args.bins_per_decade)
                                  : collapse_over_n(curves, args.bins_per_decade);
            std::cout << "max_deviation_dex="
                      << format_double(result.max_deviation_dex) << "\n";
            for (std::size_t i = 0; i < result.scale.size(); ++i)
                std::cout << "scale[" << i << "]=" << format_double(result.scale[i])
                          << "\n";
            if (!args.output.empty()) {
                std::ofstream out(args.output);
                out << "x";
                for (std::size_t c = 0; c < result.curves.size(); ++c)
                    out << ",curve" << c;
                out << "\n";
                for (std::size_t i = 0; i < result.x.size(); ++i) {
                    out << format_double(result.x[i]);
                    for (const auto& curve : result.curves)
                        out << "," << format_double(curve[i]);
                    out << "\n";
                }
            }
        } else if (fit->parsed()) {
            const BinnedCurve curve = read_binned_csv(args.input);
            const FitResult result =
                fit_power_law(curve, args.fit_range[0], args.fit_range[1]);
            std::cout << "exponent=" << format_double(result.exponent)
                      << " stderr=" << format_double(result.stderr_)
                      << " n_points=" << result.n_points << "\n";
        } else if (run->parsed()) {
            ExperimentConfig config;
            try {
                config = load_experiment_config(args.config_path);
            } catch (const std::exception& e) {
                std::cerr << e.what() << "\n";
                return 1;
            }
            if (args.threads_override > 0) config.threads = args.threads_override;
            run_experiment(config);
            std::cout << "wrote " << config.output << "\n";
        } else if (validate->parsed()) {
            const ConfigParseResult result =
                parse_experiment_config(args.config_path);
            if (result.errors.empty()) {
                std::cout << "ok\n";
            } else {
                for (const auto& e : result.errors) std::cerr << e << "\n";
                return 1;
            }
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
