#include "ranktraffic/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ranktraffic/analysis.hpp"
#include "ranktraffic/click_models.hpp"
#include "ranktraffic/csv.hpp"
#include "ranktraffic/graph.hpp"
#include "ranktraffic/hit_sim.hpp"
#include "ranktraffic/pagerank.hpp"
#include "ranktraffic/ranking.hpp"
#include "ranktraffic/rng.hpp"
#include "ranktraffic/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ranktraffic {

namespace {

const std::vector<std::string> kExperiments = {"fig3a",   "fig3c",  "suppl02",
                                               "suppl03", "suppl7", "suppl1"};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

}  // namespace

ConfigParseResult parse_experiment_config(const std::string& path) {
    ConfigParseResult result;
    ExperimentConfig& cfg = result.config;
    auto& errors = result.errors;

    std::ifstream in(path);
    if (!in) {
        errors.push_back("cannot open config file: " + path);
        return result;
    }

    std::vector<std::string> unknown;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        auto err = [&](const std::string& msg) {
            errors.push_back(path + ":" + std::to_string(lineno) + ": " + msg);
        };
        if (eq == std::string::npos) {
            err("expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        try {
            if (key == "experiment") {
                cfg.experiment = value;
                if (std::find(kExperiments.begin(), kExperiments.end(), value) ==
                    kExperiments.end())
                    err("unknown experiment '" + value + "'");
            } else if (key == "n") {
                cfg.n = std::stoull(value);
                if (cfg.n < 2) err("n must be >= 2");
            } else if (key == "alpha") {
                cfg.alpha = std::stod(value);
                if (!(cfg.alpha > 0)) err("alpha must be positive");
            } else if (key == "beta") {
                cfg.beta = std::stod(value);
                if (!(cfg.beta > 0)) err("beta must be positive");
            } else if (key == "mu") {
                cfg.mu = std::stod(value);
                if (!(cfg.mu > 0)) err("mu must be positive");
            } else if (key == "delta") {
                cfg.delta = std::stod(value);
                if (!(cfg.delta > 0)) err("delta must be positive");
            } else if (key == "damping") {
                cfg.damping = std::stod(value);
                if (!(cfg.damping > 0 && cfg.damping < 1))
                    err("damping must be in (0,1)");
            } else if (key == "h_min") {
                cfg.h_min = std::stod(value);
                if (!(cfg.h_min > 0 && cfg.h_min <= 1)) err("h_min must be in (0,1]");
            } else if (key == "h_max") {
                cfg.h_max = std::stod(value);
                if (!(cfg.h_max > 0 && cfg.h_max <= 1)) err("h_max must be in (0,1]");
            } else if (key == "h_list") {
                cfg.h_list.clear();
                for (const auto& item : split_list(value)) {
                    const double h = std::stod(item);
                    if (!(h > 0 && h <= 1)) err("h_list entries must be in (0,1]");
                    cfg.h_list.push_back(h);
                }
                if (cfg.h_list.empty()) err("h_list must not be empty");
            } else if (key == "n_list") {
                cfg.n_list.clear();
                for (const auto& item : split_list(value)) {
                    const std::size_t v = std::stoull(item);
                    if (v < 2) err("n_list entries must be >= 2");
                    cfg.n_list.push_back(v);
                }
                if (cfg.n_list.empty()) err("n_list must not be empty");
            } else if (key == "queries") {
                cfg.queries = std::stoull(value);
                if (cfg.queries < 1) err("queries must be >= 1");
            } else if (key == "seed") {
                cfg.seed = std::stoull(value);
                cfg.has_seed = true;
            } else if (key == "threads") {
                cfg.threads = std::stoi(value);
                if (cfg.threads < 1) err("threads must be >= 1");
            } else if (key == "graph_out_links") {
                cfg.graph_out_links = std::stoull(value);
                if (cfg.graph_out_links < 1) err("graph_out_links must be >= 1");
            } else if (key == "graph_attractiveness") {
                cfg.graph_attractiveness = std::stod(value);
                if (cfg.graph_attractiveness < 0)
                    err("graph_attractiveness must be >= 0");
            } else if (key == "bins_per_decade") {
                cfg.bins_per_decade = std::stoi(value);
                if (cfg.bins_per_decade < 1) err("bins_per_decade must be >= 1");
            } else if (key == "display_cap") {
                cfg.display_cap = std::stoull(value);
                if (cfg.display_cap < 1) err("display_cap must be >= 1");
            } else if (key == "cap_enabled") {
                if (value == "true" || value == "1") cfg.cap_enabled = true;
                else if (value == "false" || value == "0") cfg.cap_enabled = false;
                else err("cap_enabled must be true or false");
            } else if (key == "output") {
                cfg.output = value;
            } else {
                unknown.push_back(key + " (line " + std::to_string(lineno) + ")");
            }
        } catch (const std::exception&) {
            err("cannot parse value '" + value + "' for key '" + key + "'");
        }
    }

    if (!unknown.empty()) {
        std::string msg = "unknown config keys:";
        for (const auto& k : unknown) msg += " " + k;
        errors.push_back(msg);
    }
    if (cfg.experiment.empty()) errors.push_back("experiment name required");
    if (!cfg.has_seed) errors.push_back("seed required for reproducibility");
    if (cfg.h_min > 0 && cfg.h_min > cfg.h_max)
        errors.push_back("h_min must not exceed h_max");
    if (cfg.output.empty() && !cfg.experiment.empty())
        cfg.output = "runs/" + cfg.experiment;
    return result;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    ConfigParseResult result = parse_experiment_config(path);
    if (!result.errors.empty()) {
        std::string msg = "invalid config:";
        for (const auto& e : result.errors) msg += "\n  " + e;
        throw std::runtime_error(msg);
    }
    return result.config;
}

namespace {

json config_to_json(const ExperimentConfig& cfg) {
    return json{{"experiment", cfg.experiment},
                {"n", cfg.n},
                {"alpha", cfg.alpha},
                {"beta", cfg.beta},
                {"mu", cfg.mu},
                {"delta", cfg.delta},
                {"damping", cfg.damping},
                {"h_min", cfg.h_min},
                {"h_max", cfg.h_max},
                {"h_list", cfg.h_list},
                {"n_list", cfg.n_list},
                {"queries", cfg.queries},
                {"seed", cfg.seed},
                {"threads", cfg.threads},
                {"graph_out_links", cfg.graph_out_links},
                {"graph_attractiveness", cfg.graph_attractiveness},
                {"bins_per_decade", cfg.bins_per_decade},
                {"display_cap", cfg.display_cap},
                {"cap_enabled", cfg.cap_enabled},
                {"output", cfg.output}};
}

json fit_to_json(const FitResult& fit) {
    return json{{"exponent", fit.exponent},
                {"stderr", fit.stderr_},
                {"fit_low", fit.fit_low},
                {"fit_high", fit.fit_high},
                {"n_points", fit.n_points}};
}

// Tracks written artifacts so a failed run leaves nothing behind.
class ArtifactWriter {
public:
    explicit ArtifactWriter(const fs::path& dir) : dir_(dir) {}

    fs::path path(const std::string& name) {
        written_.push_back(dir_ / name);
        return written_.back();
    }

    void discard_all() {
        std::error_code ec;
        for (const auto& p : written_) fs::remove(p, ec);
    }

private:
    fs::path dir_;
    std::vector<fs::path> written_;
};

SimOptions sim_options(const ExperimentConfig& cfg, std::uint64_t seed_salt) {
    SimOptions opt;
    opt.queries = cfg.queries;
    opt.seed = mix64(cfg.seed ^ seed_salt);
    opt.threads = cfg.threads;
    opt.display_cap = cfg.display_cap;
    opt.cap_enabled = cfg.cap_enabled;
    return opt;
}

BinnedCurve bin_by_rank(const TrafficCurve& curve, int bins_per_decade) {
    std::vector<double> r(curve.t.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = static_cast<double>(i + 1);
    return log_bin(r, curve.t, bins_per_decade);
}

void write_collapse_csv(const CollapseResult& collapse, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << "x";
    for (std::size_t c = 0; c < collapse.curves.size(); ++c) out << ",curve" << c;
    out << "\n";
    for (std::size_t i = 0; i < collapse.x.size(); ++i) {
        out << format_double(collapse.x[i]);
        for (const auto& curve : collapse.curves)
            out << "," << format_double(curve[i]);
        out << "\n";
    }
}

json run_fig3a(const ExperimentConfig& cfg, ArtifactWriter& files) {
    json results;
    for (std::size_t i = 0; i < cfg.h_list.size(); ++i) {
        const double h = cfg.h_list[i];
        const TrafficCurve curve =
            monte_carlo_traffic(cfg.n, h, cfg.alpha, sim_options(cfg, i));
        write_traffic_csv(curve, files.path("traffic_h" + format_double(h) + ".csv"));
        write_binned_csv(bin_by_rank(curve, cfg.bins_per_decade),
                         files.path("traffic_h" + format_double(h) + "_binned.csv"));
        results["h_values"].push_back(h);
    }
    return results;
}

json run_fig3c(const ExperimentConfig& cfg, ArtifactWriter& files) {
    const HitSetDistribution dist(cfg.delta, cfg.resolved_h_min(cfg.n), cfg.h_max);
    const TrafficCurve curve =
        convolved_traffic(cfg.n, dist, cfg.alpha, sim_options(cfg, 0));
    write_traffic_csv(curve, files.path("traffic_convolved.csv"));
    const TrafficDegreeCurve tk =
        traffic_vs_indegree(curve, cfg.beta, cfg.bins_per_decade);
    write_binned_csv(tk.binned, files.path("traffic_vs_indegree.csv"));
    return json{{"gamma_eff", fit_to_json(tk.gamma_fit)},
                {"surfing_slope", tk.surfing_slope},
                {"naive_search_slope", tk.naive_search_slope}};
}

struct GraphRun {
    WebGraph graph;
    PageRankResult pagerank;
};

GraphRun generated_graph_with_pagerank(const ExperimentConfig& cfg) {
    GraphRun run;
    run.graph = generate_scale_free_digraph(cfg.n, cfg.graph_out_links,
                                            cfg.graph_attractiveness, cfg.seed);
    const double tol = cfg.n >= 100'000 ? 1e-8 : 1e-10;
    run.pagerank = compute_pagerank(run.graph, cfg.damping, tol, 1000);
    if (!run.pagerank.converged)
        throw std::runtime_error("pagerank did not converge; residual " +
                                 format_double(run.pagerank.residual));
    return run;
}

json run_suppl02(const ExperimentConfig& cfg, ArtifactWriter& files) {
    const GraphRun run = generated_graph_with_pagerank(cfg);
    const PageRankDegreeCurve pk =
        pagerank_vs_indegree_curve(run.graph, run.pagerank, cfg.bins_per_decade);
    write_binned_csv(pk.curve, files.path("pagerank_vs_indegree.csv"));
    const double k_max = pk.curve.center.back();
    const FitResult fit =
        fit_power_law(pk.curve, std::max(10.0, k_max / 1000.0), k_max / 10.0);
    return json{{"pk_exponent", fit_to_json(fit)},
                {"zero_degree_mean", pk.zero_degree_mean},
                {"zero_degree_count", pk.zero_degree_count},
                {"pagerank_iterations", run.pagerank.iterations_used}};
}

json run_suppl03(const ExperimentConfig& cfg, ArtifactWriter& files) {
    const GraphRun run = generated_graph_with_pagerank(cfg);
    const BinnedCurve pdf =
        estimate_pdf_logbins(run.pagerank.scores, cfg.bins_per_decade);
    write_binned_csv(pdf, files.path("pagerank_pdf.csv"));
    const double p_max = pdf.center.back();
    const FitResult pdf_fit = fit_power_law(pdf, p_max / 1000.0, p_max / 10.0);

    const RankTable table = build_rank_table(run.pagerank.scores);
    const std::size_t n = table.n;
    const double fit_hi = run.pagerank.scores[table.order[9]];
    const double fit_lo = run.pagerank.scores[table.order[n / 100]];
    const FitResult beta_fit = rank_vs_score_exponent(
        table, run.pagerank.scores, fit_lo, fit_hi, cfg.bins_per_decade);
    return json{{"pagerank_pdf_exponent", fit_to_json(pdf_fit)},
                {"rank_vs_pagerank_beta", fit_to_json(beta_fit)}};
}

json run_suppl7(const ExperimentConfig& cfg, ArtifactWriter& files) {
    std::vector<TrafficCurve> curves;
    for (std::size_t i = 0; i < cfg.h_list.size(); ++i) {
        curves.push_back(monte_carlo_traffic(cfg.n, cfg.h_list[i], cfg.alpha,
                                             sim_options(cfg, i)));
        write_traffic_csv(curves.back(),
                          files.path("traffic_h" + format_double(cfg.h_list[i]) +
                                     ".csv"));
    }
    const CollapseResult collapse = collapse_fixed_h(curves, cfg.bins_per_decade);
    write_collapse_csv(collapse, files.path("collapse_fixed_h.csv"));
    return json{{"max_deviation_dex", collapse.max_deviation_dex},
                {"h_values", cfg.h_list}};
}

json run_suppl1(const ExperimentConfig& cfg, ArtifactWriter& files) {
    std::vector<TrafficCurve> curves;
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
        const std::size_t n = cfg.n_list[i];
        const HitSetDistribution dist(cfg.delta, cfg.resolved_h_min(n), cfg.h_max);
        curves.push_back(
            convolved_traffic(n, dist, cfg.alpha, sim_options(cfg, i)));
        write_traffic_csv(curves.back(),
                          files.path("traffic_N" + std::to_string(n) + ".csv"));
    }
    const CollapseResult collapse = collapse_over_n(curves, cfg.bins_per_decade);
    write_collapse_csv(collapse, files.path("collapse_over_n.csv"));
    json scales = json::array();
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i)
        scales.push_back(json{{"n", cfg.n_list[i]}, {"f", collapse.scale[i]}});
    return json{{"max_deviation_dex", collapse.max_deviation_dex},
                {"f_of_n", scales}};
}

class DirectoryLock {
public:
    explicit DirectoryLock(const fs::path& dir) : lock_path_(dir / ".lock") {
        if (fs::exists(lock_path_))
            throw std::runtime_error("output directory is locked by another run: " +
                                     lock_path_.string());
        std::ofstream out(lock_path_);
        if (!out) throw std::runtime_error("cannot create lock file " +
                                           lock_path_.string());
    }
    ~DirectoryLock() {
        std::error_code ec;
        fs::remove(lock_path_, ec);
    }

private:
    fs::path lock_path_;
};

}  // namespace

void run_experiment(const ExperimentConfig& cfg) {
    if (cfg.output.empty())
        throw std::invalid_argument("run_experiment: output directory required");
    const fs::path dir(cfg.output);
    fs::create_directories(dir);
    DirectoryLock lock(dir);
    ArtifactWriter files(dir);

    const auto start = std::chrono::steady_clock::now();
    json results;
    try {
        if (cfg.experiment == "fig3a") results = run_fig3a(cfg, files);
        else if (cfg.experiment == "fig3c") results = run_fig3c(cfg, files);
        else if (cfg.experiment == "suppl02") results = run_suppl02(cfg, files);
        else if (cfg.experiment == "suppl03") results = run_suppl03(cfg, files);
        else if (cfg.experiment == "suppl7") results = run_suppl7(cfg, files);
        else if (cfg.experiment == "suppl1") results = run_suppl1(cfg, files);
        else
            throw std::invalid_argument("unknown experiment: " + cfg.experiment);

        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        json manifest{{"version", kVersion},
                      {"config", config_to_json(cfg)},
                      {"results", results},
                      {"runtime_seconds", seconds}};
        {
            std::ofstream out(files.path("manifest.json"));
            out << manifest.dump(2) << "\n";
            if (!out) throw std::runtime_error("cannot write manifest.json");
        }
        {
            std::ofstream out(files.path("summary.txt"));
            out << "experiment: " << cfg.experiment << "\n"
                << "seed: " << cfg.seed << "\n"
                << "runtime: " << seconds << " s\n"
                << "results: " << results.dump(2) << "\n";
            if (!out) throw std::runtime_error("cannot write summary.txt");
        }
    } catch (...) {
        files.discard_all();
        throw;
    }
}

}  // namespace ranktraffic
