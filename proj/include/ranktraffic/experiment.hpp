#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ranktraffic {

// Fully resolved configuration of one named pipeline. Serialized back into
// the run manifest so any artifact directory can be regenerated exactly.
struct ExperimentConfig {
    std::string experiment;          // fig3a | fig3c | suppl02 | suppl03 | suppl7 | suppl1
    std::size_t n = 100'000;         // index size N
    double alpha = 1.63;
    double beta = 1.1;
    double mu = 2.1;
    double delta = 1.1;
    double damping = 0.85;
    double h_min = -1.0;             // -1 resolves to 1/N
    double h_max = 0.1;
    std::vector<double> h_list = {1e-1, 1e-2, 1e-3};
    std::vector<std::size_t> n_list = {10'000, 30'000, 100'000};
    std::uint64_t queries = 1'000'000;
    std::uint64_t seed = 0;
    bool has_seed = false;
    int threads = 1;
    std::size_t graph_out_links = 7;     // m
    double graph_attractiveness = 0.7;   // a
    int bins_per_decade = 10;
    std::size_t display_cap = 1000;
    bool cap_enabled = true;
    std::string output;              // artifact directory

    double resolved_h_min(std::size_t n_pages) const {
        return h_min > 0.0 ? h_min : 1.0 / static_cast<double>(n_pages);
    }
};

// Flat key=value file, '#' comments. Returns the config plus an aggregated,
// line-referenced error list; the config is only usable if errors is empty.
struct ConfigParseResult {
    ExperimentConfig config;
    std::vector<std::string> errors;
};

ConfigParseResult parse_experiment_config(const std::string& path);

// throws std::runtime_error listing all problems
ExperimentConfig load_experiment_config(const std::string& path);

// Runs the named pipeline, writing CSV data files, manifest.json and
// summary.txt into config.output. A lock file serializes runs per
// directory; partial outputs are removed on failure.
void run_experiment(const ExperimentConfig& config);

}  // namespace ranktraffic
