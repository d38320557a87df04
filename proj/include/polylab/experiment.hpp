#pragma once

#include <string>
#include <vector>

#include "polylab/lattice.hpp"

namespace polylab::io {

// One flat config covers every subcommand; validate() checks the shared
// invariants, each runner checks what it needs.
struct ExperimentConfig {
    std::string subcommand;

    int dims = 2;
    std::string law_spec = "bernoulli:p=0.1";
    double beta = 0.0;
    std::vector<double> h = {1.0};  // one entry: on-axis shorthand
    double delta = 0.0;             // 0: default 1/(2 sqrt D)
    int n = 8;
    int n_max = 0;  // 0: same as n
    uint64_t seed = 1;
    int n_env = 32;
    int jobs = 1;

    std::string out_path = "";  // empty: stdout only
    std::string format = "json";  // json | csv (csv additionally writes tables)
    bool timing = false;          // wall-time breaks byte determinism; opt in

    // subcommand extras
    std::string flavor = "quenched";   // enumerate: quenched | annealed
    std::string env_file = "";         // reuse a stored environment
    bool basic = false;                // enumerate: basic (t, f) tables
    bool verify_renewal = false;       // enumerate: report residuals
    std::string method = "enum";       // renewal: enum | dp-moments
    std::string mode = "exact";        // mixingale/clt: exact | mc, annealed | quenched
    int window = -1;                   // dp window radius
    bool log_space = false;
    int radius = 0;                    // gen-env box radius (0: n)
    double eps = 0.25;                 // lln
    int ell = 4;                       // mixingale / replica
    int k_min = 0, k_max = 6;          // mixingale
    int f_horizon = 3;                 // mixingale / s-series
    std::vector<double> alphas = {0.5, 1.0, 1.5};  // clt grid (on-axis magnitudes)
    std::vector<int> n_list;           // clt lengths
    int cases = 1000;                  // replica randomized cases

    void validate() const;
    RealVec h_vec() const;
    double delta_or_default() const;
};

struct ExperimentResult {
    std::string json_text;  // full result document
    std::vector<std::pair<std::string, std::string>> tables;      // (suffix, csv)
    std::vector<std::pair<std::string, std::string>> plot_files;  // (suffix, "x y err" rows)
};

ExperimentResult run(const ExperimentConfig& cfg);

// Writes the JSON document to cfg.out_path (atomically, tmp + rename); with
// format == "csv" the tables and plot files land next to it. Empty out_path
// only returns the would-be files.
std::vector<std::string> emit(const ExperimentResult& result, const ExperimentConfig& cfg);

void atomic_write(const std::string& path, const std::string& content);

}  // namespace polylab::io
