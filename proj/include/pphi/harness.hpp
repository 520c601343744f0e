#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pphi/flow.hpp"
#include "pphi/mcmc.hpp"

#include "json.hpp"

namespace pphi {

/// Invalid configuration (maps to exit code 2 in the CLI).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    // model
    int n = 8;
    double mass2 = 1.0;
    std::vector<double> poly;                 // a_1..a_N; empty = free field
    double cutoff_e = -1.0;                   // -1 = auto, inf allowed for mcmc
    // grid
    double rho = 0.7;
    double tmax = -1.0;                       // -1 = auto
    double tmin = -1.0;                       // -1 = auto
    // sampler
    std::string method = "polchinski";        // polchinski | mcmc
    int replicas = 100;
    int mc_inner = 128;
    double mcmc_step = 0.05;
    int mcmc_burn_in = 2000;
    int mcmc_thin = 10;
    // analysis
    std::vector<double> alphas;
    std::vector<double> moment_exponents{2.0};
    bool extremes = false;
    bool dump_fields = false;
    // run
    uint64_t seed = 1;
    std::string out_dir = "run";
};

/// Strict parse: unknown keys anywhere in the document are rejected.
RunConfig parse_run_config(const nlohmann::json& j);
nlohmann::json canonical_config_json(const RunConfig& cfg);

/// Resolved per-run values recorded in the manifest.
struct ResolvedRun {
    WickPolynomial poly;
    ScaleGrid grid;
    double c_eps = 0.0;
    double cutoff_e = 0.0;
};

/// Energy-cutoff default: 10 x the 99.9% quantile of v0 over a pilot batch
/// of full-covariance samples (floored at 1).
double resolve_cutoff_e(const LatticeGeometry& geom, const std::vector<double>& poly,
                        uint64_t seed, int pilot = 2000);

ResolvedRun resolve_run(const RunConfig& cfg);

/// Executes the configured pipeline: writes the manifest first (status
/// "incomplete"), streams per-replica statistics as JSON lines, optionally
/// dumps fields and diagnostics, finalizes the manifest.
void run(const RunConfig& cfg);

/// Serializes a scale path as a directory of field files named by scale
/// index plus a manifest recording grid times, seed and geometry.
void write_path(const GffPath& path, const std::string& dir);
GffPath read_path(const std::string& dir);

const char* code_version();

}  // namespace pphi
