#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "driftmc/ensemble.hpp"

namespace driftmc {

/// Flat run configuration backing the command line tool: one declarative
/// source of truth for every knob of the pipeline, filled from a config file
/// and/or flags, validated before any computation starts. Diagnostics name
/// the offending key.
struct RunConfig {
    // model
    double eps = 1.0 / 50.0;
    double p = 0.0;  ///< averaging window; <= 0 resolves to eps/2
    int order = 1;
    double x0_1 = 1.0, x0_2 = 1.0;
    double v0_1 = 0.0, v0_2 = 0.0;
    std::string tide_field = "paper-tide";
    std::string perturbation_field = "paper-perturbation";

    // wind
    std::string wind_model = "markov";  ///< markov | catalog | none
    double wind_dt1 = 0.0;              ///< synoptic step; <= 0: 6 h of tide time
    double wind_dt2 = 0.0;              ///< small-scale step; <= 0: eps/100
    double wind_mean_u = 0.0, wind_mean_v = -1.0;
    double wind_marginal_sd = 0.5;
    double wind_persistence = 0.0;
    double wind_memory_days = 3.0;
    std::string wind_catalog;
    int wind_block_samples = 8;
    double wind_rotation_jitter_deg = 30.0;
    double small_a = 0.95;
    double small_sigma = 0.05;
    double small_sd_ratio = 0.10;

    // integrators
    double direct_rtol = 1e-8;
    double direct_atol = 1e-10;
    double direct_max_step = 0.0;  ///< <= 0: unlimited
    double averaged_rtol = 1e-6;
    double averaged_atol = 1e-9;
    int n_theta = 64;

    // monte carlo
    int n_members = 1000;
    std::uint64_t master_seed = 1;
    double coast_center_1 = 1.0, coast_center_2 = 1.0;
    double coast_radius = 0.3;
    int threads = 0;
    bool allow_member_failures = false;
    bool cross_check_direct = false;
    int angle_bins = 16;
    int rose_direction_bins = 16;
    int rose_speed_classes = 4;
    int rose_samples_per_member = 128;

    // error-table
    std::vector<double> eps_list{1.0 / 25.0, 1.0 / 50.0, 1.0 / 100.0};
    std::vector<double> p_factors{0.1, 0.5, 1.0, 4.0};
    int table_members = 100;

    // io / subcommand specifics
    std::string out_dir = ".";
    std::string what = "both";  ///< simulate output: direct | averaged | both
    double span_lo = 0.0;       ///< wind-gen span
    double span_hi = 1.0;

    double resolved_p() const { return p > 0.0 ? p : 0.5 * eps; }

    void validate() const;
    WindConfig to_wind_config() const;
    EnsembleConfig to_ensemble_config() const;
    OdeOptions direct_options() const;
    OdeOptions averaged_options() const;

    nlohmann::json to_json() const;
    /// FNV-1a over the canonical JSON dump; recorded in run manifests so a
    /// run can be matched to the exact configuration that produced it.
    std::uint64_t config_hash() const;
};

extern const char* const kDriftmcVersion;

}  // namespace driftmc
