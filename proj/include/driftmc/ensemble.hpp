#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "driftmc/averaged.hpp"
#include "driftmc/direct.hpp"
#include "driftmc/fields.hpp"
#include "driftmc/grounding.hpp"
#include "driftmc/wind.hpp"

namespace driftmc {

/// Wind forcing selection for a run. `enabled = false` means a calm run
/// (W identically zero), used by validation cases.
struct WindConfig {
    bool enabled = true;
    SynopticParams synoptic;
    SmallScaleParams small;
};

/// Synthesizes the wind for one run/member over [t_lo, t_hi].
WindSeries make_wind(const WindConfig& cfg, double eps, double t_lo, double t_hi,
                     std::uint64_t seed);

struct EnsembleConfig {
    int n_members = 1000;
    std::uint64_t master_seed = 1;

    double eps = 1.0 / 50.0;
    double p = 0.0;  ///< averaging window; <= 0 resolves to eps/2
    int order = 1;
    Vec2 x0{1.0, 1.0};
    Vec2 v0{0.0, 0.0};

    std::string tide_field = "paper-tide";
    std::string perturbation_field = "paper-perturbation";
    WindConfig wind;
    CoastCircle coast;

    OdeOptions averaged_opts{1e-6, 1e-9};
    OdeOptions direct_opts{1e-8, 1e-10};
    QuadratureConfig quad;

    int threads = 0;  ///< worker cap; 0 = hardware concurrency
    bool allow_member_failures = false;  ///< exclude failed members instead of aborting
    bool cross_check_direct = false;     ///< also classify grounding on the direct solution

    int angle_bins = 16;
    int rose_direction_bins = 16;
    int rose_speed_classes = 4;
    int rose_samples_per_member = 128;

    double resolved_p() const { return p > 0.0 ? p : 0.5 * eps; }
    void validate() const;
};

/// Sector histogram over compass angles; bin k is centered on k*360/n deg.
struct AngleHistogram {
    int n_bins = 16;
    std::vector<long long> counts;
    long long total = 0;
    void add(double angle_deg);
};

/// Joint direction-by-speed-class histogram of wind samples. Directions are
/// where the wind blows from; speed classes are quantile-based so none is
/// structurally empty.
struct WindRose {
    int n_dir = 16;
    std::vector<double> speed_class_bounds;        ///< n_classes - 1 inner quantiles
    std::vector<std::vector<long long>> counts;    ///< [direction][speed class]
    long long total = 0;
};

/// Builds a wind rose from explicit series, each sampled uniformly on [0, 1].
WindRose wind_rose(const std::vector<const WindSeries*>& series, int direction_bins,
                   int speed_classes, int samples_per_series = 128);

struct MemberOutcome {
    bool grounded = false;
    double time = 0.0;       ///< valid when grounded
    double angle_deg = 0.0;  ///< valid when grounded
    bool failed = false;
    std::string error;
    int direct_grounded = -1;  ///< -1 not checked, else 0/1
};

struct GroundingReport {
    int n_members = 0;
    int n_failed = 0;
    long long n_grounded = 0;
    double probability = 0.0;
    double standard_error = 0.0;
    double mean_grounding_time = 0.0;  ///< over grounded members
    double disagreement_rate = -1.0;   ///< vs direct classification; -1 = not measured

    std::uint64_t master_seed = 0;
    double eps = 0.0;
    double p = 0.0;
    int order = 1;
    CoastCircle coast;

    long long rhs_evals_averaged = 0;
    long long rhs_evals_direct = 0;

    std::vector<MemberOutcome> members;
    AngleHistogram angle_histogram;
    WindRose rose;
};

/// Runs the seeded Monte Carlo ensemble: per member, wind synthesis with a
/// seed derived from (master_seed, index), slow integration, reconstruction,
/// grounding detection. Pure function of the config: results are identical
/// across repeated runs and any thread count (member streams are
/// index-derived, aggregation is an ordered reduction).
GroundingReport run_ensemble(const EnsembleConfig& cfg);

struct ErrorStats {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct ErrorTableRow {
    double eps = 0.0;
    double p = 0.0;
    int n_members = 0;
    ErrorStats speed_order0, speed_order1, position_order0, position_order1;
    bool p_out_of_recommended = false;  ///< p above the eps upper bound
    long long rhs_evals_direct = 0;     ///< totals across members
    long long rhs_evals_averaged = 0;
};

struct ErrorTable {
    std::vector<ErrorTableRow> rows;
};

/// Sup-norm distances over the direct solution's sample grid between the
/// direct motion and its order-0/order-1 reconstructions.
struct SupErrors {
    double speed0 = 0.0;
    double speed1 = 0.0;
    double position0 = 0.0;
    double position1 = 0.0;
};

SupErrors sup_errors(const Trajectory& direct, const AveragedTrajectory& avg,
                     const FieldBundle& fields, const WindSeries& wind);

/// Error-comparison study: for every eps in eps_list and window factor in
/// p_factors (p = factor * eps), integrates both systems for n_members wind
/// draws and tabulates mean/min/max sup-norm errors.
ErrorTable error_table(const EnsembleConfig& base, const std::vector<double>& eps_list,
                       const std::vector<double>& p_factors, int n_members);

}  // namespace driftmc
