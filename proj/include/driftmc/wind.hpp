#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "driftmc/geometry.hpp"

namespace driftmc {

/// Tide period in hours, used only to convert wall-clock defaults (6 h
/// synoptic sampling, multi-day persistence) into slow-time units. One slow
/// time unit corresponds to (tide period)/eps hours.
inline constexpr double kTidePeriodHours = 12.5;

/// Small-scale (mesoscale/microscale) wind component: AR(1) with Gaussian
/// innovations on a uniform grid of step dt2, started from a zero state.
struct SmallScaleParams {
    double a = 0.95;       ///< AR(1) coefficient, |a| < 1
    double sigma = 0.05;   ///< innovation standard deviation per component
    double dt2 = 0.0;      ///< sampling step, slow-time units; <= 0: eps/100

    /// Target ratio of the small-scale marginal sd to the total wind sd.
    /// When > 0 and a synoptic component is present, `sigma` is replaced by
    /// the value achieving this ratio. <= 0 keeps `sigma` as given.
    double target_sd_ratio = 0.10;

    void validate() const;
};

enum class SynopticModel {
    None,             ///< no synoptic component (small-scale only, or calm)
    MarkovSurrogate,  ///< first-order vector autoregression around a mean wind
    CatalogResample,  ///< block resampling from a user-supplied wind catalog
};

/// Stationary VAR(1) surrogate for the synoptic wind: per-component
///   w[k+1] = mean + a1 * (w[k] - mean) + innovation,
/// with the first sample drawn from the stationary distribution. Defaults
/// give a mean wind blowing from the north with multi-day persistence.
struct MarkovSurrogateParams {
    Vec2 mean{0.0, -1.0};      ///< mean wind velocity (rescaled units)
    double marginal_sd = 0.5;  ///< per-component stationary standard deviation
    double persistence = 0.0;  ///< AR coefficient per dt1 step; <= 0: derive from memory_days
    double memory_days = 3.0;  ///< decorrelation time used when persistence <= 0
};

/// Block resampling of a recorded wind catalog. Each block of
/// `block_samples` consecutive catalog rows is copied with a random direction
/// jitter of at most `rotation_jitter_deg` degrees.
struct CatalogResampleParams {
    std::string path;                 ///< CSV catalog, columns t_hours,u,v
    int block_samples = 8;            ///< 8 samples = 2 days at 6-hourly records
    double rotation_jitter_deg = 30.0;
};

struct SynopticParams {
    SynopticModel model = SynopticModel::MarkovSurrogate;
    double dt1 = 0.0;  ///< sampling step, slow-time units; <= 0: 6 h of tide time
    MarkovSurrogateParams markov;
    CatalogResampleParams catalog;

    void validate() const;
};

/// Piecewise-linear signal on a uniform grid, with exact interpolation and
/// exact integration (prefix trapezoid sums; integrals of linear pieces are
/// closed-form, so every quadrature below is exact up to rounding).
class PiecewiseLinearSeries {
  public:
    PiecewiseLinearSeries() = default;
    PiecewiseLinearSeries(double t0, double dt, std::vector<Vec2> samples);

    bool empty() const { return samples_.empty(); }
    double t_begin() const { return t0_; }
    double t_end() const { return t0_ + dt_ * (static_cast<double>(samples_.size()) - 1.0); }
    double dt() const { return dt_; }
    std::size_t size() const { return samples_.size(); }
    const std::vector<Vec2>& samples() const { return samples_; }

    Vec2 value(double t) const;
    /// Exact integral of the interpolant over [a, b] (a <= b, inside span).
    Vec2 integral(double a, double b) const;

    /// Exact nested integral int_a^b [ int_a^s f(tau) dtau ] ds, evaluated in
    /// O(1) from the zeroth- and first-moment prefixes via
    ///   int_a^b (b - tau) f(tau) dtau.
    Vec2 integral_of_antiderivative(double a, double b) const;

    /// Appends grid points strictly inside (a, b) to `out`.
    void collect_breakpoints(double a, double b, std::vector<double>& out) const;

  private:
    Vec2 antiderivative_at(double t) const;
    Vec2 moment_antiderivative_at(double t) const;
    void check_span(double t) const;

    double t0_ = 0.0;
    double dt_ = 1.0;
    std::vector<Vec2> samples_;
    std::vector<Vec2> prefix_;         // integral of f from t0_ to each node
    std::vector<Vec2> moment_prefix_;  // integral of tau*f(tau) from t0_ to each node
};

struct OscillationMoments {
    Vec2 i_w;  ///< phase-average of the running integral of (W - mean W)
    Vec2 j_w;  ///< same quantity via the (running integral - ramp * mean) route
};

/// A realized two-component wind: W(t) = synoptic(t) + small_scale(t), both
/// piecewise linear in slow time and homogeneous in space. Immutable after
/// synthesis; all queries are const and safe to call concurrently.
class WindSeries {
  public:
    WindSeries(PiecewiseLinearSeries synoptic, PiecewiseLinearSeries small_scale,
               double eps, std::uint64_t seed);

    double eps() const { return eps_; }
    std::uint64_t seed() const { return seed_; }
    double t_begin() const { return t_begin_; }
    double t_end() const { return t_end_; }
    const PiecewiseLinearSeries& synoptic() const { return synoptic_; }
    const PiecewiseLinearSeries& small_scale() const { return small_scale_; }

    /// Total wind at slow time t.
    Vec2 value(double t) const;

    /// Mean of W over the window [t - p/2, t + p/2] (exact quadrature).
    Vec2 windowed_mean(double t, double p) const;

    /// d/dt of windowed_mean, central difference with the small-scale step.
    Vec2 windowed_mean_derivative(double t, double p) const;

    /// Integral of W from the start of the current tide cycle, eps*floor(t/eps),
    /// up to t. Vanishes whenever t/eps is an integer.
    Vec2 cycle_integral(double t) const;

    /// Cycle-averaged cumulated wind deviation around the windowed mean,
    /// computed over the tide cycle containing t. The two members are the
    /// same quantity evaluated by two independent quadrature routes and agree
    /// to rounding; both are kept because the averaged equations consume the
    /// expression in both forms.
    OscillationMoments oscillation_moments(double t, double p) const;

    void write_csv(std::ostream& os) const;

  private:
    PiecewiseLinearSeries synoptic_;
    PiecewiseLinearSeries small_scale_;
    double eps_;
    std::uint64_t seed_;
    double t_begin_;
    double t_end_;
};

/// Generates a wind series on [t_lo, t_hi]. Deterministic: identical
/// (params, eps, span, seed) produce a bit-identical series. The synoptic
/// component is generated first, then the small-scale component; innovation
/// order is part of the format.
WindSeries synthesize_wind(const SynopticParams& synoptic, const SmallScaleParams& small,
                           double eps, double t_lo, double t_hi, std::uint64_t seed);

/// Convenience: all-zero wind over a span (calm run).
WindSeries zero_wind(double eps, double t_lo, double t_hi);

/// Reads a wind catalog CSV (header `t_hours,u,v`). Throws IoError when the
/// file is unreadable and ConfigError when the schema is violated.
std::vector<Vec2> load_wind_catalog(const std::string& path);

}  // namespace driftmc
