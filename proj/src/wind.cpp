#include "driftmc/wind.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "driftmc/errors.hpp"
#include "driftmc/rng.hpp"

namespace driftmc {

void SmallScaleParams::validate() const {
    if (!(std::fabs(a) < 1.0)) throw ConfigError("wind.small.a: |a| must be < 1");
    if (!(sigma >= 0.0)) throw ConfigError("wind.small.sigma: must be >= 0");
}

void SynopticParams::validate() const {
    if (model == SynopticModel::MarkovSurrogate) {
        if (!(markov.marginal_sd >= 0.0))
            throw ConfigError("wind.synoptic.marginal_sd: must be >= 0");
        if (markov.persistence > 0.0 && !(markov.persistence < 1.0))
            throw ConfigError("wind.synoptic.persistence: must be in (0, 1)");
        if (markov.persistence <= 0.0 && !(markov.memory_days > 0.0))
            throw ConfigError("wind.synoptic.memory_days: must be > 0");
    }
    if (model == SynopticModel::CatalogResample) {
        if (catalog.path.empty()) throw ConfigError("wind.synoptic.catalog: path required");
        if (catalog.block_samples < 1)
            throw ConfigError("wind.synoptic.block_samples: must be >= 1");
    }
}

// ---------------------------------------------------------------------------
// PiecewiseLinearSeries
// ---------------------------------------------------------------------------

PiecewiseLinearSeries::PiecewiseLinearSeries(double t0, double dt, std::vector<Vec2> samples)
    : t0_(t0), dt_(dt), samples_(std::move(samples)) {
    if (samples_.size() < 2) throw ConfigError("piecewise-linear series needs >= 2 samples");
    if (!(dt_ > 0.0)) throw ConfigError("piecewise-linear series needs dt > 0");
    prefix_.resize(samples_.size());
    moment_prefix_.resize(samples_.size());
    prefix_[0] = {};
    moment_prefix_[0] = {};
    for (std::size_t k = 1; k < samples_.size(); ++k) {
        const double tk = t0_ + dt_ * static_cast<double>(k - 1);
        const Vec2 f0 = samples_[k - 1];
        const Vec2 slope = (samples_[k] - f0) / dt_;
        prefix_[k] = prefix_[k - 1] + (samples_[k - 1] + samples_[k]) * (0.5 * dt_);
        // int tau*f(tau) over the segment, f linear: tau = tk + u.
        moment_prefix_[k] = moment_prefix_[k - 1] + f0 * (tk * dt_) +
                            (f0 + slope * tk) * (0.5 * dt_ * dt_) +
                            slope * (dt_ * dt_ * dt_ / 3.0);
    }
}

void PiecewiseLinearSeries::check_span(double t) const {
    // Half-ulp slack: queries at the exact span ends must not fail.
    const double slack = 1e-12 * (1.0 + std::fabs(t));
    if (t < t_begin() - slack || t > t_end() + slack) {
        throw NumericError("wind query out of synthesized span", t);
    }
}

Vec2 PiecewiseLinearSeries::value(double t) const {
    check_span(t);
    const double u = (t - t0_) / dt_;
    auto k = static_cast<std::ptrdiff_t>(std::floor(u));
    k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(samples_.size()) - 2);
    const double s = u - static_cast<double>(k);
    return samples_[k] * (1.0 - s) + samples_[k + 1] * s;
}

Vec2 PiecewiseLinearSeries::antiderivative_at(double t) const {
    const double u = (t - t0_) / dt_;
    auto k = static_cast<std::ptrdiff_t>(std::floor(u));
    k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(samples_.size()) - 2);
    const double tk = t0_ + dt_ * static_cast<double>(k);
    // Exact integral over the partial segment [tk, t].
    return prefix_[k] + (samples_[k] + value(t)) * (0.5 * (t - tk));
}

Vec2 PiecewiseLinearSeries::integral(double a, double b) const {
    check_span(a);
    check_span(b);
    return antiderivative_at(b) - antiderivative_at(a);
}

Vec2 PiecewiseLinearSeries::moment_antiderivative_at(double t) const {
    const double u = (t - t0_) / dt_;
    auto k = static_cast<std::ptrdiff_t>(std::floor(u));
    k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(samples_.size()) - 2);
    const double tk = t0_ + dt_ * static_cast<double>(k);
    const Vec2 f0 = samples_[k];
    const Vec2 slope = (samples_[k + 1] - f0) / dt_;
    const double us = t - tk;
    return moment_prefix_[k] + f0 * (tk * us) + (f0 + slope * tk) * (0.5 * us * us) +
           slope * (us * us * us / 3.0);
}

Vec2 PiecewiseLinearSeries::integral_of_antiderivative(double a, double b) const {
    check_span(a);
    check_span(b);
    const Vec2 dp = antiderivative_at(b) - antiderivative_at(a);
    const Vec2 dq = moment_antiderivative_at(b) - moment_antiderivative_at(a);
    return b * dp - dq;
}

void PiecewiseLinearSeries::collect_breakpoints(double a, double b, std::vector<double>& out) const {
    const double lo = (a - t0_) / dt_;
    auto k = static_cast<std::ptrdiff_t>(std::ceil(lo));
    for (; k < static_cast<std::ptrdiff_t>(samples_.size()); ++k) {
        const double t = t0_ + dt_ * static_cast<double>(k);
        if (t >= b) break;
        if (t > a) out.push_back(t);
    }
}

// ---------------------------------------------------------------------------
// WindSeries
// ---------------------------------------------------------------------------

WindSeries::WindSeries(PiecewiseLinearSeries synoptic, PiecewiseLinearSeries small_scale,
                       double eps, std::uint64_t seed)
    : synoptic_(std::move(synoptic)),
      small_scale_(std::move(small_scale)),
      eps_(eps),
      seed_(seed),
      t_begin_(std::max(synoptic_.t_begin(), small_scale_.t_begin())),
      t_end_(std::min(synoptic_.t_end(), small_scale_.t_end())) {
    if (!(eps_ > 0.0) || !(eps_ < 1.0)) throw ConfigError("epsilon must be in (0, 1)");
}

Vec2 WindSeries::value(double t) const {
    return synoptic_.value(t) + small_scale_.value(t);
}

Vec2 WindSeries::windowed_mean(double t, double p) const {
    if (!(p > 0.0)) throw ConfigError("window length p must be > 0");
    const double a = t - 0.5 * p;
    const double b = t + 0.5 * p;
    return (synoptic_.integral(a, b) + small_scale_.integral(a, b)) / p;
}

Vec2 WindSeries::windowed_mean_derivative(double t, double p) const {
    const double h = small_scale_.dt();
    return (windowed_mean(t + h, p) - windowed_mean(t - h, p)) / (2.0 * h);
}

Vec2 WindSeries::cycle_integral(double t) const {
    long long cycle = 0;
    double theta = 0.0;
    phase_split(t, eps_, cycle, theta);
    const double tc = eps_ * static_cast<double>(cycle);
    if (theta == 0.0) return {};
    return synoptic_.integral(tc, t) + small_scale_.integral(tc, t);
}

namespace {

double next_breakpoint(const PiecewiseLinearSeries& s, double after) {
    const double k = std::floor((after - s.t_begin()) / s.dt() + 1e-9) + 1.0;
    return s.t_begin() + k * s.dt();
}

// int_a^b A(s) ds with A(s) = int_a^s f, per-segment Simpson on one series.
// A is quadratic on every grid segment, so Simpson is exact; the midpoint
// value of the linear f is the endpoint average.
Vec2 simpson_nested(const PiecewiseLinearSeries& ps, double a, double b) {
    Vec2 a_run, acc;
    double x0 = a;
    Vec2 w0 = ps.value(a);
    while (x0 < b) {
        const double x1 = std::min(next_breakpoint(ps, x0), b);
        const double h = x1 - x0;
        const Vec2 w1 = ps.value(x1);
        const Vec2 wm = (w0 + w1) * 0.5;
        const Vec2 a_mid = a_run + (w0 + wm) * (0.25 * h);
        const Vec2 a_end = a_run + (w0 + w1) * (0.5 * h);
        acc += (a_run + a_mid * 4.0 + a_end) * (h / 6.0);
        a_run = a_end;
        w0 = w1;
        x0 = x1;
    }
    return acc;
}

}  // namespace

OscillationMoments WindSeries::oscillation_moments(double t, double p) const {
    long long cycle = 0;
    double theta = 0.0;
    phase_split(t, eps_, cycle, theta);
    const double tc = eps_ * static_cast<double>(cycle);
    const double te = tc + eps_;
    const Vec2 wbar = windowed_mean(t, p);

    // Route 1: exact nested integral of the running wind integral, O(1) from
    // the moment prefixes of each component.
    const Vec2 int_a_exact = synoptic_.integral_of_antiderivative(tc, te) +
                             small_scale_.integral_of_antiderivative(tc, te);

    // Route 2: per-segment Simpson walk over each component's own grid.
    const Vec2 int_a_simpson =
        simpson_nested(synoptic_, tc, te) + simpson_nested(small_scale_, tc, te);

    OscillationMoments m;
    m.i_w = int_a_exact / eps_ - wbar * (0.5 * eps_);
    m.j_w = int_a_simpson / eps_ - wbar * (0.5 * eps_);
    return m;
}

void WindSeries::write_csv(std::ostream& os) const {
    std::vector<double> pts;
    pts.push_back(t_begin_);
    synoptic_.collect_breakpoints(t_begin_, t_end_, pts);
    small_scale_.collect_breakpoints(t_begin_, t_end_, pts);
    pts.push_back(t_end_);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    os << "t,u,v\n";
    char buf[96];
    for (double t : pts) {
        const Vec2 w = value(t);
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", t, w.x, w.y);
        os << buf;
    }
}

// ---------------------------------------------------------------------------
// Synthesis
// ---------------------------------------------------------------------------

namespace {

std::size_t grid_size(double t_lo, double t_hi, double dt) {
    const auto n = static_cast<std::size_t>(std::ceil((t_hi - t_lo) / dt - 1e-12)) + 1;
    return std::max<std::size_t>(n, 2);
}

}  // namespace

std::vector<Vec2> load_wind_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open wind catalog '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("wind catalog '" + path + "' is empty");
    auto strip = [](std::string s) {
        s.erase(std::remove_if(s.begin(), s.end(),
                               [](unsigned char c) { return std::isspace(c) != 0; }),
                s.end());
        return s;
    };
    if (strip(line) != "t_hours,u,v") {
        throw ConfigError("wind catalog '" + path + "': expected header 't_hours,u,v'");
    }
    std::vector<Vec2> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (strip(line).empty()) continue;
        std::istringstream ss(line);
        std::string f0, f1, f2;
        if (!std::getline(ss, f0, ',') || !std::getline(ss, f1, ',') || !std::getline(ss, f2)) {
            throw ConfigError("wind catalog '" + path + "': malformed line " +
                              std::to_string(lineno));
        }
        try {
            (void)std::stod(f0);
            rows.push_back({std::stod(f1), std::stod(f2)});
        } catch (const std::exception&) {
            throw ConfigError("wind catalog '" + path + "': non-numeric value on line " +
                              std::to_string(lineno));
        }
        if (!rows.back().finite()) {
            throw ConfigError("wind catalog '" + path + "': non-finite value on line " +
                              std::to_string(lineno));
        }
    }
    if (rows.size() < 2) throw ConfigError("wind catalog '" + path + "': needs >= 2 rows");
    return rows;
}

WindSeries synthesize_wind(const SynopticParams& synoptic, const SmallScaleParams& small,
                           double eps, double t_lo, double t_hi, std::uint64_t seed) {
    if (!(eps > 0.0) || !(eps < 1.0)) throw ConfigError("epsilon must be in (0, 1)");
    if (!(t_lo < t_hi)) throw ConfigError("wind span: t_lo must be < t_hi");
    synoptic.validate();
    small.validate();

    const double dt1 = synoptic.dt1 > 0.0 ? synoptic.dt1 : (6.0 / kTidePeriodHours) * eps;
    const double dt2 = small.dt2 > 0.0 ? small.dt2 : eps / 100.0;
    if (!(dt1 > dt2)) {
        throw ConfigError("wind sampling: synoptic step dt1 must exceed small-scale step dt2");
    }

    Rng rng(seed);

    // Synoptic component on the dt1 grid.
    const std::size_t n1 = grid_size(t_lo, t_hi, dt1);
    std::vector<Vec2> syn(n1);
    switch (synoptic.model) {
        case SynopticModel::None:
            break;
        case SynopticModel::MarkovSurrogate: {
            const auto& mp = synoptic.markov;
            double a1 = mp.persistence;
            if (a1 <= 0.0) {
                const double tau_slow = mp.memory_days * 24.0 / kTidePeriodHours * eps;
                a1 = std::exp(-dt1 / tau_slow);
            }
            const double innov = mp.marginal_sd * std::sqrt(std::max(0.0, 1.0 - a1 * a1));
            Vec2 w{mp.mean.x + mp.marginal_sd * rng.gaussian(),
                   mp.mean.y + mp.marginal_sd * rng.gaussian()};
            syn[0] = w;
            for (std::size_t k = 1; k < n1; ++k) {
                w.x = mp.mean.x + a1 * (w.x - mp.mean.x) + innov * rng.gaussian();
                w.y = mp.mean.y + a1 * (w.y - mp.mean.y) + innov * rng.gaussian();
                syn[k] = w;
            }
            break;
        }
        case SynopticModel::CatalogResample: {
            const auto catalog = load_wind_catalog(synoptic.catalog.path);
            const auto block =
                std::min<std::size_t>(static_cast<std::size_t>(synoptic.catalog.block_samples),
                                      catalog.size());
            const double jitter = synoptic.catalog.rotation_jitter_deg * std::numbers::pi / 180.0;
            std::size_t k = 0;
            while (k < n1) {
                const auto start = static_cast<std::size_t>(
                    rng.uniform() * static_cast<double>(catalog.size() - block + 1));
                const double phi = jitter > 0.0 ? rng.uniform(-jitter, jitter) : 0.0;
                const double c = std::cos(phi), s = std::sin(phi);
                for (std::size_t j = 0; j < block && k < n1; ++j, ++k) {
                    const Vec2 w = catalog[start + j];
                    syn[k] = {c * w.x - s * w.y, s * w.x + c * w.y};
                }
            }
            break;
        }
    }

    // Small-scale component on the dt2 grid: standardized AR(1) from a zero
    // state, rescaled afterwards. Scaling the realized path is equivalent to
    // scaling the innovation sd (the recursion is linear, zero start).
    const std::size_t n2 = grid_size(t_lo, t_hi, dt2);
    std::vector<Vec2> st(n2);
    for (std::size_t k = 1; k < n2; ++k) {
        st[k].x = small.a * st[k - 1].x + rng.gaussian();
        st[k].y = small.a * st[k - 1].y + rng.gaussian();
    }

    double syn_sd = 0.0;
    if (synoptic.model != SynopticModel::None) {
        Vec2 mean;
        for (const Vec2& w : syn) mean += w;
        mean = mean / static_cast<double>(n1);
        double var = 0.0;
        for (const Vec2& w : syn) var += (w - mean).norm_sq();
        syn_sd = std::sqrt(var / (2.0 * static_cast<double>(n1)));  // pooled per-component
    }

    double scale;
    if (small.target_sd_ratio > 0.0 && syn_sd > 0.0) {
        // sd_small = r * sd_total with independent components:
        // sd_small = sd_synoptic * r / sqrt(1 - r^2).
        const double r = small.target_sd_ratio;
        const double marginal = syn_sd * r / std::sqrt(1.0 - r * r);
        scale = marginal * std::sqrt(1.0 - small.a * small.a);
    } else {
        scale = small.sigma;
    }
    for (Vec2& w : st) w *= scale;

    return WindSeries(PiecewiseLinearSeries(t_lo, dt1, std::move(syn)),
                      PiecewiseLinearSeries(t_lo, dt2, std::move(st)), eps, seed);
}

WindSeries zero_wind(double eps, double t_lo, double t_hi) {
    SynopticParams syn;
    syn.model = SynopticModel::None;
    SmallScaleParams small;
    small.sigma = 0.0;
    small.target_sd_ratio = 0.0;
    return synthesize_wind(syn, small, eps, t_lo, t_hi, 0);
}

}  // namespace driftmc
