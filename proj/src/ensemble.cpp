#include "driftmc/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "driftmc/errors.hpp"
#include "driftmc/rng.hpp"

namespace driftmc {

WindSeries make_wind(const WindConfig& cfg, double eps, double t_lo, double t_hi,
                     std::uint64_t seed) {
    if (!cfg.enabled) return zero_wind(eps, t_lo, t_hi);
    return synthesize_wind(cfg.synoptic, cfg.small, eps, t_lo, t_hi, seed);
}

void EnsembleConfig::validate() const {
    if (n_members < 1) throw ConfigError("ensemble.n_members: must be >= 1");
    if (!(eps > 0.0) || !(eps < 1.0)) throw ConfigError("epsilon: must be in (0, 1)");
    if (order != 0 && order != 1) throw ConfigError("order: must be 0 or 1");
    if (!x0.finite() || !v0.finite()) throw ConfigError("initial state: must be finite");
    if (angle_bins < 1) throw ConfigError("ensemble.angle_bins: must be >= 1");
    if (rose_direction_bins < 1) throw ConfigError("ensemble.rose_direction_bins: must be >= 1");
    if (rose_speed_classes < 1) throw ConfigError("ensemble.rose_speed_classes: must be >= 1");
    if (rose_samples_per_member < 1)
        throw ConfigError("ensemble.rose_samples_per_member: must be >= 1");
    coast.validate();
    quad.validate();
    if (wind.enabled) {
        wind.synoptic.validate();
        wind.small.validate();
    }
}

void AngleHistogram::add(double angle_deg) {
    if (counts.empty()) counts.assign(static_cast<std::size_t>(n_bins), 0);
    const double w = 360.0 / n_bins;
    // Bins are centered on the sector directions (bin 0 straddles north).
    auto k = static_cast<long long>(std::floor(angle_deg / w + 0.5)) % n_bins;
    if (k < 0) k += n_bins;
    ++counts[static_cast<std::size_t>(k)];
    ++total;
}

namespace {

/// Direction the wind blows from, as a compass sector index.
int from_direction_bin(Vec2 w, int n_dir) {
    const double deg = compass_angle_deg(-1.0 * w);
    const double width = 360.0 / n_dir;
    auto k = static_cast<long long>(std::floor(deg / width + 0.5)) % n_dir;
    if (k < 0) k += n_dir;
    return static_cast<int>(k);
}

WindRose build_rose(const std::vector<Vec2>& samples, int n_dir, int n_classes) {
    WindRose rose;
    rose.n_dir = n_dir;
    rose.counts.assign(static_cast<std::size_t>(n_dir),
                       std::vector<long long>(static_cast<std::size_t>(n_classes), 0));

    std::vector<double> speeds;
    speeds.reserve(samples.size());
    for (const Vec2& w : samples) speeds.push_back(w.norm());
    std::vector<double> sorted = speeds;
    std::sort(sorted.begin(), sorted.end());
    rose.speed_class_bounds.resize(static_cast<std::size_t>(n_classes) - 1);
    for (int c = 1; c < n_classes; ++c) {
        const auto idx = static_cast<std::size_t>(
            (static_cast<double>(c) / n_classes) * static_cast<double>(sorted.size() - 1));
        rose.speed_class_bounds[static_cast<std::size_t>(c - 1)] = sorted[idx];
    }

    for (std::size_t i = 0; i < samples.size(); ++i) {
        int cls = 0;
        while (cls + 1 < n_classes && speeds[i] >= rose.speed_class_bounds[static_cast<std::size_t>(cls)]) {
            ++cls;
        }
        ++rose.counts[static_cast<std::size_t>(from_direction_bin(samples[i], n_dir))]
                     [static_cast<std::size_t>(cls)];
        ++rose.total;
    }
    return rose;
}

}  // namespace

WindRose wind_rose(const std::vector<const WindSeries*>& series, int direction_bins,
                   int speed_classes, int samples_per_series) {
    if (series.empty()) throw ConfigError("wind_rose: empty series collection");
    std::vector<Vec2> samples;
    samples.reserve(series.size() * static_cast<std::size_t>(samples_per_series));
    for (const WindSeries* s : series) {
        for (int j = 0; j < samples_per_series; ++j) {
            const double t = static_cast<double>(j) / samples_per_series;
            samples.push_back(s->value(t));
        }
    }
    return build_rose(samples, direction_bins, speed_classes);
}

namespace {

struct MemberScratch {
    MemberOutcome outcome;
    std::vector<Vec2> rose_samples;
    long long nfev_avg = 0;
    long long nfev_direct = 0;
    std::exception_ptr failure;
};

template <typename Fn>
void parallel_members(int n_members, int threads, Fn&& run_one) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const int n_workers =
        std::max(1, std::min(n_members, threads > 0 ? threads : static_cast<int>(hw)));
    if (n_workers == 1) {
        for (int i = 0; i < n_members; ++i) run_one(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n_members) return;
            run_one(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace

GroundingReport run_ensemble(const EnsembleConfig& cfg) {
    cfg.validate();
    const double p = cfg.resolved_p();
    const FieldBundle fields = make_field_bundle(cfg.tide_field, cfg.perturbation_field);

    const double dt2 = cfg.wind.small.dt2 > 0.0 ? cfg.wind.small.dt2 : cfg.eps / 100.0;
    double span_lo = 0.0, span_hi = 0.0;
    required_wind_span(cfg.eps, p, dt2, cfg.order, span_lo, span_hi);

    std::vector<MemberScratch> scratch(static_cast<std::size_t>(cfg.n_members));

    auto run_member = [&](int i) {
        MemberScratch& ms = scratch[static_cast<std::size_t>(i)];
        try {
            const std::uint64_t seed =
                derive_stream_seed(cfg.master_seed, static_cast<std::uint64_t>(i));
            const WindSeries wind = make_wind(cfg.wind, cfg.eps, span_lo, span_hi, seed);

            ms.rose_samples.reserve(static_cast<std::size_t>(cfg.rose_samples_per_member));
            for (int j = 0; j < cfg.rose_samples_per_member; ++j) {
                ms.rose_samples.push_back(
                    wind.value(static_cast<double>(j) / cfg.rose_samples_per_member));
            }

            const AveragedTrajectory avg =
                integrate_averaged(fields, wind, cfg.eps, p, cfg.x0, cfg.v0, cfg.order, cfg.quad,
                                   cfg.averaged_opts);
            ms.nfev_avg = avg.stats().nfev;

            const auto grid = grounding_scan_grid(0.0, 1.0, cfg.eps);
            const auto event = detect_grounding(
                [&](double t) {
                    return reconstruct(t, avg, fields, wind, cfg.eps, cfg.order).x;
                },
                grid, cfg.coast);
            if (event) {
                ms.outcome.grounded = true;
                ms.outcome.time = event->time;
                ms.outcome.angle_deg = event->angle_deg;
            }

            if (cfg.cross_check_direct) {
                const Trajectory direct =
                    integrate_direct(fields, wind, cfg.eps, cfg.x0, cfg.v0, cfg.direct_opts);
                ms.nfev_direct = direct.stats().nfev;
                ms.outcome.direct_grounded = detect_grounding(direct, cfg.coast) ? 1 : 0;
            }
        } catch (const std::exception& e) {
            ms.outcome.failed = true;
            ms.outcome.error = e.what();
            ms.failure = std::current_exception();
        }
    };

    parallel_members(cfg.n_members, cfg.threads, run_member);

    GroundingReport report;
    report.n_members = cfg.n_members;
    report.master_seed = cfg.master_seed;
    report.eps = cfg.eps;
    report.p = p;
    report.order = cfg.order;
    report.coast = cfg.coast;
    report.angle_histogram.n_bins = cfg.angle_bins;
    report.angle_histogram.counts.assign(static_cast<std::size_t>(cfg.angle_bins), 0);
    report.members.reserve(static_cast<std::size_t>(cfg.n_members));

    // Ordered reduction by member index: reproducible regardless of the
    // scheduling above.
    std::vector<Vec2> rose_samples;
    long long disagreements = 0;
    long long checked = 0;
    double time_sum = 0.0;
    for (int i = 0; i < cfg.n_members; ++i) {
        MemberScratch& ms = scratch[static_cast<std::size_t>(i)];
        if (ms.outcome.failed && !cfg.allow_member_failures) {
            std::rethrow_exception(ms.failure);
        }
        report.members.push_back(ms.outcome);
        if (ms.outcome.failed) {
            ++report.n_failed;
            continue;
        }
        report.rhs_evals_averaged += ms.nfev_avg;
        report.rhs_evals_direct += ms.nfev_direct;
        if (ms.outcome.grounded) {
            ++report.n_grounded;
            time_sum += ms.outcome.time;
            report.angle_histogram.add(ms.outcome.angle_deg);
        }
        if (ms.outcome.direct_grounded >= 0) {
            ++checked;
            if ((ms.outcome.direct_grounded == 1) != ms.outcome.grounded) ++disagreements;
        }
        rose_samples.insert(rose_samples.end(), ms.rose_samples.begin(), ms.rose_samples.end());
    }

    const int n_ok = cfg.n_members - report.n_failed;
    if (n_ok == 0) throw NumericError("all ensemble members failed");
    report.probability = static_cast<double>(report.n_grounded) / n_ok;
    report.standard_error =
        std::sqrt(report.probability * (1.0 - report.probability) / n_ok);
    report.mean_grounding_time =
        report.n_grounded > 0 ? time_sum / static_cast<double>(report.n_grounded) : 0.0;
    if (checked > 0) {
        report.disagreement_rate = static_cast<double>(disagreements) / static_cast<double>(checked);
    }
    report.rose = build_rose(rose_samples, cfg.rose_direction_bins, cfg.rose_speed_classes);
    return report;
}

// ---------------------------------------------------------------------------
// Error tables
// ---------------------------------------------------------------------------

SupErrors sup_errors(const Trajectory& direct, const AveragedTrajectory& avg,
                     const FieldBundle& fields, const WindSeries& wind) {
    SupErrors e;
    const double eps = direct.eps();
    for (double t : direct.sample_times()) {
        const State ref = direct.at(t);
        const State r0 = reconstruct(t, avg, fields, wind, eps, 0);
        const State r1 = reconstruct(t, avg, fields, wind, eps, 1);
        e.speed0 = std::max(e.speed0, (ref.v - r0.v).norm());
        e.speed1 = std::max(e.speed1, (ref.v - r1.v).norm());
        e.position0 = std::max(e.position0, (ref.x - r0.x).norm());
        e.position1 = std::max(e.position1, (ref.x - r1.x).norm());
    }
    return e;
}

ErrorTable error_table(const EnsembleConfig& base, const std::vector<double>& eps_list,
                       const std::vector<double>& p_factors, int n_members) {
    if (eps_list.empty()) throw ConfigError("error-table: epsilon list must not be empty");
    if (p_factors.empty()) throw ConfigError("error-table: p factor list must not be empty");
    if (n_members < 1) throw ConfigError("error-table: n_members must be >= 1");
    for (double e : eps_list) {
        if (!(e > 0.0) || !(e < 1.0)) throw ConfigError("error-table: epsilon must be in (0, 1)");
    }
    for (double f : p_factors) {
        if (!(f > 0.0)) throw ConfigError("error-table: p factors must be > 0");
    }
    base.validate();

    const FieldBundle fields = make_field_bundle(base.tide_field, base.perturbation_field);

    ErrorTable table;
    for (double eps : eps_list) {
        for (double pf : p_factors) {
            const double p = pf * eps;
            const double dt2 = base.wind.small.dt2 > 0.0 ? base.wind.small.dt2 : eps / 100.0;
            double lo = 0.0, hi = 0.0;
            required_wind_span(eps, p, dt2, 1, lo, hi);

            ErrorTableRow row;
            row.eps = eps;
            row.p = p;
            row.n_members = n_members;
            row.p_out_of_recommended = p > eps * (1.0 + 1e-12);

            std::vector<SupErrors> errs(static_cast<std::size_t>(n_members));
            std::vector<long long> nfev_d(static_cast<std::size_t>(n_members), 0);
            std::vector<long long> nfev_a(static_cast<std::size_t>(n_members), 0);
            std::vector<std::exception_ptr> failures(static_cast<std::size_t>(n_members));

            parallel_members(n_members, base.threads, [&](int i) {
                try {
                    const std::uint64_t seed =
                        derive_stream_seed(base.master_seed, static_cast<std::uint64_t>(i));
                    const WindSeries wind = make_wind(base.wind, eps, lo, hi, seed);
                    const Trajectory direct =
                        integrate_direct(fields, wind, eps, base.x0, base.v0, base.direct_opts);
                    const AveragedTrajectory avg =
                        integrate_averaged(fields, wind, eps, p, base.x0, base.v0, 1, base.quad,
                                           base.averaged_opts);
                    errs[static_cast<std::size_t>(i)] = sup_errors(direct, avg, fields, wind);
                    nfev_d[static_cast<std::size_t>(i)] = direct.stats().nfev;
                    nfev_a[static_cast<std::size_t>(i)] = avg.stats().nfev;
                } catch (...) {
                    failures[static_cast<std::size_t>(i)] = std::current_exception();
                }
            });

            for (int i = 0; i < n_members; ++i) {
                if (failures[static_cast<std::size_t>(i)]) {
                    std::rethrow_exception(failures[static_cast<std::size_t>(i)]);
                }
            }

            auto stat_of = [&](double SupErrors::*field) {
                ErrorStats s;
                s.min = errs.front().*field;
                s.max = errs.front().*field;
                double sum = 0.0;
                for (const SupErrors& e : errs) {
                    const double v = e.*field;
                    s.min = std::min(s.min, v);
                    s.max = std::max(s.max, v);
                    sum += v;
                }
                s.mean = sum / static_cast<double>(n_members);
                return s;
            };
            row.speed_order0 = stat_of(&SupErrors::speed0);
            row.speed_order1 = stat_of(&SupErrors::speed1);
            row.position_order0 = stat_of(&SupErrors::position0);
            row.position_order1 = stat_of(&SupErrors::position1);
            for (int i = 0; i < n_members; ++i) {
                row.rhs_evals_direct += nfev_d[static_cast<std::size_t>(i)];
                row.rhs_evals_averaged += nfev_a[static_cast<std::size_t>(i)];
            }
            table.rows.push_back(row);
        }
    }
    return table;
}

}  // namespace driftmc
