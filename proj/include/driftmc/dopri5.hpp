#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "driftmc/errors.hpp"

namespace driftmc {

struct OdeOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;  ///< <= 0: automatic
};

struct OdeStats {
    long long nfev = 0;      ///< right-hand-side evaluations
    long long naccepted = 0;
    long long nrejected = 0;
};

/// One accepted node of the numerical solution: state and derivative, enough
/// for cubic Hermite dense output between nodes.
template <int N>
struct OdeNode {
    double t = 0.0;
    std::array<double, N> y{};
    std::array<double, N> f{};
};

/// Cubic Hermite evaluation between consecutive accepted nodes. Reproduces
/// the stored states exactly at the nodes.
template <int N>
std::array<double, N> hermite_eval(const std::vector<OdeNode<N>>& nodes, double t) {
    if (nodes.empty()) throw NumericError("dense output on empty solution", t);
    if (t <= nodes.front().t) return nodes.front().y;
    if (t >= nodes.back().t) return nodes.back().y;
    auto it = std::upper_bound(nodes.begin(), nodes.end(), t,
                               [](double tv, const OdeNode<N>& n) { return tv < n.t; });
    const OdeNode<N>& n1 = *it;
    const OdeNode<N>& n0 = *(it - 1);
    const double h = n1.t - n0.t;
    const double s = (t - n0.t) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    std::array<double, N> y;
    for (int i = 0; i < N; ++i) {
        y[i] = h00 * n0.y[i] + h10 * h * n0.f[i] + h01 * n1.y[i] + h11 * h * n1.f[i];
    }
    return y;
}

/// Explicit Runge-Kutta 5(4), the Dormand-Prince pair, with PI step-size
/// control and FSAL. Integrates y' = f(t, y) from t0 to t1 (t0 < t1) and
/// appends every accepted node (including the initial one) to `out`.
///
/// Throws NumericError on step-size underflow or a persistently non-finite
/// state, carrying the time of failure.
template <int N, typename Rhs>
OdeStats dopri5_integrate(Rhs&& rhs, double t0, double t1, std::array<double, N> y0,
                          const OdeOptions& opts, std::vector<OdeNode<N>>& out) {
    static_assert(N > 0);
    using State = std::array<double, N>;

    // Dormand-Prince tableau.
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // Difference between the 5th and embedded 4th order weights.
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    if (!(t1 > t0)) throw ConfigError("integration span must have t1 > t0");
    if (!(opts.rtol > 0.0) || !(opts.atol > 0.0)) {
        throw ConfigError("integrator tolerances must be > 0");
    }

    OdeStats stats;
    auto call = [&](double t, const State& y, State& f) {
        rhs(t, y, f);
        ++stats.nfev;
    };

    double t = t0;
    State y = y0;
    State k1;
    call(t, y, k1);
    for (int i = 0; i < N; ++i) {
        if (!std::isfinite(y[i]) || !std::isfinite(k1[i])) {
            throw NumericError("non-finite state or derivative at start", t);
        }
    }
    out.push_back({t, y, k1});

    auto error_norm = [&](const State& ya, const State& yb, const State& err) {
        double sum = 0.0;
        for (int i = 0; i < N; ++i) {
            const double sc = opts.atol + opts.rtol * std::max(std::fabs(ya[i]), std::fabs(yb[i]));
            const double r = err[i] / sc;
            sum += r * r;
        }
        return std::sqrt(sum / N);
    };

    // Starting step: standard two-probe heuristic on the scaled derivative.
    double h = opts.initial_step;
    if (!(h > 0.0)) {
        double d0 = 0.0, d1 = 0.0;
        for (int i = 0; i < N; ++i) {
            const double sc = opts.atol + opts.rtol * std::fabs(y[i]);
            d0 += (y[i] / sc) * (y[i] / sc);
            d1 += (k1[i] / sc) * (k1[i] / sc);
        }
        d0 = std::sqrt(d0 / N);
        d1 = std::sqrt(d1 / N);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, t1 - t0);
        State y1p, f1p;
        for (int i = 0; i < N; ++i) y1p[i] = y[i] + h0 * k1[i];
        call(t + h0, y1p, f1p);
        double d2 = 0.0;
        for (int i = 0; i < N; ++i) {
            const double sc = opts.atol + opts.rtol * std::fabs(y[i]);
            const double r = (f1p[i] - k1[i]) / sc;
            d2 += r * r;
        }
        d2 = std::sqrt(d2 / N) / h0;
        const double dm = std::max(d1, d2);
        const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
        h = std::min({100.0 * h0, h1, t1 - t0});
    }
    h = std::min(h, opts.max_step);

    constexpr double safety = 0.9;
    constexpr double beta = 0.04;
    constexpr double expo1 = 0.2 - beta * 0.75;
    double facold = 1e-4;
    bool last_rejected = false;
    State k2, k3, k4, k5, k6, k7, ytmp, ynew, errv;

    const long long max_steps = 200000000;
    for (long long step = 0; step < max_steps; ++step) {
        if (t >= t1) return stats;
        const double t_scale = std::max(std::fabs(t), 1.0);
        if (h < 4.0 * std::numeric_limits<double>::epsilon() * t_scale) {
            throw NumericError("step size underflow at t = " + std::to_string(t), t);
        }
        h = std::min({h, opts.max_step, t1 - t});
        bool hit_end = (t + h >= t1);
        if (hit_end) h = t1 - t;

        for (int i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        call(t + c2 * h, ytmp, k2);
        for (int i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        call(t + c3 * h, ytmp, k3);
        for (int i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        call(t + c4 * h, ytmp, k4);
        for (int i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        call(t + c5 * h, ytmp, k5);
        for (int i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        call(t + h, ytmp, k6);
        for (int i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        call(t + h, ynew, k7);

        bool finite = true;
        for (int i = 0; i < N; ++i) {
            errv[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                           e7 * k7[i]);
            finite = finite && std::isfinite(ynew[i]) && std::isfinite(errv[i]);
        }
        const double err = finite ? error_norm(y, ynew, errv)
                                  : std::numeric_limits<double>::infinity();

        if (err <= 1.0) {
            t = hit_end ? t1 : t + h;
            y = ynew;
            k1 = k7;  // FSAL
            out.push_back({t, y, k1});
            ++stats.naccepted;

            const double fac11 = std::pow(err, expo1);
            // Lund stabilization; divisor clamped so steps shrink at most 5x
            // and grow at most 10x per accepted step.
            double fac = fac11 / std::pow(facold, beta);
            fac = std::clamp(fac / safety, 0.1, 5.0);
            double hnew = h / fac;
            if (last_rejected) hnew = std::min(hnew, h);  // no growth right after a rejection
            facold = std::max(err, 1e-4);
            last_rejected = false;
            h = hnew;
        } else {
            ++stats.nrejected;
            last_rejected = true;
            if (!finite) {
                h *= 0.25;
            } else {
                const double fac = std::clamp(safety * std::pow(err, -0.2), 0.1, 1.0);
                h *= fac;
            }
        }
    }
    throw NumericError("integration exceeded the step budget", t);
}

}  // namespace driftmc
