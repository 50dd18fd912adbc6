#include "driftmc/averaged.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "driftmc/errors.hpp"
#include "driftmc/quadrature.hpp"

namespace driftmc {

void QuadratureConfig::validate() const {
    if (n_theta < 16) throw ConfigError("quadrature.n_theta: must be >= 16");
}

AveragedFieldTerms averaged_field_terms(const FieldBundle& fields, double t, Vec2 y0,
                                        const QuadratureConfig& quad) {
    const TideField& tide = *fields.tide;
    const PerturbationField& pert = *fields.perturbation;
    const int n = quad.n_theta;

    // One fused pass over the periodic grid; all five averages share nodes.
    AveragedFieldTerms out;
    for (int j = 0; j < n; ++j) {
        const double th = static_cast<double>(j) / n;
        const TideField::PhasePoint tp = tide.phase_point(t, th, y0);
        out.grad_m_a1_avg += tp.jac * tp.a1;
        out.a1_avg += tp.a1;
        out.a1_dt_avg += tp.a1_dt;
        out.a1_jac_avg += tp.a1_jac;
        out.n_avg += pert.value(t, th, y0);
    }
    const double w = 1.0 / n;
    out.grad_m_a1_avg *= w;
    out.a1_avg *= w;
    out.a1_dt_avg *= w;
    out.a1_jac_avg = out.a1_jac_avg * w;
    out.n_avg *= w;
    out.n_at0 = pert.value(t, 0.0, y0);
    out.n_dt_at0 = pert.time_derivative(t, 0.0, y0);
    out.n_jac_at0 = pert.jacobian(t, 0.0, y0);
    return out;
}

void rhs_order0(double t, Vec2 y0, Vec2 u0, const WindSeries& wind, double p, Vec2& dy0,
                Vec2& du0) {
    (void)y0;  // homogeneous wind: the mean is position-independent
    dy0 = u0;
    du0 = wind.windowed_mean(t, p) - u0;
}

void rhs_order1(double t, const AveragedState& s, const FieldBundle& fields,
                const WindSeries& wind, double eps, double p, const QuadratureConfig& quad,
                AveragedState& ds) {
    const AveragedFieldTerms T = averaged_field_terms(fields, t, s.y0, quad);
    const OscillationMoments osc = wind.oscillation_moments(t, p);
    const Vec2 dwbar_dt = wind.windowed_mean_derivative(t, p);

    rhs_order0(t, s.y0, s.u0, wind, p, ds.y0, ds.u0);

    // Shared combination: phase-average of the first-order oscillatory
    // velocity correction. grad-W terms are identically zero here.
    const Vec2 v1_avg_core = T.grad_m_a1_avg + s.u1 + T.n_avg - T.n_at0 - T.a1_avg;

    ds.y1 = v1_avg_core + osc.i_w - T.a1_jac_avg * s.u0 - T.a1_dt_avg;
    ds.u1 = -(v1_avg_core + osc.j_w) + (T.n_jac_at0 + T.a1_jac_avg) * s.u0 + T.n_dt_at0 +
            0.5 * eps * dwbar_dt + T.a1_dt_avg;
}

// ---------------------------------------------------------------------------
// AveragedTrajectory
// ---------------------------------------------------------------------------

AveragedTrajectory::AveragedTrajectory(std::vector<OdeNode<8>> nodes, double eps, double p,
                                       int order, int n_theta, OdeOptions opts, OdeStats stats,
                                       std::uint64_t wind_seed)
    : nodes_(std::move(nodes)),
      eps_(eps),
      p_(p),
      order_(order),
      n_theta_(n_theta),
      opts_(opts),
      stats_(stats),
      wind_seed_(wind_seed) {}

AveragedState AveragedTrajectory::at(double t) const {
    const auto y = hermite_eval<8>(nodes_, t);
    return {{y[0], y[1]}, {y[2], y[3]}, {y[4], y[5]}, {y[6], y[7]}};
}

void AveragedTrajectory::write_csv(std::ostream& os) const {
    os << "t,y0_1,y0_2,u0_1,u0_2,y1_1,y1_2,u1_1,u1_2\n";
    char buf[256];
    for (const auto& n : nodes_) {
        std::snprintf(buf, sizeof(buf),
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", n.t, n.y[0],
                      n.y[1], n.y[2], n.y[3], n.y[4], n.y[5], n.y[6], n.y[7]);
        os << buf;
    }
}

void required_wind_span(double eps, double p, double dt2, int order, double& t_lo, double& t_hi) {
    const double fd = order >= 1 ? dt2 : 0.0;
    t_lo = -(0.5 * p + fd) - 1e-9;
    t_hi = 1.0 + std::max(0.5 * p + fd, order >= 1 ? eps + 0.5 * p : 0.0) + 1e-9;
}

AveragedTrajectory integrate_averaged(const FieldBundle& fields, const WindSeries& wind,
                                      double eps, double p, Vec2 x0, Vec2 v0, int order,
                                      const QuadratureConfig& quad, OdeOptions opts) {
    if (!(eps > 0.0) || !(eps < 1.0)) throw ConfigError("epsilon must be in (0, 1)");
    if (!(p > 0.0)) throw ConfigError("window length p must be > 0");
    if (order != 0 && order != 1) throw ConfigError("order must be 0 or 1");
    quad.validate();
    double lo = 0.0, hi = 0.0;
    required_wind_span(eps, p, wind.small_scale().dt(), order, lo, hi);
    if (wind.t_begin() > lo || wind.t_end() < hi) {
        throw ConfigError("wind span does not cover the averaging window; synthesize on at least [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }

    std::vector<OdeNode<8>> nodes;
    OdeStats stats;
    if (order == 0) {
        auto rhs = [&](double t, const std::array<double, 4>& y, std::array<double, 4>& dy) {
            Vec2 dy0, du0;
            rhs_order0(t, {y[0], y[1]}, {y[2], y[3]}, wind, p, dy0, du0);
            dy = {dy0.x, dy0.y, du0.x, du0.y};
        };
        std::vector<OdeNode<4>> nodes4;
        stats = dopri5_integrate<4>(rhs, 0.0, 1.0, {x0.x, x0.y, v0.x, v0.y}, opts, nodes4);
        nodes.reserve(nodes4.size());
        for (const auto& n : nodes4) {
            OdeNode<8> w;
            w.t = n.t;
            w.y = {n.y[0], n.y[1], n.y[2], n.y[3], 0.0, 0.0, 0.0, 0.0};
            w.f = {n.f[0], n.f[1], n.f[2], n.f[3], 0.0, 0.0, 0.0, 0.0};
            nodes.push_back(w);
        }
    } else {
        auto rhs = [&](double t, const std::array<double, 8>& y, std::array<double, 8>& dy) {
            const AveragedState s{{y[0], y[1]}, {y[2], y[3]}, {y[4], y[5]}, {y[6], y[7]}};
            AveragedState ds;
            rhs_order1(t, s, fields, wind, eps, p, quad, ds);
            dy = {ds.y0.x, ds.y0.y, ds.u0.x, ds.u0.y, ds.y1.x, ds.y1.y, ds.u1.x, ds.u1.y};
        };
        stats = dopri5_integrate<8>(rhs, 0.0, 1.0,
                                    {x0.x, x0.y, v0.x, v0.y, 0.0, 0.0, 0.0, 0.0}, opts, nodes);
    }
    return AveragedTrajectory(std::move(nodes), eps, p, order, quad.n_theta, opts, stats,
                              wind.seed());
}

State reconstruct(double t, const AveragedTrajectory& avg, const FieldBundle& fields,
                  const WindSeries& wind, double eps, int order) {
    const AveragedState s = avg.at(t);
    long long cycle = 0;
    double theta = 0.0;
    phase_split(t, eps, cycle, theta);

    const TideField& tide = *fields.tide;
    State out;
    out.x = s.y0;
    out.v = tide.value(t, theta, s.y0) + s.u0;
    if (order == 0) return out;

    const PerturbationField& pert = *fields.perturbation;
    const Vec2 a1 = tide.theta_antiderivative(t, theta, s.y0);
    const Vec2 x1 = s.y1 + a1;

    const double tc = eps * static_cast<double>(cycle);
    const Vec2 wind_cum = wind.cycle_integral(t) - (t - tc) * wind.windowed_mean(t, avg.p());

    const Vec2 v1 = tide.jacobian(t, theta, s.y0) * x1 + s.u1 + pert.value(t, theta, s.y0) -
                    pert.value(t, 0.0, s.y0) + wind_cum - a1;

    out.x += eps * x1;
    out.v += eps * v1;
    return out;
}

}  // namespace driftmc
