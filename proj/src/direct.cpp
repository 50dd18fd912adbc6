#include "driftmc/direct.hpp"

#include <cmath>

#include "driftmc/errors.hpp"

namespace driftmc {

Trajectory integrate_direct(const FieldBundle& fields, const WindSeries& wind, double eps,
                            Vec2 x0, Vec2 v0, const OdeOptions& opts) {
    if (!(eps > 0.0) || !(eps < 1.0)) throw ConfigError("epsilon must be in (0, 1)");
    if (wind.t_begin() > 0.0 || wind.t_end() < 1.0) {
        throw ConfigError("wind span must cover [0, 1] for direct integration");
    }
    if (!x0.finite() || !v0.finite()) throw ConfigError("initial state must be finite");

    const TideField& tide = *fields.tide;
    const PerturbationField& pert = *fields.perturbation;

    auto rhs = [&](double t, const std::array<double, 4>& y, std::array<double, 4>& dy) {
        const Vec2 x{y[0], y[1]};
        const Vec2 v{y[2], y[3]};
        const double theta = wrap_phase(t / eps);
        const Vec2 dv = tide.theta_derivative(t, theta, x) / eps +
                        tide.time_derivative(t, theta, x) +
                        pert.theta_derivative(t, theta, x) +
                        tide.jacobian(t, theta, x) * v + wind.value(t) - v +
                        eps * (pert.time_derivative(t, theta, x) +
                               pert.jacobian(t, theta, x) * v);
        dy[0] = v.x;
        dy[1] = v.y;
        dy[2] = dv.x;
        dy[3] = dv.y;
    };

    std::vector<OdeNode<4>> nodes;
    const OdeStats stats =
        dopri5_integrate<4>(rhs, 0.0, 1.0, {x0.x, x0.y, v0.x, v0.y}, opts, nodes);
    return Trajectory(std::move(nodes), eps, opts, stats, wind.seed());
}

}  // namespace driftmc
