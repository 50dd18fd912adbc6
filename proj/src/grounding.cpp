#include "driftmc/grounding.hpp"

#include <cmath>

#include "driftmc/errors.hpp"

namespace driftmc {

void CoastCircle::validate() const {
    if (!(radius > 0.0)) throw ConfigError("coast.radius: must be > 0");
    if (!center.finite()) throw ConfigError("coast.center: must be finite");
}

std::optional<GroundingEvent> detect_grounding(const PositionSampler& position,
                                               const std::vector<double>& scan_grid,
                                               const CoastCircle& coast, double time_tol) {
    coast.validate();
    if (scan_grid.size() < 2) throw ConfigError("grounding scan grid needs >= 2 points");

    auto outside = [&](double t) { return (position(t) - coast.center).norm() >= coast.radius; };

    if (outside(scan_grid.front())) {
        throw ConfigError("trajectory starts outside the coast disk");
    }

    double t_in = scan_grid.front();
    double t_out = 0.0;
    bool found = false;
    for (std::size_t i = 1; i < scan_grid.size(); ++i) {
        if (outside(scan_grid[i])) {
            t_out = scan_grid[i];
            found = true;
            break;
        }
        t_in = scan_grid[i];
    }
    if (!found) return std::nullopt;

    while (t_out - t_in > time_tol) {
        const double mid = 0.5 * (t_in + t_out);
        (outside(mid) ? t_out : t_in) = mid;
    }
    const double t_star = 0.5 * (t_in + t_out);
    return GroundingEvent{t_star, compass_angle_deg(position(t_star) - coast.center)};
}

std::optional<GroundingEvent> detect_grounding(const Trajectory& traj, const CoastCircle& coast,
                                               double time_tol) {
    return detect_grounding([&](double t) { return traj.at(t).x; }, traj.sample_times(), coast,
                            time_tol);
}

std::vector<double> grounding_scan_grid(double t0, double t1, double eps, int per_cycle) {
    const auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / eps)) *
                       static_cast<std::size_t>(per_cycle) +
                   1;
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return grid;
}

}  // namespace driftmc
