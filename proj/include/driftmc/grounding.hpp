#pragma once

#include <functional>
#include <optional>

#include "driftmc/geometry.hpp"
#include "driftmc/trajectory.hpp"

namespace driftmc {

/// Circular coast line. The object starts at the center; grounding is the
/// first exit from the open disk.
struct CoastCircle {
    Vec2 center{1.0, 1.0};
    double radius = 0.3;
    void validate() const;
};

struct GroundingEvent {
    double time = 0.0;
    double angle_deg = 0.0;  ///< compass angle of the exit point seen from the center
};

using PositionSampler = std::function<Vec2(double)>;

/// Scans positions on the given time grid and refines the first crossing of
/// the coast circle by bisection to `time_tol`. Returns nullopt when the
/// object stays inside the disk on [grid.front(), grid.back()]. Throws
/// ConfigError when the trajectory starts outside the disk.
std::optional<GroundingEvent> detect_grounding(const PositionSampler& position,
                                               const std::vector<double>& scan_grid,
                                               const CoastCircle& coast, double time_tol = 1e-6);

/// Grounding on a fully resolved trajectory, scanned at its sample grid.
std::optional<GroundingEvent> detect_grounding(const Trajectory& traj, const CoastCircle& coast,
                                               double time_tol = 1e-6);

/// Uniform scan grid with `per_cycle` points per tide period on [t0, t1];
/// tide loops can cross the circle between slow-scale nodes, so grounding on
/// reconstructed motion must scan at least a few dozen points per cycle.
std::vector<double> grounding_scan_grid(double t0, double t1, double eps, int per_cycle = 32);

}  // namespace driftmc
