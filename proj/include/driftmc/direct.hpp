#pragma once

#include "driftmc/fields.hpp"
#include "driftmc/trajectory.hpp"
#include "driftmc/wind.hpp"

namespace driftmc {

/// Integrates the full rescaled drift system over t in [0, 1]:
///
///   dX/dt = V
///   dV/dt = (1/eps) dM/dtheta + dM/dt + dN/dtheta + (grad M) V + W - V
///           + eps * ( dN/dt + (grad N) V ),
///
/// with all fields evaluated at (t, t/eps, X) and W the synthesized wind at
/// t. The (1/eps) term makes the system stiff: the step size, and therefore
/// the evaluation count, scales with the number of tide cycles resolved.
///
/// Requires the wind span to cover [0, 1]. Defaults: rtol 1e-8, atol 1e-10.
Trajectory integrate_direct(const FieldBundle& fields, const WindSeries& wind, double eps,
                            Vec2 x0, Vec2 v0, const OdeOptions& opts = {});

}  // namespace driftmc
