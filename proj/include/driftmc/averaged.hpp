#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "driftmc/dopri5.hpp"
#include "driftmc/fields.hpp"
#include "driftmc/trajectory.hpp"
#include "driftmc/wind.hpp"

namespace driftmc {

/// Phase-average quadrature: composite trapezoid on the uniform periodic
/// grid theta_j = j/n_theta. Spectrally accurate for the trigonometric
/// built-in fields.
struct QuadratureConfig {
    int n_theta = 64;
    void validate() const;
};

/// Slow (tide-averaged) state: leading-order position/velocity (y0, u0) and
/// their first-order corrections (y1, u1).
struct AveragedState {
    Vec2 y0, u0, y1, u1;
};

/// Phase-averaged field combinations entering the first-order slow
/// equations, all evaluated at slow time t and position y0. A1 denotes the
/// running phase integral of the tide field.
struct AveragedFieldTerms {
    Vec2 grad_m_a1_avg;  ///< avg of (grad M) A1 over one period
    Vec2 n_avg;          ///< avg of N
    Vec2 n_at0;          ///< N at phase 0
    Vec2 a1_avg;         ///< avg of A1
    Vec2 a1_dt_avg;      ///< avg of dA1/dt
    Vec2 n_dt_at0;       ///< dN/dt at phase 0
    Mat2 a1_jac_avg;     ///< avg of grad A1
    Mat2 n_jac_at0;      ///< grad N at phase 0
};

AveragedFieldTerms averaged_field_terms(const FieldBundle& fields, double t, Vec2 y0,
                                        const QuadratureConfig& quad);

/// Leading-order slow equations: dy0 = u0, du0 = (windowed mean of W) - u0.
/// The tide drops out entirely (zero phase mean); the wind enters only
/// through its moving average, and position is ignored because the wind is
/// homogeneous in space.
void rhs_order0(double t, Vec2 y0, Vec2 u0, const WindSeries& wind, double p, Vec2& dy0,
                Vec2& du0);

/// First-order slow equations. Every phase-average of tide/perturbation
/// combinations uses the periodic quadrature with the closed-form phase
/// integrals as inner integrals; wind oscillation terms come from the
/// cycle-exact quadratures of WindSeries; gradients of the wind vanish
/// (spatially homogeneous wind) and would re-enter here as
/// avg(grad W) * y1 and avg((grad W) A1) terms for an inhomogeneous model.
void rhs_order1(double t, const AveragedState& s, const FieldBundle& fields,
                const WindSeries& wind, double eps, double p, const QuadratureConfig& quad,
                AveragedState& ds);

/// Solution of the slow system, stored on its accepted nodes. The slow state
/// is smooth on the t-scale, so nodes are few and Hermite queries cheap.
class AveragedTrajectory {
  public:
    AveragedTrajectory(std::vector<OdeNode<8>> nodes, double eps, double p, int order,
                       int n_theta, OdeOptions opts, OdeStats stats, std::uint64_t wind_seed);

    AveragedState at(double t) const;
    double t_begin() const { return nodes_.front().t; }
    double t_end() const { return nodes_.back().t; }

    double eps() const { return eps_; }
    double p() const { return p_; }
    int order() const { return order_; }
    int n_theta() const { return n_theta_; }
    const OdeOptions& options() const { return opts_; }
    const OdeStats& stats() const { return stats_; }
    std::uint64_t wind_seed() const { return wind_seed_; }

    /// CSV rows `t,y0_1,y0_2,u0_1,u0_2,y1_1,y1_2,u1_1,u1_2` at the nodes.
    void write_csv(std::ostream& os) const;

  private:
    std::vector<OdeNode<8>> nodes_;
    double eps_;
    double p_;
    int order_;
    int n_theta_;
    OdeOptions opts_;
    OdeStats stats_;
    std::uint64_t wind_seed_;
};

/// Wind span needed to integrate the slow system on [0, 1]: the moving
/// average reaches p/2 past both ends (plus one finite-difference step), and
/// the cycle quadratures at t = 1 extend into the tide cycle starting there.
void required_wind_span(double eps, double p, double dt2, int order, double& t_lo, double& t_hi);

/// Integrates the slow system on [0, 1] from y0(0) = x0, u0(0) = v0,
/// y1(0) = u1(0) = 0. order selects the leading-order system alone (0) or
/// the full first-order quadruple (1). The evaluation count is independent
/// of eps for fixed tolerances. Defaults: rtol 1e-6, atol 1e-9.
AveragedTrajectory integrate_averaged(const FieldBundle& fields, const WindSeries& wind,
                                      double eps, double p, Vec2 x0, Vec2 v0, int order,
                                      const QuadratureConfig& quad = {},
                                      OdeOptions opts = {1e-6, 1e-9});

/// Maps the slow state at t back to the oscillatory motion. Order 0:
///   X = y0,  V = M(t, t/eps, y0) + u0.
/// Order 1 adds eps-scaled corrections: the position gains y1 plus the tide
/// phase integral A1 (the displacement of a water particle since the cycle
/// start); the velocity gains the tide-gradient coupling, u1, the
/// perturbation increment since phase 0, the cumulated wind deviation around
/// its windowed mean over the current cycle, and -A1. At integer phases the
/// oscillatory corrections vanish by construction.
State reconstruct(double t, const AveragedTrajectory& avg, const FieldBundle& fields,
                  const WindSeries& wind, double eps, int order);

}  // namespace driftmc
