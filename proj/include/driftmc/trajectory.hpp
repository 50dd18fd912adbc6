#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "driftmc/dopri5.hpp"
#include "driftmc/geometry.hpp"

namespace driftmc {

/// Instantaneous kinematic state of the drifting object.
struct State {
    Vec2 x;  ///< position
    Vec2 v;  ///< velocity
};

/// Numerical solution of the full oscillatory system: accepted integrator
/// nodes plus a uniform export grid dense enough to resolve every tide loop
/// (64 samples per tide period). Queries between nodes use cubic Hermite on
/// the stored derivatives.
class Trajectory {
  public:
    Trajectory(std::vector<OdeNode<4>> nodes, double eps, OdeOptions opts, OdeStats stats,
               std::uint64_t wind_seed);

    State at(double t) const;
    double t_begin() const { return nodes_.front().t; }
    double t_end() const { return nodes_.back().t; }

    /// Accepted-node times merged with the uniform grid; the recommended
    /// abscissae for error norms and plotting.
    const std::vector<double>& sample_times() const { return sample_times_; }

    double eps() const { return eps_; }
    const OdeOptions& options() const { return opts_; }
    const OdeStats& stats() const { return stats_; }
    std::uint64_t wind_seed() const { return wind_seed_; }

    /// CSV rows `t,x1,x2,v1,v2` at sample_times().
    void write_csv(std::ostream& os) const;

  private:
    std::vector<OdeNode<4>> nodes_;
    std::vector<double> sample_times_;
    double eps_;
    OdeOptions opts_;
    OdeStats stats_;
    std::uint64_t wind_seed_;
};

/// Builds the merged export grid for a solution span.
std::vector<double> make_sample_times(const std::vector<double>& node_times, double t0, double t1,
                                      double eps);

}  // namespace driftmc
