#include "driftmc/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace driftmc {

std::vector<double> make_sample_times(const std::vector<double>& node_times, double t0, double t1,
                                      double eps) {
    const auto n_uniform = static_cast<std::size_t>(2.0 * std::ceil(1.0 / eps) * 32.0);
    std::vector<double> times;
    times.reserve(node_times.size() + n_uniform + 1);
    times.insert(times.end(), node_times.begin(), node_times.end());
    for (std::size_t j = 0; j <= n_uniform; ++j) {
        times.push_back(t0 + (t1 - t0) * static_cast<double>(j) / static_cast<double>(n_uniform));
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    return times;
}

Trajectory::Trajectory(std::vector<OdeNode<4>> nodes, double eps, OdeOptions opts, OdeStats stats,
                       std::uint64_t wind_seed)
    : nodes_(std::move(nodes)), eps_(eps), opts_(opts), stats_(stats), wind_seed_(wind_seed) {
    std::vector<double> node_times;
    node_times.reserve(nodes_.size());
    for (const auto& n : nodes_) node_times.push_back(n.t);
    sample_times_ = make_sample_times(node_times, nodes_.front().t, nodes_.back().t, eps_);
}

State Trajectory::at(double t) const {
    const auto y = hermite_eval<4>(nodes_, t);
    return {{y[0], y[1]}, {y[2], y[3]}};
}

void Trajectory::write_csv(std::ostream& os) const {
    os << "t,x1,x2,v1,v2\n";
    char buf[160];
    for (double t : sample_times_) {
        const State s = at(t);
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", t, s.x.x, s.x.y,
                      s.v.x, s.v.y);
        os << buf;
    }
}

}  // namespace driftmc
