// Python bindings for the drift forecasting core. Vec2 crosses the boundary
// as a (x, y) tuple; trajectories expose sampled arrays rather than the
// internal node storage.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "driftmc/averaged.hpp"
#include "driftmc/direct.hpp"
#include "driftmc/ensemble.hpp"
#include "driftmc/run_config.hpp"

namespace py = pybind11;
using namespace driftmc;

namespace {

using Pair = std::pair<double, double>;

Pair to_pair(Vec2 v) { return {v.x, v.y}; }
Vec2 to_vec(Pair p) { return {p.first, p.second}; }

WindConfig wind_config_from(const std::string& model, Pair mean, double marginal_sd,
                            double persistence, double memory_days, const std::string& catalog,
                            double small_a, double small_sigma, double small_sd_ratio,
                            double dt1, double dt2) {
    RunConfig rc;
    rc.wind_model = model;
    rc.wind_mean_u = mean.first;
    rc.wind_mean_v = mean.second;
    rc.wind_marginal_sd = marginal_sd;
    rc.wind_persistence = persistence;
    rc.wind_memory_days = memory_days;
    rc.wind_catalog = catalog;
    rc.small_a = small_a;
    rc.small_sigma = small_sigma;
    rc.small_sd_ratio = small_sd_ratio;
    rc.wind_dt1 = dt1;
    rc.wind_dt2 = dt2;
    return rc.to_wind_config();
}

}  // namespace

PYBIND11_MODULE(_driftmc, m) {
    m.doc() = "Tide-averaged ocean drift forecasting";
    m.attr("__version__") = kDriftmcVersion;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericalError", PyExc_RuntimeError);

    py::class_<FieldBundle>(m, "FieldBundle")
        .def("tide", [](const FieldBundle& b, double t, double theta, Pair x) {
            return to_pair(b.tide->value(t, theta, to_vec(x)));
        })
        .def("tide_phase_integral", [](const FieldBundle& b, double t, double theta, Pair x) {
            return to_pair(b.tide->theta_antiderivative(t, theta, to_vec(x)));
        })
        .def("perturbation", [](const FieldBundle& b, double t, double theta, Pair x) {
            return to_pair(b.perturbation->value(t, theta, to_vec(x)));
        });

    m.def("make_field_bundle", &make_field_bundle, py::arg("tide") = "paper-tide",
          py::arg("perturbation") = "paper-perturbation");

    py::class_<WindSeries>(m, "WindSeries")
        .def_property_readonly("eps", &WindSeries::eps)
        .def_property_readonly("seed", &WindSeries::seed)
        .def_property_readonly("t_begin", &WindSeries::t_begin)
        .def_property_readonly("t_end", &WindSeries::t_end)
        .def("value", [](const WindSeries& w, double t) { return to_pair(w.value(t)); })
        .def("windowed_mean",
             [](const WindSeries& w, double t, double p) { return to_pair(w.windowed_mean(t, p)); })
        .def("cycle_integral",
             [](const WindSeries& w, double t) { return to_pair(w.cycle_integral(t)); })
        .def("oscillation_moments", [](const WindSeries& w, double t, double p) {
            const auto mlt = w.oscillation_moments(t, p);
            return std::make_pair(to_pair(mlt.i_w), to_pair(mlt.j_w));
        });

    m.def(
        "synthesize_wind",
        [](double eps, double t_lo, double t_hi, std::uint64_t seed, const std::string& model,
           Pair mean, double marginal_sd, double persistence, double memory_days,
           const std::string& catalog, double small_a, double small_sigma, double small_sd_ratio,
           double dt1, double dt2) {
            const WindConfig cfg =
                wind_config_from(model, mean, marginal_sd, persistence, memory_days, catalog,
                                 small_a, small_sigma, small_sd_ratio, dt1, dt2);
            return make_wind(cfg, eps, t_lo, t_hi, seed);
        },
        py::arg("eps"), py::arg("t_lo"), py::arg("t_hi"), py::arg("seed"),
        py::arg("model") = "markov", py::arg("mean") = Pair{0.0, -1.0},
        py::arg("marginal_sd") = 0.5, py::arg("persistence") = 0.0,
        py::arg("memory_days") = 3.0, py::arg("catalog") = "", py::arg("small_a") = 0.95,
        py::arg("small_sigma") = 0.05, py::arg("small_sd_ratio") = 0.10, py::arg("dt1") = 0.0,
        py::arg("dt2") = 0.0);

    m.def("zero_wind", &zero_wind, py::arg("eps"), py::arg("t_lo"), py::arg("t_hi"));
    m.def("required_wind_span", [](double eps, double p, double dt2, int order) {
        double lo = 0.0, hi = 0.0;
        required_wind_span(eps, p, dt2 > 0.0 ? dt2 : eps / 100.0, order, lo, hi);
        return Pair{lo, hi};
    }, py::arg("eps"), py::arg("p"), py::arg("dt2") = 0.0, py::arg("order") = 1);

    py::class_<OdeOptions>(m, "OdeOptions")
        .def(py::init([](double rtol, double atol) {
                 return OdeOptions{rtol, atol};
             }),
             py::arg("rtol"), py::arg("atol"))
        .def_readwrite("rtol", &OdeOptions::rtol)
        .def_readwrite("atol", &OdeOptions::atol);

    py::class_<Trajectory>(m, "Trajectory")
        .def("state", [](const Trajectory& tr, double t) {
            const State s = tr.at(t);
            return std::make_pair(to_pair(s.x), to_pair(s.v));
        })
        .def_property_readonly("sample_times", &Trajectory::sample_times)
        .def_property_readonly("rhs_evals", [](const Trajectory& tr) { return tr.stats().nfev; });

    py::class_<AveragedTrajectory>(m, "AveragedTrajectory")
        .def("state", [](const AveragedTrajectory& tr, double t) {
            const AveragedState s = tr.at(t);
            return py::make_tuple(to_pair(s.y0), to_pair(s.u0), to_pair(s.y1), to_pair(s.u1));
        })
        .def_property_readonly("p", &AveragedTrajectory::p)
        .def_property_readonly("order", &AveragedTrajectory::order)
        .def_property_readonly("rhs_evals",
                               [](const AveragedTrajectory& tr) { return tr.stats().nfev; });

    m.def(
        "integrate_direct",
        [](const FieldBundle& fields, const WindSeries& wind, double eps, Pair x0, Pair v0,
           double rtol, double atol) {
            return integrate_direct(fields, wind, eps, to_vec(x0), to_vec(v0), {rtol, atol});
        },
        py::arg("fields"), py::arg("wind"), py::arg("eps"), py::arg("x0") = Pair{1.0, 1.0},
        py::arg("v0") = Pair{0.0, 0.0}, py::arg("rtol") = 1e-8, py::arg("atol") = 1e-10,
        py::call_guard<py::gil_scoped_release>());

    m.def(
        "integrate_averaged",
        [](const FieldBundle& fields, const WindSeries& wind, double eps, double p, Pair x0,
           Pair v0, int order, int n_theta, double rtol, double atol) {
            return integrate_averaged(fields, wind, eps, p > 0.0 ? p : 0.5 * eps, to_vec(x0),
                                      to_vec(v0), order, {n_theta}, {rtol, atol});
        },
        py::arg("fields"), py::arg("wind"), py::arg("eps"), py::arg("p") = 0.0,
        py::arg("x0") = Pair{1.0, 1.0}, py::arg("v0") = Pair{0.0, 0.0}, py::arg("order") = 1,
        py::arg("n_theta") = 64, py::arg("rtol") = 1e-6, py::arg("atol") = 1e-9,
        py::call_guard<py::gil_scoped_release>());

    m.def(
        "reconstruct",
        [](double t, const AveragedTrajectory& avg, const FieldBundle& fields,
           const WindSeries& wind, double eps, int order) {
            const State s = reconstruct(t, avg, fields, wind, eps, order);
            return std::make_pair(to_pair(s.x), to_pair(s.v));
        },
        py::arg("t"), py::arg("avg"), py::arg("fields"), py::arg("wind"), py::arg("eps"),
        py::arg("order") = 1);

    py::class_<CoastCircle>(m, "CoastCircle")
        .def(py::init([](Pair center, double radius) {
                 return CoastCircle{to_vec(center), radius};
             }),
             py::arg("center") = Pair{1.0, 1.0}, py::arg("radius") = 0.3)
        .def_property_readonly("center", [](const CoastCircle& c) { return to_pair(c.center); })
        .def_readwrite("radius", &CoastCircle::radius);

    py::class_<EnsembleConfig>(m, "EnsembleConfig")
        .def(py::init<>())
        .def_readwrite("n_members", &EnsembleConfig::n_members)
        .def_readwrite("master_seed", &EnsembleConfig::master_seed)
        .def_readwrite("eps", &EnsembleConfig::eps)
        .def_readwrite("p", &EnsembleConfig::p)
        .def_readwrite("order", &EnsembleConfig::order)
        .def_readwrite("threads", &EnsembleConfig::threads)
        .def_readwrite("coast", &EnsembleConfig::coast)
        .def_readwrite("wind", &EnsembleConfig::wind)
        .def_readwrite("cross_check_direct", &EnsembleConfig::cross_check_direct)
        .def_property(
            "x0", [](const EnsembleConfig& c) { return to_pair(c.x0); },
            [](EnsembleConfig& c, Pair v) { c.x0 = to_vec(v); })
        .def_property(
            "v0", [](const EnsembleConfig& c) { return to_pair(c.v0); },
            [](EnsembleConfig& c, Pair v) { c.v0 = to_vec(v); });

    py::class_<WindConfig>(m, "WindConfig")
        .def(py::init(&wind_config_from), py::arg("model") = "markov",
             py::arg("mean") = Pair{0.0, -1.0}, py::arg("marginal_sd") = 0.5,
             py::arg("persistence") = 0.0, py::arg("memory_days") = 3.0, py::arg("catalog") = "",
             py::arg("small_a") = 0.95, py::arg("small_sigma") = 0.05,
             py::arg("small_sd_ratio") = 0.10, py::arg("dt1") = 0.0, py::arg("dt2") = 0.0);

    py::class_<GroundingReport>(m, "GroundingReport")
        .def_readonly("n_members", &GroundingReport::n_members)
        .def_readonly("n_grounded", &GroundingReport::n_grounded)
        .def_readonly("probability", &GroundingReport::probability)
        .def_readonly("standard_error", &GroundingReport::standard_error)
        .def_readonly("mean_grounding_time", &GroundingReport::mean_grounding_time)
        .def_readonly("disagreement_rate", &GroundingReport::disagreement_rate)
        .def_property_readonly("grounding_times", [](const GroundingReport& r) {
            std::vector<double> out;
            for (const auto& mbr : r.members) {
                if (mbr.grounded) out.push_back(mbr.time);
            }
            return out;
        })
        .def_property_readonly("grounding_angles", [](const GroundingReport& r) {
            std::vector<double> out;
            for (const auto& mbr : r.members) {
                if (mbr.grounded) out.push_back(mbr.angle_deg);
            }
            return out;
        });

    m.def("run_ensemble", &run_ensemble, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
}
