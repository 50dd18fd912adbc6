#include "driftmc/run_config.hpp"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "driftmc/errors.hpp"

namespace driftmc {

const char* const kDriftmcVersion = "0.1.0";

void RunConfig::validate() const {
    if (!(eps > 0.0) || !(eps < 1.0)) throw ConfigError("epsilon: must be in (0, 1)");
    if (p < 0.0) throw ConfigError("p_window: must be > 0 (or omitted for eps/2)");
    if (order != 0 && order != 1) throw ConfigError("order: must be 0 or 1");
    if (!std::isfinite(x0_1) || !std::isfinite(x0_2)) throw ConfigError("x0: must be finite");
    if (!std::isfinite(v0_1) || !std::isfinite(v0_2)) throw ConfigError("v0: must be finite");
    if (wind_model != "markov" && wind_model != "catalog" && wind_model != "none") {
        throw ConfigError("wind.model: expected markov, catalog or none");
    }
    if (wind_model == "catalog" && wind_catalog.empty()) {
        throw ConfigError("wind.catalog: path required for the catalog model");
    }
    if (!(direct_rtol > 0.0) || !(direct_atol > 0.0)) {
        throw ConfigError("direct tolerances: must be > 0");
    }
    if (!(averaged_rtol > 0.0) || !(averaged_atol > 0.0)) {
        throw ConfigError("averaged tolerances: must be > 0");
    }
    if (what != "direct" && what != "averaged" && what != "both") {
        throw ConfigError("what: expected direct, averaged or both");
    }
    if (!(span_lo < span_hi)) throw ConfigError("span: requires lo < hi");
    if (table_members < 1) throw ConfigError("table_members: must be >= 1");
    to_ensemble_config().validate();
}

WindConfig RunConfig::to_wind_config() const {
    WindConfig w;
    if (wind_model == "none") {
        w.enabled = false;
        return w;
    }
    w.enabled = true;
    w.synoptic.dt1 = wind_dt1;
    if (wind_model == "markov") {
        w.synoptic.model = SynopticModel::MarkovSurrogate;
        w.synoptic.markov.mean = {wind_mean_u, wind_mean_v};
        w.synoptic.markov.marginal_sd = wind_marginal_sd;
        w.synoptic.markov.persistence = wind_persistence;
        w.synoptic.markov.memory_days = wind_memory_days;
    } else {
        w.synoptic.model = SynopticModel::CatalogResample;
        w.synoptic.catalog.path = wind_catalog;
        w.synoptic.catalog.block_samples = wind_block_samples;
        w.synoptic.catalog.rotation_jitter_deg = wind_rotation_jitter_deg;
    }
    w.small.a = small_a;
    w.small.sigma = small_sigma;
    w.small.dt2 = wind_dt2;
    w.small.target_sd_ratio = small_sd_ratio;
    return w;
}

OdeOptions RunConfig::direct_options() const {
    OdeOptions o{direct_rtol, direct_atol};
    if (direct_max_step > 0.0) o.max_step = direct_max_step;
    return o;
}

OdeOptions RunConfig::averaged_options() const { return {averaged_rtol, averaged_atol}; }

EnsembleConfig RunConfig::to_ensemble_config() const {
    EnsembleConfig e;
    e.n_members = n_members;
    e.master_seed = master_seed;
    e.eps = eps;
    e.p = p;
    e.order = order;
    e.x0 = {x0_1, x0_2};
    e.v0 = {v0_1, v0_2};
    e.tide_field = tide_field;
    e.perturbation_field = perturbation_field;
    e.wind = to_wind_config();
    e.coast.center = {coast_center_1, coast_center_2};
    e.coast.radius = coast_radius;
    e.averaged_opts = averaged_options();
    e.direct_opts = direct_options();
    e.quad.n_theta = n_theta;
    e.threads = threads;
    e.allow_member_failures = allow_member_failures;
    e.cross_check_direct = cross_check_direct;
    e.angle_bins = angle_bins;
    e.rose_direction_bins = rose_direction_bins;
    e.rose_speed_classes = rose_speed_classes;
    e.rose_samples_per_member = rose_samples_per_member;
    return e;
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    j["epsilon"] = eps;
    j["p_window"] = p;
    j["p_window_resolved"] = resolved_p();
    j["order"] = order;
    j["x0"] = {x0_1, x0_2};
    j["v0"] = {v0_1, v0_2};
    j["fields"] = {{"tide", tide_field}, {"perturbation", perturbation_field}};
    nlohmann::json w;
    w["model"] = wind_model;
    w["dt1"] = wind_dt1;
    w["dt2"] = wind_dt2;
    if (wind_model == "markov") {
        w["mean"] = {wind_mean_u, wind_mean_v};
        w["marginal_sd"] = wind_marginal_sd;
        w["persistence"] = wind_persistence;
        w["memory_days"] = wind_memory_days;
    }
    if (wind_model == "catalog") {
        w["catalog"] = wind_catalog;
        w["block_samples"] = wind_block_samples;
        w["rotation_jitter_deg"] = wind_rotation_jitter_deg;
    }
    if (wind_model != "none") {
        w["small"] = {{"a", small_a},
                      {"sigma", small_sigma},
                      {"target_sd_ratio", small_sd_ratio}};
    }
    j["wind"] = w;
    j["integrators"] = {{"direct", {{"rtol", direct_rtol},
                                    {"atol", direct_atol},
                                    {"max_step", direct_max_step}}},
                        {"averaged", {{"rtol", averaged_rtol}, {"atol", averaged_atol}}},
                        {"n_theta", n_theta}};
    j["ensemble"] = {{"n_members", n_members},
                     {"threads", threads},
                     {"allow_member_failures", allow_member_failures},
                     {"cross_check_direct", cross_check_direct},
                     {"angle_bins", angle_bins},
                     {"rose_direction_bins", rose_direction_bins},
                     {"rose_speed_classes", rose_speed_classes},
                     {"rose_samples_per_member", rose_samples_per_member}};
    j["coast"] = {{"center", {coast_center_1, coast_center_2}}, {"radius", coast_radius}};
    j["error_table"] = {{"eps_list", eps_list},
                        {"p_factors", p_factors},
                        {"members", table_members}};
    j["master_seed"] = master_seed;
    j["out_dir"] = out_dir;
    j["what"] = what;
    j["span"] = {span_lo, span_hi};
    return j;
}

std::uint64_t RunConfig::config_hash() const {
    const std::string dump = to_json().dump();
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a 64
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace driftmc
