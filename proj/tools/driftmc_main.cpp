// driftmc: long-horizon drift forecasting on tide-averaged dynamics.
//
// Subcommands:
//   simulate     integrate one trajectory (direct, averaged+reconstructed, or both)
//   error-table  direct-vs-reconstructed sup-norm error study over (eps, p) grids
//   ensemble     Monte Carlo grounding probability with synthetic wind
//   wind-gen     emit one synthesized wind series as CSV
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "driftmc/averaged.hpp"
#include "driftmc/direct.hpp"
#include "driftmc/ensemble.hpp"
#include "driftmc/errors.hpp"
#include "driftmc/report.hpp"
#include "driftmc/run_config.hpp"

namespace {

using namespace driftmc;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

void ensure_out_dir(const RunConfig& cfg) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + cfg.out_dir + "'");
}

json base_manifest(const RunConfig& cfg, const std::string& command) {
    json m;
    m["tool"] = "driftmc";
    m["version"] = kDriftmcVersion;
    m["command"] = command;
    m["config"] = cfg.to_json();
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(cfg.config_hash()));
    m["config_hash"] = hash;
    m["master_seed"] = cfg.master_seed;
    return m;
}

void write_manifest(const RunConfig& cfg, const json& manifest) {
    write_file(out_path(cfg, "manifest.json"), manifest.dump(2) + "\n");
}

// --------------------------------------------------------------------------

int cmd_simulate(const RunConfig& cfg) {
    ensure_out_dir(cfg);
    const double p = cfg.resolved_p();
    const FieldBundle fields = make_field_bundle(cfg.tide_field, cfg.perturbation_field);

    const double dt2 = cfg.wind_dt2 > 0.0 ? cfg.wind_dt2 : cfg.eps / 100.0;
    double lo = 0.0, hi = 0.0;
    required_wind_span(cfg.eps, p, dt2, cfg.order, lo, hi);
    const WindSeries wind = make_wind(cfg.to_wind_config(), cfg.eps, std::min(lo, 0.0),
                                      std::max(hi, 1.0), cfg.master_seed);

    json manifest = base_manifest(cfg, "simulate");
    json outputs = json::array();

    const bool want_direct = cfg.what == "direct" || cfg.what == "both";
    const bool want_averaged = cfg.what == "averaged" || cfg.what == "both";

    std::optional<Trajectory> direct;
    if (want_direct) {
        direct.emplace(
            integrate_direct(fields, wind, cfg.eps, {cfg.x0_1, cfg.x0_2}, {cfg.v0_1, cfg.v0_2},
                             cfg.direct_options()));
        std::ostringstream csv;
        direct->write_csv(csv);
        write_file(out_path(cfg, "direct.csv"), csv.str());
        outputs.push_back("direct.csv");
        manifest["direct"] = {{"rhs_evals", direct->stats().nfev},
                              {"accepted_steps", direct->stats().naccepted},
                              {"rejected_steps", direct->stats().nrejected}};
    }

    std::optional<AveragedTrajectory> avg;
    if (want_averaged) {
        avg.emplace(integrate_averaged(fields, wind, cfg.eps, p, {cfg.x0_1, cfg.x0_2},
                                       {cfg.v0_1, cfg.v0_2}, cfg.order, {cfg.n_theta},
                                       cfg.averaged_options()));
        {
            std::ostringstream csv;
            avg->write_csv(csv);
            write_file(out_path(cfg, "averaged.csv"), csv.str());
            outputs.push_back("averaged.csv");
        }
        // Reconstructed motion on the uniform tide-resolving grid.
        {
            const auto times = make_sample_times({}, 0.0, 1.0, cfg.eps);
            std::ostringstream csv;
            csv << "t,x1,x2,v1,v2\n";
            char buf[160];
            for (double t : times) {
                const State s = reconstruct(t, *avg, fields, wind, cfg.eps, cfg.order);
                std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", t, s.x.x,
                              s.x.y, s.v.x, s.v.y);
                csv << buf;
            }
            write_file(out_path(cfg, "reconstructed.csv"), csv.str());
            outputs.push_back("reconstructed.csv");
        }
        manifest["averaged"] = {{"rhs_evals", avg->stats().nfev},
                                {"accepted_steps", avg->stats().naccepted},
                                {"order", cfg.order}};
    }

    if (direct && avg && cfg.order == 1) {
        const SupErrors e = sup_errors(*direct, *avg, fields, wind);
        manifest["sup_errors"] = {{"speed_order0", e.speed0},
                                  {"speed_order1", e.speed1},
                                  {"position_order0", e.position0},
                                  {"position_order1", e.position1}};
    }

    manifest["outputs"] = outputs;
    write_manifest(cfg, manifest);
    std::cout << "simulate: wrote " << outputs.size() << " file(s) + manifest.json to "
              << cfg.out_dir << "\n";
    return kExitOk;
}

int cmd_error_table(RunConfig cfg) {
    ensure_out_dir(cfg);
    int members = cfg.table_members;
    if (cfg.wind_model == "none" && members != 1) {
        members = 1;  // calm runs are identical across members
        std::cout << "error-table: wind model 'none' is deterministic; using 1 member\n";
    }
    const ErrorTable table =
        error_table(cfg.to_ensemble_config(), cfg.eps_list, cfg.p_factors, members);

    json manifest = base_manifest(cfg, "error-table");
    manifest["table"] = error_table_to_json(table);
    write_file(out_path(cfg, "error_table.json"), manifest["table"].dump(2) + "\n");
    {
        std::ostringstream txt;
        write_error_table_text(txt, table);
        write_file(out_path(cfg, "error_table.txt"), txt.str());
        std::cout << txt.str();
    }
    manifest["outputs"] = {"error_table.json", "error_table.txt"};
    write_manifest(cfg, manifest);
    return kExitOk;
}

int cmd_ensemble(const RunConfig& cfg) {
    ensure_out_dir(cfg);
    const GroundingReport report = run_ensemble(cfg.to_ensemble_config());

    write_file(out_path(cfg, "grounding.json"), grounding_report_to_json(report).dump(2) + "\n");
    {
        std::ostringstream os;
        write_angle_histogram_csv(os, report.angle_histogram);
        write_file(out_path(cfg, "angle_histogram.csv"), os.str());
    }
    {
        std::ostringstream os;
        write_wind_rose_csv(os, report.rose);
        write_file(out_path(cfg, "wind_rose.csv"), os.str());
    }
    {
        std::ostringstream os;
        write_members_csv(os, report);
        write_file(out_path(cfg, "members.csv"), os.str());
    }
    json manifest = base_manifest(cfg, "ensemble");
    manifest["outputs"] = {"grounding.json", "angle_histogram.csv", "wind_rose.csv",
                           "members.csv"};
    manifest["probability"] = report.probability;
    manifest["standard_error"] = report.standard_error;
    write_manifest(cfg, manifest);

    std::ostringstream txt;
    write_grounding_report_text(txt, report);
    std::cout << txt.str();
    return kExitOk;
}

int cmd_wind_gen(const RunConfig& cfg) {
    ensure_out_dir(cfg);
    const WindSeries wind =
        make_wind(cfg.to_wind_config(), cfg.eps, cfg.span_lo, cfg.span_hi, cfg.master_seed);
    std::ostringstream csv;
    wind.write_csv(csv);
    write_file(out_path(cfg, "wind.csv"), csv.str());
    json manifest = base_manifest(cfg, "wind-gen");
    manifest["outputs"] = {"wind.csv"};
    write_manifest(cfg, manifest);
    std::cout << "wind-gen: wrote wind.csv to " << cfg.out_dir << "\n";
    return kExitOk;
}

void attach_common(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--epsilon", cfg.eps, "Tide period / observation horizon ratio");
    cmd->add_option("--p-window", cfg.p, "Wind averaging window (default eps/2)");
    cmd->add_option("--order", cfg.order, "Reconstruction order, 0 or 1");
    cmd->add_option("--x0", cfg.x0_1, "Initial position, first component");
    cmd->add_option("--y0", cfg.x0_2, "Initial position, second component");
    cmd->add_option("--u0", cfg.v0_1, "Initial velocity, first component");
    cmd->add_option("--v0", cfg.v0_2, "Initial velocity, second component");
    cmd->add_option("--seed", cfg.master_seed, "Master seed (env DRIFT_SEED)")
        ->envname("DRIFT_SEED");
    cmd->add_option("--out", cfg.out_dir, "Output directory");
    cmd->add_option("--threads", cfg.threads, "Worker cap (0 = hardware)");

    auto set_fields = [&cfg](const std::string& v) {
        if (v == "none") {
            cfg.tide_field = "none";
            cfg.perturbation_field = "none";
        } else if (v == "paper") {
            cfg.tide_field = "paper-tide";
            cfg.perturbation_field = "paper-perturbation";
        } else {
            throw CLI::ValidationError("--fields", "expected 'paper' or 'none'");
        }
    };
    cmd->add_option_function<std::string>("--fields", set_fields,
                                          "Sea velocity fields: paper | none");
    cmd->add_option("--tide-field", cfg.tide_field, "Tide field name");
    cmd->add_option("--perturbation-field", cfg.perturbation_field, "Perturbation field name");

    cmd->add_option("--wind", cfg.wind_model, "Wind model: markov | catalog | none");
    cmd->add_option("--wind-dt1", cfg.wind_dt1, "Synoptic sampling step (slow time)");
    cmd->add_option("--wind-dt2", cfg.wind_dt2, "Small-scale sampling step (slow time)");
    cmd->add_option("--wind-mean-u", cfg.wind_mean_u, "Synoptic mean wind, u");
    cmd->add_option("--wind-mean-v", cfg.wind_mean_v, "Synoptic mean wind, v");
    cmd->add_option("--wind-sd", cfg.wind_marginal_sd, "Synoptic per-component sd");
    cmd->add_option("--wind-persistence", cfg.wind_persistence,
                    "Synoptic AR coefficient per dt1 step (0 = derive from memory)");
    cmd->add_option("--wind-memory-days", cfg.wind_memory_days, "Synoptic decorrelation time");
    cmd->add_option("--wind-catalog", cfg.wind_catalog, "Catalog CSV for the catalog model");
    cmd->add_option("--wind-block-samples", cfg.wind_block_samples, "Resampling block length");
    cmd->add_option("--wind-rotation-jitter", cfg.wind_rotation_jitter_deg,
                    "Catalog block rotation jitter (degrees)");
    cmd->add_option("--small-a", cfg.small_a, "Small-scale AR(1) coefficient");
    cmd->add_option("--small-sigma", cfg.small_sigma,
                    "Small-scale innovation sd (when ratio calibration is off)");
    cmd->add_option("--small-sd-ratio", cfg.small_sd_ratio,
                    "Target small-scale/total sd ratio (<= 0 disables calibration)");

    cmd->add_option("--direct-rtol", cfg.direct_rtol, "Direct integrator relative tolerance");
    cmd->add_option("--direct-atol", cfg.direct_atol, "Direct integrator absolute tolerance");
    cmd->add_option("--direct-max-step", cfg.direct_max_step,
                    "Direct integrator max step (<= 0 unlimited)");
    cmd->add_option("--averaged-rtol", cfg.averaged_rtol, "Slow integrator relative tolerance");
    cmd->add_option("--averaged-atol", cfg.averaged_atol, "Slow integrator absolute tolerance");
    cmd->add_option("--n-theta", cfg.n_theta, "Phase quadrature nodes per period");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Long-horizon ocean drift forecasting via tide-averaged dynamics"};
    app.set_config("--config", "", "Read options from a config file (flags win)");
    app.require_subcommand(1);

    RunConfig cfg;

    CLI::App* sim = app.add_subcommand("simulate", "Integrate one trajectory");
    attach_common(sim, cfg);
    sim->add_option("--what", cfg.what, "Outputs: direct | averaged | both");

    CLI::App* tab = app.add_subcommand("error-table", "Direct vs reconstructed error study");
    attach_common(tab, cfg);
    tab->add_option("--epsilon-list", cfg.eps_list, "Epsilon values")->delimiter(',');
    tab->add_option("--p-factors", cfg.p_factors, "Window factors, p = factor * eps")
        ->delimiter(',');
    tab->add_option("--members", cfg.table_members, "Wind draws per cell");

    CLI::App* ens = app.add_subcommand("ensemble", "Monte Carlo grounding probability");
    attach_common(ens, cfg);
    ens->add_option("--members", cfg.n_members, "Ensemble size");
    ens->add_option("--coast-center-x", cfg.coast_center_1, "Coast circle center, x");
    ens->add_option("--coast-center-y", cfg.coast_center_2, "Coast circle center, y");
    ens->add_option("--coast-radius", cfg.coast_radius, "Coast circle radius");
    ens->add_flag("--allow-member-failures", cfg.allow_member_failures,
                  "Record failed members instead of aborting");
    ens->add_flag("--cross-check-direct", cfg.cross_check_direct,
                  "Also classify grounding on the direct solution");
    ens->add_option("--angle-bins", cfg.angle_bins, "Grounding angle sectors");
    ens->add_option("--rose-direction-bins", cfg.rose_direction_bins, "Wind rose sectors");
    ens->add_option("--rose-speed-classes", cfg.rose_speed_classes, "Wind rose speed classes");

    CLI::App* wg = app.add_subcommand("wind-gen", "Emit a synthesized wind series");
    attach_common(wg, cfg);
    wg->add_option("--span-lo", cfg.span_lo, "Series start (slow time)");
    wg->add_option("--span-hi", cfg.span_hi, "Series end (slow time)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        cfg.validate();
        if (sim->parsed()) return cmd_simulate(cfg);
        if (tab->parsed()) return cmd_error_table(cfg);
        if (ens->parsed()) return cmd_ensemble(cfg);
        if (wg->parsed()) return cmd_wind_gen(cfg);
        std::cerr << "driftmc: no subcommand\n";
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "driftmc: configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "driftmc: i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const NumericError& e) {
        std::cerr << "driftmc: numerical failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "driftmc: error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
