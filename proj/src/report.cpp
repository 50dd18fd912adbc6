#include "driftmc/report.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "driftmc/errors.hpp"

namespace driftmc {

using nlohmann::json;

namespace {

json histogram_json(const AngleHistogram& h) {
    json j;
    j["n_bins"] = h.n_bins;
    j["bin_width_deg"] = 360.0 / h.n_bins;
    json centers = json::array();
    for (int k = 0; k < h.n_bins; ++k) centers.push_back(k * 360.0 / h.n_bins);
    j["bin_centers_deg"] = centers;
    j["counts"] = h.counts;
    j["total"] = h.total;
    return j;
}

json rose_json(const WindRose& r) {
    json j;
    j["direction_bins"] = r.n_dir;
    j["direction_convention"] = "compass degrees the wind blows from, bin 0 = north";
    j["speed_class_bounds"] = r.speed_class_bounds;
    j["counts"] = r.counts;
    j["total"] = r.total;
    return j;
}

}  // namespace

json grounding_report_to_json(const GroundingReport& report) {
    json j;
    j["n_members"] = report.n_members;
    j["n_failed"] = report.n_failed;
    j["n_grounded"] = report.n_grounded;
    j["probability"] = report.probability;
    j["standard_error"] = report.standard_error;
    j["mean_grounding_time"] = report.mean_grounding_time;
    if (report.disagreement_rate >= 0.0) {
        j["direct_disagreement_rate"] = report.disagreement_rate;
    }
    j["master_seed"] = report.master_seed;
    j["epsilon"] = report.eps;
    j["p_window"] = report.p;
    j["order"] = report.order;
    j["coast"] = {{"center", {report.coast.center.x, report.coast.center.y}},
                  {"radius", report.coast.radius}};
    j["rhs_evals_averaged"] = report.rhs_evals_averaged;
    j["rhs_evals_direct"] = report.rhs_evals_direct;
    j["angle_histogram"] = histogram_json(report.angle_histogram);
    j["wind_rose"] = rose_json(report.rose);
    return j;
}

json error_table_to_json(const ErrorTable& table) {
    json rows = json::array();
    for (const auto& r : table.rows) {
        json row;
        row["epsilon"] = r.eps;
        row["p_window"] = r.p;
        row["n_members"] = r.n_members;
        row["p_out_of_recommended_range"] = r.p_out_of_recommended;
        auto stats = [](const ErrorStats& s) {
            return json{{"mean", s.mean}, {"min", s.min}, {"max", s.max}};
        };
        row["speed_order0"] = stats(r.speed_order0);
        row["speed_order1"] = stats(r.speed_order1);
        row["position_order0"] = stats(r.position_order0);
        row["position_order1"] = stats(r.position_order1);
        row["rhs_evals_direct"] = r.rhs_evals_direct;
        row["rhs_evals_averaged"] = r.rhs_evals_averaged;
        rows.push_back(row);
    }
    return json{{"rows", rows}};
}

namespace {

std::string stat_cell(const ErrorStats& s) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%.4f [%.4f,%.4f]", s.mean, s.min, s.max);
    return buf;
}

}  // namespace

void write_error_table_text(std::ostream& os, const ErrorTable& table) {
    os << std::left << std::setw(22) << "eps      p" << std::setw(26) << "speed (order 0)"
       << std::setw(26) << "speed (order 1)" << std::setw(26) << "position (order 0)"
       << std::setw(26) << "position (order 1)" << "\n";
    for (const auto& r : table.rows) {
        char head[64];
        std::snprintf(head, sizeof(head), "%-8.4g %-8.4g%s", r.eps, r.p,
                      r.p_out_of_recommended ? " !" : "");
        os << std::left << std::setw(22) << head << std::setw(26) << stat_cell(r.speed_order0)
           << std::setw(26) << stat_cell(r.speed_order1) << std::setw(26)
           << stat_cell(r.position_order0) << std::setw(26) << stat_cell(r.position_order1)
           << "\n";
    }
    os << "('!' marks windows above the recommended upper bound p = eps)\n";
}

void write_grounding_report_text(std::ostream& os, const GroundingReport& report) {
    os << "members            " << report.n_members << "\n";
    if (report.n_failed > 0) os << "failed             " << report.n_failed << "\n";
    os << "grounded           " << report.n_grounded << "\n";
    char buf[128];
    std::snprintf(buf, sizeof(buf), "probability        %.4f +/- %.4f (binomial se)\n",
                  report.probability, report.standard_error);
    os << buf;
    if (report.n_grounded > 0) {
        std::snprintf(buf, sizeof(buf), "mean grounding t   %.4f\n", report.mean_grounding_time);
        os << buf;
    }
    if (report.disagreement_rate >= 0.0) {
        std::snprintf(buf, sizeof(buf), "direct disagreement %.4f\n", report.disagreement_rate);
        os << buf;
    }
}

void write_angle_histogram_csv(std::ostream& os, const AngleHistogram& hist) {
    os << "bin_center_deg,count,proportion\n";
    char buf[96];
    for (int k = 0; k < hist.n_bins; ++k) {
        const auto c = hist.counts.empty() ? 0LL : hist.counts[static_cast<std::size_t>(k)];
        const double prop =
            hist.total > 0 ? static_cast<double>(c) / static_cast<double>(hist.total) : 0.0;
        std::snprintf(buf, sizeof(buf), "%.17g,%lld,%.17g\n", k * 360.0 / hist.n_bins, c, prop);
        os << buf;
    }
}

void write_wind_rose_csv(std::ostream& os, const WindRose& rose) {
    os << "direction_deg,speed_class,count,proportion\n";
    char buf[96];
    for (int d = 0; d < rose.n_dir; ++d) {
        for (std::size_t c = 0; c < rose.counts[static_cast<std::size_t>(d)].size(); ++c) {
            const auto cnt = rose.counts[static_cast<std::size_t>(d)][c];
            const double prop =
                rose.total > 0 ? static_cast<double>(cnt) / static_cast<double>(rose.total) : 0.0;
            std::snprintf(buf, sizeof(buf), "%.17g,%zu,%lld,%.17g\n", d * 360.0 / rose.n_dir, c,
                          cnt, prop);
            os << buf;
        }
    }
}

void write_members_csv(std::ostream& os, const GroundingReport& report) {
    os << "member,grounded,time,angle_deg\n";
    char buf[128];
    for (std::size_t i = 0; i < report.members.size(); ++i) {
        const auto& m = report.members[i];
        if (m.grounded) {
            std::snprintf(buf, sizeof(buf), "%zu,1,%.17g,%.17g\n", i, m.time, m.angle_deg);
        } else {
            std::snprintf(buf, sizeof(buf), "%zu,0,,\n", i);
        }
        os << buf;
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace driftmc
