#pragma once

#include <iosfwd>
#include <string>

#include "driftmc/ensemble.hpp"

#include <nlohmann/json_fwd.hpp>

namespace driftmc {

nlohmann::json grounding_report_to_json(const GroundingReport& report);
nlohmann::json error_table_to_json(const ErrorTable& table);

/// Aligned human-readable table, one row per (eps, p): mean [min, max] of the
/// four sup-norm errors, with an out-of-range marker on the window column.
void write_error_table_text(std::ostream& os, const ErrorTable& table);

void write_grounding_report_text(std::ostream& os, const GroundingReport& report);

/// CSV: bin_center_deg,count,proportion
void write_angle_histogram_csv(std::ostream& os, const AngleHistogram& hist);

/// CSV: direction_deg,speed_class,count,proportion  (classes index quantile bands)
void write_wind_rose_csv(std::ostream& os, const WindRose& rose);

/// CSV: member,grounded,time,angle_deg
void write_members_csv(std::ostream& os, const GroundingReport& report);

/// Writes `text` to `path`, throwing IoError on failure.
void write_file(const std::string& path, const std::string& text);

}  // namespace driftmc
