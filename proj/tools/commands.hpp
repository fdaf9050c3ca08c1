#pragma once

#include "config.hpp"
#include "report.hpp"

#include <optional>
#include <string>

namespace cli {

struct GChoice {
    double value;
    std::string source; // "flag", "config", "default", or the conventions file
};

// Generic runs driven by a config file.
Report cmd_eigen(const RunConfig& c, const GChoice& g);
Report cmd_scan(const RunConfig& c, const GChoice& g);
Report cmd_table3(const RunConfig& c, const GChoice& g);

/// Runs a named preset with its published comparison attached.
Report cmd_reproduce(const std::string& preset, const GChoice& g);

/// Calibrates every preset; writes the conventions file when `write_to` is set.
Report cmd_calibrate(const std::optional<std::string>& write_to);

} // namespace cli
