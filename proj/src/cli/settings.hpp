#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace aqqp::cli {

inline constexpr const char* tool_version = "0.1.0";

/// Everything a command needs. Paths and the worker count are excluded from
/// the settings hash: they do not change results.
struct RunConfig {
    std::string command;
    std::string preset;  // "", "reference", "squeezed" or "vacuum"
    std::uint64_t seed = 1;
    std::size_t n = 4841;

    double width = 1.1;
    std::vector<double> widths;  // empty: default log-spaced scan
    double phi_min = -12.0;
    double phi_max = 12.0;
    double phi_step = 0.05;
    double table_spacing = 0.005;
    double rel_tol = 1e-9;
    unsigned workers = 0;

    std::string records = "acs";  // simulate: acs, squeezed or quadratures
    std::string state = "gaussian";
    double variance = 0.681;

    double n1_photons = 4.1e7;
    double epsilon = 1.02e-8;
    double photon_ratio = 1.5;
    double efficiency_threshold = 0.77;
    bool force = false;

    std::filesystem::path input;
    std::filesystem::path analysis;
    std::filesystem::path calibration;
    std::filesystem::path output;
};

/// One `key=value` line per setting, in fixed order, numbers in shortest
/// round-trip form.
std::string canonical_settings(const RunConfig& config);

/// FNV-1a 64 of canonical_settings, as 16 hex digits.
std::string settings_hash(const RunConfig& config);

}  // namespace aqqp::cli
