#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "aqqp/filters.hpp"

namespace aqqp {

inline constexpr double default_pattern_x_max = 20.0;
inline constexpr double default_pattern_spacing = 0.005;
inline constexpr double min_pattern_x_max = 12.0;
inline constexpr double max_pattern_spacing = 0.01;
/// Simpson nodes per period of cos(k * x_max) when building a table.
inline constexpr double pattern_nodes_per_period = 200.0;

/// Pattern function f(x) = (1/pi) * integral_0^K_max exp(k^2/2) Omega_w(k) cos(k x) dk
/// tabulated on the displacement grid x = j_sample - j_phi in [-x_max, x_max].
class PatternTable {
public:
    PatternTable(FilterSpec filter, double x_max, double spacing, std::vector<double> values);

    const FilterSpec& filter() const { return filter_; }
    double x_max() const { return x_max_; }
    double spacing() const { return spacing_; }
    /// Values at x_i = -x_max + i * spacing.
    const std::vector<double>& values() const { return values_; }
    double max_abs() const { return max_abs_; }
    double x_at(std::size_t i) const { return -x_max_ + static_cast<double>(i) * spacing_; }

    /// Interpolated f at displacement x; range error for |x| > x_max.
    double at(double x) const;
    /// Same as at(), without the range check. |x| <= x_max is the caller's job.
    double at_unchecked(double x) const;

private:
    FilterSpec filter_;
    double x_max_;
    double spacing_;
    std::vector<double> values_;
    double max_abs_ = 0.0;
};

/// Builds the table with Simpson's rule on a fixed k grid, so the output is
/// identical for identical inputs regardless of the worker count. x_max is
/// rounded up to a whole number of grid steps.
PatternTable build_pattern_table(const FilterSpec& filter, double x_max = default_pattern_x_max,
                                 double spacing = default_pattern_spacing, unsigned workers = 0);

double eval_pattern(const PatternTable& table, double j_sample, double j_phi);

/// Cache key text: kernel, width, x_max, spacing and tolerance.
std::string pattern_cache_key(const BaseKernel& kernel, double width, double x_max, double spacing,
                              double rel_tol);

/// CSV cache file: one '#' header line carrying the cache key, then "x,value"
/// rows with shortest round-trip number formatting.
void save_pattern_table(const PatternTable& table, const std::filesystem::path& path);
/// Loads a table written by save_pattern_table. Returns nullopt if the header
/// does not match the filter and grid settings requested.
std::optional<PatternTable> load_pattern_table(const std::filesystem::path& path, const FilterSpec& filter,
                                               double x_max, double spacing);

/// Builds and remembers tables per (width, x_max, spacing, rel_tol). With a
/// directory set, tables are also persisted there as CSV.
class PatternCache {
public:
    explicit PatternCache(std::optional<std::filesystem::path> directory = std::nullopt,
                          unsigned workers = 0);

    /// Uses the directory named by AQQP_TABLE_CACHE, if set.
    static PatternCache from_environment(unsigned workers = 0);

    std::shared_ptr<const PatternTable> get(double width, double x_max = default_pattern_x_max,
                                            double spacing = default_pattern_spacing,
                                            double rel_tol = default_filter_rel_tol);

    const std::optional<std::filesystem::path>& directory() const { return directory_; }

private:
    std::optional<std::filesystem::path> directory_;
    unsigned workers_;
    std::mutex mutex_;
    std::map<std::string, std::shared_ptr<const PatternTable>> tables_;
};

inline constexpr const char* table_cache_env = "AQQP_TABLE_CACHE";

}  // namespace aqqp
