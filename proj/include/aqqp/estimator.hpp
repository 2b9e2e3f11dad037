#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "aqqp/dataset.hpp"
#include "aqqp/pattern.hpp"

namespace aqqp {

inline constexpr double default_phi_min = -12.0;
inline constexpr double default_phi_max = 12.0;
inline constexpr double default_phi_step = 0.05;
inline constexpr double min_scan_width = 0.1;
inline constexpr double max_scan_width = 3.0;
inline constexpr double default_scan_lo = 0.4;
inline constexpr double default_scan_hi = 3.0;
inline constexpr std::size_t default_scan_points = 30;
/// Recommended certification threshold for Sigma(w), in standard errors.
inline constexpr double certification_threshold = -4.0;

std::vector<double> default_phi_grid();
std::vector<double> default_scan_widths();

/// Sampled AQQP: p[i] is the mean of f(j_k - phi[i]) over the samples, se[i]
/// the sample standard deviation of those values over sqrt(N).
struct AqqpEstimate {
    std::vector<double> phi_grid;
    std::vector<double> p;
    std::vector<double> se;
    double width = 0.0;
    std::size_t n_samples = 0;
};

struct Significance {
    double sigma = 0.0;
    double at_phi = 0.0;
};

struct SignificanceScan {
    std::vector<double> widths;
    std::vector<double> sigma;
    std::vector<double> argmin_phi;
};

/// Smallest table half-range that covers every (sample, grid point) pair.
double required_x_max(const QuadratureDataset& data, std::span<const double> phi_grid);

/// Sums are correctly rounded, so the estimate does not depend on sample
/// order or on the worker count. Needs N >= 2 and a non-constant pattern
/// response at every grid point.
AqqpEstimate estimate_aqqp(const QuadratureDataset& data, const PatternTable& table,
                           std::span<const double> phi_grid, unsigned workers = 0);

/// Minimum of p/se over the grid; ties go to the smallest j_phi.
Significance significance(const AqqpEstimate& estimate);

struct ScanOptions {
    double spacing = default_pattern_spacing;
    double rel_tol = default_filter_rel_tol;
    unsigned workers = 0;
    PatternCache* cache = nullptr;  // optional; a private cache is used otherwise
};

SignificanceScan scan_width(const QuadratureDataset& data, std::span<const double> widths,
                            std::span<const double> phi_grid, const ScanOptions& options = {});

}  // namespace aqqp
