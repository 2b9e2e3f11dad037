#include "aqqp/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "aqqp/error.hpp"
#include "aqqp/format.hpp"
#include "aqqp/numeric.hpp"
#include "aqqp/parallel.hpp"

namespace aqqp {

std::vector<double> default_phi_grid() {
    return numeric::uniform_grid(default_phi_min, default_phi_max, default_phi_step);
}

std::vector<double> default_scan_widths() {
    return numeric::log_spaced(default_scan_lo, default_scan_hi, default_scan_points);
}

double required_x_max(const QuadratureDataset& data, std::span<const double> phi_grid) {
    double phi_abs = 0.0;
    for (double phi : phi_grid) phi_abs = std::max(phi_abs, std::abs(phi));
    return std::max(default_pattern_x_max, std::ceil(data.max_abs() + phi_abs + 1.0));
}

AqqpEstimate estimate_aqqp(const QuadratureDataset& data, const PatternTable& table,
                           std::span<const double> phi_grid, unsigned workers) {
    const std::vector<double>& samples = data.samples();
    require(samples.size() >= 2, Errc::insufficient_data,
            "standard error needs at least two samples, got " + std::to_string(samples.size()));
    require(!phi_grid.empty(), Errc::invalid_argument, "j_phi grid is empty");

    double lo = samples.front();
    double hi = samples.front();
    for (double s : samples) {
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    for (double phi : phi_grid) {
        require(std::isfinite(phi), Errc::invalid_argument, "j_phi grid value is not finite");
        const double reach = std::max(std::abs(lo - phi), std::abs(hi - phi));
        if (reach > table.x_max())
            fail(Errc::range, "displacement " + format_double(reach) + " at j_phi=" + format_double(phi) +
                                  " exceeds pattern table range " + format_double(table.x_max()));
    }

    AqqpEstimate est;
    est.phi_grid.assign(phi_grid.begin(), phi_grid.end());
    est.p.resize(phi_grid.size());
    est.se.resize(phi_grid.size());
    est.width = table.filter().width();
    est.n_samples = samples.size();
    const double n = static_cast<double>(samples.size());

    parallel_for(phi_grid.size(), workers, [&](std::size_t i) {
        std::vector<double> f(samples.size());
        for (std::size_t k = 0; k < samples.size(); ++k) f[k] = table.at_unchecked(samples[k] - phi_grid[i]);
        const double mean = numeric::exact_sum(f) / n;
        numeric::ExactSum squares;
        for (double v : f) squares.add((v - mean) * (v - mean));
        est.p[i] = mean;
        est.se[i] = std::sqrt(squares.value() / (n - 1.0)) / std::sqrt(n);
    });

    for (std::size_t i = 0; i < est.se.size(); ++i)
        require(est.se[i] > 0.0, Errc::degenerate_input,
                "zero standard error at j_phi=" + format_double(est.phi_grid[i]) + "; samples are degenerate");
    return est;
}

Significance significance(const AqqpEstimate& estimate) {
    require(!estimate.p.empty() && estimate.p.size() == estimate.se.size() &&
                estimate.p.size() == estimate.phi_grid.size(),
            Errc::invalid_argument, "malformed AQQP estimate");
    Significance best{estimate.p[0] / estimate.se[0], estimate.phi_grid[0]};
    for (std::size_t i = 1; i < estimate.p.size(); ++i) {
        const double ratio = estimate.p[i] / estimate.se[i];
        // Grids are ascending; a strict comparison keeps the smallest j_phi on ties.
        if (ratio < best.sigma || (ratio == best.sigma && estimate.phi_grid[i] < best.at_phi))
            best = {ratio, estimate.phi_grid[i]};
    }
    return best;
}

SignificanceScan scan_width(const QuadratureDataset& data, std::span<const double> widths,
                            std::span<const double> phi_grid, const ScanOptions& options) {
    require(!widths.empty(), Errc::invalid_argument, "width scan needs at least one width");
    for (std::size_t i = 0; i < widths.size(); ++i) {
        require(widths[i] >= min_scan_width && widths[i] <= max_scan_width, Errc::invalid_argument,
                "scan width " + format_double(widths[i]) + " outside [" + format_double(min_scan_width) + ", " +
                    format_double(max_scan_width) + "]");
        require(i == 0 || widths[i] > widths[i - 1], Errc::invalid_argument,
                "scan widths must be strictly increasing");
    }
    PatternCache local(std::nullopt, options.workers);
    PatternCache& cache = options.cache != nullptr ? *options.cache : local;
    const double x_max = required_x_max(data, phi_grid);

    SignificanceScan scan;
    for (double w : widths) {
        const auto table = cache.get(w, x_max, options.spacing, options.rel_tol);
        const Significance s = significance(estimate_aqqp(data, *table, phi_grid, options.workers));
        scan.widths.push_back(w);
        scan.sigma.push_back(s.sigma);
        scan.argmin_phi.push_back(s.at_phi);
    }
    return scan;
}

}  // namespace aqqp
