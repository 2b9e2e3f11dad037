#include "aqqp/filters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aqqp/error.hpp"
#include "aqqp/format.hpp"
#include "aqqp/numeric.hpp"
#include "aqqp/parallel.hpp"

namespace aqqp {

namespace {

// omega decays super-exponentially; |k'| <= 4 holds all of it at double precision.
constexpr double kernel_support = 4.0;
// exp(k^2/2) * Omega_w(k) must drop below this fraction of its maximum past K_max.
const double log_cutoff_ratio = std::log(1e12);
// Largest exponent we accept for exp(k^2/2) * Omega_w(k).
constexpr double max_log_growth = 600.0;
constexpr std::size_t memo_block = 2048;
constexpr std::size_t max_memo_nodes = 1u << 24;

// ln of the centred overlap integral
//   integral omega(s - u/2) omega(s + u/2) ds  /  omega(u/2)^2
// The integrand is even in s and peaks at s = 0, so its log is bounded by 0.
double log_overlap(const BaseKernel& kernel, double u, double rel_tol) {
    const double half = 0.5 * u;
    const double peak = 2.0 * kernel.log_value(half);
    auto integrand = [&](double s) {
        return std::exp(kernel.log_value(s - half) + kernel.log_value(s + half) - peak);
    };
    const double integral = 2.0 * numeric::gauss_legendre_converged(integrand, 0.0, kernel_support, rel_tol);
    return peak + std::log(integral);
}

}  // namespace

double BaseKernel::log_value(double k) const {
    const double k2 = k * k;
    double power = 1.0;
    for (int i = 0; i < half_power; ++i) power *= k2;
    return -power;
}

struct FilterSpec::Data {
    BaseKernel kernel;
    double width = 1.0;
    double rel_tol = default_filter_rel_tol;
    double log_norm = 0.0;
    double cutoff = 0.0;
    double spacing = default_filter_memo_spacing;
    std::vector<double> log_values;  // ln Omega_w at k = j * spacing

    double log_direct(double k) const {
        return log_overlap(kernel, std::abs(k) / width, rel_tol) - log_norm;
    }
};

FilterSpec::FilterSpec(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

const BaseKernel& FilterSpec::kernel() const { return data_->kernel; }
double FilterSpec::width() const { return data_->width; }
double FilterSpec::norm_constant() const { return std::exp(data_->log_norm); }
double FilterSpec::cutoff() const { return data_->cutoff; }
double FilterSpec::rel_tol() const { return data_->rel_tol; }
double FilterSpec::memo_spacing() const { return data_->spacing; }

double FilterSpec::log_value(double k) const {
    const Data& d = *data_;
    k = std::abs(k);
    if (k > d.cutoff) return -std::numeric_limits<double>::infinity();
    const double t = k / d.spacing;
    const auto j = static_cast<std::size_t>(t);
    const double frac = t - static_cast<double>(j);
    // ln Omega is even, so node -1 mirrors node 1.
    const double y0 = j == 0 ? d.log_values[1] : d.log_values[j - 1];
    return numeric::lagrange4(y0, d.log_values[j], d.log_values[j + 1], d.log_values[j + 2], frac);
}

double FilterSpec::operator()(double k) const { return std::exp(log_value(k)); }

double FilterSpec::log_evaluate_direct(double k) const { return data_->log_direct(k); }

double FilterSpec::evaluate_direct(double k) const { return std::exp(data_->log_direct(k)); }

FilterSpec make_filter(double width, double rel_tol, BaseKernel kernel, double memo_spacing) {
    require(std::isfinite(width) && width > 0.0, Errc::invalid_argument, "filter width must be positive");
    require(width >= min_filter_width, Errc::invalid_argument,
            "filter width below " + format_double(min_filter_width) + " is not supported");
    require(rel_tol > 0.0 && rel_tol < 1.0, Errc::invalid_argument, "rel_tol must lie in (0, 1)");
    require(kernel.half_power >= 1, Errc::invalid_argument, "kernel half_power must be >= 1");
    require(memo_spacing > 0.0 && memo_spacing <= 0.01, Errc::invalid_argument,
            "filter memo spacing must lie in (0, 0.01]");

    auto data = std::make_shared<FilterSpec::Data>();
    data->kernel = kernel;
    data->width = width;
    data->rel_tol = rel_tol;
    // The filter's k scale is w; keep the memo resolution per unit of k / w.
    data->spacing = memo_spacing * std::min(1.0, width);
    data->log_norm = log_overlap(kernel, 0.0, rel_tol);

    // Extend the memo block by block until exp(k^2/2) Omega_w(k) has passed its
    // peak and fallen log_cutoff_ratio below it.
    std::vector<double>& logs = data->log_values;
    double peak = -std::numeric_limits<double>::infinity();
    std::size_t cutoff_index = 0;
    bool found = false;
    while (!found) {
        require(logs.size() < max_memo_nodes, Errc::numerical_convergence,
                "filter cutoff search exceeded the memo budget");
        const std::size_t begin = logs.size();
        logs.resize(begin + memo_block);
        parallel_for(memo_block, 0, [&](std::size_t i) {
            logs[begin + i] = data->log_direct(static_cast<double>(begin + i) * data->spacing);
        });
        for (std::size_t j = std::max<std::size_t>(begin, 1); j < logs.size(); ++j) {
            const double k = static_cast<double>(j) * data->spacing;
            const double growth = 0.5 * k * k + logs[j];
            const double previous = 0.5 * (k - data->spacing) * (k - data->spacing) + logs[j - 1];
            peak = std::max({peak, growth, previous});
            if (growth < previous && growth < peak - log_cutoff_ratio) {
                cutoff_index = j;
                found = true;
                break;
            }
        }
        require(peak < max_log_growth, Errc::numerical_convergence,
                "exp(k^2/2) * Omega_w(k) exceeds double range; width too large");
    }
    // Keep two extra nodes for the interpolation stencil at the cutoff.
    if (logs.size() < cutoff_index + 3) {
        const std::size_t begin = logs.size();
        logs.resize(cutoff_index + 3);
        for (std::size_t j = begin; j < logs.size(); ++j)
            logs[j] = data->log_direct(static_cast<double>(j) * data->spacing);
    }
    logs.resize(cutoff_index + 3);
    logs.shrink_to_fit();
    data->cutoff = static_cast<double>(cutoff_index) * data->spacing;
    return FilterSpec(std::move(data));
}

double eval_filter(const FilterSpec& filter, double k) { return filter(k); }

std::vector<double> filter_fourier_transform(const FilterSpec& filter, std::span<const double> x_grid) {
    std::vector<double> out(x_grid.size());
    for (double x : x_grid)
        require(std::isfinite(x), Errc::invalid_argument, "Fourier grid must be finite");
    parallel_for(x_grid.size(), 0, [&](std::size_t i) {
        out[i] = numeric::cosine_integral([&](double k) { return filter(k); }, filter.cutoff(), x_grid[i]);
    });
    return out;
}

}  // namespace aqqp
