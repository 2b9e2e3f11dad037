#include "aqqp/numeric.hpp"

#include <algorithm>

namespace aqqp::numeric {

void ExactSum::add(double x) {
    std::size_t used = 0;
    for (double y : partials_) {
        if (std::abs(x) < std::abs(y)) std::swap(x, y);
        const double hi = x + y;
        const double lo = y - (hi - x);
        if (lo != 0.0) partials_[used++] = lo;
        x = hi;
    }
    partials_.resize(used);
    partials_.push_back(x);
}

double ExactSum::value() const {
    std::size_t n = partials_.size();
    if (n == 0) return 0.0;
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
        const double x = hi;
        const double y = partials_[--n];
        hi = x + y;
        const double yr = hi - x;
        lo = y - yr;
        if (lo != 0.0) break;
    }
    // Round half-even across the remaining partials.
    if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0))) {
        const double y = lo * 2.0;
        const double x = hi + y;
        const double yr = x - hi;
        if (y == yr) hi = x;
    }
    return hi;
}

double exact_sum(std::span<const double> values) {
    ExactSum sum;
    for (double v : values) sum.add(v);
    return sum.value();
}

std::vector<double> uniform_grid(double min, double max, double step) {
    require(step > 0.0 && std::isfinite(step), Errc::invalid_argument, "grid step must be positive");
    require(std::isfinite(min) && std::isfinite(max) && max >= min, Errc::invalid_argument,
            "grid bounds must be finite with max >= min");
    const auto n = static_cast<std::size_t>(std::llround((max - min) / step));
    std::vector<double> grid(n + 1);
    // Dividing by an integral 1/step rounds k/m correctly, so 0.05 steps print as 2.85, not 2.8500000000000001.
    const double k0 = std::round(min / step);
    const bool aligned = std::abs(min / step - k0) < 1e-9 * std::max(1.0, std::abs(k0));
    const double m = std::round(1.0 / step);
    const bool integral = m >= 1.0 && std::abs(1.0 / step - m) < 1e-9 * m;
    for (std::size_t i = 0; i <= n; ++i) {
        const double k = k0 + static_cast<double>(i);
        grid[i] = !aligned ? min + static_cast<double>(i) * step : integral ? k / m : k * step;
    }
    return grid;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
    require(lo > 0.0 && hi >= lo, Errc::invalid_argument, "log grid needs 0 < lo <= hi");
    require(n >= 1, Errc::invalid_argument, "log grid needs at least one point");
    if (n == 1) return {lo};
    std::vector<double> grid(n);
    const double step = std::log(hi / lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) grid[i] = lo * std::exp(step * static_cast<double>(i));
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace aqqp::numeric
