#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "aqqp/error.hpp"

namespace aqqp::numeric {

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Composite 20-point Gauss-Legendre rule over `panels` equal panels of [a, b].
template <class F>
double gauss_legendre(F&& f, double a, double b, std::size_t panels) {
    using Rule = boost::math::quadrature::gauss<double, 20>;
    const double width = (b - a) / static_cast<double>(panels);
    double total = 0.0;
    for (std::size_t i = 0; i < panels; ++i) {
        const double lo = a + width * static_cast<double>(i);
        total += Rule::integrate(f, lo, lo + width);
    }
    return total;
}

/// Doubles the panel count until two successive estimates agree to rel_tol.
template <class F>
double gauss_legendre_converged(F&& f, double a, double b, double rel_tol,
                                std::size_t initial_panels = 4, int max_doublings = 14) {
    std::size_t panels = initial_panels;
    double previous = gauss_legendre(f, a, b, panels);
    for (int i = 0; i < max_doublings; ++i) {
        panels *= 2;
        const double current = gauss_legendre(f, a, b, panels);
        if (std::abs(current - previous) <= rel_tol * std::abs(current)) return current;
        previous = current;
    }
    fail(Errc::numerical_convergence,
         "Gauss-Legendre quadrature did not reach relative tolerance within panel budget");
}

/// (1/pi) * integral_0^K g(k) cos(k x) dk, with panels short enough that each
/// holds well under one period of the cosine.
template <class G>
double cosine_integral(G&& g, double upper, double x) {
    const double panel = std::min(0.1, 1.0 / (1.0 + std::abs(x)));
    const auto panels = static_cast<std::size_t>(std::ceil(upper / panel));
    return gauss_legendre([&](double k) { return g(k) * std::cos(k * x); }, 0.0, upper,
                          std::max<std::size_t>(panels, 1)) /
           pi;
}

/// Four-point Lagrange interpolation at fractional offset t in [0, 1] between
/// y1 and y2, with neighbours y0 and y3.
inline double lagrange4(double y0, double y1, double y2, double y3, double t) {
    const double tm1 = t - 1.0;
    const double tm2 = t - 2.0;
    const double tp1 = t + 1.0;
    return -y0 * t * tm1 * tm2 / 6.0 + y1 * tp1 * tm1 * tm2 / 2.0 - y2 * tp1 * t * tm2 / 2.0 +
           y3 * tp1 * t * tm1 / 6.0;
}

/// Correctly rounded floating-point sum (Shewchuk partials, with the final
/// half-way correction used by Python's math.fsum). The result does not
/// depend on the order in which terms are added.
class ExactSum {
public:
    void add(double x);
    double value() const;
    void clear() { partials_.clear(); }

private:
    std::vector<double> partials_;
};

double exact_sum(std::span<const double> values);

/// min + i * step for i = 0..n, where n = round((max - min) / step).
std::vector<double> uniform_grid(double min, double max, double step);

/// n points log-spaced over [lo, hi], endpoints exact.
std::vector<double> log_spaced(double lo, double hi, std::size_t n);

/// splitmix64 finaliser; derives independent generator seeds from (seed, stream).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace aqqp::numeric
