#pragma once

// Independent reference computations used by the test suites. Nothing here
// goes through the memoised filter or the pattern table.

#include <cmath>
#include <cstddef>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "aqqp/filters.hpp"

namespace aqqp::oracle {

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Integral of exp(-2 k^4): 2^(-1/4) * Gamma(1/4) / 2.
inline double quartic_norm_closed_form() { return std::pow(2.0, -0.25) * std::tgamma(0.25) / 2.0; }

/// Trapezoid rule for integral f over [a, b] with n intervals.
template <class F>
double trapezoid(F&& f, double a, double b, std::size_t n) {
    const double h = (b - a) / static_cast<double>(n);
    double sum = 0.5 * (f(a) + f(b));
    for (std::size_t i = 1; i < n; ++i) sum += f(a + h * static_cast<double>(i));
    return sum * h;
}

/// Omega_w(k) straight from its definition, N^-1 integral omega(k') omega(k' + k/w) dk',
/// by dense trapezoid sums over the raw (uncentred) integrand.
inline double quartic_filter_trapezoid(double width, double k, std::size_t n = 200000) {
    auto omega = [](double x) { return std::exp(-x * x * x * x); };
    const double u = k / width;
    const double norm = trapezoid([&](double x) { return omega(x) * omega(x); }, -6.0, 6.0, n);
    const double lo = std::min(-6.0, -6.0 - u);
    const double hi = std::max(6.0, 6.0 - u);
    return trapezoid([&](double x) { return omega(x) * omega(x + u); }, lo, hi, n) / norm;
}

/// Fixed Gauss-Legendre nodes on [0, upper].
struct Nodes {
    std::vector<double> k;
    std::vector<double> w;
};

inline Nodes gl_nodes(double upper, double panel_width) {
    using Rule = boost::math::quadrature::gauss<double, 30>;
    const auto panels = static_cast<std::size_t>(std::ceil(upper / panel_width));
    const double width = upper / static_cast<double>(panels);
    Nodes out;
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = width * (static_cast<double>(p) + 0.5);
        for (std::size_t i = 0; i < Rule::abscissa().size(); ++i) {
            const double dx = 0.5 * width * Rule::abscissa()[i];
            const double wt = 0.5 * width * Rule::weights()[i];
            out.k.push_back(mid - dx);
            out.w.push_back(wt);
            if (dx != 0.0) {
                out.k.push_back(mid + dx);
                out.w.push_back(wt);
            }
        }
    }
    return out;
}

/// f(x) = (1/pi) integral_0^K exp(k^2/2) Omega_w(k) cos(k x) dk with Omega_w
/// from direct quadrature at every node (no memo, no table).
class DirectPattern {
public:
    DirectPattern(const FilterSpec& filter, double max_x) {
        nodes_ = gl_nodes(filter.cutoff(), std::min(0.05, 1.0 / (1.0 + max_x)));
        weight_.resize(nodes_.k.size());
        for (std::size_t i = 0; i < nodes_.k.size(); ++i) {
            const double k = nodes_.k[i];
            weight_[i] = nodes_.w[i] * std::exp(0.5 * k * k + filter.log_evaluate_direct(k)) / pi;
        }
    }

    double operator()(double x) const {
        double sum = 0.0;
        for (std::size_t i = 0; i < weight_.size(); ++i) sum += weight_[i] * std::cos(nodes_.k[i] * x);
        return sum;
    }

private:
    Nodes nodes_;
    std::vector<double> weight_;
};

}  // namespace aqqp::oracle
