#pragma once

#include <memory>
#include <span>
#include <vector>

namespace aqqp {

/// Base kernel omega(k) = exp(-k^(2 * half_power)). The default quartic kernel
/// (half_power = 2) is the one the acceptance suite exercises.
struct BaseKernel {
    int half_power = 2;

    double log_value(double k) const;
    bool operator==(const BaseKernel&) const = default;
};

inline constexpr double min_filter_width = 0.1;
inline constexpr double default_filter_rel_tol = 1e-9;
inline constexpr double default_filter_memo_spacing = 1e-3;

/// Regularizing filter Omega_w(k): the autocorrelation of the base kernel,
/// stretched by the width w and normalised to Omega_w(0) = 1.
///
/// Omega_w is strictly positive, even, and bounded by one. Values are served
/// from a memo of ln Omega_w on a uniform k grid with four-point Lagrange
/// interpolation; beyond the cutoff K_max the filter is treated as zero.
/// Copies share the memo; a FilterSpec is immutable once built.
class FilterSpec {
public:
    const BaseKernel& kernel() const;
    double width() const;
    /// Integral of omega(k)^2 over the real line.
    double norm_constant() const;
    /// K_max: beyond this |k| the filter is treated as zero.
    double cutoff() const;
    double rel_tol() const;
    double memo_spacing() const;

    double operator()(double k) const;
    /// ln Omega_w(k); -infinity beyond the cutoff.
    double log_value(double k) const;

    /// Direct quadrature of the autocorrelation integral, bypassing the memo.
    double evaluate_direct(double k) const;
    double log_evaluate_direct(double k) const;

private:
    struct Data;
    explicit FilterSpec(std::shared_ptr<const Data> data);
    std::shared_ptr<const Data> data_;

    friend FilterSpec make_filter(double, double, BaseKernel, double);
};

/// Builds the filter for the given width. The memo spacing is
/// memo_spacing * min(1, width). Rejects widths below
/// min_filter_width (the filter becomes too narrow to resolve) and widths for
/// which exp(k^2/2) * Omega_w(k) exceeds double range.
FilterSpec make_filter(double width, double rel_tol = default_filter_rel_tol, BaseKernel kernel = {},
                       double memo_spacing = default_filter_memo_spacing);

double eval_filter(const FilterSpec& filter, double k);

/// (1/2pi) * integral Omega_w(k) exp(i k x) dk at each x. Non-negative up to
/// quadrature error, since Omega_w is an autocorrelation.
std::vector<double> filter_fourier_transform(const FilterSpec& filter, std::span<const double> x_grid);

}  // namespace aqqp
