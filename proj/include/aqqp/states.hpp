#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "aqqp/dataset.hpp"
#include "aqqp/filters.hpp"
#include "aqqp/records.hpp"

namespace aqqp {

/// Gaussian quadrature statistics in ground-state units. variance < 1 is
/// squeezed, 1 is the coherent reference, > 1 thermal-like.
/// conjugate_variance only matters for the 2D quasiprobability and defaults
/// to the minimum-uncertainty value 1 / variance.
struct GaussianState {
    double variance = 1.0;
    double mean = 0.0;
    std::optional<double> conjugate_variance;
};

/// One excitation above the ground state: quadrature density
/// x^2 exp(-x^2/2) / sqrt(2 pi), variance 3.
struct SingleExcitation {};

using StateModel = std::variant<GaussianState, SingleExcitation>;

void validate(const StateModel& state);

/// Phi(k) = E[exp(i k X)] * exp(k^2/2) along the measured quadrature.
std::complex<double> char_function(const StateModel& state, double k);

/// p(j_phi) = (1/2pi) * integral Phi(k) Omega_w(k) exp(-i k j_phi) dk by quadrature.
std::vector<double> analytic_aqqp(const StateModel& state, const FilterSpec& filter,
                                  std::span<const double> phi_grid);

/// Filtered 2D quasiprobability; values(i, j) is at (x_grid[i], y_grid[j]),
/// stored row-major. Integrating over y gives analytic_aqqp along x.
struct Quasiprob2D {
    std::vector<double> x_grid;
    std::vector<double> y_grid;
    std::vector<double> values;

    double at(std::size_t i, std::size_t j) const { return values[i * y_grid.size() + j]; }
};

Quasiprob2D analytic_quasiprob2d(const StateModel& state, const FilterSpec& filter,
                                 std::span<const double> x_grid, std::span<const double> y_grid);

/// i.i.d. draws from the state's quadrature density, deterministic per seed.
QuadratureDataset sample_quadratures(const StateModel& state, std::size_t n, std::uint64_t seed);

/// Linear-Gaussian model of the two-pulse phase measurement:
///   phi1 = e1 + kappa dN + t
///   phi2 = e2 + kappa dN + t + d
/// with light shot noise e1 ~ N(0, a0), e2 ~ N(0, a0 / photon_ratio), atomic
/// projection noise dN ~ N(0, N_a), technical noise t ~ N(0, a2 N_a^2) shared by
/// both pulses, and extra verification-pulse atomic noise d.
struct RecordModel {
    double a0 = 0.0;           // var(dn1/n1), rad^2
    double photon_ratio = 1.5;  // n2 / n1
    double kappa = 0.0;        // rad per atom; a1 = kappa^2
    double a2 = 0.0;           // rad^2 per atom^2
    double eta = 1.0;          // contrast factor of the conditioned state

    double a1() const { return kappa * kappa; }
};

/// zeta minimising var(phi2 - zeta phi1): (a1 N + a2 N^2) / (a0 + a1 N + a2 N^2).
double optimal_zeta(const RecordModel& model, double n_atoms);

/// Smallest reachable true_variance: what the QND conditioning alone leaves,
/// in units of the projection noise a1 * eta * N_a.
double conditioning_floor(const RecordModel& model, double n_atoms);

/// true_variance is the conditional atomic variance of the verification
/// signal in units of a1 * eta * N_a; the extra noise d is set to reach it.
/// Without a target, d = 0. Cycle ids run from first_cycle upward.
std::vector<RawRecord> simulate_records(std::optional<double> true_variance, std::int64_t n_atoms,
                                        const RecordModel& model, std::size_t n, std::uint64_t seed,
                                        std::int64_t first_cycle = 0);

}  // namespace aqqp
