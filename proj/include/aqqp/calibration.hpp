#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "aqqp/dataset.hpp"
#include "aqqp/records.hpp"

namespace aqqp {

inline constexpr double default_efficiency_threshold = 0.77;
inline constexpr double default_photon_ratio = 1.5;

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Variance of drift-compensated ACS phase values at one atom number.
struct NoiseGroup {
    double n_atoms = 0.0;
    double variance = 0.0;
    std::size_t count = 0;
};

/// var = a0 + a1 N_a + a2 N_a^2, with the coefficient covariance.
struct NoiseScalingFit {
    double a0 = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    Matrix3 covariance{};
    double chi2 = 0.0;
    std::size_t groups = 0;

    double std_error(std::size_t i) const;
};

struct ZetaFit {
    double zeta = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
};

struct CalibrationModel {
    double a0 = 0.0;  // first-pulse light shot noise, rad^2
    double a1 = 0.0;  // kappa^2, rad^2 per atom
    double a2 = 0.0;  // technical noise, rad^2 per atom^2
    double zeta = 0.0;
    double zeta_std_error = 0.0;
    double epsilon = 0.0;      // decoherence per photon
    double n1_photons = 0.0;
    double photon_ratio = default_photon_ratio;  // n2 / n1
    double eta = 1.0;          // exp(-n1_photons * epsilon)
    Matrix3 fit_covariance{};

    /// Digest of the serialised model; stamped into normalised datasets.
    std::string id() const;
};

/// Groups ACS records by atom number and forms the drift-compensated values
/// (phi1_k - phi1_{k+1}) / sqrt(2) over disjoint consecutive pairs of cycles.
std::vector<NoiseGroup> acs_noise_groups(std::span<const RawRecord> records);

/// Weighted least squares with the chi-square variance of a sample variance,
/// 2 sigma^4 / (count - 1), as weights; sigma^2 is re-estimated from the fit
/// for a few iterations.
NoiseScalingFit fit_noise_scaling(std::span<const NoiseGroup> groups);

/// zeta* = cov(phi1, phi2) / var(phi1), with its regression standard error.
ZetaFit fit_zeta_detailed(std::span<const RawRecord> records);
double fit_zeta(std::span<const RawRecord> records);

double contrast_factor(double n1_photons, double epsilon);

/// Clamps a2 at zero (it does not enter the normalisation) and fills eta.
CalibrationModel make_calibration_model(const NoiseScalingFit& fit, const ZetaFit& zeta, double n1_photons,
                                        double epsilon, double photon_ratio = default_photon_ratio);

/// var_ACS(eta N_a) = a0 / photon_ratio + a1 eta N_a.
double acs_variance(const CalibrationModel& model, double n_atoms);

/// (var_ACS(eta N_a) - var_ACS(0)) / var_ACS(eta N_a).
double efficiency(const CalibrationModel& model, double n_atoms);

struct NormalizeOptions {
    double efficiency_threshold = default_efficiency_threshold;
    bool force = false;  // convert even when below the efficiency threshold
    std::string source;
};

/// jbar_k = (phi2_k - zeta phi1_k) / sqrt(var_ACS(eta N_a)) for records at a single N_a.
QuadratureDataset normalize(std::span<const RawRecord> records, const CalibrationModel& model,
                            const NormalizeOptions& options = {});

nlohmann::json to_json(const CalibrationModel& model);
CalibrationModel calibration_from_json(const nlohmann::json& j);

}  // namespace aqqp
