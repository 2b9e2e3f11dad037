#include "aqqp/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Dense>

#include "aqqp/error.hpp"
#include "aqqp/format.hpp"

namespace aqqp {

namespace {

constexpr int reweight_passes = 3;

void require_model(const CalibrationModel& m) {
    require(m.a0 > 0.0 && m.a1 > 0.0 && m.a2 >= 0.0, Errc::calibration_inconsistency,
            "calibration needs a0 > 0, a1 > 0, a2 >= 0");
    require(m.eta > 0.0 && m.eta <= 1.0, Errc::calibration_inconsistency, "calibration eta must lie in (0, 1]");
    require(m.zeta >= 0.0, Errc::calibration_inconsistency, "calibration zeta must be non-negative");
    require(m.photon_ratio > 0.0, Errc::calibration_inconsistency, "photon ratio must be positive");
}

}  // namespace

double NoiseScalingFit::std_error(std::size_t i) const { return std::sqrt(covariance[i][i]); }

std::vector<NoiseGroup> acs_noise_groups(std::span<const RawRecord> records) {
    std::map<std::int64_t, std::vector<RawRecord>> by_atoms;
    for (const auto& r : records) by_atoms[r.n_atoms].push_back(r);

    std::vector<NoiseGroup> groups;
    for (auto& [n_atoms, group] : by_atoms) {
        std::sort(group.begin(), group.end(),
                  [](const RawRecord& a, const RawRecord& b) { return a.cycle_id < b.cycle_id; });
        std::vector<double> diffs;
        for (std::size_t k = 0; k + 1 < group.size(); k += 2)
            diffs.push_back((group[k].phi1 - group[k + 1].phi1) / std::sqrt(2.0));
        require(diffs.size() >= 2, Errc::insufficient_data,
                "atom number " + std::to_string(n_atoms) + " has fewer than 4 records");
        double mean = 0.0;
        for (double d : diffs) mean += d;
        mean /= static_cast<double>(diffs.size());
        double ss = 0.0;
        for (double d : diffs) ss += (d - mean) * (d - mean);
        groups.push_back({static_cast<double>(n_atoms), ss / static_cast<double>(diffs.size() - 1), diffs.size()});
    }
    return groups;
}

NoiseScalingFit fit_noise_scaling(std::span<const NoiseGroup> groups) {
    std::vector<double> distinct;
    for (const auto& g : groups) {
        require(std::isfinite(g.n_atoms) && g.n_atoms >= 0.0 && std::isfinite(g.variance) && g.variance > 0.0,
                Errc::invalid_argument, "noise group needs n_atoms >= 0 and a positive variance");
        require(g.count >= 2, Errc::insufficient_data, "noise group needs at least two values");
        distinct.push_back(g.n_atoms);
    }
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    require(distinct.size() >= 3, Errc::insufficient_data,
            "noise scaling fit needs at least 3 distinct atom numbers, got " + std::to_string(distinct.size()));

    // Fit in N_a / scale to keep the normal equations well conditioned.
    const double scale = distinct.back();
    const auto n = static_cast<Eigen::Index>(groups.size());
    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd observed(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = groups[static_cast<std::size_t>(i)].n_atoms / scale;
        design.row(i) << 1.0, x, x * x;
        observed(i) = groups[static_cast<std::size_t>(i)].variance;
    }

    Eigen::VectorXd sigma2 = observed;
    Eigen::Vector3d coef = Eigen::Vector3d::Zero();
    Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
    Eigen::VectorXd weights(n);
    for (int pass = 0; pass < reweight_passes; ++pass) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double dof = static_cast<double>(groups[static_cast<std::size_t>(i)].count - 1);
            weights(i) = dof / (2.0 * sigma2(i) * sigma2(i));
        }
        normal = design.transpose() * weights.asDiagonal() * design;
        coef = normal.ldlt().solve(design.transpose() * weights.asDiagonal() * observed);
        const Eigen::VectorXd predicted = design * coef;
        for (Eigen::Index i = 0; i < n; ++i) sigma2(i) = predicted(i) > 0.0 ? predicted(i) : observed(i);
    }
    const Eigen::Matrix3d cov_scaled = normal.inverse();
    const Eigen::VectorXd resid = observed - design * coef;

    NoiseScalingFit fit;
    const std::array<double, 3> unscale{1.0, 1.0 / scale, 1.0 / (scale * scale)};
    fit.a0 = coef(0) * unscale[0];
    fit.a1 = coef(1) * unscale[1];
    fit.a2 = coef(2) * unscale[2];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            fit.covariance[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                cov_scaled(i, j) * unscale[static_cast<std::size_t>(i)] * unscale[static_cast<std::size_t>(j)];
    fit.chi2 = resid.dot(weights.asDiagonal() * resid);
    fit.groups = groups.size();

    if (fit.a0 < -2.0 * fit.std_error(0))
        fail(Errc::calibration_inconsistency,
             "fitted light shot noise a0=" + format_double(fit.a0) + " is negative beyond 2 standard errors");
    if (fit.a1 < -2.0 * fit.std_error(1))
        fail(Errc::calibration_inconsistency,
             "fitted projection noise a1=" + format_double(fit.a1) + " is negative beyond 2 standard errors");
    return fit;
}

ZetaFit fit_zeta_detailed(std::span<const RawRecord> records) {
    require(records.size() >= 2, Errc::insufficient_data, "zeta fit needs at least two records");
    for (const auto& r : records)
        require(r.n_atoms == records.front().n_atoms, Errc::invalid_argument,
                "zeta fit needs records at a single atom number");
    const double n = static_cast<double>(records.size());
    double m1 = 0.0;
    double m2 = 0.0;
    for (const auto& r : records) {
        m1 += r.phi1;
        m2 += r.phi2;
    }
    m1 /= n;
    m2 /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& r : records) {
        sxx += (r.phi1 - m1) * (r.phi1 - m1);
        sxy += (r.phi1 - m1) * (r.phi2 - m2);
    }
    require(sxx > 0.0, Errc::degenerate_input, "phi1 has zero variance; zeta is undefined");
    ZetaFit fit;
    fit.zeta = sxy / sxx;
    fit.count = records.size();
    if (records.size() > 2) {
        double ss = 0.0;
        for (const auto& r : records) {
            const double e = (r.phi2 - m2) - fit.zeta * (r.phi1 - m1);
            ss += e * e;
        }
        fit.std_error = std::sqrt(ss / (n - 2.0) / sxx);
    } else {
        fit.std_error = std::numeric_limits<double>::infinity();
    }
    return fit;
}

double fit_zeta(std::span<const RawRecord> records) { return fit_zeta_detailed(records).zeta; }

double contrast_factor(double n1_photons, double epsilon) { return std::exp(-n1_photons * epsilon); }

CalibrationModel make_calibration_model(const NoiseScalingFit& fit, const ZetaFit& zeta, double n1_photons,
                                        double epsilon, double photon_ratio) {
    require(n1_photons >= 0.0 && epsilon >= 0.0, Errc::invalid_argument,
            "photon number and decoherence per photon must be non-negative");
    CalibrationModel m;
    m.a0 = fit.a0;
    m.a1 = fit.a1;
    m.a2 = std::max(0.0, fit.a2);
    m.zeta = zeta.zeta;
    m.zeta_std_error = zeta.std_error;
    m.epsilon = epsilon;
    m.n1_photons = n1_photons;
    m.photon_ratio = photon_ratio;
    m.eta = contrast_factor(n1_photons, epsilon);
    m.fit_covariance = fit.covariance;
    require_model(m);
    return m;
}

double acs_variance(const CalibrationModel& model, double n_atoms) {
    return model.a0 / model.photon_ratio + model.a1 * model.eta * n_atoms;
}

double efficiency(const CalibrationModel& model, double n_atoms) {
    const double full = acs_variance(model, n_atoms);
    return (full - acs_variance(model, 0.0)) / full;
}

QuadratureDataset normalize(std::span<const RawRecord> records, const CalibrationModel& model,
                            const NormalizeOptions& options) {
    require_model(model);
    require(!records.empty(), Errc::insufficient_data, "no records to normalise");
    const std::int64_t n_atoms = records.front().n_atoms;
    for (const auto& r : records)
        require(r.n_atoms == n_atoms, Errc::invalid_argument,
                "normalisation needs records at a single atom number; found " + std::to_string(n_atoms) + " and " +
                    std::to_string(r.n_atoms));
    const double na = static_cast<double>(n_atoms);
    const double eff = efficiency(model, na);
    if (eff < options.efficiency_threshold && !options.force)
        fail(Errc::rejected, "effective efficiency " + format_double(eff) + " at N_a=" + std::to_string(n_atoms) +
                                 " is below the threshold " + format_double(options.efficiency_threshold) +
                                 " (override with force)");
    const double scale = std::sqrt(acs_variance(model, na));
    std::vector<double> jbar(records.size());
    for (std::size_t k = 0; k < records.size(); ++k) jbar[k] = (records[k].phi2 - model.zeta * records[k].phi1) / scale;

    DatasetMeta meta;
    meta.source = options.source;
    meta.calibration_id = model.id();
    meta.efficiency = eff;
    meta.n_atoms = na;
    return QuadratureDataset(std::move(jbar), std::nullopt, std::move(meta));
}

nlohmann::json to_json(const CalibrationModel& m) {
    nlohmann::json cov = nlohmann::json::array();
    for (const auto& row : m.fit_covariance) cov.push_back(row);
    return nlohmann::json{
        {"a0", m.a0},
        {"a1", m.a1},
        {"a2", m.a2},
        {"zeta", m.zeta},
        {"zeta_std_error", std::isfinite(m.zeta_std_error) ? nlohmann::json(m.zeta_std_error) : nlohmann::json()},
        {"epsilon", m.epsilon},
        {"n1_photons", m.n1_photons},
        {"photon_ratio", m.photon_ratio},
        {"eta", m.eta},
        {"fit_covariance", cov},
    };
}

CalibrationModel calibration_from_json(const nlohmann::json& j) {
    CalibrationModel m;
    try {
        m.a0 = j.at("a0").get<double>();
        m.a1 = j.at("a1").get<double>();
        m.a2 = j.at("a2").get<double>();
        m.zeta = j.at("zeta").get<double>();
        const auto& se = j.at("zeta_std_error");
        m.zeta_std_error = se.is_null() ? std::numeric_limits<double>::infinity() : se.get<double>();
        m.epsilon = j.at("epsilon").get<double>();
        m.n1_photons = j.at("n1_photons").get<double>();
        m.photon_ratio = j.at("photon_ratio").get<double>();
        m.eta = j.at("eta").get<double>();
        const auto& cov = j.at("fit_covariance");
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 3; ++c) m.fit_covariance[r][c] = cov.at(r).at(c).get<double>();
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::invalid_argument, std::string("malformed calibration JSON: ") + e.what());
    }
    require(m.eta == contrast_factor(m.n1_photons, m.epsilon), Errc::calibration_inconsistency,
            "calibration eta does not equal exp(-n1_photons * epsilon)");
    require_model(m);
    return m;
}

std::string CalibrationModel::id() const { return to_hex(fnv1a64(to_json(*this).dump())); }

}  // namespace aqqp
