#include "aqqp/presets.hpp"

#include <cmath>

#include "aqqp/calibration.hpp"

namespace aqqp::presets {

RecordModel record_model() {
    RecordModel m;
    m.a0 = 1.0 / n1_photons;
    m.photon_ratio = photon_ratio;
    m.eta = contrast_factor(n1_photons, epsilon);
    const double na = static_cast<double>(max_atoms);
    // efficiency = a1 eta N / (a0 / ratio + a1 eta N)
    const double a1 = target_efficiency / (1.0 - target_efficiency) * (m.a0 / photon_ratio) / (m.eta * na);
    m.kappa = std::sqrt(a1);
    m.a2 = 0.1 * a1 / na;
    return m;
}

std::vector<std::int64_t> acs_levels() {
    std::vector<std::int64_t> levels;
    for (std::size_t i = 0; i < atom_levels; ++i)
        levels.push_back(max_atoms * static_cast<std::int64_t>(i) / static_cast<std::int64_t>(atom_levels - 1));
    return levels;
}

double squeezed_true_variance() { return 1.0 - (1.0 - squeezed_variance) / target_efficiency; }

}  // namespace aqqp::presets
