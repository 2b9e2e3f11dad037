#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "aqqp/states.hpp"

namespace aqqp::presets {

inline constexpr double n1_photons = 4.1e7;
inline constexpr double epsilon = 1.02e-8;  // decoherence per photon
inline constexpr double photon_ratio = 1.5;
inline constexpr std::int64_t max_atoms = 290000;
inline constexpr double target_efficiency = 0.83;
/// 1.67 dB below the projection noise.
inline constexpr double squeezed_variance = 0.681;
inline constexpr std::size_t records_per_level = 4841;
inline constexpr std::size_t atom_levels = 9;

/// Two-pulse record model whose efficiency at max_atoms is target_efficiency:
/// a0 = 1 / n1, a1 from the efficiency, a2 adds 10% to the projection noise at
/// max_atoms.
RecordModel record_model();

/// 0, max_atoms / 8, ..., max_atoms.
std::vector<std::int64_t> acs_levels();

/// Conditional atomic variance that normalises to squeezed_variance at
/// max_atoms: 1 - (1 - squeezed_variance) / target_efficiency.
double squeezed_true_variance();

}  // namespace aqqp::presets
