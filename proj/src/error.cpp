#include "aqqp/error.hpp"

namespace aqqp {

const char* to_string(Errc code) noexcept {
    switch (code) {
        case Errc::invalid_argument: return "invalid-argument";
        case Errc::insufficient_data: return "insufficient-data";
        case Errc::numerical_convergence: return "numerical-convergence";
        case Errc::range: return "range";
        case Errc::io: return "io";
        case Errc::calibration_inconsistency: return "calibration-inconsistency";
        case Errc::rejected: return "rejected";
        case Errc::degenerate_input: return "degenerate-input";
    }
    return "unknown";
}

}  // namespace aqqp
