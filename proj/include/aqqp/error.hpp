#pragma once

#include <stdexcept>
#include <string>

namespace aqqp {

enum class Errc {
    invalid_argument,
    insufficient_data,
    numerical_convergence,
    range,
    io,
    calibration_inconsistency,
    rejected,
    degenerate_input,
};

const char* to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of these codes; the CLI
/// maps them onto distinct process exit codes.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Errc code, const std::string& what) {
    if (!ok) fail(code, what);
}

}  // namespace aqqp
