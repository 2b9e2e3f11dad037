#pragma once

#include <iosfwd>

#include "aqqp/error.hpp"
#include "cli/settings.hpp"

namespace aqqp::cli {

/// Process exit status for each error category; 0 is success and 1 is an
/// unexpected failure.
int exit_code(Errc code) noexcept;

int cmd_simulate(const RunConfig& config, std::ostream& out);
int cmd_calibrate(const RunConfig& config, std::ostream& out);
int cmd_normalize(const RunConfig& config, std::ostream& out);
int cmd_estimate(const RunConfig& config, std::ostream& out);
int cmd_scan(const RunConfig& config, std::ostream& out);
int cmd_oracle(const RunConfig& config, std::ostream& out);

/// Parses arguments, applies presets, runs the subcommand and reports errors
/// on err as `aqqp: <category>: <message>`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace aqqp::cli
