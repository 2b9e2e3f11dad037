#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace aqqp {

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

/// Strict parse of a whole field (surrounding spaces allowed). Throws
/// Error(invalid_argument) naming the field text on failure.
double parse_double(std::string_view text);

/// 64-bit FNV-1a digest; platform independent for identical byte strings.
std::uint64_t fnv1a64(std::string_view bytes);
std::string to_hex(std::uint64_t value);

std::string_view trim(std::string_view text);

}  // namespace aqqp
