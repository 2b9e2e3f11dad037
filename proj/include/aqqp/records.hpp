#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace aqqp {

/// One two-pulse measurement cycle. phi1 is the conditioning QND pulse, phi2
/// the verification pulse, both differential phase shifts in radians.
struct RawRecord {
    std::int64_t cycle_id = 0;
    std::int64_t n_atoms = 0;
    double phi1 = 0.0;
    double phi2 = 0.0;

    bool operator==(const RawRecord&) const = default;
};

/// Record CSV: '#' comment lines, then header `cycle_id,n_atoms,phi1,phi2`.
std::vector<RawRecord> read_records(std::istream& in, const std::string& source = "<stream>");
std::vector<RawRecord> read_records(const std::filesystem::path& path);

void write_records(std::ostream& out, const std::vector<RawRecord>& records,
                   const std::vector<std::string>& comments = {});
void write_records(const std::filesystem::path& path, const std::vector<RawRecord>& records,
                   const std::vector<std::string>& comments = {});

}  // namespace aqqp
