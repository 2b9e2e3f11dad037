#include "aqqp/records.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "aqqp/error.hpp"
#include "aqqp/format.hpp"

namespace aqqp {

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

std::int64_t parse_int(std::string_view text) {
    std::int64_t value = 0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || result.ec != std::errc{} || result.ptr != text.data() + text.size())
        fail(Errc::invalid_argument, "not an integer: '" + std::string(text) + "'");
    return value;
}

}  // namespace

std::vector<RawRecord> read_records(std::istream& in, const std::string& source) {
    std::vector<RawRecord> records;
    std::string line;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto fields = split(text);
        if (!header_seen) {
            if (fields.size() != 4 || fields[0] != "cycle_id" || fields[1] != "n_atoms" || fields[2] != "phi1" ||
                fields[3] != "phi2")
                fail(Errc::invalid_argument,
                     source + ":" + std::to_string(line_no) + ": expected header cycle_id,n_atoms,phi1,phi2");
            header_seen = true;
            continue;
        }
        if (fields.size() != 4)
            fail(Errc::invalid_argument, source + ":" + std::to_string(line_no) + ": expected 4 fields");
        try {
            RawRecord r{parse_int(fields[0]), parse_int(fields[1]), parse_double(fields[2]), parse_double(fields[3])};
            if (r.n_atoms < 0 || !std::isfinite(r.phi1) || !std::isfinite(r.phi2))
                fail(Errc::invalid_argument, "record must be finite with n_atoms >= 0");
            records.push_back(r);
        } catch (const Error& e) {
            fail(e.code(), source + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!header_seen) fail(Errc::invalid_argument, source + ": missing header cycle_id,n_atoms,phi1,phi2");
    return records;
}

std::vector<RawRecord> read_records(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::io, "cannot open record file: " + path.string());
    return read_records(in, path.string());
}

void write_records(std::ostream& out, const std::vector<RawRecord>& records, const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "cycle_id,n_atoms,phi1,phi2\n";
    for (const auto& r : records)
        out << r.cycle_id << ',' << r.n_atoms << ',' << format_double(r.phi1) << ',' << format_double(r.phi2) << '\n';
}

void write_records(const std::filesystem::path& path, const std::vector<RawRecord>& records,
                   const std::vector<std::string>& comments) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::io, "cannot write record file: " + path.string());
    write_records(out, records, comments);
    if (!out) fail(Errc::io, "error while writing record file: " + path.string());
}

}  // namespace aqqp
