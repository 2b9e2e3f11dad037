#include "aqqp/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "aqqp/error.hpp"
#include "aqqp/format.hpp"
#include "aqqp/numeric.hpp"

namespace aqqp {

QuadratureDataset::QuadratureDataset(std::vector<double> samples, std::optional<double> angle, DatasetMeta meta)
    : samples_(std::move(samples)), angle_(angle), meta_(std::move(meta)) {
    require(!samples_.empty(), Errc::insufficient_data, "quadrature dataset is empty");
    for (double s : samples_) require(std::isfinite(s), Errc::invalid_argument, "quadrature sample is not finite");
    if (angle_) require(std::isfinite(*angle_), Errc::invalid_argument, "quadrature angle is not finite");
}

double QuadratureDataset::max_abs() const {
    double m = 0.0;
    for (double s : samples_) m = std::max(m, std::abs(s));
    return m;
}

double QuadratureDataset::sample_variance() const {
    require(samples_.size() >= 2, Errc::insufficient_data, "variance needs at least two samples");
    const double n = static_cast<double>(samples_.size());
    const double mean = numeric::exact_sum(samples_) / n;
    numeric::ExactSum squares;
    for (double s : samples_) squares.add((s - mean) * (s - mean));
    return squares.value() / (n - 1.0);
}

QuadratureDataset concatenate(const QuadratureDataset& a, const QuadratureDataset& b) {
    std::vector<double> joined = a.samples();
    joined.insert(joined.end(), b.samples().begin(), b.samples().end());
    return QuadratureDataset(std::move(joined), a.angle(), a.meta());
}

QuadratureDataset read_quadratures(std::istream& in, const std::string& source) {
    std::vector<double> samples;
    std::string line;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        if (!header_seen) {
            require(text == "jbar", Errc::invalid_argument, source + ":" + std::to_string(line_no) + ": expected header jbar");
            header_seen = true;
            continue;
        }
        try {
            samples.push_back(parse_double(text));
        } catch (const Error& e) {
            fail(e.code(), source + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    require(header_seen, Errc::invalid_argument, source + ": missing header jbar");
    require(!samples.empty(), Errc::insufficient_data, source + ": no samples");
    for (double s : samples) require(std::isfinite(s), Errc::invalid_argument, source + ": sample is not finite");
    DatasetMeta meta;
    meta.source = source;
    return QuadratureDataset(std::move(samples), std::nullopt, std::move(meta));
}

QuadratureDataset read_quadratures(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::io, "cannot open dataset file: " + path.string());
    return read_quadratures(in, path.string());
}

void write_quadratures(std::ostream& out, const QuadratureDataset& data, const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "jbar\n";
    for (double s : data.samples()) out << format_double(s) << '\n';
}

void write_quadratures(const std::filesystem::path& path, const QuadratureDataset& data,
                       const std::vector<std::string>& comments) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::io, "cannot write dataset file: " + path.string());
    write_quadratures(out, data, comments);
    out.flush();
    if (!out) fail(Errc::io, "error while writing dataset file: " + path.string());
}

}  // namespace aqqp
