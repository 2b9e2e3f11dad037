#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace aqqp {

struct DatasetMeta {
    std::string source;
    std::string calibration_id;
    std::optional<double> efficiency;
    std::optional<double> n_atoms;
};

/// Quadrature samples in ground-state units (vacuum variance 1). Samples are
/// finite and there is at least one of them.
class QuadratureDataset {
public:
    explicit QuadratureDataset(std::vector<double> samples, std::optional<double> angle = std::nullopt,
                               DatasetMeta meta = {});

    const std::vector<double>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    const std::optional<double>& angle() const { return angle_; }
    const DatasetMeta& meta() const { return meta_; }
    DatasetMeta& meta() { return meta_; }

    double max_abs() const;
    double sample_variance() const;

private:
    std::vector<double> samples_;
    std::optional<double> angle_;
    DatasetMeta meta_;
};

/// Samples of a followed by samples of b; metadata taken from a.
QuadratureDataset concatenate(const QuadratureDataset& a, const QuadratureDataset& b);

/// Dataset CSV: '#' comment lines, header `jbar`, one sample per line.
QuadratureDataset read_quadratures(std::istream& in, const std::string& source = "<stream>");
QuadratureDataset read_quadratures(const std::filesystem::path& path);

void write_quadratures(std::ostream& out, const QuadratureDataset& data, const std::vector<std::string>& comments = {});
void write_quadratures(const std::filesystem::path& path, const QuadratureDataset& data,
                       const std::vector<std::string>& comments = {});

}  // namespace aqqp
