#include "aqqp/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "aqqp/error.hpp"
#include "aqqp/format.hpp"
#include "aqqp/numeric.hpp"
#include "aqqp/parallel.hpp"

namespace aqqp {

PatternTable::PatternTable(FilterSpec filter, double x_max, double spacing, std::vector<double> values)
    : filter_(std::move(filter)), x_max_(x_max), spacing_(spacing), values_(std::move(values)) {
    require(values_.size() >= 5 && values_.size() % 2 == 1, Errc::invalid_argument,
            "pattern table needs an odd number (>= 5) of values");
    for (double v : values_) {
        require(std::isfinite(v), Errc::numerical_convergence, "pattern table holds a non-finite value");
        max_abs_ = std::max(max_abs_, std::abs(v));
    }
}

double PatternTable::at_unchecked(double x) const {
    // f is even; interpolate at |x| so that f(x) == f(-x) exactly.
    const std::size_t center = values_.size() / 2;
    const double t = std::abs(x) / spacing_;
    auto j = static_cast<std::size_t>(t);
    double frac = t - static_cast<double>(j);
    if (j + 2 > center) {
        const std::size_t shift = j + 2 - center;
        j -= shift;
        frac += static_cast<double>(shift);
    }
    const std::size_t i = center + j;
    return numeric::lagrange4(values_[i - 1], values_[i], values_[i + 1], values_[i + 2], frac);
}

double PatternTable::at(double x) const {
    if (!(std::abs(x) <= x_max_))
        fail(Errc::range, "displacement " + format_double(x) + " outside pattern table range +/-" +
                              format_double(x_max_) + "; widen x_max");
    return at_unchecked(x);
}

PatternTable build_pattern_table(const FilterSpec& filter, double x_max, double spacing, unsigned workers) {
    require(std::isfinite(x_max) && x_max >= min_pattern_x_max, Errc::invalid_argument,
            "pattern table x_max must be >= " + format_double(min_pattern_x_max));
    require(spacing > 0.0 && spacing <= max_pattern_spacing, Errc::invalid_argument,
            "pattern table spacing must lie in (0, " + format_double(max_pattern_spacing) + "]");

    const auto half = static_cast<std::size_t>(std::ceil(x_max / spacing - 1e-9));
    const double grid_max = static_cast<double>(half) * spacing;

    const double k_max = filter.cutoff();
    const double target_step = 2.0 * numeric::pi / (pattern_nodes_per_period * grid_max);
    const auto intervals = 2 * static_cast<std::size_t>(std::ceil(k_max / (2.0 * target_step)));
    const double step = k_max / static_cast<double>(intervals);

    // Simpson-weighted samples of exp(k^2/2) Omega_w(k).
    std::vector<double> k(intervals + 1);
    std::vector<double> weighted(intervals + 1);
    for (std::size_t j = 0; j <= intervals; ++j) {
        k[j] = static_cast<double>(j) * step;
        const double simpson = (j == 0 || j == intervals) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
        weighted[j] = simpson * step / 3.0 * std::exp(0.5 * k[j] * k[j] + filter.log_value(k[j])) / numeric::pi;
    }

    std::vector<double> values(2 * half + 1);
    parallel_for(half + 1, workers, [&](std::size_t i) {
        const double x = static_cast<double>(i) * spacing;
        double sum = 0.0;
        for (std::size_t j = 0; j <= intervals; ++j) sum += weighted[j] * std::cos(k[j] * x);
        values[half + i] = sum;
        values[half - i] = sum;
    });
    return PatternTable(filter, grid_max, spacing, std::move(values));
}

double eval_pattern(const PatternTable& table, double j_sample, double j_phi) {
    return table.at(j_sample - j_phi);
}

std::string pattern_cache_key(const BaseKernel& kernel, double width, double x_max, double spacing,
                              double rel_tol) {
    std::ostringstream key;
    key << "kernel=exp(-k^" << 2 * kernel.half_power << ") width=" << format_double(width)
        << " x_max=" << format_double(x_max) << " spacing=" << format_double(spacing)
        << " rel_tol=" << format_double(rel_tol) << " nodes_per_period=" << format_double(pattern_nodes_per_period);
    return key.str();
}

void save_pattern_table(const PatternTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::io, "cannot write pattern table cache: " + path.string());
    const FilterSpec& f = table.filter();
    out << "# " << pattern_cache_key(f.kernel(), f.width(), table.x_max(), table.spacing(), f.rel_tol()) << "\n";
    out << "x,value\n";
    for (std::size_t i = 0; i < table.values().size(); ++i)
        out << format_double(table.x_at(i)) << ',' << format_double(table.values()[i]) << '\n';
    if (!out) fail(Errc::io, "error while writing pattern table cache: " + path.string());
}

std::optional<PatternTable> load_pattern_table(const std::filesystem::path& path, const FilterSpec& filter,
                                               double x_max, double spacing) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::string line;
    const std::string expected =
        "# " + pattern_cache_key(filter.kernel(), filter.width(), x_max, spacing, filter.rel_tol());
    if (!std::getline(in, line) || line != expected) return std::nullopt;
    if (!std::getline(in, line) || line != "x,value") return std::nullopt;
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) return std::nullopt;
        try {
            values.push_back(parse_double(std::string_view(line).substr(comma + 1)));
        } catch (const Error&) {
            return std::nullopt;
        }
    }
    const auto half = static_cast<std::size_t>(std::llround(x_max / spacing));
    if (values.size() != 2 * half + 1) return std::nullopt;
    return PatternTable(filter, x_max, spacing, std::move(values));
}

PatternCache::PatternCache(std::optional<std::filesystem::path> directory, unsigned workers)
    : directory_(std::move(directory)), workers_(workers) {}

PatternCache PatternCache::from_environment(unsigned workers) {
    const char* dir = std::getenv(table_cache_env);
    if (dir == nullptr || *dir == '\0') return PatternCache(std::nullopt, workers);
    return PatternCache(std::filesystem::path(dir), workers);
}

std::shared_ptr<const PatternTable> PatternCache::get(double width, double x_max, double spacing, double rel_tol) {
    // Round x_max to the grid the builder would use, so keys match the table.
    const double grid_max = static_cast<double>(std::ceil(x_max / spacing - 1e-9)) * spacing;
    const std::string key = pattern_cache_key(BaseKernel{}, width, grid_max, spacing, rel_tol);
    {
        std::lock_guard lock(mutex_);
        if (auto it = tables_.find(key); it != tables_.end()) return it->second;
    }
    const FilterSpec filter = make_filter(width, rel_tol);
    std::optional<std::filesystem::path> file;
    if (directory_) file = *directory_ / ("pattern_" + to_hex(fnv1a64(key)) + ".csv");

    std::shared_ptr<const PatternTable> table;
    if (file) {
        if (auto loaded = load_pattern_table(*file, filter, grid_max, spacing))
            table = std::make_shared<const PatternTable>(std::move(*loaded));
    }
    if (!table) {
        table = std::make_shared<const PatternTable>(build_pattern_table(filter, grid_max, spacing, workers_));
        if (file) {
            std::error_code ec;
            std::filesystem::create_directories(*directory_, ec);
            save_pattern_table(*table, *file);
        }
    }
    std::lock_guard lock(mutex_);
    return tables_.emplace(key, table).first->second;
}

}  // namespace aqqp
