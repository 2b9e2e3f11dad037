#include "cli/settings.hpp"

#include <sstream>

#include "aqqp/format.hpp"

namespace aqqp::cli {

std::string canonical_settings(const RunConfig& c) {
    std::ostringstream s;
    auto num = [&](const char* key, double v) { s << key << '=' << format_double(v) << '\n'; };
    s << "command=" << c.command << '\n';
    s << "preset=" << c.preset << '\n';
    s << "input=" << (c.input.empty() ? "synthetic" : "file") << '\n';
    s << "seed=" << c.seed << '\n';
    s << "n=" << c.n << '\n';
    num("width", c.width);
    s << "widths=";
    for (std::size_t i = 0; i < c.widths.size(); ++i) s << (i ? "," : "") << format_double(c.widths[i]);
    s << '\n';
    num("phi_min", c.phi_min);
    num("phi_max", c.phi_max);
    num("phi_step", c.phi_step);
    num("table_spacing", c.table_spacing);
    num("rel_tol", c.rel_tol);
    s << "records=" << c.records << '\n';
    s << "state=" << c.state << '\n';
    num("variance", c.variance);
    num("n1_photons", c.n1_photons);
    num("epsilon", c.epsilon);
    num("photon_ratio", c.photon_ratio);
    num("efficiency_threshold", c.efficiency_threshold);
    s << "force=" << (c.force ? 1 : 0) << '\n';
    return s.str();
}

std::string settings_hash(const RunConfig& config) { return to_hex(fnv1a64(canonical_settings(config))); }

}  // namespace aqqp::cli
