#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>

#include "aqqp/calibration.hpp"
#include "aqqp/estimator.hpp"
#include "aqqp/format.hpp"
#include "aqqp/numeric.hpp"
#include "aqqp/presets.hpp"
#include "aqqp/records.hpp"
#include "aqqp/states.hpp"

namespace aqqp::cli {

namespace {

using nlohmann::json;

std::string read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::io, "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string digest_of(const std::filesystem::path& path) { return to_hex(fnv1a64(read_bytes(path))); }

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::io, "cannot write " + path.string());
    out << text;
    out.flush();
    if (!out) fail(Errc::io, "error while writing " + path.string());
}

std::filesystem::path sidecar(const std::filesystem::path& path) { return path.string() + ".json"; }

std::vector<std::string> stamp(const RunConfig& c) {
    return {std::string("aqqp ") + tool_version, "command=" + c.command, "settings_hash=" + settings_hash(c)};
}

json stamp_json(const RunConfig& c) {
    return json{{"version", tool_version}, {"command", c.command}, {"settings_hash", settings_hash(c)}};
}

std::string csv_header(const RunConfig& c) {
    std::string s;
    for (const auto& line : stamp(c)) s += "# " + line + '\n';
    return s;
}

StateModel state_of(const RunConfig& c) {
    if (c.state == "gaussian") {
        GaussianState g;
        g.variance = c.variance;
        return g;
    }
    if (c.state == "single") return SingleExcitation{};
    fail(Errc::invalid_argument, "unknown state '" + c.state + "' (gaussian or single)");
}

std::vector<double> grid_of(const RunConfig& c) {
    require(std::isfinite(c.phi_min) && std::isfinite(c.phi_max) && c.phi_min < c.phi_max, Errc::invalid_argument,
            "j_phi grid needs phi-min < phi-max");
    require(c.phi_step > 0.0, Errc::invalid_argument, "phi-step must be positive");
    return numeric::uniform_grid(c.phi_min, c.phi_max, c.phi_step);
}

void require_width(double w) {
    require(w >= min_scan_width && w <= max_scan_width, Errc::invalid_argument,
            "width " + format_double(w) + " outside [" + format_double(min_scan_width) + ", " +
                format_double(max_scan_width) + "]");
}

struct Input {
    QuadratureDataset data;
    json info;
};

Input load_or_sample(const RunConfig& c) {
    if (!c.input.empty()) {
        QuadratureDataset d = read_quadratures(c.input);
        return {std::move(d), json{{"input", c.input.filename().string()}, {"input_digest", digest_of(c.input)}}};
    }
    QuadratureDataset d = sample_quadratures(state_of(c), c.n, c.seed);
    return {std::move(d), json{{"input", "synthetic"}, {"state", c.state}, {"variance", c.variance}}};
}

void write_sidecar(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace

int exit_code(Errc code) noexcept {
    switch (code) {
        case Errc::invalid_argument: return 2;
        case Errc::insufficient_data: return 3;
        case Errc::numerical_convergence: return 4;
        case Errc::io: return 5;
        case Errc::range: return 6;
        case Errc::calibration_inconsistency: return 7;
        case Errc::rejected: return 8;
        case Errc::degenerate_input: return 9;
    }
    return 1;
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
    require(!c.output.empty(), Errc::invalid_argument, "simulate needs --output");
    require(c.n >= 1, Errc::invalid_argument, "simulate needs --n >= 1");
    const RecordModel model = presets::record_model();
    json summary = stamp_json(c);
    if (c.records == "quadratures") {
        QuadratureDataset d = sample_quadratures(state_of(c), c.n, c.seed);
        std::ostringstream text;
        write_quadratures(text, d, stamp(c));
        write_text(c.output, text.str());
        summary["n_samples"] = d.size();
        summary["sample_variance"] = d.size() > 1 ? json(d.sample_variance()) : json();
        write_sidecar(sidecar(c.output), summary);
    } else {
        std::vector<RawRecord> records;
        if (c.records == "acs") {
            const auto levels = presets::acs_levels();
            for (std::size_t i = 0; i < levels.size(); ++i) {
                const auto group = simulate_records(std::nullopt, levels[i], model, c.n, numeric::derive_seed(c.seed, i),
                                                    static_cast<std::int64_t>(records.size()));
                records.insert(records.end(), group.begin(), group.end());
            }
        } else if (c.records == "squeezed") {
            // variance is the normalised target; the conditional atomic variance follows from the efficiency.
            const double truth = 1.0 - (1.0 - c.variance) / presets::target_efficiency;
            records = simulate_records(truth, presets::max_atoms, model, c.n, c.seed);
        } else {
            fail(Errc::invalid_argument, "unknown record kind '" + c.records + "' (acs, squeezed or quadratures)");
        }
        std::ostringstream text;
        write_records(text, records, stamp(c));
        write_text(c.output, text.str());
        summary["records"] = records.size();
    }
    out << summary.dump() << '\n';
    return 0;
}

int cmd_calibrate(const RunConfig& c, std::ostream& out) {
    require(!c.input.empty(), Errc::invalid_argument, "calibrate needs --input");
    require(!c.output.empty(), Errc::invalid_argument, "calibrate needs --output");
    const auto acs = read_records(c.input);
    const NoiseScalingFit fit = fit_noise_scaling(acs_noise_groups(acs));

    std::vector<RawRecord> zeta_records;
    if (!c.analysis.empty()) {
        zeta_records = read_records(c.analysis);
    } else {
        // Without analysis records, regress on the largest-atom-number ACS group.
        std::int64_t top = 0;
        for (const auto& r : acs) top = std::max(top, r.n_atoms);
        std::copy_if(acs.begin(), acs.end(), std::back_inserter(zeta_records),
                     [&](const RawRecord& r) { return r.n_atoms == top; });
    }
    const ZetaFit zeta = fit_zeta_detailed(zeta_records);
    const CalibrationModel model = make_calibration_model(fit, zeta, c.n1_photons, c.epsilon, c.photon_ratio);
    const double na = static_cast<double>(zeta_records.front().n_atoms);

    json j = to_json(model);
    j.update(stamp_json(c));
    j["id"] = model.id();
    j["fit"] = json{{"chi2", fit.chi2},
                    {"groups", fit.groups},
                    {"a0_std_error", fit.std_error(0)},
                    {"a1_std_error", fit.std_error(1)},
                    {"a2_std_error", fit.std_error(2)},
                    {"a2_raw", fit.a2}};
    j["zeta_n_atoms"] = na;
    j["efficiency"] = efficiency(model, na);
    j["input_digest"] = digest_of(c.input);
    if (!c.analysis.empty()) j["analysis_digest"] = digest_of(c.analysis);
    write_sidecar(c.output, j);
    out << json{{"id", model.id()}, {"zeta", model.zeta}, {"eta", model.eta}, {"efficiency", efficiency(model, na)}}.dump()
        << '\n';
    return 0;
}

int cmd_normalize(const RunConfig& c, std::ostream& out) {
    require(!c.input.empty() && !c.calibration.empty() && !c.output.empty(), Errc::invalid_argument,
            "normalize needs --input, --calibration and --output");
    json cal;
    try {
        cal = json::parse(read_bytes(c.calibration));
    } catch (const json::parse_error& e) {
        fail(Errc::invalid_argument, c.calibration.string() + ": " + e.what());
    }
    const CalibrationModel model = calibration_from_json(cal);
    NormalizeOptions opt;
    opt.efficiency_threshold = c.efficiency_threshold;
    opt.force = c.force;
    opt.source = c.input.filename().string();
    const QuadratureDataset d = normalize(read_records(c.input), model, opt);

    std::ostringstream text;
    write_quadratures(text, d, stamp(c));
    write_text(c.output, text.str());
    json j = stamp_json(c);
    j["calibration_id"] = d.meta().calibration_id;
    j["efficiency"] = *d.meta().efficiency;
    j["n_atoms"] = *d.meta().n_atoms;
    j["n_samples"] = d.size();
    j["sample_variance"] = d.size() > 1 ? json(d.sample_variance()) : json();
    j["input_digest"] = digest_of(c.input);
    write_sidecar(sidecar(c.output), j);
    out << j.dump() << '\n';
    return 0;
}

int cmd_estimate(const RunConfig& c, std::ostream& out) {
    require_width(c.width);
    const auto grid = grid_of(c);
    const Input in = load_or_sample(c);
    PatternCache cache = PatternCache::from_environment(c.workers);
    const auto table = cache.get(c.width, required_x_max(in.data, grid), c.table_spacing, c.rel_tol);
    const AqqpEstimate est = estimate_aqqp(in.data, *table, grid, c.workers);
    const Significance s = significance(est);

    json j = stamp_json(c);
    j.update(in.info);
    j["width"] = c.width;
    j["n_samples"] = est.n_samples;
    j["sigma"] = s.sigma;
    j["at_phi"] = s.at_phi;
    j["certified"] = s.sigma < certification_threshold;
    if (!c.output.empty()) {
        std::string text = csv_header(c) + "j_phi,p,se\n";
        for (std::size_t i = 0; i < grid.size(); ++i)
            text += format_double(est.phi_grid[i]) + ',' + format_double(est.p[i]) + ',' + format_double(est.se[i]) + '\n';
        write_text(c.output, text);
        write_sidecar(sidecar(c.output), j);
    }
    out << j.dump() << '\n';
    return 0;
}

int cmd_scan(const RunConfig& c, std::ostream& out) {
    const auto grid = grid_of(c);
    const std::vector<double> widths = c.widths.empty() ? default_scan_widths() : c.widths;
    const Input in = load_or_sample(c);
    PatternCache cache = PatternCache::from_environment(c.workers);
    ScanOptions opt;
    opt.spacing = c.table_spacing;
    opt.rel_tol = c.rel_tol;
    opt.workers = c.workers;
    opt.cache = &cache;
    const SignificanceScan scan = scan_width(in.data, widths, grid, opt);

    const auto best = static_cast<std::size_t>(std::min_element(scan.sigma.begin(), scan.sigma.end()) - scan.sigma.begin());
    json j = stamp_json(c);
    j.update(in.info);
    j["n_samples"] = in.data.size();
    j["best_width"] = scan.widths[best];
    j["best_sigma"] = scan.sigma[best];
    j["best_at_phi"] = scan.argmin_phi[best];
    if (!c.output.empty()) {
        std::string text = csv_header(c) + "w,sigma,at_phi\n";
        for (std::size_t i = 0; i < scan.widths.size(); ++i)
            text += format_double(scan.widths[i]) + ',' + format_double(scan.sigma[i]) + ',' +
                    format_double(scan.argmin_phi[i]) + '\n';
        write_text(c.output, text);
        write_sidecar(sidecar(c.output), j);
    }
    out << j.dump() << '\n';
    return 0;
}

int cmd_oracle(const RunConfig& c, std::ostream& out) {
    require_width(c.width);
    const auto grid = grid_of(c);
    const FilterSpec filter = make_filter(c.width, c.rel_tol);
    const auto p = analytic_aqqp(state_of(c), filter, grid);
    std::string text = csv_header(c) + "j_phi,p\n";
    for (std::size_t i = 0; i < grid.size(); ++i) text += format_double(grid[i]) + ',' + format_double(p[i]) + '\n';
    if (c.output.empty()) {
        out << text;
    } else {
        write_text(c.output, text);
        json j = stamp_json(c);
        j["state"] = c.state;
        j["variance"] = c.variance;
        j["width"] = c.width;
        j["min_p"] = *std::min_element(p.begin(), p.end());
        write_sidecar(sidecar(c.output), j);
        out << j.dump() << '\n';
    }
    return 0;
}

namespace {

struct Preset {
    std::string records;
    double variance;
};

const std::map<std::string, Preset>& preset_table() {
    static const std::map<std::string, Preset> table{
        {"reference", {"acs", presets::squeezed_variance}},
        {"squeezed", {"quadratures", presets::squeezed_variance}},
        {"vacuum", {"quadratures", 1.0}},
    };
    return table;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Nonclassicality certification from sampled atomic quadrature quasiprobabilities", "aqqp"};
    app.set_version_flag("--version", tool_version);
    app.require_subcommand(1);

    auto* simulate = app.add_subcommand("simulate", "Write synthetic two-pulse records or quadrature samples");
    auto* calibrate = app.add_subcommand("calibrate", "Fit the noise scaling and zeta; write a calibration JSON");
    auto* normalise = app.add_subcommand("normalize", "Convert records to normalised quadrature samples");
    auto* estimate = app.add_subcommand("estimate", "Sampled AQQP on a j_phi grid and its significance");
    auto* scan = app.add_subcommand("scan", "Significance versus filter width");
    auto* oracle = app.add_subcommand("oracle", "Analytic AQQP of a model state");

    const std::vector<CLI::App*> all{simulate, calibrate, normalise, estimate, scan, oracle};
    const std::vector<CLI::App*> sampling{simulate, estimate, scan};
    const std::vector<CLI::App*> gridded{estimate, scan, oracle};
    const std::vector<CLI::App*> stated{simulate, estimate, scan, oracle};

    std::string input;
    std::string analysis;
    std::string calibration;
    std::string output;
    for (auto* s : all) {
        s->add_option("--preset", c.preset, "reference, squeezed or vacuum")
            ->check(CLI::IsMember({"reference", "squeezed", "vacuum"}));
        s->add_option("--output,-o", output, "Output file");
    }
    for (auto* s : sampling) {
        s->add_option("--seed", c.seed, "Random seed")->capture_default_str();
        s->add_option("--n", c.n, "Samples (or records per atom number)")->capture_default_str();
        s->add_option("--workers", c.workers, "Worker threads (0: hardware)");
    }
    for (auto* s : stated) {
        s->add_option("--state", c.state, "gaussian or single")->capture_default_str();
        s->add_option("--variance", c.variance, "Quadrature variance (ground state = 1)");
    }
    for (auto* s : gridded) {
        s->add_option("--phi-min", c.phi_min)->capture_default_str();
        s->add_option("--phi-max", c.phi_max)->capture_default_str();
        s->add_option("--phi-step", c.phi_step)->capture_default_str();
        s->add_option("--rel-tol", c.rel_tol, "Filter quadrature tolerance")->capture_default_str();
    }
    for (auto* s : {estimate, scan}) {
        s->add_option("--input,-i", input, "Quadrature CSV (header jbar); synthetic samples if omitted");
        s->add_option("--table-spacing", c.table_spacing, "Pattern table grid spacing")->capture_default_str();
    }
    for (auto* s : {estimate, oracle}) s->add_option("--width,-w", c.width, "Filter width")->capture_default_str();
    scan->add_option("--widths", c.widths, "Comma-separated widths (default: 30 log-spaced in [0.4, 3])")
        ->delimiter(',');
    simulate->add_option("--records", c.records, "acs, squeezed or quadratures");

    calibrate->add_option("--input,-i", input, "ACS sweep records")->required();
    calibrate->add_option("--analysis", analysis, "Analysis records used for zeta");
    calibrate->add_option("--n1-photons", c.n1_photons)->capture_default_str();
    calibrate->add_option("--epsilon", c.epsilon, "Decoherence per photon")->capture_default_str();
    calibrate->add_option("--photon-ratio", c.photon_ratio, "n2 / n1")->capture_default_str();

    normalise->add_option("--input,-i", input, "Analysis records")->required();
    normalise->add_option("--calibration", calibration, "Calibration JSON")->required();
    normalise->add_option("--efficiency-threshold", c.efficiency_threshold)->capture_default_str();
    normalise->add_flag("--force", c.force, "Convert even below the efficiency threshold");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : exit_code(Errc::invalid_argument);
    }

    CLI::App* sub = app.get_subcommands().front();
    c.command = sub->get_name();
    c.input = input;
    c.analysis = analysis;
    c.calibration = calibration;
    c.output = output;
    auto given = [&](const char* name) {
        try {
            return sub->get_option(name)->count() > 0;
        } catch (const CLI::OptionNotFound&) {
            return false;
        }
    };
    if (!c.preset.empty()) {
        const Preset& p = preset_table().at(c.preset);
        if (!given("--records")) c.records = p.records;
        if (!given("--variance")) c.variance = p.variance;
    } else if (!given("--variance")) {
        c.variance = 1.0;
    }

    try {
        if (c.command == "simulate") return cmd_simulate(c, out);
        if (c.command == "calibrate") return cmd_calibrate(c, out);
        if (c.command == "normalize") return cmd_normalize(c, out);
        if (c.command == "estimate") return cmd_estimate(c, out);
        if (c.command == "scan") return cmd_scan(c, out);
        return cmd_oracle(c, out);
    } catch (const Error& e) {
        err << "aqqp: " << to_string(e.code()) << ": " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        err << "aqqp: error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace aqqp::cli
