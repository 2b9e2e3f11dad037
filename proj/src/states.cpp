#include "aqqp/states.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include "aqqp/error.hpp"
#include "aqqp/format.hpp"
#include "aqqp/numeric.hpp"
#include "aqqp/parallel.hpp"

namespace aqqp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Phi for the centred state, real for both models: exp((1 - V) k^2 / 2) or 1 - k^2.
double centred_profile(const StateModel& state, double k2) {
    return std::visit(overloaded{
                          [&](const GaussianState& g) { return std::exp(0.5 * (1.0 - g.variance) * k2); },
                          [&](const SingleExcitation&) { return 1.0 - k2; },
                      },
                      state);
}

double state_mean(const StateModel& state) {
    if (const auto* g = std::get_if<GaussianState>(&state)) return g->mean;
    return 0.0;
}

struct Nodes {
    std::vector<double> x;
    std::vector<double> w;
};

Nodes gauss_legendre_nodes(double a, double b, std::size_t panels) {
    using Rule = boost::math::quadrature::gauss<double, 20>;
    const auto& abscissa = Rule::abscissa();
    const auto& weights = Rule::weights();
    Nodes nodes;
    const double width = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = a + width * (static_cast<double>(p) + 0.5);
        const double half = 0.5 * width;
        for (std::size_t i = 0; i < abscissa.size(); ++i) {
            nodes.x.push_back(mid - half * abscissa[i]);
            nodes.w.push_back(half * weights[i]);
            nodes.x.push_back(mid + half * abscissa[i]);
            nodes.w.push_back(half * weights[i]);
        }
    }
    return nodes;
}

double max_abs(std::span<const double> values) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

void validate(const StateModel& state) {
    if (const auto* g = std::get_if<GaussianState>(&state)) {
        require(std::isfinite(g->variance) && g->variance > 0.0, Errc::invalid_argument,
                "Gaussian state variance must be positive");
        require(std::isfinite(g->mean), Errc::invalid_argument, "Gaussian state mean must be finite");
        if (g->conjugate_variance)
            require(std::isfinite(*g->conjugate_variance) && *g->conjugate_variance > 0.0, Errc::invalid_argument,
                    "conjugate variance must be positive");
    }
}

std::complex<double> char_function(const StateModel& state, double k) {
    validate(state);
    const double profile = centred_profile(state, k * k);
    const double mean = state_mean(state);
    if (mean == 0.0) return {profile, 0.0};
    return std::polar(profile, k * mean);
}

std::vector<double> analytic_aqqp(const StateModel& state, const FilterSpec& filter, std::span<const double> phi_grid) {
    validate(state);
    const double mean = state_mean(state);
    std::vector<double> out(phi_grid.size());
    parallel_for(phi_grid.size(), 0, [&](std::size_t i) {
        out[i] = numeric::cosine_integral([&](double k) { return centred_profile(state, k * k) * filter(k); },
                                          filter.cutoff(), phi_grid[i] - mean);
    });
    for (double v : out)
        require(std::isfinite(v), Errc::numerical_convergence, "analytic AQQP integral is not finite");
    return out;
}

Quasiprob2D analytic_quasiprob2d(const StateModel& state, const FilterSpec& filter, std::span<const double> x_grid,
                                 std::span<const double> y_grid) {
    validate(state);
    require(!x_grid.empty() && !y_grid.empty(), Errc::invalid_argument, "2D grids must be non-empty");

    // Phi(a, b) Omega_w(|(a, b)|) on the quarter plane; the state models are even in a and b.
    double vx = 1.0;
    double vy = 1.0;
    bool gaussian = false;
    if (const auto* g = std::get_if<GaussianState>(&state)) {
        gaussian = true;
        vx = g->variance;
        vy = g->conjugate_variance.value_or(1.0 / g->variance);
    }
    const double mean = state_mean(state);
    const double k_max = filter.cutoff();
    double reach = 0.0;
    for (double x : x_grid) reach = std::max(reach, std::abs(x - mean));
    reach = std::max(reach, max_abs(y_grid));
    const auto panels = static_cast<std::size_t>(std::ceil(k_max / std::min(0.1, 1.0 / (1.0 + reach))));
    const Nodes nodes = gauss_legendre_nodes(0.0, k_max, std::max<std::size_t>(panels, 1));
    const auto m = static_cast<Eigen::Index>(nodes.x.size());

    Eigen::MatrixXd g(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        const double ka = nodes.x[static_cast<std::size_t>(a)];
        for (Eigen::Index b = 0; b < m; ++b) {
            const double kb = nodes.x[static_cast<std::size_t>(b)];
            const double r = std::hypot(ka, kb);
            const double phi = gaussian ? std::exp(0.5 * (1.0 - vx) * ka * ka + 0.5 * (1.0 - vy) * kb * kb)
                                        : 1.0 - (ka * ka + kb * kb);
            g(a, b) = nodes.w[static_cast<std::size_t>(a)] * nodes.w[static_cast<std::size_t>(b)] * phi * filter(r);
        }
    }
    auto cosine_matrix = [&](std::span<const double> grid, double shift) {
        Eigen::MatrixXd c(static_cast<Eigen::Index>(grid.size()), m);
        for (Eigen::Index i = 0; i < c.rows(); ++i)
            for (Eigen::Index j = 0; j < m; ++j)
                c(i, j) = std::cos(nodes.x[static_cast<std::size_t>(j)] * (grid[static_cast<std::size_t>(i)] - shift));
        return c;
    };
    const Eigen::MatrixXd cx = cosine_matrix(x_grid, mean);
    const Eigen::MatrixXd cy = cosine_matrix(y_grid, 0.0);
    const Eigen::MatrixXd p = (cx * g * cy.transpose()) / (numeric::pi * numeric::pi);

    Quasiprob2D out;
    out.x_grid.assign(x_grid.begin(), x_grid.end());
    out.y_grid.assign(y_grid.begin(), y_grid.end());
    out.values.resize(x_grid.size() * y_grid.size());
    for (Eigen::Index i = 0; i < p.rows(); ++i)
        for (Eigen::Index j = 0; j < p.cols(); ++j) {
            const double v = p(i, j);
            require(std::isfinite(v), Errc::numerical_convergence, "2D quasiprobability is not finite");
            out.values[static_cast<std::size_t>(i) * y_grid.size() + static_cast<std::size_t>(j)] = v;
        }
    return out;
}

QuadratureDataset sample_quadratures(const StateModel& state, std::size_t n, std::uint64_t seed) {
    validate(state);
    require(n >= 1, Errc::invalid_argument, "sample count must be at least 1");
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> samples(n);
    std::visit(overloaded{
                   [&](const GaussianState& g) {
                       const double sd = std::sqrt(g.variance);
                       for (auto& s : samples) s = g.mean + sd * normal(gen);
                   },
                   [&](const SingleExcitation&) {
                       // |X| is chi-distributed with three degrees of freedom; the sign is symmetric.
                       std::bernoulli_distribution sign(0.5);
                       for (auto& s : samples) {
                           const double z1 = normal(gen);
                           const double z2 = normal(gen);
                           const double z3 = normal(gen);
                           const double r = std::sqrt(z1 * z1 + z2 * z2 + z3 * z3);
                           s = sign(gen) ? r : -r;
                       }
                   },
               },
               state);
    DatasetMeta meta;
    meta.source = "synthetic seed=" + std::to_string(seed);
    return QuadratureDataset(std::move(samples), 0.0, std::move(meta));
}

double optimal_zeta(const RecordModel& model, double n_atoms) {
    const double atomic = model.a1() * n_atoms + model.a2 * n_atoms * n_atoms;
    const double total = model.a0 + atomic;
    return total > 0.0 ? atomic / total : 0.0;
}

double conditioning_floor(const RecordModel& model, double n_atoms) {
    const double projection = model.a1() * model.eta * n_atoms;
    if (projection <= 0.0) return 0.0;
    const double atomic = model.a1() * n_atoms + model.a2 * n_atoms * n_atoms;
    const double total = model.a0 + atomic;
    const double residual = total > 0.0 ? atomic * model.a0 / total : 0.0;
    return residual / projection;
}

std::vector<RawRecord> simulate_records(std::optional<double> true_variance, std::int64_t n_atoms,
                                        const RecordModel& model, std::size_t n, std::uint64_t seed,
                                        std::int64_t first_cycle) {
    require(n >= 1, Errc::invalid_argument, "record count must be at least 1");
    require(n_atoms >= 0, Errc::invalid_argument, "atom number must be non-negative");
    require(model.a0 >= 0.0 && model.kappa >= 0.0 && model.a2 >= 0.0 && model.photon_ratio > 0.0 &&
                model.eta > 0.0 && model.eta <= 1.0,
            Errc::invalid_argument, "record model parameters out of range");
    const double na = static_cast<double>(n_atoms);
    double extra = 0.0;
    if (true_variance) {
        require(std::isfinite(*true_variance) && *true_variance > 0.0, Errc::invalid_argument,
                "true variance must be positive");
        const double floor = conditioning_floor(model, na);
        require(*true_variance >= floor, Errc::invalid_argument,
                "true variance " + format_double(*true_variance) + " below the conditioning floor " +
                    format_double(floor));
        extra = (*true_variance - floor) * model.a1() * model.eta * na;
    }
    const double sd_e1 = std::sqrt(model.a0);
    const double sd_e2 = std::sqrt(model.a0 / model.photon_ratio);
    const double sd_atoms = model.kappa * std::sqrt(na);
    const double sd_tech = std::sqrt(model.a2) * na;
    const double sd_extra = std::sqrt(extra);

    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<RawRecord> records(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double e1 = sd_e1 * normal(gen);
        const double atoms = sd_atoms * normal(gen);
        const double tech = sd_tech * normal(gen);
        const double e2 = sd_e2 * normal(gen);
        const double d = sd_extra * normal(gen);
        records[i] = {first_cycle + static_cast<std::int64_t>(i), n_atoms, e1 + atoms + tech, e2 + atoms + tech + d};
    }
    return records;
}

}  // namespace aqqp
