#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "aqqp/error.hpp"
#include "aqqp/estimator.hpp"
#include "aqqp/numeric.hpp"
#include "aqqp/states.hpp"
#include "oracles.hpp"

using namespace aqqp;

namespace {

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an aqqp::Error");
    return Errc::io;
}

const PatternTable& table_for(double w) {
    static std::map<double, PatternTable> tables;
    auto it = tables.find(w);
    if (it == tables.end()) it = tables.emplace(w, build_pattern_table(make_filter(w))).first;
    return it->second;
}

std::size_t index_of(const std::vector<double>& grid, double x) {
    return static_cast<std::size_t>(std::min_element(grid.begin(), grid.end(),
                                                     [&](double a, double b) {
                                                         return std::abs(a - x) < std::abs(b - x);
                                                     }) -
                                    grid.begin());
}

}  // namespace

TEST_CASE("estimate is the brute-force mean and standard error of pattern values") {
    const QuadratureDataset d = sample_quadratures(GaussianState{0.681}, 3000, 21);
    const PatternTable& t = table_for(1.1);
    const double grid[] = {-7.3, -2.0, 0.0, 0.35, 4.05};
    const AqqpEstimate est = estimate_aqqp(d, t, grid);
    REQUIRE(est.p.size() == 5);
    CHECK(est.n_samples == 3000);
    CHECK(est.width == 1.1);
    for (std::size_t i = 0; i < 5; ++i) {
        long double sum = 0.0L;
        for (double s : d.samples()) sum += eval_pattern(t, s, grid[i]);
        const long double mean = sum / 3000.0L;
        long double sq = 0.0L;
        for (double s : d.samples()) sq += (eval_pattern(t, s, grid[i]) - mean) * (eval_pattern(t, s, grid[i]) - mean);
        const double se = static_cast<double>(std::sqrt(sq / 2999.0L) / std::sqrt(3000.0L));
        CHECK(est.p[i] == doctest::Approx(static_cast<double>(mean)).epsilon(1e-12).scale(1.0));
        CHECK(est.se[i] == doctest::Approx(se).epsilon(1e-12));
        CHECK(est.se[i] > 0.0);
    }
}

TEST_CASE("degenerate and out-of-range inputs") {
    const PatternTable& t = table_for(1.0);
    const double grid[] = {0.0, 1.0};
    const QuadratureDataset one(std::vector<double>{0.4});
    // A single sample gives p = f(j - phi) exactly but no standard error.
    CHECK(eval_pattern(t, 0.4, 1.0) == t.at(-0.6));
    CHECK(code_of([&] { estimate_aqqp(one, t, grid); }) == Errc::insufficient_data);
    const QuadratureDataset same(std::vector<double>{0.4, 0.4, 0.4});
    CHECK(code_of([&] { estimate_aqqp(same, t, grid); }) == Errc::degenerate_input);
    const QuadratureDataset far(std::vector<double>{0.0, 20.5});
    CHECK(code_of([&] { estimate_aqqp(far, t, grid); }) == Errc::range);
    const QuadratureDataset ok(std::vector<double>{0.0, 1.0});
    CHECK(code_of([&] { estimate_aqqp(ok, t, std::span<const double>{}); }) == Errc::invalid_argument);
    CHECK_THROWS_AS(QuadratureDataset(std::vector<double>{}), Error);
    CHECK_THROWS_AS(QuadratureDataset(std::vector<double>{1.0, NAN}), Error);
    CHECK(required_x_max(far, grid) == 23.0);
}

TEST_CASE("vacuum data agrees with the analytic curve and is not certified") {
    const QuadratureDataset d = sample_quadratures(GaussianState{1.0}, 50000, 31);
    const PatternTable& t = table_for(1.0);
    const auto grid = default_phi_grid();
    const AqqpEstimate est = estimate_aqqp(d, t, grid);
    const auto exact = analytic_aqqp(GaussianState{1.0}, t.filter(), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(est.p[i] - exact[i]) <= 4.0 * est.se[i]);
    CHECK(significance(est).sigma > certification_threshold);
}

TEST_CASE("squeezed data at w = 1.1: positive central peak, significant negative lobes") {
    const QuadratureDataset d = sample_quadratures(GaussianState{0.681}, 4841, 1);
    const auto grid = default_phi_grid();
    const AqqpEstimate est = estimate_aqqp(d, table_for(1.1), grid);
    const std::size_t c = index_of(grid, 0.0);
    CHECK(est.p[c] > 0.0);
    CHECK(est.p[c] / est.se[c] > 10.0);
    const auto left = std::min_element(est.p.begin(), est.p.begin() + static_cast<long>(c));
    const auto right = std::min_element(est.p.begin() + static_cast<long>(c), est.p.end());
    CHECK(*left < -3.0 * est.se[static_cast<std::size_t>(left - est.p.begin())]);
    CHECK(*right < -3.0 * est.se[static_cast<std::size_t>(right - est.p.begin())]);
    const Significance s = significance(est);
    CHECK(s.sigma < -6.0);
    CHECK(s.sigma > -16.0);
    CHECK(std::abs(s.at_phi) > 1.0);
}

TEST_CASE("sampled estimate integrates like the analytic curve") {
    const auto grid = numeric::uniform_grid(-6.0, 6.0, 0.05);
    auto integral = [](const std::vector<double>& v) {
        return oracle::trapezoid([&](double x) { return v[static_cast<std::size_t>(std::lround((x + 6.0) / 0.05))]; },
                                 -6.0, 6.0, v.size() - 1);
    };
    for (const StateModel& s : {StateModel{GaussianState{0.681}}, StateModel{GaussianState{1.5}}, StateModel{SingleExcitation{}}}) {
        const QuadratureDataset d = sample_quadratures(s, 100000, 77);
        for (double w : {0.7, 1.1, 2.0}) {
            CAPTURE(w);
            const PatternTable& t = table_for(w);
            const double sampled = integral(estimate_aqqp(d, t, grid).p);
            const double exact = integral(analytic_aqqp(s, t.filter(), grid));
            CHECK(std::abs(sampled - exact) < 0.02 * std::abs(exact));
        }
    }
}

TEST_CASE("significance picks the minimum ratio and breaks ties toward smaller j_phi") {
    AqqpEstimate est;
    est.phi_grid = {-1.0, 0.0, 1.0, 2.0};
    est.p = {0.5, -0.2, 0.3, -0.4};
    est.se = {0.1, 0.1, 0.1, 0.2};
    Significance s = significance(est);
    CHECK(s.sigma == doctest::Approx(-2.0));
    CHECK(s.at_phi == 0.0);
    est.p = {1.0, 2.0, 3.0, 4.0};
    CHECK(significance(est).sigma > 0.0);
    CHECK(significance(est).at_phi == -1.0);
    est.se = {1.0, 1.0, 1.0, 1.0};
    est.p = {-1.0, 2.0, -1.0, -1.0};
    CHECK(significance(est).at_phi == -1.0);
}

TEST_CASE("width scan") {
    const QuadratureDataset d = sample_quadratures(GaussianState{0.681}, 4841, 1);
    const auto grid = default_phi_grid();
    PatternCache cache(std::nullopt);
    ScanOptions opt;
    opt.cache = &cache;

    SUBCASE("one width equals a single significance call") {
        const double w[] = {1.1};
        const SignificanceScan scan = scan_width(d, w, grid, opt);
        const Significance s = significance(estimate_aqqp(d, table_for(1.1), grid));
        REQUIRE(scan.sigma.size() == 1);
        CHECK(scan.sigma[0] == s.sigma);
        CHECK(scan.argmin_phi[0] == s.at_phi);
    }
    SUBCASE("squeezed data: more negative at smaller width") {
        const double w[] = {0.5, 2.0};
        const SignificanceScan scan = scan_width(d, w, grid, opt);
        CHECK(scan.sigma[0] < scan.sigma[1]);
        CHECK(scan.sigma[0] < certification_threshold);
    }
    SUBCASE("invalid width lists") {
        const double low[] = {0.05, 1.0};
        const double high[] = {1.0, 3.5};
        const double order[] = {1.0, 1.0};
        CHECK(code_of([&] { scan_width(d, low, grid, opt); }) == Errc::invalid_argument);
        CHECK(code_of([&] { scan_width(d, high, grid, opt); }) == Errc::invalid_argument);
        CHECK(code_of([&] { scan_width(d, order, grid, opt); }) == Errc::invalid_argument);
        CHECK(code_of([&] { scan_width(d, std::span<const double>{}, grid, opt); }) == Errc::invalid_argument);
    }
    SUBCASE("default widths") {
        const auto w = default_scan_widths();
        CHECK(w.size() == 30);
        CHECK(w.front() == doctest::Approx(0.4));
        CHECK(w.back() == doctest::Approx(3.0));
        CHECK(std::is_sorted(w.begin(), w.end()));
    }
}

TEST_CASE("estimator algebra") {
    const PatternTable& t = table_for(1.1);
    const auto grid = default_phi_grid();
    const QuadratureDataset a = sample_quadratures(GaussianState{0.681}, 2000, 3);
    const QuadratureDataset b = sample_quadratures(GaussianState{0.681}, 3500, 4);

    SUBCASE("concatenation is linear in the means") {
        const AqqpEstimate ea = estimate_aqqp(a, t, grid);
        const AqqpEstimate eb = estimate_aqqp(b, t, grid);
        const AqqpEstimate eab = estimate_aqqp(concatenate(a, b), t, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double combined = (2000.0 * ea.p[i] + 3500.0 * eb.p[i]) / 5500.0;
            const double scale = std::max({std::abs(ea.p[i]), std::abs(eb.p[i]), std::abs(eab.p[i])});
            CHECK(std::abs(eab.p[i] - combined) <= 4.0 * std::numeric_limits<double>::epsilon() * scale);
        }
    }
    SUBCASE("permutations change nothing") {
        std::vector<double> shuffled = a.samples();
        std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(5));
        const AqqpEstimate e1 = estimate_aqqp(a, t, grid);
        const AqqpEstimate e2 = estimate_aqqp(QuadratureDataset(shuffled), t, grid);
        CHECK(e1.p == e2.p);
        CHECK(e1.se == e2.se);
    }
    SUBCASE("worker count does not change a bit") {
        const AqqpEstimate e1 = estimate_aqqp(b, t, grid, 1);
        const AqqpEstimate e8 = estimate_aqqp(b, t, grid, 8);
        CHECK(e1.p == e8.p);
        CHECK(e1.se == e8.se);
    }
}
