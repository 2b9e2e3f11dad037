#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "aqqp/error.hpp"
#include "aqqp/numeric.hpp"
#include "aqqp/pattern.hpp"
#include "oracles.hpp"

using namespace aqqp;

TEST_CASE("central value matches direct high-resolution quadrature") {
    const FilterSpec f = make_filter(1.0);
    const PatternTable t = build_pattern_table(f);
    const oracle::DirectPattern direct(f, 1.0);
    CHECK(direct(0.0) > 0.0);
    CHECK(eval_pattern(t, 0.0, 0.0) == doctest::Approx(direct(0.0)).epsilon(1e-9));
    CHECK(t.values()[t.values().size() / 2] == eval_pattern(t, 0.7, 0.7));
}

TEST_CASE("table is even on its grid") {
    const PatternTable t = build_pattern_table(make_filter(1.1));
    const auto& v = t.values();
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(v[i] - v[v.size() - 1 - i]) <= 1e-9 * t.max_abs());
    CHECK(t.at(3.21) == t.at(-3.21));
}

TEST_CASE("pattern depends on the displacement only") {
    const PatternTable t = build_pattern_table(make_filter(1.0));
    CHECK(eval_pattern(t, 1.3, 0.3) == eval_pattern(t, 2.0, 1.0));
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 200; ++i) {
        const double a = u(gen);
        const double shift = u(gen);
        CHECK(eval_pattern(t, a + shift, shift) == t.at((a + shift) - shift));
    }
}

TEST_CASE("off-grid interpolation stays within 1e-6 of max|f|") {
    const FilterSpec f = make_filter(1.1);
    const PatternTable t = build_pattern_table(f);
    const oracle::DirectPattern direct(f, 12.0);
    CHECK(std::abs(t.at(0.1234) - direct(0.1234)) < 1e-6 * t.max_abs());
    for (double x : {-11.9871, -4.4447, 0.0031, 2.71828, 7.0009, 11.5553})
        CHECK(std::abs(t.at(x) - direct(x)) < 1e-6 * t.max_abs());
}

TEST_CASE("oscillation amplitude grows with width") {
    double previous = 0.0;
    for (double w : {0.5, 1.0, 2.0}) {
        const PatternTable t = build_pattern_table(make_filter(w));
        CHECK(t.max_abs() >= previous);
        previous = t.max_abs();
    }
}

TEST_CASE("pattern decays towards the table edge") {
    for (double w : {0.4, 0.7, 1.0, 1.1, 2.0}) {
        CAPTURE(w);
        const PatternTable t = build_pattern_table(make_filter(w));
        CHECK(std::abs(t.at(t.x_max())) < 1e-3 * t.max_abs());
    }
}

TEST_CASE("narrow filters approach the filter's Fourier transform") {
    // exp(k^2/2) ~ 1 over the support of a narrow filter.
    auto deviation = [](double w) {
        const FilterSpec f = make_filter(w);
        const PatternTable t = build_pattern_table(f);
        const auto grid = numeric::uniform_grid(-12.0, 12.0, 0.25);
        const auto ft = filter_fourier_transform(f, grid);
        double dev = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) dev = std::max(dev, std::abs(t.at(grid[i]) - ft[i]));
        return dev / t.max_abs();
    };
    const double d02 = deviation(0.2);
    const double d01 = deviation(0.1);
    CHECK(d01 < d02);
    CHECK(d01 < 0.01);
}

TEST_CASE("range and argument errors") {
    const PatternTable t = build_pattern_table(make_filter(1.0));
    CHECK_THROWS_AS(eval_pattern(t, 21.0, 0.0), Error);
    try {
        eval_pattern(t, 0.0, -20.5);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::range);
    }
    CHECK_THROWS_AS(build_pattern_table(make_filter(1.0), 10.0), Error);
    CHECK_THROWS_AS(build_pattern_table(make_filter(1.0), 15.0, 0.02), Error);
}

TEST_CASE("build is deterministic across worker counts") {
    const FilterSpec f = make_filter(1.1);
    const PatternTable one = build_pattern_table(f, 15.0, 0.005, 1);
    const PatternTable many = build_pattern_table(f, 15.0, 0.005, 8);
    CHECK(one.values() == many.values());
}

TEST_CASE("CSV cache round-trips bit for bit and rejects mismatched keys") {
    const auto dir = std::filesystem::temp_directory_path() / "aqqp_pattern_cache_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const FilterSpec f = make_filter(0.9);
    const PatternTable t = build_pattern_table(f, 13.0, 0.01);
    save_pattern_table(t, dir / "t.csv");
    const auto loaded = load_pattern_table(dir / "t.csv", f, t.x_max(), t.spacing());
    REQUIRE(loaded.has_value());
    CHECK(loaded->values() == t.values());
    CHECK_FALSE(load_pattern_table(dir / "t.csv", make_filter(1.0), t.x_max(), t.spacing()).has_value());
    CHECK_FALSE(load_pattern_table(dir / "t.csv", f, t.x_max(), 0.005).has_value());

    PatternCache cache(dir);
    const auto first = cache.get(0.9, 13.0, 0.01);
    CHECK(first->values() == t.values());
    CHECK(cache.get(0.9, 13.0, 0.01) == first);
    PatternCache reopened(dir);
    CHECK(reopened.get(0.9, 13.0, 0.01)->values() == t.values());
    std::filesystem::remove_all(dir);
}
