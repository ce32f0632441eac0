#include <doctest.h>

#include <lpplab/env.hpp>
#include <lpplab/experiments.hpp>
#include <lpplab/fractal.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

using namespace lpplab;

TEST_CASE("least squares recovers exact lines") {
    FitResult f = ols({0, 1, 2, 3}, {1, 3, 5, 7});
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.stderr_slope == doctest::Approx(0.0).epsilon(1e-9));

    FitResult g = ols_loglog({1, 2, 4, 8}, {3, 3 * std::pow(2.0, 1.5), 3 * std::pow(4.0, 1.5),
                                            3 * std::pow(8.0, 1.5)});
    CHECK(g.slope == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(g.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-9));

    CHECK_THROWS_AS(ols({1}, {1}), DegenerateCounts);
    CHECK_THROWS_AS(ols({1, 1, 1}, {1, 2, 3}), DegenerateCounts);
    CHECK_THROWS_AS(ols_loglog({1, 2, 3}, {1, 0, 2}), DegenerateCounts);
}

TEST_CASE("box dimension of exact planar and linear scalings") {
    Env e{90, 0};
    std::vector<double> scales;
    std::vector<long long> planar, linear;
    for (int j = 0; j <= 6; ++j) {
        scales.push_back(std::pow(2.0, -j));
        planar.push_back(1LL << (2 * j));
        linear.push_back(1LL << j);
    }
    std::vector<std::vector<long long>> counts(5, planar);
    DimensionEstimate d2 = box_dimension(counts, scales, 0, 6, 200, e);
    CHECK(d2.fit.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(d2.ci_lo <= d2.fit.slope);
    CHECK(d2.ci_hi >= d2.fit.slope);

    counts.assign(3, linear);
    DimensionEstimate d1 = box_dimension(counts, scales, 0, 6, 200, e);
    CHECK(d1.fit.slope == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(box_dimension(counts, scales, 0, 12, 200, e), DegenerateCounts);
    CHECK_THROWS_AS(box_dimension({}, scales, 0, 6, 200, e), DegenerateCounts);
}

TEST_CASE("box dimension of a constructed middle-half Cantor set is one half") {
    // Depth-7 middle-half Cantor set on [0, 4^7) as aligned integer cells.
    std::vector<std::pair<long long, long long>> iv{{0, 1LL << 14}}; // [a, a+len)
    for (int depth = 0; depth < 7; ++depth) {
        std::vector<std::pair<long long, long long>> next;
        for (auto [a, len] : iv) {
            next.push_back({a, len / 4});
            next.push_back({a + 3 * len / 4, len / 4});
        }
        iv = std::move(next);
    }
    REQUIRE(iv.size() == 128);

    std::vector<double> scales;
    std::vector<long long> count_row;
    for (int j = 7; j >= 0; --j) { // box side 4^j cells, coarse to fine
        long long side = 1LL << (2 * j);
        long long count = 0, last = -1;
        for (auto [a, len] : iv) {
            (void)len;
            long long box = a / side;
            if (box != last) ++count;
            last = box;
        }
        scales.push_back(double(side) / double(1LL << 14));
        count_row.push_back(count);
        CHECK(count == (1LL << (7 - j))); // aligned construction
    }
    Env e{91, 0};
    DimensionEstimate d = box_dimension({count_row, count_row}, scales, 0, 7, 100, e);
    CHECK(d.fit.slope == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(d.fit.r2 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("wilson intervals match reference values and behave at the edges") {
    Interval i = wilson_interval(50, 100, 1.96);
    CHECK(i.lo == doctest::Approx(0.40383).epsilon(2e-4));
    CHECK(i.hi == doctest::Approx(0.59617).epsilon(2e-4));

    Interval zero = wilson_interval(0, 100, 1.96);
    CHECK(zero.lo == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(zero.hi > 0.0);
    Interval full = wilson_interval(100, 100, 1.96);
    CHECK(full.hi == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(full.lo < 1.0);

    Interval a = wilson_interval(30, 100, 1.96), b = wilson_interval(60, 100, 1.96);
    CHECK(a.lo < b.lo);
    CHECK(a.hi < b.hi);
}

TEST_CASE("Kolmogorov-Smirnov machinery: statistics, p-values, calibration") {
    CHECK(ks_pvalue(0.2) >= 0.999);
    CHECK(std::fabs(ks_pvalue(1.2238) - 0.10) < 0.005);
    CHECK(std::fabs(ks_pvalue(1.3581) - 0.05) < 0.005);
    CHECK(std::fabs(ks_pvalue(2.0) - 6.7086e-4) < 1e-6);
    CHECK(ks_pvalue(1.0) > ks_pvalue(1.5));
    CHECK(ks_pvalue(1.5) > ks_pvalue(2.0));

    std::vector<double> a{0.1, 0.4, 0.7, 0.9}, sep{100.1, 100.2, 100.3, 100.4};
    CHECK(ks_statistic_two(a, a) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ks_statistic_two(a, sep) == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<double> big_a, big_b;
    UniformStream u(Env{92, 0}, "points");
    for (int i = 0; i < 500; ++i) big_a.push_back(u(std::uint64_t(i)));
    for (int i = 0; i < 500; ++i) big_b.push_back(u(std::uint64_t(1000 + i)));
    CHECK(ks_two_sample_p(big_a, big_b) >= 0.001);
    std::vector<double> big_sep;
    for (double x : big_a) big_sep.push_back(x + 100.0);
    CHECK(ks_two_sample_p(big_a, big_sep) < 1e-6);

    auto unif = [](double x) { return x; };
    int calibrated = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> s;
        for (int i = 0; i < 200; ++i)
            s.push_back(u(std::uint64_t(10000 + 200 * trial + i)));
        if (ks_one_sample_p(s, unif) > 0.01) ++calibrated;
    }
    CHECK(calibrated >= 95);
}

TEST_CASE("exponential tail fits recover a synthetic rate") {
    std::vector<double> t{1, 2, 3, 4, 5, 6}, f;
    for (double x : t) f.push_back(std::exp(-2.0 * x));
    TailFit fit = exponential_tail_fit(t, f);
    CHECK(fit.rate == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(exponential_tail_fit({1, 2, 3}, {0.5, 0.0, 0.0}), DegenerateCounts);
}

TEST_CASE("sample moments on known values") {
    std::vector<double> v{1, 2, 3, 4};
    CHECK(mean_of(v) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(sd_of(v) == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("bootstrap intervals cover the point estimate deterministically") {
    std::vector<double> samples;
    for (int i = 1; i <= 100; ++i) samples.push_back(double(i));
    Env e{93, 0};
    auto stat = [](const std::vector<double>& v) { return mean_of(v); };
    Interval ci = bootstrap_ci(samples, stat, 500, e);
    CHECK(ci.lo < 50.5);
    CHECK(ci.hi > 50.5);
    CHECK(ci.lo < ci.hi);
    Interval again = bootstrap_ci(samples, stat, 500, e);
    CHECK(ci.lo == again.lo);
    CHECK(ci.hi == again.hi);
}

TEST_CASE("diagonal-tube occupancy tails shrink with the tube multiple") {
    Config cfg;
    cfg.experiment = "tube-tail";
    cfg.replicas = 40;
    cfg.master_seed = 94;
    cfg.n_list = {256};
    std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "lpplab-test-tube";
    std::filesystem::remove_all(dir);
    RunSummary s = run_experiment(cfg, 0, dir.string());
    CHECK(!s.failed);
    CHECK(s.ok == s.units);

    std::ifstream f(dir / "fits.json");
    REQUIRE(f.good());
    nlohmann::json fits = nlohmann::json::parse(f);
    REQUIRE(!fits.empty());
    auto fr = fits[0]["fractions"].get<std::vector<double>>();
    REQUIRE(!fr.empty());
    for (std::size_t i = 1; i < fr.size(); ++i) CHECK(fr[i] <= fr[i - 1]);
    CHECK(fr.front() <= 1.0);
    CHECK(fits[0]["max_occupancy"].get<double>() <= 1.0);
    CHECK(fits[0]["max_occupancy"].get<double>() > 0.0);
    std::filesystem::remove_all(dir);
}
