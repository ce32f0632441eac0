#include <doctest.h>

#include <lpplab/experiments.hpp>
#include <lpplab/fractal.hpp>
#include <lpplab/lpp.hpp>
#include <lpplab/profile.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <vector>

using namespace lpplab;

namespace {

// Small real grid reused across cases: n = 64, rows 64..80, offsets |k|<=13.
DifferenceGrid small_grid(std::uint64_t replica) {
    return difference_grid(Env{80, replica}, 64, 1.0, 1.25, 0.25);
}

} // namespace

TEST_CASE("difference grids reproduce the two-source passage difference") {
    Env e{80, 0};
    DifferenceGrid g = small_grid(0);
    CHECK(g.u == 51);
    CHECK(g.w == 13);
    CHECK(g.r_lo == 64);
    CHECK(g.r_hi == 80);
    Point a{-g.u, 0}, b{g.u, 0};
    CHECK(g.center == 4.0 * double(g.u) + weight_at(e, a) - weight_at(e, b));
    for (long long r = g.r_lo; r <= g.r_hi; ++r)
        for (long long k = -g.w; k <= g.w; ++k) {
            Point v{r + k, r};
            double diff = passage_time(e, a, v) - passage_time(e, b, v);
            CHECK(g.raw(r, k) == diff);
            CHECK(g.value(r, k) == g.scale * (diff - g.center));
        }
    CHECK(g.t_of(g.r_lo) == 1.0);
    CHECK(g.x_of(0) == 0.0);
    CHECK(g.col_of(0.0) == 0);
    CHECK(g.col_of(g.x_of(-7)) == -7);
    CHECK_THROWS_AS(g.col_of(1.0), WindowClipped); // outside |k| <= 13
    CHECK_THROWS_AS(difference_grid(Env{80, 0}, 64, 0.5, 1.25, 0.25), WindowClipped);
}

TEST_CASE("profile rows decrease exactly in the diagonal offset") {
    for (std::uint64_t r = 0; r < 3; ++r) {
        DifferenceGrid g = difference_grid(Env{81, r}, 256, 1.0, 2.0, 0.5);
        for (long long row = g.r_lo; row <= g.r_hi; ++row)
            for (long long k = -g.w; k < g.w; ++k)
                CHECK(g.raw(row, k + 1) <= g.raw(row, k));
    }
}

TEST_CASE("level curves match a linear scan and clip coherently") {
    DifferenceGrid g = difference_grid(Env{82, 1}, 256, 1.0, 2.0, 0.5);
    double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
    for (long long row = g.r_lo; row <= g.r_hi; ++row) {
        vmin = std::min(vmin, g.value(row, g.w));
        vmax = std::max(vmax, g.value(row, -g.w));
    }
    for (double level : {vmin - 1.0, vmin + 0.1, 0.0, vmax - 0.1, vmax + 1.0}) {
        LevelCurve c = level_curve(g, level);
        for (long long row = g.r_lo; row <= g.r_hi; ++row) {
            std::size_t i = std::size_t(row - g.r_lo);
            long long pos = g.w + 1;
            for (long long k = -g.w; k <= g.w; ++k)
                if (g.value(row, k) <= level) {
                    pos = k;
                    break;
                }
            if (pos > g.w) {
                CHECK(!c.position[i].has_value());
                CHECK(c.clipped[i] == +1);
            } else {
                REQUIRE(c.position[i].has_value());
                CHECK(*c.position[i] == pos);
                CHECK(c.clipped[i] == (pos == -g.w ? -1 : 0));
            }
        }
    }

    // Lower levels sit further right.
    LevelCurve lo = level_curve(g, -0.3), hi = level_curve(g, +0.3);
    for (std::size_t i = 0; i < lo.position.size(); ++i) {
        if (lo.position[i]) {
            REQUIRE(hi.position[i].has_value());
            CHECK(*hi.position[i] <= *lo.position[i]);
        }
    }
}

TEST_CASE("zeta masses add exactly over splits and degenerate to zero") {
    DifferenceGrid g = difference_grid(Env{83, 2}, 256, 1.0, 2.0, 0.5);
    double a = g.x_of(-40), b = g.x_of(40), mid = g.x_of(5);

    ZetaMass z = zeta_mass(g, a, b, 1.0, 2.0);
    CHECK(z.units >= 0);
    CHECK(z.value() >= 0.0);

    ZetaMass zero = zeta_mass(g, a, a, 1.0, 2.0);
    CHECK(zero.units == 0);
    CHECK(zero.value() == 0.0);

    ZetaMass t1 = zeta_mass(g, a, b, 1.0, 1.5);
    t1 += zeta_mass(g, a, b, 1.5, 2.0);
    CHECK(t1 == z);

    ZetaMass c1 = zeta_mass(g, a, mid, 1.0, 2.0);
    c1 += zeta_mass(g, mid, b, 1.0, 2.0);
    CHECK(c1 == z);

    // Manual accumulation over rows reproduces the exact unit count.
    long long units = 0;
    for (long long row = 257; row <= 512; ++row)
        units += std::llround((g.raw(row, -40) - g.raw(row, 40)) * kInvWeightQuantum);
    CHECK(z.units == __int128(units));

    CHECK_THROWS_AS(zeta_mass(g, b, a, 1.0, 2.0), Error);
    CHECK_THROWS_AS(zeta_mass(g, a, b, 0.5, 2.0), WindowClipped);
}

TEST_CASE("level occupation counts rows exactly and adds over time splits") {
    DifferenceGrid g = difference_grid(Env{83, 2}, 256, 1.0, 2.0, 0.5);
    LevelCurve all = level_curve(g, 1e9); // every row clips to the left edge
    Occupation whole = level_occupation(all, -1.0, 1.0, 1.0, 2.0);
    CHECK(whole.count == 256);
    CHECK(whole.value() == 1.0);

    LevelCurve none = level_curve(g, -1e9);
    CHECK(level_occupation(none, -1.0, 1.0, 1.0, 2.0).count == 0);

    LevelCurve mid = level_curve(g, 0.05);
    Occupation full = level_occupation(mid, -0.2, 0.3, 1.0, 2.0);
    Occupation first = level_occupation(mid, -0.2, 0.3, 1.0, 1.5);
    Occupation second = level_occupation(mid, -0.2, 0.3, 1.5, 2.0);
    CHECK(first.count + second.count == full.count);

    CHECK_THROWS_AS(level_occupation(mid, -1.0, 1.0, 0.5, 2.0), WindowClipped);
}

TEST_CASE("rectangle mass equals the occupation quadrature within tolerance") {
    DifferenceGrid g = difference_grid(Env{84, 3}, 256, 1.0, 2.0, 0.5);
    long long ka = -40, kb = 40;
    double a = g.x_of(ka), b = g.x_of(kb);
    ZetaMass z = zeta_mass(g, a, b, 1.0, 2.0);
    REQUIRE(z.units > 0);

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (long long row = 257; row <= 512; ++row) {
        lo = std::min(lo, g.value(row, kb));
        hi = std::max(hi, g.value(row, ka));
    }
    const int steps = 600;
    double dl = (hi - lo) / steps;
    double a1 = g.x_of(ka + 1), a2 = g.x_of(kb);
    double acc = 0.0;
    for (int i = 0; i < steps; ++i) {
        double level = lo + (i + 0.5) * dl;
        acc += level_occupation(level_curve(g, level), a1, a2, 1.0, 2.0).value();
    }
    double quad = acc * dl;
    CHECK(std::fabs(quad - z.value()) <= 0.15 * z.value());
}

TEST_CASE("constant profiles mark no boxes; a lone bump marks exactly one") {
    DifferenceGrid g = small_grid(4);
    std::fill(g.storage().begin(), g.storage().end(), 5.0);
    CHECK(nonconstant_mask_2d(g, 0.25, 0.0).count() == 0);
    CHECK(temporal_nonconstant_mask(g, 0.25, 0.0).count() == 0);

    long long row = 70, k = 0;
    g.storage()[g.idx(row, k)] += 1.0;
    double tau = g.scale * 0.5;
    BoxMask m2 = nonconstant_mask_2d(g, 0.25, tau);
    CHECK(m2.count() == 1);
    BoxMask mt = temporal_nonconstant_mask(g, 0.25, tau);
    CHECK(mt.count() == 1);

    // A bump off the diagonal column is invisible to the temporal mask.
    std::fill(g.storage().begin(), g.storage().end(), 5.0);
    g.storage()[g.idx(row, 7)] += 1.0;
    CHECK(temporal_nonconstant_mask(g, 0.25, tau).count() == 0);
    CHECK(nonconstant_mask_2d(g, 0.25, tau).count() == 1);
}

TEST_CASE("refining aligned boxes only sharpens the nonconstant mask") {
    DifferenceGrid g = difference_grid(Env{85, 0}, 512, 1.0, 2.0, 0.25);
    const double tau = 0.15;

    BoxMask parent = nonconstant_mask_2d(g, 0.125, tau);
    BoxMask child = nonconstant_mask_2d(g, 0.0625, tau);
    REQUIRE(child.box_rows * 2 == parent.box_rows);
    REQUIRE(child.box_cols * 2 == parent.box_cols);
    REQUIRE(parent.count() >= 1);
    for (long long bi = 0; bi < child.nrows; ++bi)
        for (long long bj = 0; bj < child.ncols; ++bj)
            if (child.marked[std::size_t(bi * child.ncols + bj)])
                CHECK(parent.marked[std::size_t((bi / 2) * parent.ncols + bj / 2)] == 1);

    BoxMask tp = temporal_nonconstant_mask(g, 0.125, tau);
    BoxMask tc = temporal_nonconstant_mask(g, 0.0625, tau);
    REQUIRE(tc.box_rows * 2 == tp.box_rows);
    for (long long bi = 0; bi < tc.nrows; ++bi)
        if (tc.marked[std::size_t(bi)]) CHECK(tp.marked[std::size_t(bi / 2)] == 1);

    // The diagonal-column mask can only mark boxes the planar mask marks.
    BoxMask p2 = nonconstant_mask_2d(g, 0.125, tau);
    long long bj0 = g.w / p2.box_cols;
    for (long long bi = 0; bi < tp.nrows; ++bi)
        if (tp.marked[std::size_t(bi)])
            CHECK(p2.marked[std::size_t(bi * p2.ncols + bj0)] == 1);
}

TEST_CASE("difference profiles flatten as time grows") {
    const int reps = 60;
    long long first = 0, late = 0;
    for (int r = 0; r < reps; ++r) {
        DifferenceGrid g = difference_grid(Env{86, std::uint64_t(r)}, 128, 1.0, 9.0, 0.25);
        BoxMask m = temporal_nonconstant_mask(g, 1.0, 0.1);
        REQUIRE(m.nrows >= 9);
        first += m.marked[0];
        late += m.marked[7];
    }
    CHECK(first >= late);
    CHECK(first >= reps / 2);
    CHECK(late <= (3 * reps) / 4);
}

TEST_CASE("unit-window mass concentrates near its expected constant") {
    Config cfg;
    cfg.experiment = "zeta-mean";
    cfg.replicas = 120;
    cfg.master_seed = 87;
    cfg.n_list = {256};
    std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "lpplab-test-zeta-mean";
    std::filesystem::remove_all(dir);
    RunSummary s = run_experiment(cfg, 0, dir.string());
    CHECK(!s.failed);
    CHECK(s.ok == s.units);

    std::ifstream f(dir / "fits.json");
    REQUIRE(f.good());
    nlohmann::json fits = nlohmann::json::parse(f);
    REQUIRE(fits.is_array());
    REQUIRE(!fits.empty());
    double mean = fits[0]["mean"].get<double>();
    double target = 4.0 * std::log(2.0);
    CHECK(std::fabs(mean / target - 1.0) <= 0.15);
    std::filesystem::remove_all(dir);
}
