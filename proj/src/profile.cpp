#include "lpplab/profile.hpp"

#include <algorithm>
#include <cmath>

namespace lpplab {

long long DifferenceGrid::col_of(double x) const {
    long long k = std::llround(x * transversal_unit(n));
    if (k < -w || k > w) throw WindowClipped("scaled coordinate outside the grid window");
    return k;
}

DifferenceGrid difference_grid(const Env& env, long long n, double t_lo, double t_hi,
                               double x_halfwidth, long long budget) {
    if (n < 2 || t_hi <= t_lo || x_halfwidth <= 0) throw Error("bad difference grid parameters");
    DifferenceGrid g;
    g.n = n;
    g.u = static_cast<long long>(std::ceil(transversal_unit(n)));
    g.w = static_cast<long long>(std::ceil(transversal_unit(n) * x_halfwidth));
    g.r_lo = static_cast<long long>(std::ceil(static_cast<double>(n) * t_lo));
    g.r_hi = static_cast<long long>(std::ceil(static_cast<double>(n) * t_hi));
    g.scale = value_scale(n);
    if (g.r_lo - g.w < g.u)
        throw WindowClipped("window touches rows unreachable from the right source");
    Point a{-g.u, 0}, b{g.u, 0};
    g.center = 4.0 * static_cast<double>(g.u) + weight_at(env, a) - weight_at(env, b);

    g.storage().assign(static_cast<std::size_t>(g.rows() * g.cols()), 0.0);
    WeightStream ws(env);
    std::vector<double> buf;
    long long top_hi = g.r_hi + g.w;
    auto span = [&](long long) { return top_hi; };
    long long cells_one = (g.r_hi + 1) * (top_hi + g.u + 1);
    if (2 * cells_one > budget) throw BudgetExceeded("difference grid exceeds cell budget");

    auto capture = [&](double sign) {
        return [&g, sign](long long y, long long xlo, long long xhi, const double* row) {
            if (y < g.r_lo || y > g.r_hi) return;
            long long klo = std::max(-g.w, xlo - y), khi = std::min(g.w, xhi - y);
            double* out = &g.storage()[g.idx(y, 0)];
            for (long long k = klo; k <= khi; ++k) {
                double v = row[y + k - xlo];
                if (v == kNegInf) throw WindowClipped("window cell unreachable from a source");
                if (sign > 0)
                    out[k] = v;
                else
                    out[k] -= v; // exact: difference of grid values
            }
        };
    };
    struct PB {
        long long px, py;
        double operator()(long long x, long long y) const {
            return (x == px && y == py) ? 0.0 : kNegInf;
        }
    };
    detail::forward_sweep(ws, 0, g.r_hi, a.x, span, PB{a.x, a.y}, capture(+1.0), budget, buf);
    detail::forward_sweep(ws, 0, g.r_hi, b.x, span, PB{b.x, b.y}, capture(-1.0), budget, buf);
    return g;
}

LevelCurve level_curve(const DifferenceGrid& grid, double level) {
    LevelCurve c;
    c.n = grid.n;
    c.r_lo = grid.r_lo;
    c.r_hi = grid.r_hi;
    c.level = level;
    c.position.resize(static_cast<std::size_t>(grid.rows()));
    c.clipped.assign(static_cast<std::size_t>(grid.rows()), 0);
    for (long long r = grid.r_lo; r <= grid.r_hi; ++r) {
        std::size_t i = static_cast<std::size_t>(r - grid.r_lo);
        // rows are non-increasing in k: binary search the first k <= level
        long long lo = -grid.w, hi = grid.w + 1;
        while (lo < hi) {
            long long mid = lo + (hi - lo) / 2;
            if (grid.value(r, mid) <= level)
                hi = mid;
            else
                lo = mid + 1;
        }
        if (lo > grid.w) {
            c.clipped[i] = +1; // level not reached inside the window
        } else {
            c.position[i] = lo;
            if (lo == -grid.w) c.clipped[i] = -1;
        }
    }
    return c;
}

long long BoxMask::count() const {
    long long s = 0;
    for (std::uint8_t m : marked) s += m;
    return s;
}

BoxMask nonconstant_mask_2d(const DifferenceGrid& grid, double delta, double tau) {
    BoxMask m;
    m.box_rows = static_cast<long long>(std::ceil(static_cast<double>(grid.n) * delta));
    m.box_cols = static_cast<long long>(std::ceil(transversal_unit(grid.n) * delta));
    m.nrows = (grid.rows() + m.box_rows - 1) / m.box_rows;
    m.ncols = (grid.cols() + m.box_cols - 1) / m.box_cols;
    m.marked.assign(static_cast<std::size_t>(m.nrows * m.ncols), 0);
    for (long long bi = 0; bi < m.nrows; ++bi) {
        long long r0 = grid.r_lo + bi * m.box_rows;
        long long r1 = std::min(grid.r_hi, r0 + m.box_rows - 1);
        for (long long bj = 0; bj < m.ncols; ++bj) {
            long long k0 = -grid.w + bj * m.box_cols;
            long long k1 = std::min(grid.w, k0 + m.box_cols - 1);
            double mx = kNegInf, mn = -kNegInf;
            for (long long r = r0; r <= r1; ++r)
                for (long long k = k0; k <= k1; ++k) {
                    double v = grid.raw(r, k);
                    mx = std::max(mx, v);
                    mn = std::min(mn, v);
                }
            if (grid.scale * (mx - mn) > tau)
                m.marked[static_cast<std::size_t>(bi * m.ncols + bj)] = 1;
        }
    }
    return m;
}

BoxMask temporal_nonconstant_mask(const DifferenceGrid& grid, double delta, double tau) {
    BoxMask m;
    m.box_rows = static_cast<long long>(std::ceil(static_cast<double>(grid.n) * delta));
    m.box_cols = 1;
    m.nrows = (grid.rows() + m.box_rows - 1) / m.box_rows;
    m.ncols = 1;
    m.marked.assign(static_cast<std::size_t>(m.nrows), 0);
    for (long long bi = 0; bi < m.nrows; ++bi) {
        long long r0 = grid.r_lo + bi * m.box_rows;
        long long r1 = std::min(grid.r_hi, r0 + m.box_rows - 1);
        double mx = kNegInf, mn = -kNegInf;
        for (long long r = r0; r <= r1; ++r) {
            double v = grid.raw(r, 0);
            mx = std::max(mx, v);
            mn = std::min(mn, v);
        }
        if (grid.scale * (mx - mn) > tau) m.marked[static_cast<std::size_t>(bi)] = 1;
    }
    return m;
}

double ZetaMass::value() const {
    return static_cast<double>(units) * kWeightQuantum * scale / static_cast<double>(n);
}

ZetaMass& ZetaMass::operator+=(const ZetaMass& o) {
    if (o.n != n || o.scale != scale) throw Error("zeta masses from different grids");
    units += o.units;
    return *this;
}

ZetaMass zeta_mass(const DifferenceGrid& grid, double a, double b, double g, double h) {
    if (b < a) throw Error("zeta interval reversed");
    long long ka = grid.col_of(a), kb = grid.col_of(b);
    long long r0 = static_cast<long long>(std::floor(static_cast<double>(grid.n) * g)) + 1;
    long long r1 = static_cast<long long>(std::floor(static_cast<double>(grid.n) * h));
    if (r0 < grid.r_lo || r1 > grid.r_hi) throw WindowClipped("time interval outside the grid");
    ZetaMass z;
    z.scale = grid.scale;
    z.n = grid.n;
    for (long long r = r0; r <= r1; ++r) {
        double d = grid.raw(r, ka) - grid.raw(r, kb); // exact grid difference
        if (d < 0) throw Error("difference profile increased along a row");
        z.units += static_cast<__int128>(std::llround(d * kInvWeightQuantum));
    }
    return z;
}

Occupation level_occupation(const LevelCurve& curve, double a1, double a2, double g, double h) {
    long long r0 = static_cast<long long>(std::floor(static_cast<double>(curve.n) * g)) + 1;
    long long r1 = static_cast<long long>(std::floor(static_cast<double>(curve.n) * h));
    if (r0 < curve.r_lo || r1 > curve.r_hi) throw WindowClipped("time interval outside the curve");
    double unit = transversal_unit(curve.n);
    Occupation occ;
    occ.n = curve.n;
    for (long long r = r0; r <= r1; ++r) {
        const std::optional<long long>& pos = curve.position[static_cast<std::size_t>(r - curve.r_lo)];
        if (!pos) continue;
        double x = static_cast<double>(*pos) / unit;
        if (x >= a1 && x <= a2) ++occ.count;
    }
    return occ;
}

} // namespace lpplab
