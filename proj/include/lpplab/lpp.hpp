#pragma once

#include "lpplab/common.hpp"
#include "lpplab/env.hpp"

#include <cstdint>
#include <vector>

namespace lpplab {

inline constexpr long long kDefaultCellBudget = 2'000'000'000LL;

// Passage values T_{source, v} for v along a line, indexed by the vertex
// x-coordinate.  values[i] corresponds to index lo + i; unreachable vertices
// hold -inf.
struct PassageProfile {
    Line line;
    long long lo = 0, hi = -1;
    std::vector<double> values;
    Point vertex(long long idx) const {
        return line.kind == Line::Row ? Point{idx, line.n} : Point{idx, 2 * line.n - idx};
    }
    double at(long long idx) const { return values[static_cast<std::size_t>(idx - lo)]; }
};

// Boundary condition along a line: value b(m) at the vertex with
// x-coordinate m.  Paths start at source + (0,1); the boundary value
// replaces the passage weight accumulated at the source itself.
struct BoundaryData {
    Line line;
    long long lo = 0, hi = -1;
    std::vector<double> values;
    Point vertex(long long idx) const {
        return line.kind == Line::Row ? Point{idx, line.n} : Point{idx, 2 * line.n - idx};
    }
    double at(long long idx) const { return values[static_cast<std::size_t>(idx - lo)]; }
};

namespace detail {

// Forward dynamic-programming sweep.
//
//   T(x, y) = w(x, y) + max( T(x-1, y), T(x, y-1), base(x, y) )
//
// over rows y0..y1, row y spanning columns [xlo, hi(y)].  xlo is fixed;
// hi(y) may vary by row (cells never written read as -inf).  visit(y, lo,
// hi, row) is called after each row with row[x - xlo] = T(x, y).
//
// Every addition is exact on the weight grid as long as |T| < kExactBound,
// which is enforced cell by cell; see common.hpp.
template <class W, class Hi, class Base, class Visit>
void forward_sweep(W&& w, long long y0, long long y1, long long xlo, Hi&& hi_of, Base&& base,
                   Visit&& visit, long long budget, std::vector<double>& buf) {
    long long max_hi = xlo - 1;
    long long cells = 0;
    for (long long y = y0; y <= y1; ++y) {
        long long h = hi_of(y);
        if (h > max_hi) max_hi = h;
        if (h >= xlo) cells += h - xlo + 1;
    }
    if (cells > budget)
        throw BudgetExceeded("sweep needs " + std::to_string(cells) + " cells, budget " +
                             std::to_string(budget));
    buf.assign(static_cast<std::size_t>(max_hi - xlo + 1), kNegInf);
    for (long long y = y0; y <= y1; ++y) {
        long long hi = hi_of(y);
        if (hi < xlo) continue;
        double carry = kNegInf;
        double* row = buf.data();
        for (long long x = xlo; x <= hi; ++x) {
            double below = row[x - xlo];
            double cand = carry > below ? carry : below;
            double b0 = base(x, y);
            if (b0 > cand) cand = b0;
            double v;
            if (cand == kNegInf) {
                v = kNegInf;
            } else {
                v = w(x, y) + cand;
                if (v >= kExactBound)
                    throw Error("passage value exceeds exact-sum bound; reduce scale");
            }
            row[x - xlo] = v;
            carry = v;
        }
        visit(y, xlo, hi, row);
    }
}

struct NoBase {
    double operator()(long long, long long) const { return kNegInf; }
};

// Weight field reflected about q: paths v -> q map to origin-rooted paths
// in the reflected field, which turns backward profiles into forward ones.
struct ReflectedWeights {
    WeightStream ws;
    long long qx, qy;
    ReflectedWeights(const Env& env, Point q) : ws(env), qx(q.x), qy(q.y) {}
    double operator()(long long x, long long y) const { return ws(qx - x, qy - y); }
};

} // namespace detail

// Last-passage time between lattice points, both endpoints' weights
// included; -inf when p and q are incomparable.
double passage_time(const Env& env, Point p, Point q, long long budget = kDefaultCellBudget);

// T_{p, .} along Row r or the anti-diagonal L_n, for indices in [lo, hi].
PassageProfile profile_from_point(const Env& env, Point p, Line line, long long lo, long long hi,
                                  long long budget = kDefaultCellBudget);

// sup over sources m of b(m) + T_{source(m)+(0,1), target}, i.e. passage
// values seeded by a boundary condition instead of a point.  The target
// line must lie strictly above the boundary line.
PassageProfile profile_from_boundary(const Env& env, const BoundaryData& b, Line line,
                                     long long lo, long long hi,
                                     long long budget = kDefaultCellBudget);

// S(v) = T_{v, q} for v on the anti-diagonal {d(v) = dsum}, indexed by x in
// [xlo, xhi] (internal building block for geodesics and semi-infinite
// approximations).
std::vector<double> backward_to_antidiagonal(const Env& env, Point q, long long dsum,
                                             long long xlo, long long xhi,
                                             long long budget = kDefaultCellBudget);

// T_{(m, row), q} for m in [lo, hi]: passage values INTO a fixed target
// from sources along a row at or below it (computed in the reflected
// field, one sweep for the whole window).
std::vector<double> backward_profile_to_row(const Env& env, Point q, long long row,
                                            long long lo, long long hi,
                                            long long budget = kDefaultCellBudget);

// T_{p, .} on the anti-diagonal {d(v) = dsum} for arbitrary (not
// necessarily even) dsum, indexed by x in [xlo, xhi].
std::vector<double> forward_to_antidiagonal(const Env& env, Point p, long long dsum,
                                            long long xlo, long long xhi,
                                            long long budget = kDefaultCellBudget);

// Centered point-to-point statistic F(p; q) = T_{p,q} - 2 d(q-p) - w_p.
double centered_passage(const Env& env, Point p, Point q, long long budget = kDefaultCellBudget);

// Rounding map for real plane points: identity on lattice points,
// (floor x, y) if only y is integral, (x, floor y) if only x is integral,
// (ceil x, floor y) otherwise.
Point round_plane(double x, double y);

// Scaled passage K_n(x, s; y, t): centered, rescaled passage between the
// plane points mapped from scaled space-time coordinates.
double scaled_passage(const Env& env, long long n, double x, double s, double y, double t,
                      long long budget = kDefaultCellBudget);

// R_n: lattice point -> (scaled transversal coordinate, scaled time).
struct ScaledPoint {
    double x, t;
};
ScaledPoint rescale_point(long long n, Point p);

// 2^{5/3} n^{2/3}: one unit of scaled transversal distance in lattice cells.
double transversal_unit(long long n);
// 2^{-4/3} n^{-1/3}: scaling applied to centered passage values.
double value_scale(long long n);

} // namespace lpplab
