#include "lpplab/lpp.hpp"

#include <algorithm>
#include <cmath>

namespace lpplab {

namespace {

struct PointBase {
    long long px, py;
    double operator()(long long x, long long y) const {
        return (x == px && y == py) ? 0.0 : kNegInf;
    }
};

} // namespace

double passage_time(const Env& env, Point p, Point q, long long budget) {
    if (!leq(p, q)) return kNegInf;
    WeightStream ws(env);
    double out = kNegInf;
    std::vector<double> buf;
    detail::forward_sweep(
        ws, p.y, q.y, p.x, [&](long long) { return q.x; }, PointBase{p.x, p.y},
        [&](long long y, long long, long long, const double* row) {
            if (y == q.y) out = row[q.x - p.x];
        },
        budget, buf);
    return out;
}

PassageProfile profile_from_point(const Env& env, Point p, Line line, long long lo, long long hi,
                                  long long budget) {
    if (hi < lo) throw Error("profile_from_point: empty index range");
    PassageProfile out;
    out.line = line;
    out.lo = lo;
    out.hi = hi;
    out.values.assign(static_cast<std::size_t>(hi - lo + 1), kNegInf);
    WeightStream ws(env);
    std::vector<double> buf;
    if (line.kind == Line::Row) {
        long long r = line.n;
        if (r < p.y || hi < p.x) return out; // nothing reachable
        detail::forward_sweep(
            ws, p.y, r, p.x, [&](long long) { return hi; }, PointBase{p.x, p.y},
            [&](long long y, long long xlo, long long xhi, const double* row) {
                if (y != r) return;
                for (long long x = std::max(lo, xlo); x <= xhi; ++x)
                    out.values[static_cast<std::size_t>(x - lo)] = row[x - xlo];
            },
            budget, buf);
        return out;
    }
    long long dd = 2 * line.n;
    if (dd < dsum(p)) return out;
    std::vector<double> vals =
        forward_to_antidiagonal(env, p, dd, std::max(lo, p.x), std::min(hi, dd - p.y), budget);
    long long vlo = std::max(lo, p.x);
    for (std::size_t i = 0; i < vals.size(); ++i)
        out.values[static_cast<std::size_t>(vlo + static_cast<long long>(i) - lo)] = vals[i];
    return out;
}

std::vector<double> backward_profile_to_row(const Env& env, Point q, long long row,
                                            long long lo, long long hi, long long budget) {
    if (hi < lo) return {};
    if (row > q.y) throw OrderViolation("source row above the target point");
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1), kNegInf);
    // Reflect u = q - v; sources (m, row) map to (q.x - m, q.y - row).
    detail::ReflectedWeights rw(env, q);
    long long r = q.y - row;
    long long uxlo = q.x - hi, uxhi = q.x - lo;
    if (uxhi < 0) return out; // whole window lies right of the target
    std::vector<double> buf;
    detail::forward_sweep(
        rw, 0, r, 0, [&](long long) { return uxhi; }, PointBase{0, 0},
        [&](long long y, long long sxlo, long long sxhi, const double* rowv) {
            if (y != r) return;
            for (long long ux = std::max(uxlo, sxlo); ux <= sxhi; ++ux)
                out[static_cast<std::size_t>(q.x - ux - lo)] = rowv[ux - sxlo];
        },
        budget, buf);
    return out;
}

std::vector<double> forward_to_antidiagonal(const Env& env, Point p, long long dd, long long xlo,
                                            long long xhi, long long budget) {
    if (xhi < xlo) return {};
    if (dd < dsum(p)) throw OrderViolation("anti-diagonal below the source point");
    std::vector<double> out(static_cast<std::size_t>(xhi - xlo + 1), kNegInf);
    WeightStream ws(env);
    std::vector<double> buf;
    long long ytop = dd - std::max(xlo, p.x);
    detail::forward_sweep(
        ws, p.y, ytop, p.x,
        [&](long long y) { return std::min(xhi, dd - y); }, // never above the anti-diagonal
        PointBase{p.x, p.y},
        [&](long long y, long long sxlo, long long sxhi, const double* row) {
            long long x = dd - y;
            if (x >= std::max(xlo, sxlo) && x <= std::min(xhi, sxhi))
                out[static_cast<std::size_t>(x - xlo)] = row[x - sxlo];
        },
        budget, buf);
    return out;
}

std::vector<double> backward_to_antidiagonal(const Env& env, Point q, long long dd, long long xlo,
                                             long long xhi, long long budget) {
    if (xhi < xlo) return {};
    if (dd > dsum(q)) throw OrderViolation("anti-diagonal above the target point");
    // Reflect u = q - v; v on {d = dd} maps to u on {d(u) = d(q) - dd}.
    detail::ReflectedWeights rw(env, q);
    long long rdd = dsum(q) - dd;
    long long uxlo = q.x - xhi, uxhi = q.x - xlo;
    std::vector<double> out(static_cast<std::size_t>(xhi - xlo + 1), kNegInf);
    std::vector<double> buf;
    long long ytop = rdd - std::max(uxlo, 0LL);
    detail::forward_sweep(
        rw, 0, ytop, 0, [&](long long y) { return std::min(uxhi, rdd - y); }, PointBase{0, 0},
        [&](long long y, long long sxlo, long long sxhi, const double* row) {
            long long ux = rdd - y;
            if (ux >= std::max(uxlo, sxlo) && ux <= std::min(uxhi, sxhi))
                out[static_cast<std::size_t>(q.x - ux - xlo)] = row[ux - sxlo];
        },
        budget, buf);
    return out;
}

PassageProfile profile_from_boundary(const Env& env, const BoundaryData& b, Line line,
                                     long long lo, long long hi, long long budget) {
    if (hi < lo) throw Error("profile_from_boundary: empty index range");
    if (b.hi < b.lo) throw Error("profile_from_boundary: empty boundary");
    for (double v : b.values)
        if (v > -kExactBound && v < kExactBound) {
            if (std::llround(v * kInvWeightQuantum) * kWeightQuantum != v && v != kNegInf)
                throw Error("boundary value off the weight grid");
        } else if (v != kNegInf) {
            throw Error("boundary value outside exact-sum range");
        }

    // Injection happens at source + (0,1): one row above a Row boundary, or
    // on the shifted anti-diagonal {d = 2n + 1}.
    long long y_first; // first swept row
    if (b.line.kind == Line::Row) {
        y_first = b.line.n + 1;
    } else {
        y_first = 2 * b.line.n - b.hi + 1;
    }
    long long blo = b.lo, bhi = b.hi;
    const double* bv = b.values.data();
    auto base = [&](long long x, long long y) -> double {
        if (b.line.kind == Line::Row) {
            if (y != y_first || x < blo || x > bhi) return kNegInf;
        } else {
            if (x + y != 2 * b.line.n + 1 || x < blo || x > bhi) return kNegInf;
        }
        return bv[x - blo];
    };

    PassageProfile out;
    out.line = line;
    out.lo = lo;
    out.hi = hi;
    out.values.assign(static_cast<std::size_t>(hi - lo + 1), kNegInf);
    WeightStream ws(env);
    std::vector<double> buf;
    if (line.kind == Line::Row) {
        long long r = line.n;
        if (b.line.kind == Line::Row && r <= b.line.n)
            throw OrderViolation("target row not above the boundary row");
        if (b.line.kind == Line::Antidiagonal && r <= 2 * b.line.n - bhi)
            throw OrderViolation("target row not above the boundary line");
        detail::forward_sweep(
            ws, y_first, r, blo, [&](long long) { return hi; }, base,
            [&](long long y, long long xlo, long long xhi, const double* row) {
                if (y != r) return;
                for (long long x = std::max(lo, xlo); x <= xhi; ++x)
                    out.values[static_cast<std::size_t>(x - lo)] = row[x - xlo];
            },
            budget, buf);
        return out;
    }
    long long dd = 2 * line.n;
    long long dfirst = (b.line.kind == Line::Row) ? b.line.n + 1 + blo : 2 * b.line.n + 1;
    if (dd < dfirst) throw OrderViolation("target anti-diagonal not above the boundary");
    long long ytop = dd - std::max(lo, blo);
    detail::forward_sweep(
        ws, y_first, ytop, blo, [&](long long y) { return std::min(hi, dd - y); }, base,
        [&](long long y, long long sxlo, long long sxhi, const double* row) {
            long long x = dd - y;
            if (x >= std::max(lo, sxlo) && x <= std::min(hi, sxhi))
                out.values[static_cast<std::size_t>(x - lo)] = row[x - sxlo];
        },
        budget, buf);
    return out;
}

double centered_passage(const Env& env, Point p, Point q, long long budget) {
    double t = passage_time(env, p, q, budget);
    if (t == kNegInf) return kNegInf;
    return t - 2.0 * static_cast<double>(dsum(q) - dsum(p)) - weight_at(env, p);
}

Point round_plane(double x, double y) {
    bool xi = (x == std::floor(x)), yi = (y == std::floor(y));
    if (xi && yi) return {static_cast<long long>(x), static_cast<long long>(y)};
    if (!xi && yi) return {static_cast<long long>(std::floor(x)), static_cast<long long>(y)};
    if (xi && !yi) return {static_cast<long long>(x), static_cast<long long>(std::floor(y))};
    return {static_cast<long long>(std::ceil(x)), static_cast<long long>(std::floor(y))};
}

double transversal_unit(long long n) {
    return std::pow(2.0, 5.0 / 3.0) * std::pow(static_cast<double>(n), 2.0 / 3.0);
}

double value_scale(long long n) {
    return std::pow(2.0, -4.0 / 3.0) * std::pow(static_cast<double>(n), -1.0 / 3.0);
}

double scaled_passage(const Env& env, long long n, double x, double s, double y, double t,
                      long long budget) {
    double u = transversal_unit(n);
    double px = static_cast<double>(n) * s + u * x;
    double py = static_cast<double>(n) * s;
    double qx = static_cast<double>(n) * t + u * y;
    double qy = static_cast<double>(n) * t;
    Point lower{static_cast<long long>(std::ceil(px)), static_cast<long long>(std::ceil(py))};
    Point upper = round_plane(qx, qy);
    Point lower_r = round_plane(px, py);
    double f = passage_time(env, lower, upper, budget);
    if (f != kNegInf) {
        f -= 2.0 * static_cast<double>(dsum(upper) - dsum(lower_r));
        if (px == std::floor(px) && py == std::floor(py))
            f -= weight_at(env, Point{static_cast<long long>(px), static_cast<long long>(py)});
    }
    return value_scale(n) * f;
}

ScaledPoint rescale_point(long long n, Point p) {
    return {static_cast<double>(p.x - p.y) / transversal_unit(n),
            static_cast<double>(p.y) / static_cast<double>(n)};
}

} // namespace lpplab
