#include "lpplab/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace lpplab {

namespace {

constexpr long long kBacktrackCells = 1LL << 22; // full-table threshold (32 MB of doubles)

// Full-table fill and walk-back.  Ties prefer the vertical predecessor.
void geodesic_table(const WeightStream& ws, Point p, Point q, std::vector<Point>& out) {
    long long w = q.x - p.x + 1, h = q.y - p.y + 1;
    std::vector<double> t(static_cast<std::size_t>(w * h));
    for (long long y = 0; y < h; ++y) {
        double carry = kNegInf;
        double* row = t.data() + y * w;
        const double* below = row - w;
        for (long long x = 0; x < w; ++x) {
            double cand;
            if (x == 0 && y == 0)
                cand = 0.0;
            else if (y == 0)
                cand = carry;
            else if (x == 0)
                cand = below[x];
            else
                cand = carry > below[x] ? carry : below[x];
            double v = ws(p.x + x, p.y + y) + cand;
            if (v >= kExactBound) throw Error("passage value exceeds exact-sum bound");
            row[x] = v;
            carry = v;
        }
    }
    std::size_t first = out.size();
    long long x = w - 1, y = h - 1;
    while (x != 0 || y != 0) {
        out.push_back({p.x + x, p.y + y});
        if (y == 0) {
            --x;
        } else if (x == 0) {
            --y;
        } else if (t[static_cast<std::size_t>((y - 1) * w + x)] >=
                   t[static_cast<std::size_t>(y * w + x - 1)]) {
            --y; // vertical predecessor wins ties
        } else {
            --x;
        }
    }
    out.push_back(p);
    std::reverse(out.begin() + static_cast<std::ptrdiff_t>(first), out.end());
}

void geodesic_rec(const Env& env, const WeightStream& ws, Point p, Point q, long long budget,
                  std::vector<Point>& out) {
    long long w = q.x - p.x + 1, h = q.y - p.y + 1;
    if (w == 1 || h == 1) { // degenerate rectangle: one straight run
        for (long long y = p.y; y <= q.y; ++y)
            for (long long x = p.x; x <= q.x; ++x) out.push_back({x, y});
        return;
    }
    if (w * h <= kBacktrackCells) {
        if (w * h > budget) throw BudgetExceeded("geodesic cell budget exhausted");
        geodesic_table(ws, p, q, out);
        return;
    }
    long long dd = (dsum(p) + dsum(q)) / 2;
    Point v = detail::split_vertex(env, p, q, dd, budget);
    geodesic_rec(env, ws, p, v, budget, out);
    out.pop_back(); // v re-emitted by the upper half
    geodesic_rec(env, ws, v, q, budget, out);
}

} // namespace

namespace {

// Rightmost maximizer of T_p(v) + T_v(q) - w_v over v on {d = dd} with
// x in [xlo, xhi].
long long argmax_on_span(const Env& env, Point p, Point q, long long dd, long long xlo,
                         long long xhi, long long budget) {
    std::vector<double> fwd = forward_to_antidiagonal(env, p, dd, xlo, xhi, budget);
    std::vector<double> bwd = backward_to_antidiagonal(env, q, dd, xlo, xhi, budget);
    WeightStream ws(env);
    double best = kNegInf;
    long long bx = xlo;
    for (long long x = xlo; x <= xhi; ++x) {
        std::size_t i = static_cast<std::size_t>(x - xlo);
        if (fwd[i] == kNegInf || bwd[i] == kNegInf) continue;
        double v = fwd[i] + bwd[i] - ws(x, dd - x);
        if (v >= best) { // rightmost maximizer pairs with vertical tie preference
            best = v;
            bx = x;
        }
    }
    if (best == kNegInf) throw OrderViolation("no admissible path through split anti-diagonal");
    return bx;
}

// Split restricted to a centered window of the admissible span; the window
// doubles whenever the maximizer lands on a window edge that is not a span
// edge, so the returned vertex is an interior (or full-span) maximizer.
Point windowed_split(const Env& env, Point p, Point q, long long dd, long long halfwidth,
                     long long budget) {
    long long lo_full = std::max(p.x, dd - q.y);
    long long hi_full = std::min(q.x, dd - p.y);
    if (hi_full < lo_full) throw OrderViolation("split anti-diagonal misses the rectangle");
    long long center = std::clamp(p.x + (dd - dsum(p)) / 2, lo_full, hi_full);
    long long w = std::max<long long>(halfwidth, 8);
    for (;;) {
        long long xlo = std::max(lo_full, center - w);
        long long xhi = std::min(hi_full, center + w);
        long long bx = argmax_on_span(env, p, q, dd, xlo, xhi, budget);
        bool clip_lo = (bx == xlo && xlo != lo_full);
        bool clip_hi = (bx == xhi && xhi != hi_full);
        if (!clip_lo && !clip_hi) return {bx, dd - bx};
        w *= 2;
    }
}

} // namespace

namespace detail {

Point split_vertex(const Env& env, Point p, Point q, long long dd, long long budget) {
    long long xlo = std::max(p.x, dd - q.y);
    long long xhi = std::min(q.x, dd - p.y);
    if (xhi < xlo) throw OrderViolation("split anti-diagonal misses the rectangle");
    long long bx = argmax_on_span(env, p, q, dd, xlo, xhi, budget);
    return {bx, dd - bx};
}

} // namespace detail

GeodesicPath geodesic(const Env& env, Point p, Point q, long long budget) {
    if (!leq(p, q)) throw OrderViolation("geodesic endpoints are incomparable");
    WeightStream ws(env);
    GeodesicPath out;
    out.vertices.reserve(static_cast<std::size_t>(dsum(q) - dsum(p) + 1));
    geodesic_rec(env, ws, p, q, budget, out.vertices);
    double t = 0.0;
    for (const Point& v : out.vertices) t += ws(v.x, v.y); // exact grid sums
    out.weight = t;
    return out;
}

SemiInfiniteApprox semi_infinite(const Env& env, Point p, long long H, long long budget_n_max,
                                 long long cell_budget) {
    long long hd = 2 * H;
    if (dsum(p) > hd) throw OrderViolation("source beyond the requested anti-diagonal");
    if (dsum(p) == hd) {
        SemiInfiniteApprox a;
        a.prefix.vertices = {p};
        a.prefix.weight = weight_at(env, p);
        a.target_n = 0;
        a.stabilized = true;
        return a;
    }
    // Fluctuations of the crossing around the diagonal scale like the
    // two-thirds power of the distance travelled; a few of those units is a
    // generous initial window, and windowed_split widens it on demand.
    double span_len = static_cast<double>(hd - dsum(p)) / 2.0;
    long long w0 = static_cast<long long>(
        std::ceil(4.0 * std::pow(2.0, 5.0 / 3.0) * std::pow(std::max(span_len, 1.0), 2.0 / 3.0)));
    long long n = 4 * H;
    bool have_prev = false;
    Point prev{};
    long long last = 0;
    while (2 * n <= budget_n_max) {
        Point va = have_prev ? prev : windowed_split(env, p, {n, n}, hd, w0, cell_budget);
        Point vb = windowed_split(env, p, {2 * n, 2 * n}, hd, w0, cell_budget);
        last = 2 * n;
        if (va == vb) {
            SemiInfiniteApprox a;
            a.prefix = geodesic(env, p, va, cell_budget);
            a.target_n = n;
            a.stabilized = true;
            return a;
        }
        prev = vb;
        have_prev = true;
        n *= 2;
    }
    throw NoStabilization(last == 0 ? n : last);
}

Point crossing(const GeodesicPath& path, Line line) {
    const std::vector<Point>& v = path.vertices;
    if (v.empty()) throw OutOfSpan("empty path");
    if (line.kind == Line::Antidiagonal) {
        long long dd = 2 * line.n;
        if (dd < dsum(v.front()) || dd > dsum(v.back()))
            throw OutOfSpan("path does not reach the anti-diagonal");
        return path.at_dsum(dd);
    }
    long long r = line.n;
    if (r < v.front().y || r > v.back().y) throw OutOfSpan("path does not reach the row");
    // First vertex with y == r is the leftmost on that row.
    std::size_t lo = 0, hi = v.size();
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (v[mid].y < r)
            lo = mid + 1;
        else
            hi = mid;
    }
    return v[lo];
}

std::vector<long long> zero_set(const GeodesicPath& path, long long tol_cells) {
    std::vector<long long> out;
    for (const Point& v : path.vertices) {
        if (std::llabs(ad(v)) <= tol_cells && (out.empty() || out.back() != v.y))
            out.push_back(v.y);
    }
    return out;
}

} // namespace lpplab
