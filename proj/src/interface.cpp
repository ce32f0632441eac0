#include "lpplab/interface.hpp"

#include <algorithm>
#include <cmath>

namespace lpplab {

Point DualPath::crossing_row(long long k) const {
    std::size_t lo = 0, hi = vertices.size();
    if (k < vertices.front().y || k > vertices.back().y)
        throw OutOfSpan("interface does not reach the row");
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (vertices[mid].y < k)
            lo = mid + 1;
        else
            hi = mid;
    }
    return vertices[lo];
}

DualPath competition_interface(const Env& env, const BoundaryData& boundary, long long n_max,
                               double H, long long budget) {
    if (boundary.line.kind != Line::Row || boundary.line.n != 0)
        throw Error("interface boundary must live on Row 0");
    long long m_half = static_cast<long long>(
        std::ceil(H * transversal_unit(n_max)));
    if (boundary.lo > -m_half || boundary.hi < m_half)
        throw WindowClipped("boundary does not cover the source window");

    long long rows = n_max + 1;
    long long xlo = -m_half;
    long long xhi_top = rows + m_half + 1;
    long long cells = 0;
    for (long long y = 1; y <= rows; ++y) cells += (y + m_half + 1) - xlo + 1;
    if (2 * cells > budget) throw BudgetExceeded("interface sweep exceeds cell budget");

    // Two boundary-seeded sweeps run in lockstep: sources m in [-m_half, 0]
    // versus m in [1, m_half].  The sign change per row is located during
    // the sweep so only O(width) state is kept.
    WeightStream ws(env);
    std::vector<double> left(static_cast<std::size_t>(xhi_top - xlo + 1), kNegInf);
    std::vector<double> right(left.size(), kNegInf);
    std::vector<long long> threshold(static_cast<std::size_t>(rows), 0);

    const double* bv = boundary.values.data();
    long long blo = boundary.lo;
    for (long long y = 1; y <= rows; ++y) {
        long long hi = y + m_half + 1;
        double lcarry = kNegInf, rcarry = kNegInf;
        long long thr = -1;
        for (long long x = xlo; x <= hi; ++x) {
            std::size_t i = static_cast<std::size_t>(x - xlo);
            double lcand = lcarry > left[i] ? lcarry : left[i];
            double rcand = rcarry > right[i] ? rcarry : right[i];
            if (y == 1 && x >= -m_half && x <= m_half) {
                double b = bv[x - blo];
                if (x <= 0) {
                    if (b > lcand) lcand = b;
                } else {
                    if (b > rcand) rcand = b;
                }
            }
            double w = (lcand == kNegInf && rcand == kNegInf) ? 0.0 : ws(x, y);
            double lv = lcand == kNegInf ? kNegInf : w + lcand;
            double rv = rcand == kNegInf ? kNegInf : w + rcand;
            if (lv >= kExactBound || rv >= kExactBound)
                throw Error("passage value exceeds exact-sum bound");
            left[i] = lv;
            right[i] = rv;
            lcarry = lv;
            rcarry = rv;
            if (x >= 0) {
                // left sup minus right sup is non-increasing in x: find the
                // first strictly negative column, verify no resurgence.
                if (rv > lv) {
                    if (thr < 0) thr = x;
                } else if (thr >= 0) {
                    throw Error("interface sign change is not monotone");
                }
                if (lv == rv && lv != kNegInf) throw TieDetected("left and right sups tie");
            }
        }
        if (thr < 0) throw WindowClipped("interface escaped the scanned window");
        if (thr == 0) throw Error("right cluster claims column 0"); // x=0 is always left's
        threshold[static_cast<std::size_t>(y - 1)] = thr;
        if (y > 1 && thr < threshold[static_cast<std::size_t>(y - 2)])
            throw Error("interface threshold decreased between rows");
    }

    DualPath dual;
    dual.threshold = threshold;
    // Row 0 of the interface: x = 0 .. threshold(1)-1; Row y: x =
    // threshold(y)-1 .. threshold(y+1)-1.
    for (long long x = 0; x <= threshold[0] - 1; ++x) dual.vertices.push_back({x, 0});
    for (long long y = 1; y <= n_max; ++y) {
        long long a = threshold[static_cast<std::size_t>(y - 1)] - 1;
        long long b = threshold[static_cast<std::size_t>(y)] - 1;
        for (long long x = a; x <= b; ++x) dual.vertices.push_back({x, y});
    }
    return dual;
}

long long best_source_index(const Env& env, const BoundaryData& boundary, long long M, Point p,
                            long long budget) {
    if (boundary.lo > -M || boundary.hi < M) throw WindowClipped("boundary narrower than M");
    double best = kNegInf;
    long long best_m = 0;
    bool tie = false;
    for (long long m = -M; m <= M; ++m) {
        if (m > p.x || boundary.at(m) == kNegInf) continue;
        double t = passage_time(env, Point{m, 1}, p, budget);
        if (t == kNegInf) continue;
        double v = boundary.at(m) + t;
        if (v == best) tie = true;
        if (v > best) {
            best = v;
            best_m = m;
            tie = false;
        }
    }
    if (best == kNegInf) throw OutOfSpan("no admissible source for point");
    if (tie) throw TieDetected("two sources tie exactly");
    return best_m;
}

} // namespace lpplab
