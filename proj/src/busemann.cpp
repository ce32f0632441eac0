#include "lpplab/busemann.hpp"

#include <algorithm>
#include <cmath>

namespace lpplab {

namespace {

// First common vertex of two prefixes, or absent.  Both paths hit each
// anti-diagonal exactly once, so scan by d-level.
bool first_common_vertex(const GeodesicPath& a, const GeodesicPath& b, Point& out) {
    long long lo = std::max(dsum(a.start()), dsum(b.start()));
    long long hi = std::min(dsum(a.end()), dsum(b.end()));
    for (long long dd = lo; dd <= hi; ++dd) {
        Point va = a.at_dsum(dd), vb = b.at_dsum(dd);
        if (va == vb) {
            out = va;
            return true;
        }
    }
    return false;
}

} // namespace

BusemannSample busemann(const Env& env, Point p, long long budget_n_max, long long cell_budget) {
    BusemannSample s;
    if (p == Point{0, 0}) return s;
    long long h = std::max<long long>({4, dsum(p) / 2 + 2, (std::llabs(p.x) + std::llabs(p.y))});
    for (; 8 * h <= budget_n_max; h *= 2) {
        SemiInfiniteApprox ap = semi_infinite(env, p, h, budget_n_max, cell_budget);
        SemiInfiniteApprox a0 = semi_infinite(env, Point{0, 0}, h, budget_n_max, cell_budget);
        Point c;
        if (first_common_vertex(ap.prefix, a0.prefix, c)) {
            s.value = passage_time(env, p, c, cell_budget) -
                      passage_time(env, Point{0, 0}, c, cell_budget);
            s.coalescence = c;
            s.target_used = 2 * std::max(ap.target_n, a0.target_n);
            return s;
        }
    }
    throw NoStabilization(budget_n_max);
}

ArgmaxCheck check_argmax_property(const Env& env, Point p, long long n, long long halfwidth,
                                  long long budget_n_max, long long cell_budget) {
    if (n <= p.y) throw OrderViolation("row must lie above p");
    long long center = p.x + (n - p.y);
    long long mlo = std::max(p.x, center - halfwidth);
    long long mhi = center + halfwidth;

    PassageProfile tp = profile_from_point(env, p, Line::row(n), mlo, mhi, cell_budget);

    // Depth for the stabilized prefix from p; it must certify the step OFF
    // Row n, so it reaches a margin past the expected crossing.
    long long margin = static_cast<long long>(
        std::ceil(4.0 * std::pow(static_cast<double>(n - p.y + 16), 2.0 / 3.0)));
    long long hp = std::max(dsum(p) / 2 + 2, (n + std::max(center, n) + margin) / 2 + 2);
    // Depth for the shared far vertex behind the Row n+1 limit values.
    Point pl{mlo, n + 1}, pr{mhi, n + 1};
    long long h = std::max<long long>({4, dsum(pr) / 2 + 2,
                                       std::llabs(pl.x) + std::llabs(pl.y),
                                       std::llabs(pr.x) + std::llabs(pr.y)});

    // All limit values along the candidate row share one far vertex c:
    // geodesics from the window extremes bracket every intermediate one, so
    // a vertex common to the extremes and to the origin geodesic is hit by
    // all of them and G(m) = T_{(m, n+1), c} - T_{0, c} across the row, with
    // G(p) = T_{p, c} - T_{0, c} for the same c.  The crossing of Row n
    // comes from an independently stabilized prefix from p; both depths
    // double until the two constructions agree, else the sample is censored.
    long long ap_depth = -1, row_depth = -1;
    Point cross{}, cvx{};
    bool cross_certified = false, have_row = false;
    double best = kNegInf, t0 = 0.0;
    long long best_m = mlo;
    for (;;) {
        if (ap_depth != hp) {
            SemiInfiniteApprox ap = semi_infinite(env, p, hp, budget_n_max, cell_budget);
            ap_depth = hp;
            cross = crossing(ap.prefix, Line::row(n));
            // The decomposition splits where the path steps OFF the row,
            // i.e. at its rightmost vertex on Row n.
            for (long long dd = dsum(cross) + 1; dd <= dsum(ap.prefix.end()); ++dd) {
                Point v = ap.prefix.at_dsum(dd);
                if (v.y != n) break;
                cross = v;
            }
            // If the prefix ends while still on the row, the step off it is
            // not certified at this depth.
            cross_certified = (cross != ap.prefix.end());
            if (cross_certified && (cross.x < mlo || cross.x > mhi))
                throw WindowClipped("geodesic crosses the row outside the window");
        }

        if (cross_certified && row_depth != h) {
            row_depth = h;
            have_row = false;
            SemiInfiniteApprox al = semi_infinite(env, pl, h, budget_n_max, cell_budget);
            SemiInfiniteApprox ar = semi_infinite(env, pr, h, budget_n_max, cell_budget);
            SemiInfiniteApprox a0 = semi_infinite(env, Point{0, 0}, h, budget_n_max, cell_budget);
            long long dlo = std::max({dsum(al.prefix.start()), dsum(ar.prefix.start()),
                                      dsum(a0.prefix.start())});
            long long dhi = std::min({dsum(al.prefix.end()), dsum(ar.prefix.end()),
                                      dsum(a0.prefix.end())});
            for (long long dd = dlo; dd <= dhi && !have_row; ++dd) {
                Point c = a0.prefix.at_dsum(dd);
                if (c != al.prefix.at_dsum(dd) || c != ar.prefix.at_dsum(dd)) continue;
                cvx = c;
                t0 = passage_time(env, Point{0, 0}, c, cell_budget);
                std::vector<double> tq =
                    backward_profile_to_row(env, c, n + 1, mlo, mhi, cell_budget);
                best = kNegInf;
                best_m = mlo;
                for (long long m = mlo; m <= mhi; ++m) {
                    double t = tp.at(m);
                    double tqm = tq[static_cast<std::size_t>(m - mlo)];
                    if (t == kNegInf || tqm == kNegInf) continue;
                    double v = t + (tqm - t0); // exact grid sums
                    if (v > best) {
                        best = v;
                        best_m = m;
                    }
                }
                if (best == kNegInf) throw DegenerateCounts("empty argmax window");
                // m = p.x is a legitimate extreme (straight-up start), not a
                // clipped one.
                if ((best_m == mlo && mlo != p.x) || best_m == mhi)
                    throw WindowClipped("argmax sits on the window edge");
                have_row = true;
            }
        }

        if (cross_certified && have_row && best_m == cross.x) {
            ArgmaxCheck out;
            out.argmax_m = best_m;
            out.crossing_m = cross.x;
            out.crossing_matches = true;
            double gp = passage_time(env, p, cvx, cell_budget) - t0;
            out.value_matches = (gp == best);
            return out;
        }

        // Deepen whichever side blocks: an uncertified crossing needs a
        // deeper prefix, a missing shared vertex a deeper row search, and a
        // disagreement between the two constructions may need either.
        bool need_hp = !cross_certified || have_row;
        bool need_h = cross_certified;
        bool grew = false;
        if (need_h && 8 * (2 * h) <= budget_n_max) {
            h *= 2;
            grew = true;
        }
        if (need_hp && 8 * (2 * hp) <= budget_n_max) {
            hp *= 2;
            grew = true;
        }
        if (!grew) throw NoStabilization(budget_n_max);
    }
}

BoundaryData sample_stationary_boundary(const Env& env, long long row, long long lo,
                                        long long hi) {
    if (hi < lo || lo > 0 || hi < 0)
        throw Error("boundary range must contain index 0");
    BoundaryData b;
    b.line = Line::row(row);
    b.lo = lo;
    b.hi = hi;
    b.values.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
    UniformStream us(env, "boundary");
    // value(m) - value(m-1) = -Exp(1/2), anchored at value(0) = 0; partial
    // sums stay on the weight grid and are exact.  Draws are indexed by
    // (m, row) so distinct rows carry independent boundaries.
    auto draw = [&us, row](long long m) {
        return quantize(-2.0 * std::log1p(-uniform_from_word(word_at(us.base, m, row))));
    };
    double v = 0.0;
    for (long long m = 1; m <= hi; ++m) {
        v -= draw(m);
        b.values[static_cast<std::size_t>(m - lo)] = v;
    }
    v = 0.0;
    for (long long m = 0; m > lo; --m) {
        v += draw(m);
        b.values[static_cast<std::size_t>(m - 1 - lo)] = v;
    }
    return b;
}

BoundaryData reflect_boundary(const BoundaryData& b) {
    BoundaryData r;
    r.line = b.line;
    r.lo = -b.hi;
    r.hi = -b.lo;
    r.values.assign(b.values.rbegin(), b.values.rend());
    return r;
}

} // namespace lpplab
