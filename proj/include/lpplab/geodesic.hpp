#pragma once

#include "lpplab/common.hpp"
#include "lpplab/env.hpp"
#include "lpplab/lpp.hpp"

#include <vector>

namespace lpplab {

// An up-right lattice path; vertices are consecutive (+1,0)/(0,+1) steps.
// weight is the sum of vertex weights accumulated start to end, which for a
// geodesic equals passage_time(start, end) bit-exactly.
struct GeodesicPath {
    std::vector<Point> vertices;
    double weight = 0.0;
    const Point& start() const { return vertices.front(); }
    const Point& end() const { return vertices.back(); }
    // Unique vertex with d(v) = dd (paths hit each anti-diagonal once).
    Point at_dsum(long long dd) const {
        return vertices[static_cast<std::size_t>(dd - dsum(vertices.front()))];
    }
};

// The almost-surely unique maximizing path from p to q.  Ties (absent with
// continuous weights) resolve toward the vertical predecessor when walking
// back from q.
GeodesicPath geodesic(const Env& env, Point p, Point q, long long budget = kDefaultCellBudget);

// Truncated approximation to the semi-infinite (1,1)-directed geodesic from
// p: the prefix up to the anti-diagonal L_H, certified by target doubling.
struct SemiInfiniteApprox {
    GeodesicPath prefix; // vertices with d(v) <= 2H
    long long target_n = 0;  // accepted at targets (target_n, target_n) and twice that
    bool stabilized = false;
};

// Computes geodesics from p to (N,N) and (2N,2N) for N = 4H, doubling N
// until both agree on {d <= 2H}; throws NoStabilization once the next pair
// would need a target beyond budget_n_max.
SemiInfiniteApprox semi_infinite(const Env& env, Point p, long long H, long long budget_n_max,
                                 long long cell_budget = kDefaultCellBudget);

// Leftmost vertex of the path on the given line; OutOfSpan if the path
// misses it.
Point crossing(const GeodesicPath& path, Line line);

// Heights y at which the path touches the thickened diagonal |x - y| <=
// tol_cells, ascending.
std::vector<long long> zero_set(const GeodesicPath& path, long long tol_cells);

namespace detail {

// Rightmost maximizer of T_p(v) + S_q(v) - w(v) over the anti-diagonal
// {d = dd}: the vertex where the p->q geodesic crosses it.  Exposed for the
// semi-infinite machinery.
Point split_vertex(const Env& env, Point p, Point q, long long dd, long long budget);

} // namespace detail

} // namespace lpplab
