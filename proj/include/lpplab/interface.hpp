#pragma once

#include "lpplab/common.hpp"
#include "lpplab/env.hpp"
#include "lpplab/lpp.hpp"

#include <vector>

namespace lpplab {

// Boundary between the two competing clusters grown from a row boundary:
// vertices p with p+(1,0) claimed by the right cluster (best source index
// positive) and p+(0,1) by the left cluster.  An up-right path from (0,0).
struct DualPath {
    std::vector<Point> vertices;
    // threshold[y-1] = smallest x >= 0 whose best boundary source is
    // positive, for rows y = 1 .. n_max+1
    std::vector<long long> threshold;
    const Point& start() const { return vertices.front(); }
    // Leftmost vertex on Row k.
    Point crossing_row(long long k) const;
};

// Builds the interface up to Row n_max from a boundary on Row 0 covering at
// least [-M, M], M = ceil(2^{5/3} H n_max^{2/3}).  Sources m <= 0 compete
// against sources m in [1, M]; each row has a single sign change of
// (left sup) - (right sup), located by an exact scan.  An exact tie
// anywhere in a scanned row raises TieDetected.
DualPath competition_interface(const Env& env, const BoundaryData& boundary, long long n_max,
                               double H, long long budget = kDefaultCellBudget);

// Reference classifier for small windows: best source index of
// sup_{|m| <= M} b(m) + T_{(m,1),p} by direct evaluation per point.
// Positive means right cluster.  Used to cross-check the sweep.
long long best_source_index(const Env& env, const BoundaryData& boundary, long long M, Point p,
                            long long budget = kDefaultCellBudget);

} // namespace lpplab
