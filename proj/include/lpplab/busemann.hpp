#pragma once

#include "lpplab/common.hpp"
#include "lpplab/env.hpp"
#include "lpplab/geodesic.hpp"
#include "lpplab/lpp.hpp"

namespace lpplab {

// G(p) = T_{p,c} - T_{0,c} where c is the first common vertex of the
// semi-infinite (1,1) geodesics from p and from the origin.  The value is
// independent of any later reference vertex and, on the exact weight grid,
// the two passage times subtract exactly.
struct BusemannSample {
    double value = 0.0;
    Point coalescence{0, 0};
    long long target_used = 0; // largest (N,N) target consulted
};

BusemannSample busemann(const Env& env, Point p, long long budget_n_max,
                        long long cell_budget = kDefaultCellBudget);

// One-step recovery check: over the window of columns m in
// [center - halfwidth, center + halfwidth] (clipped to m >= p.x, centered
// on the (1,1) ray through p), the maximizer of
//     T_{p,(m,n)} + G((m, n+1))
// should be the column where the semi-infinite geodesic from p crosses Row
// n, and the maximal value should equal G(p) bit-exactly.
struct ArgmaxCheck {
    bool crossing_matches = false;
    bool value_matches = false;
    long long argmax_m = 0;
    long long crossing_m = 0;
};

ArgmaxCheck check_argmax_property(const Env& env, Point p, long long n, long long halfwidth,
                                  long long budget_n_max,
                                  long long cell_budget = kDefaultCellBudget);

// Stationary boundary sample on a row: value 0 at index 0, each step to the
// right adds an independent -Exp(1/2) draw from the "boundary" stream
// (counters (m, row), so each row gets its own walk).
BoundaryData sample_stationary_boundary(const Env& env, long long row, long long lo, long long hi);

// Index reflection m -> -m of a boundary (used where the mirrored-direction
// Busemann law, +Exp(1/2) increments to the right, is required).
BoundaryData reflect_boundary(const BoundaryData& b);

} // namespace lpplab
