#pragma once

#include "lpplab/common.hpp"
#include "lpplab/env.hpp"
#include "lpplab/lpp.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace lpplab {

// Difference of passage values from the two sources a = (-u, 0) and
// b = (+u, 0), u = ceil(2^{5/3} n^{2/3}), over a window of rows
// ceil(n t_lo) .. ceil(n t_hi) and diagonal offsets |x - row| <= w.
// raw(row, k) = T_a - T_b is exact on the weight grid; scaled values are
//     value(row, k) = scale * (raw - center),
// the difference of the centered rescaled passages rooted at scaled
// positions -1 and +1.  Rows are non-increasing in k, exactly.
class DifferenceGrid {
  public:
    long long n = 0;
    long long r_lo = 0, r_hi = 0; // lattice rows
    long long w = 0;              // diagonal offset halfwidth
    long long u = 0;              // source offset
    double center = 0.0;          // 4u + w_a - w_b (exact grid value)
    double scale = 1.0;           // 2^{-4/3} n^{-1/3}

    double raw(long long row, long long k) const {
        return data_[idx(row, k)];
    }
    double value(long long row, long long k) const {
        return scale * (raw(row, k) - center);
    }
    long long rows() const { return r_hi - r_lo + 1; }
    long long cols() const { return 2 * w + 1; }
    double t_of(long long row) const {
        return static_cast<double>(row) / static_cast<double>(n);
    }
    double x_of(long long k) const { return static_cast<double>(k) / transversal_unit(n); }
    // Diagonal offset column nearest to scaled coordinate x.
    long long col_of(double x) const;

    std::vector<double>& storage() { return data_; }
    const std::vector<double>& storage() const { return data_; }
    std::size_t idx(long long row, long long k) const {
        return static_cast<std::size_t>((row - r_lo) * (2 * w + 1) + (k + w));
    }

  private:
    std::vector<double> data_;
};

DifferenceGrid difference_grid(const Env& env, long long n, double t_lo, double t_hi,
                               double x_halfwidth, long long budget = kDefaultCellBudget);

// theta_l(row) = leftmost diagonal offset k with value(row, k) <= l, per
// row; clipped_left when even the left edge is below l, absent
// (clipped_right) when no column reaches l.
struct LevelCurve {
    long long n = 0;
    long long r_lo = 0, r_hi = 0;
    double level = 0.0;
    std::vector<std::optional<long long>> position; // diagonal offset per row
    std::vector<std::int8_t> clipped;               // -1 left, 0 interior, +1 right
};

LevelCurve level_curve(const DifferenceGrid& grid, double level);

// Box masks for box-counting.  Boxes are left-closed, ceil(n*delta) rows by
// ceil(2^{5/3} n^{2/3} delta) columns; a box is marked when max - min of
// scaled values over its cells exceeds tau.
struct BoxMask {
    long long box_rows = 0, box_cols = 0; // box shape in lattice cells
    long long nrows = 0, ncols = 0;       // mask dimensions
    std::vector<std::uint8_t> marked;     // row-major
    long long count() const;
};

BoxMask nonconstant_mask_2d(const DifferenceGrid& grid, double delta, double tau);

// Same notion restricted to the diagonal column (scaled x = 0): 1D boxes in
// time only.
BoxMask temporal_nonconstant_mask(const DifferenceGrid& grid, double delta, double tau);

// zeta([a,b] x (g,h]): (1/n) sum over rows with g < t <= h of
// D(a,t) - D(b,t), accumulated exactly in integer grid units.
struct ZetaMass {
    __int128 units = 0;   // multiples of the weight quantum
    double scale = 1.0;   // value-scale of the grid
    long long n = 1;
    double value() const;
    ZetaMass& operator+=(const ZetaMass& o);
    friend bool operator==(const ZetaMass& x, const ZetaMass& y) {
        return x.units == y.units && x.scale == y.scale && x.n == y.n;
    }
};

ZetaMass zeta_mass(const DifferenceGrid& grid, double a, double b, double g, double h);

// Occupation time of the level curve: rows with g < t <= h whose position
// lies in [a1, a2] (scaled), as an exact row count plus the value count/n.
struct Occupation {
    long long count = 0;
    long long n = 1;
    double value() const { return static_cast<double>(count) / static_cast<double>(n); }
};

Occupation level_occupation(const LevelCurve& curve, double a1, double a2, double g, double h);

} // namespace lpplab
