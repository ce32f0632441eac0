#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace lpplab {

// Lattice point (x, y) on Z^2.  x grows rightward, y upward; the partial
// order p <= q means both coordinates do not decrease.
struct Point {
    long long x = 0;
    long long y = 0;
    friend bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
};

inline bool leq(const Point& a, const Point& b) { return a.x <= b.x && a.y <= b.y; }

// d(x,y) = x + y (anti-diagonal level), ad(x,y) = x - y (transversal offset).
inline long long dsum(const Point& p) { return p.x + p.y; }
inline long long ad(const Point& p) { return p.x - p.y; }

// A lattice line: either a horizontal row {y = r} or the anti-diagonal
// L_n = {p : d(p) = 2n}.
struct Line {
    enum Kind { Row, Antidiagonal } kind = Row;
    long long n = 0; // row index, or L_n index (d = 2n)
    static Line row(long long r) { return {Row, r}; }
    static Line antidiag(long long n) { return {Antidiagonal, n}; }
    friend bool operator==(const Line& a, const Line& b) { return a.kind == b.kind && a.n == b.n; }
};

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Weights are rounded to multiples of 2^-34.  Any sum or difference of
// passage values with magnitude below 2^19 is then an integer multiple of
// the quantum that fits in a 53-bit significand, so dynamic-programming
// additions and comparisons are exact: mathematically equal quantities are
// bit-equal doubles.  kExactBound is enforced by the sweep engine.
inline constexpr double kWeightQuantum = 0x1p-34;
inline constexpr double kInvWeightQuantum = 0x1p34;
inline constexpr double kExactBound = 0x1p19;

struct Error : std::runtime_error {
    explicit Error(const std::string& m) : std::runtime_error(m) {}
};
// Cell budget for a single dynamic-programming sweep was exceeded.
struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& m) : Error(m) {}
};
// Requested passage/geodesic between points that are incomparable.
struct OrderViolation : Error {
    explicit OrderViolation(const std::string& m) : Error(m) {}
};
// Semi-infinite approximation did not stabilize within the target budget.
struct NoStabilization : Error {
    long long last_target;
    explicit NoStabilization(long long n_last)
        : Error("semi-infinite prefix not stabilized at target " + std::to_string(n_last)),
          last_target(n_last) {}
};
// A path does not intersect the requested line.
struct OutOfSpan : Error {
    explicit OutOfSpan(const std::string& m) : Error(m) {}
};
// A scan or argmax hit the edge of its finite window.
struct WindowClipped : Error {
    explicit WindowClipped(const std::string& m) : Error(m) {}
};
// An exact tie where the model guarantees almost-sure uniqueness.
struct TieDetected : Error {
    explicit TieDetected(const std::string& m) : Error(m) {}
};
// Too few usable samples to fit or test anything.
struct DegenerateCounts : Error {
    explicit DegenerateCounts(const std::string& m) : Error(m) {}
};

} // namespace lpplab
