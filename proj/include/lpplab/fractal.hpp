#pragma once

#include "lpplab/common.hpp"
#include "lpplab/env.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace lpplab {

struct FitResult {
    double slope = 0.0, intercept = 0.0;
    double stderr_slope = 0.0;
    double r2 = 0.0;
};

// Ordinary least squares y = intercept + slope * x.
FitResult ols(const std::vector<double>& x, const std::vector<double>& y);

// OLS on (log x, log y); entries with y <= 0 are rejected.
FitResult ols_loglog(const std::vector<double>& x, const std::vector<double>& y);

// Box-counting dimension estimate: counts[r][s] is the number of marked
// boxes for replica r at scales[s] (box side delta).  The slope of
// log(mean count) against log(1/delta) is fit over scale indices
// [fit_lo, fit_hi]; the confidence interval is a percentile bootstrap over
// replicas (resampling driven by the deterministic "boot" stream of env).
struct DimensionEstimate {
    std::vector<double> scales;
    std::vector<double> mean_counts;
    FitResult fit;
    double ci_lo = 0.0, ci_hi = 0.0;
    int bootstrap_rounds = 0;
};

DimensionEstimate box_dimension(const std::vector<std::vector<long long>>& counts,
                                const std::vector<double>& scales, std::size_t fit_lo,
                                std::size_t fit_hi, int bootstrap_rounds, const Env& env);

// Exceedance tail fit: fractions[i] = P[X > thresholds[i]] with an
// exponential model log P = intercept - rate * threshold.
struct TailFit {
    std::vector<double> thresholds;
    std::vector<double> fractions;
    double rate = 0.0;
    double stderr_rate = 0.0;
    double r2 = 0.0;
};

TailFit exponential_tail_fit(const std::vector<double>& thresholds,
                             const std::vector<double>& fractions);

// Wilson score interval for a binomial proportion at z standard normal
// quantiles (z = 1.96 for 95%).
struct Interval {
    double lo = 0.0, hi = 1.0;
};
Interval wilson_interval(long long successes, long long trials, double z);

// Kolmogorov-Smirnov machinery.  ks_pvalue is the asymptotic series
// Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double ks_pvalue(double lambda);
double ks_statistic_two(std::vector<double> a, std::vector<double> b);
double ks_two_sample_p(const std::vector<double>& a, const std::vector<double>& b);
double ks_statistic_one(std::vector<double> a, const std::function<double(double)>& cdf);
double ks_one_sample_p(std::vector<double> a, const std::function<double(double)>& cdf);

// Sample moments.
double mean_of(const std::vector<double>& v);
double sd_of(const std::vector<double>& v); // unbiased (n-1)

// Percentile bootstrap CI (percentiles 2.5 / 97.5) of a statistic of
// replica-level scalars.
Interval bootstrap_ci(const std::vector<double>& samples,
                      const std::function<double(const std::vector<double>&)>& stat,
                      int rounds, const Env& env);

} // namespace lpplab
