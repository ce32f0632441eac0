#include "lpplab/fractal.hpp"

#include <algorithm>
#include <cmath>

namespace lpplab {

FitResult ols(const std::vector<double>& x, const std::vector<double>& y) {
    std::size_t n = x.size();
    if (n != y.size() || n < 2) throw DegenerateCounts("need at least two points to fit");
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0) throw DegenerateCounts("degenerate abscissae");
    FitResult f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += e * e;
    }
    f.r2 = syy == 0 ? 1.0 : 1.0 - ss_res / syy;
    f.stderr_slope = n > 2 ? std::sqrt(ss_res / (static_cast<double>(n) - 2.0) / sxx) : 0.0;
    return f;
}

FitResult ols_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (y[i] <= 0 || x[i] <= 0) throw DegenerateCounts("nonpositive value in log-log fit");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    return ols(lx, ly);
}

DimensionEstimate box_dimension(const std::vector<std::vector<long long>>& counts,
                                const std::vector<double>& scales, std::size_t fit_lo,
                                std::size_t fit_hi, int bootstrap_rounds, const Env& env) {
    std::size_t r = counts.size(), s = scales.size();
    if (r == 0) throw DegenerateCounts("no replicas");
    for (const auto& row : counts)
        if (row.size() != s) throw DegenerateCounts("ragged count table");
    if (fit_hi >= s || fit_lo > fit_hi || fit_hi - fit_lo < 1)
        throw DegenerateCounts("bad fit window");

    auto slope_of = [&](const std::vector<std::size_t>& idx, std::vector<double>* means) {
        std::vector<double> lx, ly;
        for (std::size_t j = fit_lo; j <= fit_hi; ++j) {
            double m = 0;
            for (std::size_t i : idx) m += static_cast<double>(counts[i][j]);
            m /= static_cast<double>(idx.size());
            if (means) (*means)[j] = m;
            if (m <= 0) throw DegenerateCounts("empty mean count at a fitted scale");
            lx.push_back(std::log(1.0 / scales[j]));
            ly.push_back(std::log(m));
        }
        return ols(lx, ly);
    };

    DimensionEstimate e;
    e.scales = scales;
    e.mean_counts.assign(s, 0.0);
    for (std::size_t j = 0; j < s; ++j) {
        double m = 0;
        for (std::size_t i = 0; i < r; ++i) m += static_cast<double>(counts[i][j]);
        e.mean_counts[j] = m / static_cast<double>(r);
    }
    std::vector<std::size_t> all(r);
    for (std::size_t i = 0; i < r; ++i) all[i] = i;
    e.fit = slope_of(all, nullptr);

    e.bootstrap_rounds = bootstrap_rounds;
    if (bootstrap_rounds > 1 && r > 1) {
        UniformStream us(env, "boot");
        std::vector<double> slopes;
        slopes.reserve(static_cast<std::size_t>(bootstrap_rounds));
        long long ctr = 0;
        std::vector<std::size_t> idx(r);
        for (int b = 0; b < bootstrap_rounds; ++b) {
            for (std::size_t i = 0; i < r; ++i)
                idx[i] = static_cast<std::size_t>(us(ctr++) * static_cast<double>(r));
            try {
                slopes.push_back(slope_of(idx, nullptr).slope);
            } catch (const DegenerateCounts&) {
                // resample hit an all-empty scale; skip it
            }
        }
        if (slopes.size() < 16) throw DegenerateCounts("bootstrap produced too few fits");
        std::sort(slopes.begin(), slopes.end());
        auto pct = [&](double q) {
            double pos = q * (static_cast<double>(slopes.size()) - 1.0);
            std::size_t k = static_cast<std::size_t>(pos);
            double frac = pos - static_cast<double>(k);
            return k + 1 < slopes.size() ? slopes[k] * (1 - frac) + slopes[k + 1] * frac
                                         : slopes[k];
        };
        e.ci_lo = pct(0.025);
        e.ci_hi = pct(0.975);
    } else {
        e.ci_lo = e.ci_hi = e.fit.slope;
    }
    return e;
}

TailFit exponential_tail_fit(const std::vector<double>& thresholds,
                             const std::vector<double>& fractions) {
    std::vector<double> x, ly;
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        if (fractions[i] > 0) {
            x.push_back(thresholds[i]);
            ly.push_back(std::log(fractions[i]));
        }
    }
    if (x.size() < 3) throw DegenerateCounts("too few nonzero exceedance fractions");
    FitResult f = ols(x, ly);
    TailFit t;
    t.thresholds = thresholds;
    t.fractions = fractions;
    t.rate = -f.slope;
    t.stderr_rate = f.stderr_slope;
    t.r2 = f.r2;
    return t;
}

Interval wilson_interval(long long successes, long long trials, double z) {
    if (trials <= 0) throw DegenerateCounts("no trials");
    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double centre = (p + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double ks_pvalue(double lambda) {
    if (lambda <= 0) return 1.0;
    double sum = 0.0, sign = 1.0;
    for (int k = 1; k <= 101; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-12) break;
    }
    return std::min(1.0, std::max(0.0, 2.0 * sum));
}

double ks_statistic_two(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw DegenerateCounts("empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double va = a[i], vb = b[j];
        if (va <= vb) ++i;
        if (vb <= va) ++j;
        double fa = static_cast<double>(i) / na, fb = static_cast<double>(j) / nb;
        d = std::max(d, std::fabs(fa - fb));
    }
    return d;
}

double ks_two_sample_p(const std::vector<double>& a, const std::vector<double>& b) {
    double d = ks_statistic_two(a, b);
    double ne = static_cast<double>(a.size()) * static_cast<double>(b.size()) /
                (static_cast<double>(a.size()) + static_cast<double>(b.size()));
    double rt = std::sqrt(ne);
    return ks_pvalue((rt + 0.12 + 0.11 / rt) * d);
}

double ks_statistic_one(std::vector<double> a, const std::function<double(double)>& cdf) {
    if (a.empty()) throw DegenerateCounts("empty sample");
    std::sort(a.begin(), a.end());
    double n = static_cast<double>(a.size());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double f = cdf(a[i]);
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    }
    return d;
}

double ks_one_sample_p(std::vector<double> a, const std::function<double(double)>& cdf) {
    double n = static_cast<double>(a.size());
    double d = ks_statistic_one(std::move(a), cdf);
    double rt = std::sqrt(n);
    return ks_pvalue((rt + 0.12 + 0.11 / rt) * d);
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) throw DegenerateCounts("empty sample");
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
    if (v.size() < 2) throw DegenerateCounts("need two samples for sd");
    double m = mean_of(v), s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / (static_cast<double>(v.size()) - 1.0));
}

Interval bootstrap_ci(const std::vector<double>& samples,
                      const std::function<double(const std::vector<double>&)>& stat, int rounds,
                      const Env& env) {
    if (samples.size() < 2) throw DegenerateCounts("too few samples to bootstrap");
    UniformStream us(env, "boot");
    std::vector<double> stats;
    stats.reserve(static_cast<std::size_t>(rounds));
    std::vector<double> re(samples.size());
    long long ctr = 0;
    for (int b = 0; b < rounds; ++b) {
        for (std::size_t i = 0; i < samples.size(); ++i)
            re[i] = samples[static_cast<std::size_t>(us(ctr++) *
                                                     static_cast<double>(samples.size()))];
        stats.push_back(stat(re));
    }
    std::sort(stats.begin(), stats.end());
    auto pct = [&](double q) {
        double pos = q * (static_cast<double>(stats.size()) - 1.0);
        std::size_t k = static_cast<std::size_t>(pos);
        double frac = pos - static_cast<double>(k);
        return k + 1 < stats.size() ? stats[k] * (1 - frac) + stats[k + 1] * frac : stats[k];
    };
    return {pct(0.025), pct(0.975)};
}

} // namespace lpplab
