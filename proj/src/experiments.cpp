#include "lpplab/experiments.hpp"

#include "lpplab/bands.hpp"
#include "lpplab/busemann.hpp"
#include "lpplab/env.hpp"
#include "lpplab/fractal.hpp"
#include "lpplab/geodesic.hpp"
#include "lpplab/interface.hpp"
#include "lpplab/lpp.hpp"
#include "lpplab/profile.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <thread>
#include <utility>

namespace lpplab {
namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Small shared helpers
// ---------------------------------------------------------------------------

Env unit_env(const Config& cfg, long long unit) {
    return Env{cfg.master_seed, static_cast<std::uint64_t>(unit)};
}

void put(WorkResult& r, const Config& cfg, long long n, std::string key, double value) {
    r.rows.push_back(ResultRow{cfg.experiment, n, r.unit, std::move(key), value});
}

struct Tally {
    long long ok = 0, censored = 0, errors = 0;
};

Tally tally(const std::vector<WorkResult>& rs) {
    Tally t;
    for (const auto& r : rs) {
        if (r.status == "ok")
            ++t.ok;
        else if (r.status.rfind("censored", 0) == 0)
            ++t.censored;
        else
            ++t.errors;
    }
    return t;
}

// All values of `key` across ok units, in unit order.
std::vector<double> pool(const std::vector<WorkResult>& rs, const std::string& key) {
    std::vector<double> out;
    for (const auto& r : rs) {
        if (r.status != "ok") continue;
        for (const auto& row : r.rows)
            if (row.key == key) out.push_back(row.value);
    }
    return out;
}

// Values of `key` restricted to rows with a given n.
std::vector<double> pool_n(const std::vector<WorkResult>& rs, const std::string& key,
                           long long n) {
    std::vector<double> out;
    for (const auto& r : rs) {
        if (r.status != "ok") continue;
        for (const auto& row : r.rows)
            if (row.n == n && row.key == key) out.push_back(row.value);
    }
    return out;
}

// Per-unit vectors of `key` aligned with the n grid; units missing any
// column are dropped.
std::vector<std::vector<double>> by_n(const std::vector<WorkResult>& rs, const std::string& key,
                                      const std::vector<long long>& ns) {
    std::vector<std::vector<double>> out;
    for (const auto& r : rs) {
        if (r.status != "ok") continue;
        std::vector<double> row(ns.size(), std::numeric_limits<double>::quiet_NaN());
        for (const auto& rr : r.rows) {
            if (rr.key != key) continue;
            auto it = std::find(ns.begin(), ns.end(), rr.n);
            if (it != ns.end()) row[static_cast<std::size_t>(it - ns.begin())] = rr.value;
        }
        bool full = std::none_of(row.begin(), row.end(), [](double v) { return std::isnan(v); });
        if (full) out.push_back(std::move(row));
    }
    return out;
}

// Per-unit vectors aligned with a key list (n ignored).
std::vector<std::vector<double>> by_keys(const std::vector<WorkResult>& rs,
                                         const std::vector<std::string>& keys) {
    std::vector<std::vector<double>> out;
    for (const auto& r : rs) {
        if (r.status != "ok") continue;
        std::vector<double> row(keys.size(), std::numeric_limits<double>::quiet_NaN());
        for (const auto& rr : r.rows) {
            auto it = std::find(keys.begin(), keys.end(), rr.key);
            if (it != keys.end()) row[static_cast<std::size_t>(it - keys.begin())] = rr.value;
        }
        bool full = std::none_of(row.begin(), row.end(), [](double v) { return std::isnan(v); });
        if (full) out.push_back(std::move(row));
    }
    return out;
}

double percentile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    double pos = q * static_cast<double>(sorted.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    std::size_t n = std::min(a.size(), b.size());
    if (n < 2) return 0.0;
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa <= 0 || sbb <= 0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

// Log-log slope of a column-wise reduction (mean or sd over units) with a
// percentile bootstrap over units driven by the deterministic "boot" stream.
enum class Reduce { Mean, Sd };

struct SlopeBoot {
    FitResult fit;
    double ci_lo = 0.0, ci_hi = 0.0;
    std::vector<double> level; // reduced value per scale
    long long units = 0;
    bool ok = false;
};

std::vector<double> reduce_cols(const std::vector<std::vector<double>>& m,
                                const std::vector<std::size_t>& idx, Reduce red) {
    std::size_t cols = m.empty() ? 0 : m.front().size();
    std::vector<double> out(cols, 0.0);
    std::vector<double> buf(idx.size());
    for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t i = 0; i < idx.size(); ++i) buf[i] = m[idx[i]][c];
        out[c] = red == Reduce::Mean ? mean_of(buf) : sd_of(buf);
    }
    return out;
}

SlopeBoot slope_boot(const Env& env, const std::vector<double>& xs,
                     const std::vector<std::vector<double>>& m, Reduce red, int rounds) {
    SlopeBoot out;
    out.units = static_cast<long long>(m.size());
    if (m.size() < 8 || xs.empty()) return out;
    std::vector<std::size_t> ident(m.size());
    std::iota(ident.begin(), ident.end(), std::size_t{0});
    out.level = reduce_cols(m, ident, red);
    try {
        out.fit = ols_loglog(xs, out.level);
    } catch (const std::exception&) {
        return out;
    }
    UniformStream us(env, "boot");
    std::uint64_t ctr = 0;
    std::vector<double> slopes;
    slopes.reserve(static_cast<std::size_t>(rounds));
    std::vector<std::size_t> idx(m.size());
    for (int r = 0; r < rounds; ++r) {
        for (auto& i : idx)
            i = static_cast<std::size_t>(us(ctr++) * static_cast<double>(m.size()));
        try {
            slopes.push_back(ols_loglog(xs, reduce_cols(m, idx, red)).slope);
        } catch (const std::exception&) {
        }
    }
    if (slopes.size() < 16) return out;
    std::sort(slopes.begin(), slopes.end());
    out.ci_lo = percentile(slopes, 0.025);
    out.ci_hi = percentile(slopes, 0.975);
    out.ok = true;
    return out;
}

Env boot_env(const Config& cfg) { return Env{cfg.master_seed, 0}; }

json entry(const Config& cfg, const std::vector<WorkResult>& rs, std::string label) {
    Tally t = tally(rs);
    json e;
    e["experiment"] = cfg.experiment;
    e["label"] = std::move(label);
    e["units"] = static_cast<long long>(rs.size());
    e["ok"] = t.ok;
    e["censored"] = t.censored;
    e["errors"] = t.errors;
    return e;
}

void fill_slope(json& e, const std::vector<double>& xs, const SlopeBoot& sb) {
    e["scales"] = xs;
    e["level"] = sb.level;
    e["fit_ok"] = sb.ok;
    e["slope"] = sb.fit.slope;
    e["stderr"] = sb.fit.stderr_slope;
    e["r2"] = sb.fit.r2;
    e["ci"] = json::array({sb.ci_lo, sb.ci_hi});
}

long long draw_int(UniformStream& us, std::uint64_t i, long long lo, long long hi) {
    return lo + static_cast<long long>(us(i) * static_cast<double>(hi - lo + 1));
}

// ---------------------------------------------------------------------------
// dp-oracle: exhaustive path enumeration vs the dynamic-programming kernels
// on small random windows.
// ---------------------------------------------------------------------------

struct EnumBest {
    double best = kNegInf;
    std::vector<Point> path;
    long long ties = 0;
};

void enum_rec(const WeightStream& ws, Point v, Point q, double acc, std::vector<Point>& cur,
              EnumBest& out) {
    acc += ws(v.x, v.y);
    cur.push_back(v);
    if (v.x == q.x && v.y == q.y) {
        if (acc > out.best) {
            out.best = acc;
            out.path = cur;
            out.ties = 1;
        } else if (acc == out.best) {
            ++out.ties;
        }
    } else {
        if (v.x < q.x) enum_rec(ws, Point{v.x + 1, v.y}, q, acc, cur, out);
        if (v.y < q.y) enum_rec(ws, Point{v.x, v.y + 1}, q, acc, cur, out);
    }
    cur.pop_back();
}

WorkResult run_dp_oracle(const Config& cfg, long long unit) {
    WorkResult r;
    r.unit = unit;
    Env env = unit_env(cfg, unit);
    UniformStream us(env, "window");
    long long maxs = cfg.inum("max_size", 6);
    long long span = cfg.inum("offset_span", 8);
    long long wsz = draw_int(us, 0, 2, maxs);
    long long hsz = draw_int(us, 1, 2, maxs);
    Point p{draw_int(us, 2, -span, span), draw_int(us, 3, -span, span)};
    Point q{p.x + wsz - 1, p.y + hsz - 1};
    WeightStream ws(env);

    std::vector<Point> cur;
    EnumBest gb;
    enum_rec(ws, p, q, 0.0, cur, gb);
    if (gb.ties > 1) throw TieDetected("enumeration found a tied maximizing path");

    long long bad_passage = 0, bad_geodesic = 0, bad_difference = 0;
    if (passage_time(env, p, q) != gb.best) ++bad_passage;
    GeodesicPath g = geodesic(env, p, q);
    if (g.weight != gb.best || g.vertices != gb.path) ++bad_geodesic;

    Point b{p.x + std::min<long long>(2, wsz - 1), p.y};
    for (long long y = p.y; y <= q.y; ++y) {
        PassageProfile pa = profile_from_point(env, p, Line::row(y), p.x, q.x);
        PassageProfile pb = profile_from_point(env, b, Line::row(y), p.x, q.x);
        for (long long x = p.x; x <= q.x; ++x) {
            Point v{x, y};
            EnumBest ea;
            enum_rec(ws, p, v, 0.0, cur, ea);
            if (pa.at(x) != ea.best) ++bad_passage;
            double evb = kNegInf;
            if (leq(b, v)) {
                EnumBest t;
                enum_rec(ws, b, v, 0.0, cur, t);
                evb = t.best;
            }
            if (pb.at(x) != evb) ++bad_passage;
            if (evb != kNegInf && pa.at(x) - pb.at(x) != ea.best - evb) ++bad_difference;
        }
    }
    put(r, cfg, wsz, "bad_passage", static_cast<double>(bad_passage));
    put(r, cfg, wsz, "bad_geodesic", static_cast<double>(bad_geodesic));
    put(r, cfg, wsz, "bad_difference", static_cast<double>(bad_difference));
    return r;
}

json fits_dp_oracle(const Config& cfg, const std::vector<WorkResult>& rs) {
    json arr = json::array();
    json e = entry(cfg, rs, "exactness");
    double tp = 0, tg = 0, td = 0;
    for (double v : pool(rs, "bad_passage")) tp += v;
    for (double v : pool(rs, "bad_geodesic")) tg += v;
    for (double v : pool(rs, "bad_difference")) td += v;
    e["bad_passage"] = tp;
    e["bad_geodesic"] = tg;
    e["bad_difference"] = td;
    e["total_mismatches"] = tp + tg + td;
    arr.push_back(e);
    return arr;
}

// ---------------------------------------------------------------------------
// busemann-increments: limit-value increments along a down-right staircase.
// ---------------------------------------------------------------------------

WorkResult run_busemann_increments(const Config& cfg, long long unit) {
    WorkResult r;
    r.unit = unit;
    Env env = unit_env(cfg, unit);
    long long S = cfg.inum("staircase_steps", 2);
    long long budget_n = cfg.inum("coalescence_budget", 8000);
    std::vector<Point> pts;
    pts.push_back(Point{-S, S});
    for (long long k = 0; k < S; ++k) {
        Point a = pts.back();
        pts.push_back(Point{a.x + 1, a.y});
        Point c = pts.back();
        pts.push_back(Point{c.x, c.y - 1});
    }
    std::vector<double> vals;
    long long far = 0;
    for (Point p : pts) {
        BusemannSample s = busemann(env, p, budget_n);
        vals.push_back(s.value);
        far = std::max(far, dsum(s.coalescence) / 2);
    }
    for (std::size_t k = 1; k < pts.size(); ++k) {
        bool right = pts[k].x == pts[k - 1].x + 1;
        put(r, cfg, S, right ? "right_inc" : "down_inc", vals[k] - vals[k - 1]);
    }
    put(r, cfg, S, "coalescence_height", static_cast<double>(far));
    return r;
}

json fits_busemann_increments(const Config& cfg, const std::vector<WorkResult>& rs) {
    json arr = json::array();
    auto exp_cdf = [](double x) { return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x / 2.0); };

    std::vector<double> downs = pool(rs, "down_inc");
    std::vector<double> rights = pool(rs, "right_inc");
    std::vector<double> neg_rights = rights;
    for (double& v : neg_rights) v = -v;

    json ed = entry(cfg, rs, "down-increments");
    ed["count"] = static_cast<long long>(downs.size());
    ed["mean"] = mean_of(downs);
    ed["sd"] = sd_of(downs);
    ed["ks_p"] = downs.empty() ? 0.0 : ks_one_sample_p(downs, exp_cdf);
    arr.push_back(ed);

    json er = entry(cfg, rs, "right-increments");
    er["count"] = static_cast<long long>(neg_rights.size());
    er["mean"] = mean_of(neg_rights);
    er["sd"] = sd_of(neg_rights);
    er["ks_p"] = neg_rights.empty() ? 0.0 : ks_one_sample_p(neg_rights, exp_cdf);
    arr.push_back(er);

    // Pair the k-th right step with the k-th down step of the same unit.
    std::vector<double> ra, da;
    for (const auto& u : rs) {
        if (u.status != "ok") continue;
        std::vector<double> ur, ud;
        for (const auto& row : u.rows) {
            if (row.key == "right_inc") ur.push_back(row.value);
            if (row.key == "down_inc") ud.push_back(row.value);
        }
        for (std::size_t k = 0; k < std::min(ur.size(), ud.size()); ++k) {
            ra.push_back(ur[k]);
            da.push_back(ud[k]);
        }
    }
    json ei = entry(cfg, rs, "independence");
    ei["pairs"] = static_cast<long long>(ra.size());
    ei["corr"] = pearson(ra, da);
    arr.push_back(ei);
    return arr;
}

// ---------------------------------------------------------------------------
// busemann-argmax: recover the limit value from a stationary boundary argmax.
// ---------------------------------------------------------------------------

WorkResult run_busemann_argmax(const Config& cfg, long long unit) {
    WorkResult r;
    r.unit = unit;
    Env env = unit_env(cfg, unit);
    UniformStream us(env, "points");
    long long R = cfg.inum("point_range", 50);
    long long n = cfg.ns_or({64}).front();
    long long hw = cfg.inum("halfwidth", 64);
    long long budget_n = cfg.inum("coalescence_budget", 32768);
    Point p{draw_int(us, 0, -R, R), draw_int(us, 1, -R, R)};
    ArgmaxCheck c = check_argmax_property(env, p, n, hw, budget_n);
    put(r, cfg, n, "holds", (c.crossing_matches && c.value_matches) ? 1.0 : 0.0);
    put(r, cfg, n, "argmax_m", static_cast<double>(c.argmax_m));
    put(r, cfg, n, "crossing_m", static_cast<double>(c.crossing_m));
    return r;
}

json fits_busemann_argmax(const Config& cfg, const std::vector<WorkResult>& rs) {
    json arr = json::array();
    std::vector<double> holds = pool(rs, "holds");
    json e = entry(cfg, rs, "argmax-recovery");
    e["count"] = static_cast<long long>(holds.size());
    e["fraction"] = holds.empty() ? 0.0 : mean_of(holds);
    arr.push_back(e);
    return arr;
}

// ---------------------------------------------------------------------------
// duality: scaled crossings of the semi-infinite diagonal geodesic vs the
// dual path of the stationary competition interface.
// ---------------------------------------------------------------------------

std::vector<long long> duality_rows(const std::vector<double>& fr, long long n) {
    std::vector<long long> ks;
    for (double f : fr) ks.push_back(std::max<long long>(1, llround(f * static_cast<double>(n))));
    return ks;
}

WorkResult run_duality(const Config& cfg, long long unit) {
    WorkResult r;
    r.unit = unit;
    Env env = unit_env(cfg, unit);
    std::vector<long long> ns = cfg.ns_or({1000});
    std::vector<double> fr = cfg.nums("row_fractions", {0.25, 0.5, 1.0});
    double Htr = cfg.num("interface_halfwidth", 4.0);
    long long cell = cfg.inum("cell_budget", kDefaultCellBudget);
    bool geo_side = unit < cfg.replicas;
    for (long long n : ns) {
        std::vector<long long> ks = duality_rows(fr, n);
        if (geo_side) {
            long long H = n + 2 * static_cast<long long>(std::ceil(transversal_unit(n)));
            SemiInfiniteApprox semi =
                semi_infinite(env, Point{0, 0}, H, cfg.inum("stabilize_budget", 32768), cell);
            for (std::size_t i = 0; i < ks.size(); ++i) {
                Point c = crossing(semi.prefix, Line::row(ks[i]));
                put(r, cfg, ks[i], "geo_f" + std::to_string(i),
                    static_cast<double>(c.x - ks[i]) / transversal_unit(ks[i]));
            }
        } else {
            long long M = static_cast<long long>(std::ceil(Htr * transversal_unit(n)));
            BoundaryData b = reflect_boundary(sample_stationary_boundary(env, 0, -M, M));
            DualPath dp = competition_interface(env, b, n, Htr, cell);
            for (std::size_t i = 0; i < ks.size(); ++i) {
                Point c = dp.crossing_row(ks[i]);
                put(r, cfg, ks[i], "int_f" + std::to_string(i),
                    static_cast<double>(c.x - ks[i]) / transversal_unit(ks[i]));
            }
        }
    }
    return r;
}

json fits_duality(const Config& cfg, const std::vector<WorkResult>& rs) {
    json arr = json::array();
    std::vector<long long> ns = cfg.ns_or({1000});
    std::vector<double> fr = cfg.nums("row_fractions", {0.25, 0.5, 1.0});
    for (long long n : ns) {
        std::vector<long long> ks = duality_rows(fr, n);
        for (std::size_t i = 0; i < ks.size(); ++i) {
            std::vector<double> geo = pool_n(rs, "geo_f" + std::to_string(i), ks[i]);
            std::vector<double> itf = pool_n(rs, "int_f" + std::to_string(i), ks[i]);
            json e = entry(cfg, rs, "crossing-row-" + std::to_string(ks[i]));
            e["n"] = n;
            e["k"] = ks[i];
            e["geodesic_count"] = static_cast<long long>(geo.size());
            e["interface_count"] = static_cast<long long>(itf.size());
            e["geodesic_mean"] = mean_of(geo);
            e["interface_mean"] = mean_of(itf);
            e["geodesic_sd"] = sd_of(geo);
            e["interface_sd"] = sd_of(itf);
            e["ks_p"] = (geo.size() < 2 || itf.size() < 2) ? 0.0 : ks_two_sample_p(geo, itf);
            arr.push_back(e);
        }
    }
    if (ns.size() >= 4) {
        // sd of the raw (unscaled) crossing deviation at the top row vs n
        std::size_t top = fr.size() - 1;
        for (const char* side : {"geo", "int"}) {
            std::string key = std::string(side) + "_f" + std::to_string(top);
            std::vector<long long> kn;
            for (long long n : ns) kn.push_back(duality_rows(fr, n)[top]);
            auto m = by_n(rs, key, kn);
            for (auto& row : m)
                for (std::size_t c = 0; c < row.size(); ++c)
                    row[c] *= transversal_unit(kn[c]);
            std::vector<double> xs(ns.begin(), ns.end());
            SlopeBoot sb = slope_boot(boot_env(cfg), xs, m, Reduce::Sd, 1000);
            json e = entry(cfg, rs, std::string("sd-slope-") +
                                        (side[0] == 'g' ? "geodesic" : "interface"));
            fill_slope(e, xs, sb);
            arr.push_back(e);
        }
    }
    return arr;
}

std::pair<std::string, std::string> extra_duality(const Config& cfg,
                                                  const std::vector<WorkResult>& rs) {
    std::vector<long long> ns = cfg.ns_or({1000});
    std::vector<double> fr = cfg.nums("row_fractions", {0.25, 0.5, 1.0});
    std::string out = "object,n,k,replica,position_scaled\n";
    for (const auto& r : rs) {
        if (r.status != "ok") continue;
        for (const auto& row : r.rows) {
            bool geo = row.key.rfind("geo_f", 0) == 0;
            bool itf = row.key.rfind("int_f", 0) == 0;
            if (!geo && !itf) continue;
            std::size_t fi = static_cast<std::size_t>(std::stoul(row.key.substr(5)));
            long long n_used = 0;
            for (long long n : ns)
                if (fi < fr.size() && duality_rows(fr, n)[fi] == row.n) n_used = n;
            out += std::string(geo ? "geodesic" : "interface") + "," + std::to_string(n_used) +
                   "," + std::to_string(row.n) + "," + std::to_string(row.replica) + "," +
                   format_double(row.value) + "\n";
        }
    }
    return {"crossings.csv", out};
}

// ---------------------------------------------------------------------------
// transversal: midpoint deviation of the point-to-point geodesic.
// ---------------------------------------------------------------------------

WorkResult run_transversal(const Config& cfg, long long unit) {
    WorkResult r;
    r.unit = unit;
    Env env = unit_env(cfg, unit);
    long long cell = cfg.inum("cell_budget", kDefaultCellBudget);
    for (long long n : cfg.ns_or({256, 512, 1024, 2048, 4096, 8192})) {
        Point v = detail::split_vertex(env, Point{0, 0}, Point{n, n}, n, cell);
        put(r, cfg, n, "middev", static_cast<double>(ad(v)) / 2.0);
    }
    return r;
}

json fits_transversal(const Config& cfg, const std::vector<WorkResult>& rs) {
    json arr = json::array();
    std::vector<long long> ns = cfg.ns_or({256, 512, 1024, 2048, 4096, 8192});
    auto m = by_n(rs, "middev", ns);
    std::vector<double> xs(ns.begin(), ns.end());
    SlopeBoot sb = slope_boot(boot_env(cfg), xs, m, Reduce::Sd, 1000);
    json e = entry(cfg, rs, "transversal-slope");
    fill_slope(e, xs, sb);
    {
        json per = json::object();
        std::vector<std::size_t> ident(m.size());
        std::iota(ident.begin(), ident.end(), std::size_t{0});
        per["mean"] = m.empty() ? std::vector<double>{} : reduce_cols(m, ident, Reduce::Mean);
        per["sd"] = m.empty() ? std::vector<double>{} : reduce_cols(m, ident, Reduce::Sd);
        per["units"] = static_cast<long long>(m.size());
        e["per_n"] = per;
    }
    arr.push_back(e);

    if (!ns.empty()) {
        long long n = ns.back();
        std::vector<double> devs = pool_n(rs, "middev", n);
        double t1 = std::pow(static_cast<double>(n), 2.0 / 3.0);
        long long c1 = 0, c2 = 0;
        for (double d : devs) {
            if (std::fabs(d) > t1) ++c1;
            if (std::fabs(d) > 2.0 * t1) ++c2;
        }
        json et = entry(cfg, rs, "tail");
        et["n"] = n;
        et["beyond_1x"] = c1;
        et["beyond_2x"] = c2;
        et["count"] = static_cast<long long>(devs.size());
        arr.push_back(et);
    }
    return arr;
}

// ---------------------------------------------------------------------------
// weight-fluct: centered diagonal passage value T(0 -> (n,n)) - 4n.
// ---------------------------------------------------------------------------

WorkResult run_weight_fluct(const Config& cfg, long long unit) {
    WorkResult r;
    r.unit = unit;
    Env env = unit_env(cfg, unit);
    long long cell = cfg.inum("cell_budget", kDefaultCellBudget);
    for (long long n : cfg.ns_or({256, 512, 1024, 2048, 4096, 8192})) {
        double t = passage_time(env, Point{0, 0}, Point{n, n}, cell);
        put(r, cfg, n, "centered", t - 4.0 * static_cast<double>(n));
    }
    return r;
}

json fits_weight_fluct(const Config& cfg, const std::vector<WorkResult>& rs) {
    json arr = json::array();
    std::vector<long long> ns = cfg.ns_or({256, 512, 1024, 2048, 4096, 8192});
    auto m = by_n(rs, "centered", ns);
    std::vector<double> xs(ns.begin(), ns.end());
    SlopeBoot sb = slope_boot(boot_env(cfg), xs, m, Reduce::Sd, 1000);
    json e = entry(cfg, rs, "fluctuation-slope");
    fill_slope(e, xs, sb);
    std::vector<std::size_t> ident(m.size());
    std::iota(ident.begin(), ident.end(), std::size_t{0});
    std::vector<double> means = m.empty() ? std::vector<double>{} : reduce_cols(m, ident, Reduce::Mean);
    std::vector<double> sds = m.empty() ? std::vector<double>{} : reduce_cols(m, ident, Reduce::Sd);
    e["means"] = means;
    e["sds"] = sds;
    arr.push_back(e);

    json er = entry(cfg, rs, "octave-ratios");
    json ratios = json::array();
    for (std::size_t i = 0; i < ns.size(); ++i)
        for (std::size_t j = 0; j < ns.size(); ++j)
            if (ns[j] == 8 * ns[i] && i < sds.size() && j < sds.size() && sds[i] > 0) {
                json p;
                p["n"] = ns[i];
                p["ratio"] = sds[j] / sds[i];
                ratios.push_back(p);
            }
    er["sd_ratio_8x"] = ratios;
    arr.push_back(er);
    return arr;
}

// ---------------------------------------------------------------------------
// disjointness: strict four-point inequality frequency for geodesics between
// transversally separated endpoint pairs.
// ---------------------------------------------------------------------------

WorkResult run_disjointness(const Config& cfg, long long unit) {
    WorkResult r;
    r.unit = unit;
    Env env = unit_env(cfg, unit);
    long long n = cfg.ns_or({4096}).front();
    std::vector<double> eps = cfg.nums("eps_list", {0.5, 0.25, 0.125, 0.0625, 0.03125});
    long long cell = cfg.inum("cell_budget", kDefaultCellBudget);
    double tu = transversal_unit(n);
    long long u = static_cast<long long>(std::ceil(tu));
    double emax = *std::max_element(eps.begin(), eps.end());
    long long spanw = static_cast<long long>(std::ceil(tu * emax)) + 1;
    PassageProfile pa = profile_from_point(env, Point{-u, 0}, Line::row(n), n - spanw, n + spanw, cell);
    PassageProfile pb = profile_from_point(env, Point{u, 0}, Line::row(n), n - spanw, n + spanw, cell);
    for (std::size_t i = 0; i < eps.size(); ++i) {
        long long o = static_cast<long long>(std::ceil(tu * eps[i]));
        double lhs = pa.at(n - o) + pb.at(n + o);
        double rhs = pa.at(n + o) + pb.at(n - o);
        if (lhs < rhs) throw OrderViolation("four-point inequality violated");
        put(r, cfg, n, "eps" + std::to_string(i), lhs > rhs ? 1.0 : 0.0);
    }
    return r;
}

json fits_disjointness(const Config& cfg, const std::vector<WorkResult>& rs) {
    json arr = json::array();
    std::vector<double> eps = cfg.nums("eps_list", {0.5, 0.25, 0.125, 0.0625, 0.03125});
    std::vector<std::string> keys;
    for (std::size_t i = 0; i < eps.size(); ++i) keys.push_back("eps" + std::to_string(i));
    auto m = by_keys(rs, keys);
    SlopeBoot sb = slope_boot(boot_env(cfg), eps, m, Reduce::Mean, 1000);
    json e = entry(cfg, rs, "disjointness-slope");
    fill_slope(e, eps, sb);
    json per = json::array();
    for (std::size_t i = 0; i < eps.size(); ++i) {
        std::vector<double> v = pool(rs, keys[i]);
        long long succ = 0;
        for (double x : v) succ += x > 0.5 ? 1 : 0;
        Interval w = wilson_interval(succ, static_cast<long long>(v.size()), 1.96);
        json p;
        p["eps"] = eps[i];
        p["fraction"] = v.empty() ? 0.0 : mean_of(v);
        p["wilson"] = json::array({w.lo, w.hi});
        p["count"] = static_cast<long long>(v.size());
        per.push_back(p);
    }
    e["per_eps"] = per;
    arr.push_back(e);
    return arr;
}

// ---------------------------------------------------------------------------
// dim-z: zero-set growth of the semi-infinite diagonal geodesic, plus
// box-occupancy fractions at the largest height.
// ---------------------------------------------------------------------------

std::vector<long long> dim_z_tols(const Config& cfg) {
    std::vector<long long> tols;
    tols.push_back(cfg.inum("tol_cells", 1));
    for (double a : cfg.nums("tol_alts", {0.0, 2.0})) {
        long long t = static_cast<long long>(a);
        if (std::find(tols.begin(), tols.end(), t) == tols.end()) tols.push_back(t);
    }
    return tols;
}

WorkResult run_dim_z(const Config& cfg, long long unit) {
    WorkResult r;
    r.unit = unit;
    Env env = unit_env(cfg, unit);
    std::vector<long long> ns = cfg.ns_or({256, 512, 1024, 2048, 4096, 8192});
    long long n_max = *std::max_element(ns.begin(), ns.end());
    std::vector<long long> tols = dim_z_tols(cfg);
    long long tmax = *std::max_element(tols.begin(), tols.end());
    long long H = n_max + tmax / 2 + 2;
    SemiInfiniteApprox semi = semi_infinite(env, Point{0, 0}, H, cfg.inum("stabilize_budget", 300000),
                                            cfg.inum("cell_budget", 4000000000LL));
    long long base_tol = tols.front();
    for (long long t : tols) {
        std::vector<long long> zs = zero_set(semi.prefix, t);
        for (long long n : ns) {
            auto it = std::upper_bound(zs.begin(), zs.end(), n);
            put(r, cfg, n, "zeros_tol" + std::to_string(t),
                static_cast<double>(it - zs.begin()));
        }
        if (t == base_tol) {
            std::vector<double> deltas = cfg.nums(
                "box_deltas", {0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625});
            for (std::size_t j = 0; j < deltas.size(); ++j) {
                long long bs = std::max<long long>(
                    1, static_cast<long long>(std::ceil(deltas[j] * static_cast<double>(n_max))));
                long long boxes = (n_max + bs - 1) / bs;
                std::vector<long long> seen;
                for (long long y : zs) {
                    if (y >= n_max) break;
                    long long box = y / bs;
                    if (seen.empty() || seen.back() != box) seen.push_back(box);
                }
                put(r, cfg, n_max, "zbox" + std::to_string(j), static_cast<double>(seen.size()));
                put(r, cfg, n_max, "zbox_total" + std::to_string(j), static_cast<double>(boxes));
            }
        }
    }
    return r;
}

json dimension_entry(const Config& cfg, const std::vector<WorkResult>& rs, std::string label,
                     const std::vector<std::string>& keys, const std::vector<long long>& key_n,
                     const std::vector<double>& scales, std::size_t fit_lo, std::size_t fit_hi,
                     bool base) {
    // counts[r][s] for box_dimension; key/row-n pairs identify the columns
    std::vector<std::vector<long long>> counts;
    for (const auto& u : rs) {
        if (u.status != "ok") continue;
        std::vector<long long> row(keys.size(), -1);
        for (const auto& rr : u.rows) {
            for (std::size_t i = 0; i < keys.size(); ++i)
                if (rr.key == keys[i] && rr.n == key_n[i])
                    row[i] = static_cast<long long>(llround(rr.value));
        }
        if (std::none_of(row.begin(), row.end(), [](long long v) { return v < 0; }))
            counts.push_back(std::move(row));
    }
    json e = entry(cfg, rs, std::move(label));
    e["role"] = base ? "base" : "alt";
    e["scales"] = scales;
    try {
        DimensionEstimate de =
            box_dimension(counts, scales, fit_lo, fit_hi, 1000, boot_env(cfg));
        e["fit_ok"] = true;
        e["slope"] = de.fit.slope;
        e["stderr"] = de.fit.stderr_slope;
        e["r2"] = de.fit.r2;
        e["ci"] = json::array({de.ci_lo, de.ci_hi});
        e["mean_counts"] = de.mean_counts;
    } catch (const std::exception& ex) {
        e["fit_ok"] = false;
        e["slope"] = 0.0;
        e["stderr"] = 0.0;
        e["r2"] = 0.0;
        e["ci"] = json::array({0.0, 0.0});
        e["fit_error"] = std::string(ex.what());
    }
    return e;
}

json fits_dim_z(const Config& cfg, const std::vector<WorkResult>& rs) {
    json arr = json::array();
    std::vector<long long> ns = cfg.ns_or({256, 512, 1024, 2048, 4096, 8192});
    long long n_max = *std::max_element(ns.begin(), ns.end());
    std::vector<long long> tols = dim_z_tols(cfg);
    std::vector<double> scales;
    for (long long n : ns) scales.push_back(1.0 / static_cast<double>(n));
    for (std::size_t t = 0; t < tols.size(); ++t) {
        std::vector<std::string> keys(ns.size(), "zeros_tol" + std::to_string(tols[t]));
        arr.push_back(dimension_entry(cfg, rs, "dimension-tol" + std::to_string(tols[t]), keys,
                                      ns, scales, 0, ns.size() - 1, t == 0));
    }
    // nonempty box-fraction rate at the largest height
    std::vector<double> deltas =
        cfg.nums("box_deltas", {0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625});
    std::vector<double> fracs;
    std::vector<double> ds;
    for (std::size_t j = 0; j < deltas.size(); ++j) {
        std::vector<double> c = pool_n(rs, "zbox" + std::to_string(j), n_max);
        std::vector<double> tot = pool_n(rs, "zbox_total" + std::to_string(j), n_max);
        if (c.empty() || tot.empty() || mean_of(tot) <= 0) continue;
        fracs.push_back(mean_of(c) / mean_of(tot));
        ds.push_back(deltas[j]);
    }
    json e = entry(cfg, rs, "nonempty-rate");
    e["scales"] = ds;
    e["fractions"] = fracs;
    try {
        FitResult f = ols_loglog(ds, fracs);
        e["fit_ok"] = true;
        e["slope"] = f.slope;
        e["stderr"] = f.stderr_slope;
        e["r2"] = f.r2;
    } catch (const std::exception&) {
        e["fit_ok"] = false;
        e["slope"] = 0.0;
    }
    arr.push_back(e);
    return arr;
}

// ---------------------------------------------------------------------------
// dim-nc-temporal / dim-nc-2d: box counts of the non-constancy set of the
// two-source difference profile, with threshold sensitivity variants.
// ---------------------------------------------------------------------------

WorkResult run_dim_nc(const Config& cfg, long long unit, bool planar) {
    WorkResult r;
    r.unit = unit;
    Env env = unit_env(cfg, unit);
    long long n = cfg.ns_or({4096}).front();
    std::vector<double> deltas = cfg.nums(
        "delta_list", {0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125});
    double tau = cfg.num("tau", 1e-7);
    double variants[3] = {tau / 10.0, tau, tau * 10.0};
    DifferenceGrid grid = difference_grid(env, n, cfg.num("t_lo", 1.0), cfg.num("t_hi", 2.0),
                                          cfg.num("x_halfwidth", planar ? 1.0 : 0.1),
                                          cfg.inum("cell_budget", kDefaultCellBudget));
    for (int vi = 0; vi < 3; ++vi) {
        for (std::size_t j = 0; j < deltas.size(); ++j) {
            BoxMask m = planar ? nonconstant_mask_2d(grid, deltas[j], variants[vi])
                               : temporal_nonconstant_mask(grid, deltas[j], variants[vi]);
            put(r, cfg, n, "box" + std::to_string(j) + "_v" + std::to_string(vi),
                static_cast<double>(m.count()));
            if (vi == 1)
                put(r, cfg, n, "boxes" + std::to_string(j),
                    static_cast<double>(m.nrows * m.ncols));
        }
    }
    return r;
}

json fits_dim_nc(const Config& cfg, const std::vector<WorkResult>& rs) {
    json arr = json::array();
    long long n = cfg.ns_or({4096}).front();
    std::vector<double> deltas = cfg.nums(
        "delta_list", {0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125});
    std::size_t fit_lo = deltas.size() > 4 ? 1 : 0;
    std::size_t fit_hi = deltas.size() > 4 ? deltas.size() - 2 : deltas.size() - 1;
    const char* names[3] = {"dimension-tau-low", "dimension-tau-base", "dimension-tau-high"};
    for (int vi = 0; vi < 3; ++vi) {
        std::vector<std::string> keys;
        for (std::size_t j = 0; j < deltas.size(); ++j)
            keys.push_back("box" + std::to_string(j) + "_v" + std::to_string(vi));
        std::vector<long long> key_n(keys.size(), n);
        arr.push_back(
            dimension_entry(cfg, rs, names[vi], keys, key_n, deltas, fit_lo, fit_hi, vi == 1));
    }
    std::vector<double> fracs, ds;
    for (std::size_t j = 0; j < deltas.size(); ++j) {
        std::vector<double> c = pool_n(rs, "box" + std::to_string(j) + "_v1", n);
        std::vector<double> tot = pool_n(rs, "boxes" + std::to_string(j), n);
        if (c.empty() || tot.empty() || mean_of(tot) <= 0) continue;
        fracs.push_back(mean_of(c) / mean_of(tot));
        ds.push_back(deltas[j]);
    }
    json e = entry(cfg, rs, "nonempty-rate");
    e["scales"] = ds;
    e["fractions"] = fracs;
    try {
        FitResult f = ols_loglog(ds, fracs);
        e["fit_ok"] = true;
        e["slope"] = f.slope;
        e["stderr"] = f.stderr_slope;
        e["r2"] = f.r2;
    } catch (const std::exception&) {
        e["fit_ok"] = false;
        e["slope"] = 0.0;
    }
    arr.push_back(e);
    return arr;
}

// ---------------------------------------------------------------------------
// zeta-mean: total difference-profile mass of a unit rectangle.
// ---------------------------------------------------------------------------

WorkResult run_zeta_mean(const Config& cfg, long long unit) {
    WorkResult r;
    r.unit = unit;
    Env env = unit_env(cfg, unit);
    long long n = cfg.ns_or({2000}).front();
    DifferenceGrid grid = difference_grid(env, n, 1.0, 2.0, cfg.num("x_halfwidth", 0.55),
                                          cfg.inum("cell_budget", kDefaultCellBudget));
    ZetaMass z = zeta_mass(grid, cfg.num("a", -0.5), cfg.num("b", 0.5), cfg.num("g", 1.0),
                           cfg.num("h", 2.0));
    put(r, cfg, n, "zeta", z.value());
    return r;
}

json fits_zeta_mean(const Config& cfg, const std::vector<WorkResult>& rs) {
    json arr = json::array();
    std::vector<double> v = pool(rs, "zeta");
    json e = entry(cfg, rs, "mass-mean");
    double mean = mean_of(v);
    double sd = sd_of(v);
    e["count"] = static_cast<long long>(v.size());
    e["mean"] = mean;
    e["sd"] = sd;
    e["se"] = v.empty() ? 0.0 : sd / std::sqrt(static_cast<double>(v.size()));
    e["target"] = bands::kZetaMeanTarget;
    e["rel_err"] = v.empty() ? 1.0 : std::fabs(mean / bands::kZetaMeanTarget - 1.0);
    arr.push_back(e);
    return arr;
}

// ---------------------------------------------------------------------------
// zeta-decomp: rectangle mass vs the level-curve occupation quadrature.
// ---------------------------------------------------------------------------

WorkResult run_zeta_decomp(const Config& cfg, long long unit) {
    WorkResult r;
    r.unit = unit;
    Env env = unit_env(cfg, unit);
    long long n = cfg.ns_or({1024}).front();
    long long rects = cfg.inum("rects", 20);
    DifferenceGrid grid = difference_grid(env, n, 1.0, 2.0, cfg.num("x_halfwidth", 1.15),
                                          cfg.inum("cell_budget", kDefaultCellBudget));
    UniformStream us(env, "rects");
    for (long long j = 0; j < rects; ++j) {
        std::uint64_t base = static_cast<std::uint64_t>(4 * j);
        double a = -(0.15 + 0.85 * us(base + 0));
        double b = 0.15 + 0.85 * us(base + 1);
        double g = 1.0 + 0.45 * us(base + 2);
        double h = 1.55 + 0.45 * us(base + 3);
        ZetaMass direct = zeta_mass(grid, a, b, g, h);
        double dv = direct.value();
        long long ka = grid.col_of(a), kb = grid.col_of(b);
        double a1 = grid.x_of(ka + 1), a2 = grid.x_of(kb);
        long long r0 = static_cast<long long>(std::floor(static_cast<double>(n) * g)) + 1;
        long long r1 = static_cast<long long>(std::floor(static_cast<double>(n) * h));
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (long long row = r0; row <= r1; ++row) {
            lo = std::min(lo, grid.value(row, kb));
            hi = std::max(hi, grid.value(row, ka));
        }
        double quad = dv;
        if (hi > lo && dv > 0) {
            double rows_in = static_cast<double>(r1 - r0 + 1);
            // midpoint rule; per-row indicator error <= dl/n, so the step
            // count keeps the total well inside the comparison tolerance
            double want = 400.0 * (hi - lo) * rows_in / (dv * static_cast<double>(n));
            long long steps =
                std::clamp(static_cast<long long>(std::ceil(want)), 1000LL, 400000LL);
            double dl = (hi - lo) / static_cast<double>(steps);
            double acc = 0.0;
            for (long long i = 0; i < steps; ++i) {
                double level = lo + (static_cast<double>(i) + 0.5) * dl;
                acc += level_occupation(level_curve(grid, level), a1, a2, g, h).value();
            }
            quad = acc * dl;
        }
        put(r, cfg, n, "direct" + std::to_string(j), dv);
        put(r, cfg, n, "quad" + std::to_string(j), quad);
    }
    return r;
}

json fits_zeta_decomp(const Config& cfg, const std::vector<WorkResult>& rs) {
    json arr = json::array();
    long long rects = cfg.inum("rects", 20);
    double max_rel = 0.0, sum_rel = 0.0;
    long long pairs = 0;
    for (const auto& u : rs) {
        if (u.status != "ok") continue;
        for (long long j = 0; j < rects; ++j) {
            double dv = 0, qv = 0;
            bool fd = false, fq = false;
            for (const auto& rr : u.rows) {
                if (rr.key == "direct" + std::to_string(j)) {
                    dv = rr.value;
                    fd = true;
                }
                if (rr.key == "quad" + std::to_string(j)) {
                    qv = rr.value;
                    fq = true;
                }
            }
            if (!fd || !fq) continue;
            double rel = dv > 0 ? std::fabs(qv - dv) / dv : 0.0;
            max_rel = std::max(max_rel, rel);
            sum_rel += rel;
            ++pairs;
        }
    }
    json e = entry(cfg, rs, "decomposition");
    e["pairs"] = pairs;
    e["max_rel_err"] = max_rel;
    e["mean_rel_err"] = pairs > 0 ? sum_rel / static_cast<double>(pairs) : 1.0;
    arr.push_back(e);
    return arr;
}

// ---------------------------------------------------------------------------
// local-time: diagonal-tube occupancy of the semi-infinite geodesic at
// shrinking tube widths.
// ---------------------------------------------------------------------------

WorkResult run_local_time(const Config& cfg, long long unit) {
    WorkResult r;
    r.unit = unit;
    Env env = unit_env(cfg, unit);
    long long n = cfg.ns_or({4096}).front();
    std::vector<double> wl = cfg.nums("w_list", {0.2, 0.1, 0.05});
    double h = cfg.num("height", 1.0);
    double tu = transversal_unit(n);
    long long hn = llround(h * static_cast<double>(n));
    double wmax = *std::max_element(wl.begin(), wl.end());
    long long H = hn + static_cast<long long>(wmax * tu / 2.0) + 2;
    SemiInfiniteApprox semi = semi_infinite(env, Point{0, 0}, H, cfg.inum("stabilize_budget", 131072),
                                            cfg.inum("cell_budget", kDefaultCellBudget));
    for (std::size_t j = 0; j < wl.size(); ++j) {
        long long tol = static_cast<long long>(std::floor(wl[j] * tu));
        std::vector<long long> zs = zero_set(semi.prefix, tol);
        auto it = std::lower_bound(zs.begin(), zs.end(), hn);
        put(r, cfg, n, "tube" + std::to_string(j), static_cast<double>(it - zs.begin()));
    }
    return r;
}

json fits_local_time(const Config& cfg, const std::vector<WorkResult>& rs) {
    json arr = json::array();
    long long n = cfg.ns_or({4096}).front();
    std::vector<double> wl = cfg.nums("w_list", {0.2, 0.1, 0.05});
    double h = cfg.num("height", 1.0);
    std::vector<double> lhat(wl.size(), 0.0);
    json e = entry(cfg, rs, "local-time");
    json per = json::array();
    for (std::size_t j = 0; j < wl.size(); ++j) {
        std::vector<double> v = pool(rs, "tube" + std::to_string(j));
        double mean = mean_of(v);
        lhat[j] = v.empty() ? 0.0 : mean / (static_cast<double>(n) * h) / (2.0 * wl[j]);
        json p;
        p["w"] = wl[j];
        p["mean_rows"] = mean;
        p["normalized"] = lhat[j];
        p["count"] = static_cast<long long>(v.size());
        per.push_back(p);
    }
    e["per_w"] = per;
    json ratios = json::array();
    for (std::size_t j = 0; j + 1 < wl.size(); ++j)
        if (lhat[j + 1] > 0) ratios.push_back(lhat[j] / lhat[j + 1]);
    e["adjacent_ratios"] = ratios;
    arr.push_back(e);
    return arr;
}

// ---------------------------------------------------------------------------
// tube-tail: exceedance tail of the diagonal-tube occupancy of point-to-point
// geodesics.
// ---------------------------------------------------------------------------

WorkResult run_tube_tail(const Config& cfg, long long unit) {
    WorkResult r;
    r.unit = unit;
    Env env = unit_env(cfg, unit);
    long long n = cfg.ns_or({2048}).front();
    double w = cfg.num("w", 0.1);
    GeodesicPath path = geodesic(env, Point{0, 0}, Point{n, n},
                                 cfg.inum("cell_budget", kDefaultCellBudget));
    long long tol = static_cast<long long>(std::floor(w * transversal_unit(n)));
    std::vector<long long> zs = zero_set(path, tol);
    auto it = std::lower_bound(zs.begin(), zs.end(), n);
    put(r, cfg, n, "occupancy", static_cast<double>(it - zs.begin()) / static_cast<double>(n));
    return r;
}

json fits_tube_tail(const Config& cfg, const std::vector<WorkResult>& rs) {
    json arr = json::array();
    double w = cfg.num("w", 0.1);
    std::vector<double> ms = cfg.nums("m_list", {2, 3, 4, 5, 6, 7, 8});
    std::vector<double> occ = pool(rs, "occupancy");
    std::vector<double> fracs;
    for (double m : ms) {
        long long c = 0;
        for (double x : occ)
            if (x > m * w) ++c;
        fracs.push_back(occ.empty() ? 0.0 : static_cast<double>(c) / static_cast<double>(occ.size()));
    }
    json e = entry(cfg, rs, "tube-tail");
    e["thresholds"] = ms;
    e["fractions"] = fracs;
    e["w"] = w;
    double mx = 0.0;
    for (double x : occ) mx = std::max(mx, x);
    e["max_occupancy"] = mx;
    try {
        TailFit tf = exponential_tail_fit(ms, fracs);
        e["fit_ok"] = true;
        e["rate"] = tf.rate;
        e["stderr"] = tf.stderr_rate;
        e["r2"] = tf.r2;
    } catch (const std::exception& ex) {
        e["fit_ok"] = false;
        e["rate"] = 0.0;
        e["r2"] = 0.0;
        e["fit_error"] = std::string(ex.what());
    }
    arr.push_back(e);
    return arr;
}

// ---------------------------------------------------------------------------
// registry
// ---------------------------------------------------------------------------

struct ExpDef {
    const char* name;
    const char* summary;
    std::vector<std::string> keys;
    std::function<long long(const Config&)> units;
    std::function<WorkResult(const Config&, long long)> run_unit;
    std::function<json(const Config&, const std::vector<WorkResult>&)> fits;
    std::function<std::pair<std::string, std::string>(const Config&,
                                                      const std::vector<WorkResult>&)>
        extra;
};

long long units_replicas(const Config& cfg) { return cfg.replicas; }

const std::vector<ExpDef>& registry() {
    static const std::vector<ExpDef> defs = {
        {"dp-oracle",
         "exhaustive small-window enumeration vs passage, geodesic and difference kernels",
         {"max_size", "offset_span"},
         units_replicas, run_dp_oracle, fits_dp_oracle, nullptr},
        {"busemann-increments",
         "limit-value increments along a down-right staircase: means, laws, independence",
         {"staircase_steps", "coalescence_budget"},
         units_replicas, run_busemann_increments, fits_busemann_increments, nullptr},
        {"busemann-argmax",
         "limit value and crossing recovered from a stationary-boundary argmax",
         {"point_range", "halfwidth", "coalescence_budget"},
         units_replicas, run_busemann_argmax, fits_busemann_argmax, nullptr},
        {"duality",
         "crossing law of the diagonal semi-infinite geodesic vs the interface dual path",
         {"row_fractions", "interface_halfwidth", "stabilize_budget", "cell_budget"},
         [](const Config& cfg) { return 2 * cfg.replicas; }, run_duality, fits_duality,
         extra_duality},
        {"transversal",
         "midpoint transversal deviation of diagonal geodesics across sizes",
         {"cell_budget"},
         units_replicas, run_transversal, fits_transversal, nullptr},
        {"weight-fluct",
         "centered diagonal passage value fluctuations across sizes",
         {"cell_budget"},
         units_replicas, run_weight_fluct, fits_weight_fluct, nullptr},
        {"disjointness",
         "strict four-point inequality frequency vs endpoint separation",
         {"eps_list", "cell_budget"},
         units_replicas, run_disjointness, fits_disjointness, nullptr},
        {"dim-z",
         "zero-set growth of the diagonal semi-infinite geodesic plus box occupancy",
         {"tol_cells", "tol_alts", "box_deltas", "stabilize_budget", "cell_budget"},
         units_replicas, run_dim_z, fits_dim_z, nullptr},
        {"dim-nc-temporal",
         "temporal box counts of the difference-profile non-constancy set",
         {"delta_list", "tau", "t_lo", "t_hi", "x_halfwidth", "cell_budget"},
         units_replicas,
         [](const Config& cfg, long long u) { return run_dim_nc(cfg, u, false); }, fits_dim_nc,
         nullptr},
        {"dim-nc-2d",
         "planar box counts of the difference-profile non-constancy set",
         {"delta_list", "tau", "t_lo", "t_hi", "x_halfwidth", "cell_budget"},
         units_replicas,
         [](const Config& cfg, long long u) { return run_dim_nc(cfg, u, true); }, fits_dim_nc,
         nullptr},
        {"zeta-mean",
         "mean difference-profile mass of a centered rectangle",
         {"a", "b", "g", "h", "x_halfwidth", "cell_budget"},
         units_replicas, run_zeta_mean, fits_zeta_mean, nullptr},
        {"zeta-decomp",
         "rectangle mass vs level-curve occupation quadrature",
         {"rects", "x_halfwidth", "cell_budget"},
         units_replicas, run_zeta_decomp, fits_zeta_decomp, nullptr},
        {"local-time",
         "normalized diagonal-tube occupancy at shrinking widths",
         {"w_list", "height", "stabilize_budget", "cell_budget"},
         units_replicas, run_local_time, fits_local_time, nullptr},
        {"tube-tail",
         "exceedance tail of diagonal-tube occupancy of point-to-point geodesics",
         {"w", "m_list", "cell_budget"},
         units_replicas, run_tube_tail, fits_tube_tail, nullptr},
    };
    return defs;
}

const ExpDef* find_def(const std::string& name) {
    for (const auto& d : registry())
        if (name == d.name) return &d;
    return nullptr;
}

const ExpDef& require_def(const std::string& name) {
    const ExpDef* d = find_def(name);
    if (!d) throw ConfigError("unknown experiment: " + name);
    return *d;
}

WorkResult guarded(const ExpDef& def, const Config& cfg, long long unit) {
    WorkResult out;
    out.unit = unit;
    try {
        out = def.run_unit(cfg, unit);
        out.unit = unit;
        if (out.status.empty()) out.status = "ok";
    } catch (const NoStabilization&) {
        out = WorkResult{unit, "censored:no-stabilization", {}};
    } catch (const TieDetected&) {
        out = WorkResult{unit, "censored:tie", {}};
    } catch (const OutOfSpan&) {
        out = WorkResult{unit, "censored:out-of-span", {}};
    } catch (const WindowClipped&) {
        out = WorkResult{unit, "censored:window-clipped", {}};
    } catch (const std::exception& e) {
        out = WorkResult{unit, std::string("error:") + e.what(), {}};
    }
    return out;
}

std::string iso_now() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fmtg(double v) {
    char b[64];
    std::snprintf(b, sizeof b, "%.5g", v);
    return b;
}

} // namespace

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

double Config::num(const std::string& key, double fallback) const {
    if (!extras.contains(key)) return fallback;
    const auto& v = extras.at(key);
    if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
    return v.get<double>();
}

long long Config::inum(const std::string& key, long long fallback) const {
    if (!extras.contains(key)) return fallback;
    const auto& v = extras.at(key);
    if (v.is_number_integer() || v.is_number_unsigned()) return v.get<long long>();
    if (v.is_number_float()) {
        double d = v.get<double>();
        if (d == std::floor(d)) return static_cast<long long>(d);
    }
    throw ConfigError("config key '" + key + "' must be an integer");
}

std::vector<double> Config::nums(const std::string& key, std::vector<double> fallback) const {
    if (!extras.contains(key)) return fallback;
    const auto& v = extras.at(key);
    if (!v.is_array()) throw ConfigError("config key '" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number())
            throw ConfigError("config key '" + key + "' must be an array of numbers");
        out.push_back(x.get<double>());
    }
    if (out.empty()) throw ConfigError("config key '" + key + "' must not be empty");
    return out;
}

std::vector<long long> Config::ns_or(std::vector<long long> fallback) const {
    return n_list.empty() ? fallback : n_list;
}

Config parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    if (!j.contains("experiment") || !j.at("experiment").is_string())
        throw ConfigError("missing required string key: experiment");

    Config c;
    c.raw = j;
    c.experiment = j.at("experiment").get<std::string>();
    const ExpDef& def = require_def(c.experiment);

    static const std::vector<std::string> common = {"experiment", "replicas", "master_seed",
                                                    "threads",    "output_dir", "n", "n_list"};
    for (const auto& item : j.items()) {
        const std::string& k = item.key();
        bool known = std::find(common.begin(), common.end(), k) != common.end() ||
                     std::find(def.keys.begin(), def.keys.end(), k) != def.keys.end();
        if (!known)
            throw ConfigError("unknown config key '" + k + "' for experiment " + c.experiment);
    }

    if (!j.contains("replicas")) throw ConfigError("missing required key: replicas");
    if (!j.at("replicas").is_number_integer() && !j.at("replicas").is_number_unsigned())
        throw ConfigError("replicas must be an integer");
    c.replicas = j.at("replicas").get<long long>();
    if (c.replicas < 1) throw ConfigError("replicas must be >= 1");

    if (j.contains("master_seed")) {
        const auto& v = j.at("master_seed");
        if (v.is_number_unsigned())
            c.master_seed = v.get<std::uint64_t>();
        else if (v.is_number_integer()) {
            long long s = v.get<long long>();
            if (s < 0) throw ConfigError("master_seed must be non-negative");
            c.master_seed = static_cast<std::uint64_t>(s);
        } else if (v.is_string()) {
            try {
                c.master_seed = std::stoull(v.get<std::string>(), nullptr, 0);
            } catch (const std::exception&) {
                throw ConfigError("master_seed string must be a decimal or 0x-prefixed integer");
            }
        } else {
            throw ConfigError("master_seed must be an integer or a string");
        }
    } else {
        c.master_seed = 1;
    }

    if (j.contains("threads")) {
        if (!j.at("threads").is_number_integer() && !j.at("threads").is_number_unsigned())
            throw ConfigError("threads must be an integer");
        c.threads = j.at("threads").get<int>();
        if (c.threads < 1 || c.threads > 256) throw ConfigError("threads must be in [1, 256]");
    }

    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string()) throw ConfigError("output_dir must be a string");
        c.output_dir = j.at("output_dir").get<std::string>();
    }

    if (j.contains("n") && j.contains("n_list"))
        throw ConfigError("config may set n or n_list, not both");
    auto read_n = [](const json& v) {
        if (!v.is_number_integer() && !v.is_number_unsigned())
            throw ConfigError("n values must be integers");
        long long n = v.get<long long>();
        if (n < 1) throw ConfigError("n values must be >= 1");
        return n;
    };
    if (j.contains("n")) c.n_list.push_back(read_n(j.at("n")));
    if (j.contains("n_list")) {
        if (!j.at("n_list").is_array() || j.at("n_list").empty())
            throw ConfigError("n_list must be a non-empty array of integers");
        for (const auto& v : j.at("n_list")) c.n_list.push_back(read_n(v));
    }

    c.extras = json::object();
    for (const auto& item : j.items())
        if (std::find(def.keys.begin(), def.keys.end(), item.key()) != def.keys.end())
            c.extras[item.key()] = item.value();
    return c;
}

// ---------------------------------------------------------------------------
// run_experiment
// ---------------------------------------------------------------------------

RunSummary run_experiment(const Config& cfg, int threads_override,
                          const std::string& output_dir_override) {
    const ExpDef& def = require_def(cfg.experiment);
    std::string started = iso_now();

    long long units = def.units(cfg);
    std::vector<WorkResult> results(static_cast<std::size_t>(units));
    std::atomic<long long> next{0};
    int T = threads_override > 0 ? threads_override : cfg.threads;
    T = std::clamp(T, 1, 256);
    auto work = [&] {
        for (;;) {
            long long i = next.fetch_add(1);
            if (i >= units) return;
            results[static_cast<std::size_t>(i)] = guarded(def, cfg, i);
        }
    };
    if (T == 1) {
        work();
    } else {
        std::vector<std::thread> ts;
        for (int t = 0; t < T; ++t) ts.emplace_back(work);
        for (auto& t : ts) t.join();
    }

    std::vector<ResultRow> rows;
    for (const auto& wr : results)
        for (const auto& rr : wr.rows) rows.push_back(rr);
    std::string results_text = results_csv(rows);
    json fits = json::array();
    if (def.fits) {
        try {
            fits = def.fits(cfg, results);
        } catch (const std::exception& e) {
            // Too few usable replicas to form the summary statistics; the
            // run directory still records every status honestly.
            json degraded;
            degraded["label"] = "summary";
            degraded["fit_ok"] = false;
            degraded["fit_error"] = std::string(e.what());
            fits.push_back(degraded);
        }
    }
    std::string fits_text = fits.dump(2) + "\n";

    std::string dir = output_dir_override;
    if (dir.empty()) dir = cfg.output_dir;
    if (dir.empty()) {
        const char* envdir = std::getenv("LPPLAB_OUTPUT_DIR");
        dir = envdir && *envdir ? std::string(envdir) + "/" + cfg.experiment
                                : "lpplab-out/" + cfg.experiment;
    }
    std::filesystem::create_directories(dir);

    json files = json::object();
    write_file_atomic(dir + "/results.csv", results_text);
    files["results.csv"] = fnv1a_hex(results_text);
    write_file_atomic(dir + "/fits.json", fits_text);
    files["fits.json"] = fnv1a_hex(fits_text);
    if (def.extra) {
        auto [name, contents] = def.extra(cfg, results);
        write_file_atomic(dir + "/" + name, contents);
        files[name] = fnv1a_hex(contents);
    }

    Tally t = tally(results);
    RunSummary s;
    s.units = units;
    s.ok = t.ok;
    s.censored = t.censored;
    s.errors = t.errors;
    s.failed = static_cast<double>(t.errors) >
               bands::kErrorShareMax * static_cast<double>(units);
    s.output_dir = dir;

    json man;
    man["version"] = kVersion;
    man["experiment"] = cfg.experiment;
    man["config"] = cfg.raw;
    man["threads_effective"] = T;
    man["started"] = started;
    man["finished"] = iso_now();
    man["units"] = units;
    man["ok"] = t.ok;
    man["censored"] = t.censored;
    man["errors"] = t.errors;
    man["failed"] = s.failed;
    json status = json::array();
    for (const auto& wr : results) status.push_back(wr.status);
    man["replica_status"] = status;
    man["files"] = files;
    write_file_atomic(dir + "/manifest.json", man.dump(2) + "\n");
    return s;
}

// ---------------------------------------------------------------------------
// evaluate_fits: acceptance bands over a fits.json document
// ---------------------------------------------------------------------------

namespace {

const json* find_entry(const json& fits, const std::string& label) {
    if (!fits.is_array()) return nullptr;
    for (const auto& e : fits)
        if (e.is_object() && e.value("label", "") == label) return &e;
    return nullptr;
}

double jnum(const json& e, const char* k, double fb = 0.0) {
    if (!e.contains(k) || !e.at(k).is_number()) return fb;
    return e.at(k).get<double>();
}

CheckRow missing_row(const std::string& label) {
    return CheckRow{label, "-", "-", "fits entry missing", false};
}

CheckRow band_row(const std::string& label, const json* e, const char* field,
                  bands::Interval band, const std::string& target_desc) {
    if (!e) return missing_row(label);
    double v = jnum(*e, field, std::numeric_limits<double>::quiet_NaN());
    bool ok = !std::isnan(v) && band.contains(v);
    return CheckRow{label, target_desc, fmtg(v),
                    "band [" + fmtg(band.lo) + ", " + fmtg(band.hi) + "]", ok};
}

void add_error_share(std::vector<CheckRow>& out, const json& fits) {
    if (!fits.is_array() || fits.empty() || !fits[0].is_object()) return;
    double units = jnum(fits[0], "units", 0.0);
    double errors = jnum(fits[0], "errors", 0.0);
    bool ok = units > 0 && errors <= bands::kErrorShareMax * units;
    out.push_back(CheckRow{"error share", "<= " + fmtg(bands::kErrorShareMax),
                           units > 0 ? fmtg(errors / units) : "-",
                           fmtg(errors) + " errors / " + fmtg(units) + " units", ok});
}

// CI-overlap and cross-variant agreement for dimension estimates.
void dimension_checks(std::vector<CheckRow>& out, const json& fits, bands::Interval band,
                      const std::string& what) {
    std::vector<const json*> dims;
    const json* base = nullptr;
    for (const auto& e : fits) {
        if (!e.is_object()) continue;
        std::string label = e.value("label", "");
        if (label.rfind("dimension", 0) != 0) continue;
        dims.push_back(&e);
        if (e.value("role", "") == "base") base = &e;
    }
    if (!base) {
        out.push_back(missing_row(what + " slope"));
        return;
    }
    double slope = jnum(*base, "slope");
    double clo = 0, chi = 0;
    if (base->contains("ci") && base->at("ci").is_array() && base->at("ci").size() == 2) {
        clo = base->at("ci")[0].get<double>();
        chi = base->at("ci")[1].get<double>();
    }
    bool in_band = base->value("fit_ok", false) && band.contains(slope);
    out.push_back(CheckRow{what + " slope", "[" + fmtg(band.lo) + ", " + fmtg(band.hi) + "]",
                           fmtg(slope), "ci [" + fmtg(clo) + ", " + fmtg(chi) + "]", in_band});
    bool overlap = chi >= band.lo && clo <= band.hi && base->value("fit_ok", false);
    out.push_back(CheckRow{what + " ci overlap", "ci meets band",
                           "[" + fmtg(clo) + ", " + fmtg(chi) + "]", "bootstrap 95%", overlap});
    bool agree = true;
    std::string detail;
    for (const json* d : dims) {
        if (d == base) continue;
        double s2 = jnum(*d, "slope");
        double lo2 = 0, hi2 = 0;
        if (d->contains("ci") && d->at("ci").is_array() && d->at("ci").size() == 2) {
            lo2 = d->at("ci")[0].get<double>();
            hi2 = d->at("ci")[1].get<double>();
        }
        bool pair_ok = d->value("fit_ok", false) &&
                       ((s2 >= clo && s2 <= chi) || (slope >= lo2 && slope <= hi2));
        if (!pair_ok) agree = false;
        if (!detail.empty()) detail += ", ";
        detail += d->value("label", "") + "=" + fmtg(s2);
    }
    if (dims.size() > 1)
        out.push_back(
            CheckRow{what + " sensitivity", "variants agree", agree ? "yes" : "no", detail, agree});
}

} // namespace

std::vector<CheckRow> evaluate_fits(const std::string& experiment, const json& fits) {
    std::vector<CheckRow> out;
    if (experiment == "dp-oracle") {
        const json* e = find_entry(fits, "exactness");
        if (!e) {
            out.push_back(missing_row("exactness"));
        } else {
            double total = jnum(*e, "total_mismatches", 1.0);
            out.push_back(CheckRow{"exact agreement", "0 mismatches", fmtg(total),
                                   "passage " + fmtg(jnum(*e, "bad_passage")) + ", geodesic " +
                                       fmtg(jnum(*e, "bad_geodesic")) + ", difference " +
                                       fmtg(jnum(*e, "bad_difference")),
                                   total == 0.0});
        }
    } else if (experiment == "busemann-increments") {
        for (const char* lbl : {"down-increments", "right-increments"}) {
            const json* e = find_entry(fits, lbl);
            if (!e) {
                out.push_back(missing_row(lbl));
                continue;
            }
            double mean = jnum(*e, "mean");
            bool mok = std::fabs(mean - bands::kIncrementMean) <= bands::kIncrementMeanTol;
            out.push_back(CheckRow{std::string(lbl) + " mean",
                                   fmtg(bands::kIncrementMean) + " +/- " +
                                       fmtg(bands::kIncrementMeanTol),
                                   fmtg(mean), "count " + fmtg(jnum(*e, "count")), mok});
            double p = jnum(*e, "ks_p");
            out.push_back(CheckRow{std::string(lbl) + " law", "KS p >= " + fmtg(bands::kKsAlpha),
                                   fmtg(p), "exponential, mean 2", p >= bands::kKsAlpha});
        }
        const json* ei = find_entry(fits, "independence");
        if (!ei) {
            out.push_back(missing_row("independence"));
        } else {
            double c = jnum(*ei, "corr");
            out.push_back(CheckRow{"increment independence",
                                   "|corr| <= " + fmtg(bands::kIncrementCorrMax), fmtg(c),
                                   "pairs " + fmtg(jnum(*ei, "pairs")),
                                   std::fabs(c) <= bands::kIncrementCorrMax});
        }
    } else if (experiment == "busemann-argmax") {
        const json* e = find_entry(fits, "argmax-recovery");
        if (!e) {
            out.push_back(missing_row("argmax-recovery"));
        } else {
            double f = jnum(*e, "fraction");
            out.push_back(CheckRow{"argmax recovery", "fraction = 1", fmtg(f),
                                   "count " + fmtg(jnum(*e, "count")),
                                   f == 1.0 && jnum(*e, "count") > 0});
        }
    } else if (experiment == "duality") {
        bool any = false;
        for (const auto& e : fits) {
            if (!e.is_object() || e.value("label", "").rfind("crossing-row-", 0) != 0) continue;
            any = true;
            double p = jnum(e, "ks_p");
            out.push_back(CheckRow{e.value("label", ""),
                                   "KS p >= " + fmtg(bands::kDualityAlpha), fmtg(p),
                                   "geodesic " + fmtg(jnum(e, "geodesic_count")) +
                                       " vs interface " + fmtg(jnum(e, "interface_count")),
                                   p >= bands::kDualityAlpha});
        }
        if (!any) out.push_back(missing_row("crossing-row"));
        for (const char* lbl : {"sd-slope-geodesic", "sd-slope-interface"}) {
            const json* e = find_entry(fits, lbl);
            if (e)
                out.push_back(band_row(lbl, e, "slope", bands::kCrossingSdSlope,
                                       "2/3 (crossing sd growth)"));
        }
    } else if (experiment == "transversal") {
        out.push_back(band_row("transversal slope", find_entry(fits, "transversal-slope"),
                               "slope", bands::kTransversalSlope,
                               "2/3 (transversal fluctuation)"));
    } else if (experiment == "weight-fluct") {
        out.push_back(band_row("fluctuation slope", find_entry(fits, "fluctuation-slope"),
                               "slope", bands::kWeightFluctSlope, "1/3 (value fluctuation)"));
    } else if (experiment == "disjointness") {
        out.push_back(band_row("disjointness slope", find_entry(fits, "disjointness-slope"),
                               "slope", bands::kDisjointnessSlope,
                               "1/2 (disjointness probability)"));
    } else if (experiment == "dim-z") {
        dimension_checks(out, fits, bands::kZeroSetSlope, "zero-set");
        out.push_back(band_row("nonempty rate", find_entry(fits, "nonempty-rate"), "slope",
                               bands::kZeroNonemptyRate, "2/3 (empty-fraction rate)"));
    } else if (experiment == "dim-nc-temporal") {
        dimension_checks(out, fits, bands::kTemporalNcSlope, "temporal");
        out.push_back(band_row("nonempty rate", find_entry(fits, "nonempty-rate"), "slope",
                               bands::kTemporalNonemptyRate, "1/3 (empty-fraction rate)"));
    } else if (experiment == "dim-nc-2d") {
        dimension_checks(out, fits, bands::kPlanarNcSlope, "planar");
        out.push_back(band_row("nonempty rate", find_entry(fits, "nonempty-rate"), "slope",
                               bands::kTemporalNonemptyRate, "1/3 (empty-fraction rate)"));
    } else if (experiment == "zeta-mean") {
        const json* e = find_entry(fits, "mass-mean");
        if (!e) {
            out.push_back(missing_row("mass-mean"));
        } else {
            double rel = jnum(*e, "rel_err", 1.0);
            out.push_back(CheckRow{"mass mean", "within " + fmtg(bands::kZetaMeanRelTol * 100) +
                                                    "% of " + fmtg(bands::kZetaMeanTarget),
                                   fmtg(jnum(*e, "mean")), "rel err " + fmtg(rel),
                                   rel <= bands::kZetaMeanRelTol});
        }
    } else if (experiment == "zeta-decomp") {
        const json* e = find_entry(fits, "decomposition");
        if (!e) {
            out.push_back(missing_row("decomposition"));
        } else {
            double mx = jnum(*e, "max_rel_err", 1.0);
            out.push_back(CheckRow{"decomposition", "max rel err <= " + fmtg(bands::kDecompRelTol),
                                   fmtg(mx), "pairs " + fmtg(jnum(*e, "pairs")),
                                   mx <= bands::kDecompRelTol && jnum(*e, "pairs") > 0});
        }
    } else if (experiment == "local-time") {
        const json* e = find_entry(fits, "local-time");
        if (!e || !e->contains("adjacent_ratios")) {
            out.push_back(missing_row("local-time"));
        } else {
            bool ok = true;
            std::string detail;
            for (const auto& rj : e->at("adjacent_ratios")) {
                double r = rj.get<double>();
                if (std::fabs(r - 1.0) > bands::kLocalTimeRelTol) ok = false;
                if (!detail.empty()) detail += ", ";
                detail += fmtg(r);
            }
            if (e->at("adjacent_ratios").empty()) ok = false;
            out.push_back(CheckRow{"tube-width stability",
                                   "ratios within " + fmtg(bands::kLocalTimeRelTol), detail,
                                   "adjacent width pairs", ok});
        }
    } else if (experiment == "tube-tail") {
        const json* e = find_entry(fits, "tube-tail");
        if (!e) {
            out.push_back(missing_row("tube-tail"));
        } else {
            double r2 = jnum(*e, "r2");
            bool fit_ok = e->value("fit_ok", false);
            out.push_back(CheckRow{"tail linearity", "r2 >= " + fmtg(bands::kTubeTailR2Min),
                                   fmtg(r2), "rate " + fmtg(jnum(*e, "rate")),
                                   fit_ok && r2 >= bands::kTubeTailR2Min});
            double mo = jnum(*e, "max_occupancy", 2.0);
            out.push_back(CheckRow{"occupancy bound", "<= 1", fmtg(mo), "maximum over replicas",
                                   mo <= 1.0});
        }
    } else {
        out.push_back(CheckRow{"experiment", "known", experiment, "no checks defined", false});
    }
    add_error_share(out, fits);
    return out;
}

std::vector<ExperimentInfo> list_experiments() {
    std::vector<ExperimentInfo> out;
    for (const auto& d : registry()) out.push_back(ExperimentInfo{d.name, d.summary, d.keys});
    return out;
}

int report_directory(const std::string& dir, std::string& out_text) {
    std::string man_text, fits_text;
    try {
        man_text = read_file(dir + "/manifest.json");
        fits_text = read_file(dir + "/fits.json");
    } catch (const std::exception& e) {
        out_text = std::string("missing run files: ") + e.what() + "\n";
        return 3;
    }
    json man, fits;
    try {
        man = json::parse(man_text);
        fits = json::parse(fits_text);
    } catch (const std::exception& e) {
        out_text = std::string("unreadable run files: ") + e.what() + "\n";
        return 3;
    }
    std::string experiment = man.value("experiment", "");
    std::vector<CheckRow> rows = evaluate_fits(experiment, fits);
    std::string text = "experiment: " + experiment + "\n";
    text += "units: " + std::to_string(man.value("units", 0LL)) + " (ok " +
            std::to_string(man.value("ok", 0LL)) + ", censored " +
            std::to_string(man.value("censored", 0LL)) + ", errors " +
            std::to_string(man.value("errors", 0LL)) + ")\n\n";
    char line[512];
    std::snprintf(line, sizeof line, "  %-28s %-26s %-22s %s\n", "check", "target", "fitted",
                  "verdict");
    text += line;
    bool all = true;
    for (const auto& r : rows) {
        if (!r.pass) all = false;
        std::snprintf(line, sizeof line, "  %-28s %-26s %-22s %s\n", r.label.c_str(),
                      r.target.c_str(), r.fitted.c_str(), r.pass ? "pass" : "FAIL");
        text += line;
        if (!r.detail.empty()) {
            std::snprintf(line, sizeof line, "      %s\n", r.detail.c_str());
            text += line;
        }
    }
    text += std::string("\noverall: ") + (all ? "PASS" : "FAIL") + "\n";
    out_text = text;
    return all ? 0 : 2;
}

} // namespace lpplab
