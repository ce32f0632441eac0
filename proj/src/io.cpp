#include "lpplab/io.hpp"

#include <json.hpp>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace lpplab {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    if (v == std::floor(v) && std::fabs(v) < 9007199254740992.0) { // 2^53
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    // Find the shortest precision that round-trips, so output is canonical.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open for writing: " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw Error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw Error("rename failed for " + path + ": " + std::strerror(errno));
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string results_csv(const std::vector<ResultRow>& rows) {
    std::string out = "experiment,n,replica,key,value\n";
    for (const auto& r : rows) {
        out += r.experiment;
        out += ',';
        out += std::to_string(r.n);
        out += ',';
        out += std::to_string(r.replica);
        out += ',';
        out += r.key;
        out += ',';
        out += format_double(r.value);
        out += '\n';
    }
    return out;
}

std::string profile_csv(const PassageProfile& p) {
    std::string out = "line_kind,n,index,value\n";
    const char* kind = p.line.kind == Line::Kind::Row ? "row" : "antidiagonal";
    for (long long i = p.lo; i <= p.hi; ++i) {
        out += kind;
        out += ',';
        out += std::to_string(p.line.n);
        out += ',';
        out += std::to_string(i);
        out += ',';
        out += format_double(p.at(i));
        out += '\n';
    }
    return out;
}

std::string path_csv(const std::vector<Point>& vertices) {
    std::string out = "x,y\n";
    for (const auto& v : vertices) {
        out += std::to_string(v.x);
        out += ',';
        out += std::to_string(v.y);
        out += '\n';
    }
    return out;
}

void save_grid(const DifferenceGrid& g, const std::string& base_path) {
    const auto& data = g.storage();
    std::string raw(reinterpret_cast<const char*>(data.data()),
                    data.size() * sizeof(double));
    write_file_atomic(base_path + ".f64", raw);

    nlohmann::json meta;
    meta["rows"] = g.rows();
    meta["cols"] = g.cols();
    meta["n"] = g.n;
    meta["row_first"] = g.r_lo;
    meta["row_last"] = g.r_hi;
    meta["col_halfwidth"] = g.w;
    meta["source_offset"] = g.u;
    meta["value_scale"] = g.scale;
    meta["layout"] = "row-major float64, row r = row_first + i, col k = j - col_halfwidth";
    write_file_atomic(base_path + ".json", meta.dump(2) + "\n");
}

} // namespace lpplab
