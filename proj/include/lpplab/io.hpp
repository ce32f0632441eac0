#pragma once

#include "lpplab/common.hpp"
#include "lpplab/geodesic.hpp"
#include "lpplab/lpp.hpp"
#include "lpplab/profile.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lpplab {

// Shortest round-trip decimal form of a double (%.17g trimmed), identical
// across thread counts and runs.
std::string format_double(double v);

// Write via a temporary file in the same directory plus rename, so readers
// never observe partial files.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// FNV-1a 64 digest, hex.
std::string fnv1a_hex(const std::string& bytes);

// One observation row of an experiment: long format.
struct ResultRow {
    std::string experiment;
    long long n = 0;
    long long replica = 0;
    std::string key;
    double value = 0.0;
};

std::string results_csv(const std::vector<ResultRow>& rows);

// line_kind,n,index,value
std::string profile_csv(const PassageProfile& p);
// x,y per vertex
std::string path_csv(const std::vector<Point>& vertices);

// Raw binary dump of a difference grid (row-major doubles) plus a JSON
// sidecar describing geometry and scale constants.
void save_grid(const DifferenceGrid& g, const std::string& base_path);

} // namespace lpplab
