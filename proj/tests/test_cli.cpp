#include <doctest.h>

#include <lpplab/bands.hpp>
#include <lpplab/experiments.hpp>
#include <lpplab/io.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using namespace lpplab;

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) { return read_file(p.string()); }

} // namespace

TEST_CASE("config parsing accepts the documented forms") {
    Config c = parse_config(R"({"experiment":"zeta-mean","replicas":3,"master_seed":"0x10",
                               "threads":2,"n":64,"a":-0.25})");
    CHECK(c.experiment == "zeta-mean");
    CHECK(c.replicas == 3);
    CHECK(c.master_seed == 16);
    CHECK(c.threads == 2);
    REQUIRE(c.n_list.size() == 1);
    CHECK(c.n_list[0] == 64);
    CHECK(c.num("a", 0.0) == -0.25);
    CHECK(c.num("b", 0.5) == 0.5); // default when absent
    CHECK(c.inum("cell_budget", 123) == 123);
    CHECK(c.ns_or({99}).front() == 64);
    Config d = parse_config(R"({"experiment":"zeta-mean","replicas":1})");
    CHECK(d.master_seed == 1);
    CHECK(d.ns_or({99}).front() == 99);
}

TEST_CASE("config parsing rejects malformed documents") {
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"([1,2])"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"replicas":3})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"experiment":"no-such","replicas":3})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"experiment":"zeta-mean"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"experiment":"zeta-mean","replicas":0})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"experiment":"zeta-mean","replicas":2,"bogus":1})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"experiment":"zeta-mean","replicas":2,"n":4,"n_list":[4]})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"experiment":"zeta-mean","replicas":2,"n":0})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"experiment":"zeta-mean","replicas":2,"threads":0})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"experiment":"zeta-mean","replicas":2,"master_seed":-4})"),
                    ConfigError);
    // eps_list belongs to disjointness, not zeta-mean
    CHECK_THROWS_AS(parse_config(R"({"experiment":"zeta-mean","replicas":2,"eps_list":[0.1]})"),
                    ConfigError);
}

TEST_CASE("the experiment registry lists every documented study") {
    std::vector<ExperimentInfo> xs = list_experiments();
    CHECK(xs.size() == 14);
    for (const auto& x : xs) {
        CHECK(!x.name.empty());
        CHECK(!x.summary.empty());
    }
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j) CHECK(xs[i].name != xs[j].name);
}

TEST_CASE("doubles and result rows render canonically") {
    CHECK(format_double(20.0) == "20");
    CHECK(format_double(-3.0) == "-3");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(0.5) == "0.5");
    double v = 0.1;
    CHECK(std::stod(format_double(v * 3)) == v * 3);

    std::vector<ResultRow> rows{{"demo", 8, 0, "k", 1.5}, {"demo", 8, 1, "k", 2.0}};
    std::string csv = results_csv(rows);
    CHECK(csv.rfind("experiment,n,replica,key,value\n", 0) == 0);
    CHECK(csv.find("demo,8,0,k,1.5\n") != std::string::npos);
    CHECK(csv.find("demo,8,1,k,2\n") != std::string::npos);

    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") != fnv1a_hex("b"));
}

TEST_CASE("runs are deterministic across repetition and thread count") {
    Config cfg = parse_config(R"({"experiment":"zeta-mean","replicas":6,"master_seed":5,"n":128})");
    fs::path d1 = fresh_dir("lpplab-test-det1");
    fs::path d2 = fresh_dir("lpplab-test-det2");
    fs::path d3 = fresh_dir("lpplab-test-det3");
    RunSummary s1 = run_experiment(cfg, 1, d1.string());
    RunSummary s2 = run_experiment(cfg, 1, d2.string());
    RunSummary s3 = run_experiment(cfg, 3, d3.string());
    CHECK(s1.ok == 6);
    CHECK(!s1.failed);
    CHECK(slurp(d1 / "results.csv") == slurp(d2 / "results.csv"));
    CHECK(slurp(d1 / "fits.json") == slurp(d2 / "fits.json"));
    CHECK(slurp(d1 / "results.csv") == slurp(d3 / "results.csv"));
    CHECK(slurp(d1 / "fits.json") == slurp(d3 / "fits.json"));

    // The manifest digests name the exact artifact bytes.
    nlohmann::json m = nlohmann::json::parse(slurp(d1 / "manifest.json"));
    CHECK(m["files"]["results.csv"].get<std::string>() == fnv1a_hex(slurp(d1 / "results.csv")));
    CHECK(m["files"]["fits.json"].get<std::string>() == fnv1a_hex(slurp(d1 / "fits.json")));
    CHECK(m["replica_status"].size() == 6);
    CHECK(m["version"].get<std::string>() == kVersion);

    for (const fs::path& d : {d1, d2, d3}) fs::remove_all(d);
}

TEST_CASE("the exact-arithmetic oracle study finds no mismatches") {
    Config cfg = parse_config(R"({"experiment":"dp-oracle","replicas":50,"master_seed":9})");
    fs::path dir = fresh_dir("lpplab-test-dp");
    RunSummary s = run_experiment(cfg, 0, dir.string());
    CHECK(s.units == 50);
    CHECK(s.errors == 0);
    CHECK(!s.failed);

    std::ifstream f(dir / "results.csv");
    REQUIRE(f.good());
    std::string line;
    std::getline(f, line);
    CHECK(line == "experiment,n,replica,key,value");
    long long bad_rows = 0, data_rows = 0;
    while (std::getline(f, line)) {
        ++data_rows;
        if (line.find("bad_") != std::string::npos && line.rfind(",0") != line.size() - 2)
            ++bad_rows;
    }
    CHECK(data_rows >= 3 * s.ok);
    CHECK(bad_rows == 0);
    fs::remove_all(dir);
}

TEST_CASE("unit failures are counted and can fail the whole run") {
    // An absurd cell budget forces a budget error in every replica.
    Config cfg = parse_config(
        R"({"experiment":"zeta-mean","replicas":4,"master_seed":2,"n":4096,"cell_budget":10})");
    fs::path dir = fresh_dir("lpplab-test-err");
    RunSummary s = run_experiment(cfg, 0, dir.string());
    CHECK(s.errors == 4);
    CHECK(s.ok == 0);
    CHECK(s.failed);
    nlohmann::json m = nlohmann::json::parse(slurp(dir / "manifest.json"));
    std::string st = m["replica_status"][0].get<std::string>();
    CHECK(st.rfind("error:", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("report rendering distinguishes missing, failing and passing runs") {
    std::string text;
    fs::path empty = fresh_dir("lpplab-test-report-empty");
    fs::create_directories(empty);
    CHECK(report_directory(empty.string(), text) == 3);
    CHECK(text.find("manifest.json") != std::string::npos);

    Config cfg =
        parse_config(R"({"experiment":"zeta-mean","replicas":40,"master_seed":11,"n":128})");
    fs::path dir = fresh_dir("lpplab-test-report");
    run_experiment(cfg, 0, dir.string());
    text.clear();
    int rc = report_directory(dir.string(), text);
    CHECK((rc == 0 || rc == 2));
    CHECK(text.find("zeta-mean") != std::string::npos);
    CHECK(text.find("mass mean") != std::string::npos);
    CHECK(text.find("error share") != std::string::npos);
    fs::remove_all(dir);
    fs::remove_all(empty);
}

TEST_CASE("acceptance bands are closed intervals") {
    bands::Interval i{0.25, 0.75};
    CHECK(i.contains(0.25));
    CHECK(i.contains(0.75));
    CHECK(i.contains(0.5));
    CHECK(!i.contains(0.2499999));
    CHECK(!i.contains(0.7500001));
}
