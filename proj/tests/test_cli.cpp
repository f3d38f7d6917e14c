#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "doctest.h"

using namespace nlsg;
using namespace nlsg::cli;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::filesystem::path scratch_dir() {
    auto d = std::filesystem::temp_directory_path() / ("nlsg_cli_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("range specs") {
    CHECK(parse_range("0.5", "t") == std::vector<double>{0.5});
    const auto lin = parse_range("0:1:5", "t");
    REQUIRE(lin.size() == 5);
    CHECK(lin[1] == doctest::Approx(0.25));
    CHECK(lin.back() == 1.0);
    const auto lg = parse_range("1:1000:4L", "t");
    REQUIRE(lg.size() == 4);
    CHECK(lg[1] == doctest::Approx(10.0));
    CHECK(lg.back() == 1000.0);
    CHECK(parse_range("2:1:3", "x")[1] == doctest::Approx(1.5));
    CHECK_THROWS_AS(parse_range("1:2", "t"), ConfigError);
    CHECK_THROWS_AS(parse_range("1:2:0", "t"), ConfigError);
    CHECK_THROWS_AS(parse_range("0:2:3L", "t"), ConfigError);
    CHECK_THROWS_AS(parse_range("1:1:3", "t"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_range("a:2:3", "t_range"), doctest::Contains("t_range"), ConfigError);
}

TEST_CASE("numbers keep 17 significant digits and round-trip") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) CHECK(std::stod(format_number(v)) == v);
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("CSV layout: header, one row per line, LF endings") {
    Table t;
    t.columns = {"t", "tag", "n"};
    t.rows = {{1.5, "I1", 3}, {2.0, "H2", 4}};
    CHECK(to_csv(t) == "t,tag,n\n1.5,I1,3\n2,H2,4\n");
}

TEST_CASE("tables round-trip through JSON bit-identically") {
    Table t;
    t.columns = {"a", "b"};
    t.rows = {{0.1 + 0.2, 1.0 / 7.0}, {-1e-310, 12345.678901234567}};
    t.extra["zero_level"] = ojson::array({ojson::array({0.25, 0.5})});
    const Table back = table_from_json(ojson::parse(to_json(t).dump()));
    REQUIRE(back.rows.size() == 2);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) {
            const double u = t.rows[r][c].get<double>(), v = back.rows[r][c].get<double>();
            CHECK(std::memcmp(&u, &v, sizeof u) == 0);
        }
    CHECK(back.extra["zero_level"][0][1].get<double>() == 0.5);
    CHECK(to_json(back).dump() == to_json(t).dump());
}

TEST_CASE("atomic writes replace the target and leave nothing on failure") {
    const auto dir = scratch_dir();
    const std::string path = (dir / "out.csv").string();
    write_atomic(path, "first\n");
    write_atomic(path, "second\n");
    CHECK(slurp(path) == "second\n");
    CHECK_THROWS_AS(write_atomic((dir / "missing" / "x.csv").string(), "x"), IoError);
    int files = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        (void)e;
        ++files;
    }
    CHECK(files == 1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("config file fields and validation messages") {
    const RunConfig c = config_from_json(ojson::parse(R"({"command": "alpha2-lt", "mu": 0.8, "x": 1.0,
        "t_range": "50:100:3", "tol": {"newton_res": 1e-9}})"));
    CHECK(c.command == "alpha2-lt");
    CHECK(c.mu == 0.8);
    CHECK(c.tol.newton_res == 1e-9);
    CHECK_THROWS_WITH_AS(config_from_json(ojson::parse(R"({"colour": 1})")), doctest::Contains("colour"), ConfigError);
    CHECK_THROWS_WITH_AS(config_from_json(ojson::parse(R"({"mu": "one"})")), doctest::Contains("mu"), ConfigError);
    RunConfig bad = c;
    bad.mu = 2.5;
    CHECK_THROWS_WITH_AS(validate(bad), doctest::Contains("mu"), ConfigError);
    bad = c;
    bad.format = "xml";
    CHECK_THROWS_AS(validate(bad), ConfigError);
    bad = c;
    CHECK_THROWS_AS(apply_tolerance(bad, "speed", 1), ConfigError);
}

TEST_CASE("flags override the config file") {
    const auto dir = scratch_dir();
    const std::string cfg = (dir / "run.json").string();
    write_atomic(cfg, R"({"mu": 0.5, "x": 1.0, "t": 100})");
    const char* argv[] = {"nlsg_cli", "alpha2-lt", "--config", cfg.c_str(), "--mu", "0.9", "--tol", "quad_abs=1e-11"};
    const RunConfig c = parse_args(8, const_cast<char**>(argv));
    CHECK(c.mu == 0.9);
    CHECK(*c.x == 1.0);
    CHECK(*c.t == 100.0);
    CHECK(c.tol.quad_abs == 1e-11);
    std::filesystem::remove_all(dir);
}

TEST_CASE("exit codes: 0 on success, 2 on partial failure, 1 on invalid input") {
    std::ostringstream out, err;
    RunConfig c;
    c.command = "alpha2-lt";
    c.x = 1.0;
    c.t_range = "50:100:2";
    CHECK(run(c, out, err) == 0);
    c.t_range = "0.5:100:2";  // no starting guess below t = 1
    CHECK(run(c, out, err) == 2);
    c.t_range = "5:5:3";
    CHECK(run(c, out, err) == 1);
    c.t_range.reset();
    CHECK(run(c, out, err) == 1);
    c.command = "nope";
    CHECK(run(c, out, err) == 1);
}

TEST_CASE("identical configs give byte-identical CSV") {
    const auto dir = scratch_dir();
    RunConfig c;
    c.command = "obstruction-curve";
    c.t_range = "20:200:3L";
    std::ostringstream out, err;
    c.out = (dir / "a.csv").string();
    REQUIRE(run(c, out, err) == 0);
    c.out = (dir / "b.csv").string();
    REQUIRE(run(c, out, err) == 0);
    const std::string a = slurp((dir / "a.csv").string());
    CHECK(a == slurp((dir / "b.csv").string()));
    CHECK(a.rfind("t,x_c,x_asymptote,gap,iterations,residual\n", 0) == 0);
    CHECK(std::filesystem::exists(dir / "a.csv.meta.json"));
    std::filesystem::remove_all(dir);
}
