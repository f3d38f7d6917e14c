#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlsg/core.hpp"
#include "nlsg/phasediagram.hpp"

namespace nlsg::cli {

using ojson = nlohmann::ordered_json;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// "a:b:n" is n linear points, "a:b:nL" n log-spaced points; "a" alone is one point.
std::vector<double> parse_range(const std::string& spec, const std::string& field);

struct RunConfig {
    std::string command;
    double mu = 1.0;
    std::optional<double> x, t;
    std::optional<std::string> x_range, t_range;
    int genus = 2;
    SolveMode mode = SolveMode::Reduced;
    std::string out;  // empty: stdout, no sidecar
    std::string format = "csv";
    int jobs = 0;
    Tolerances tol;
    std::map<std::string, double> tol_overrides;
    Region region;
    int nx = 61, ny = 61;
    cplx z{0.0, 2.0};                 // integral-table evaluation point
    std::vector<int> criteria;        // verify-asymptotics subset, empty for all
    std::string config_file;
};

const std::vector<std::string>& commands();

// Config file first, then flags. Throws ConfigError naming the offending field.
RunConfig parse_args(int argc, char** argv);
RunConfig config_from_json(const ojson& j, RunConfig base = {});
void apply_tolerance(RunConfig& c, const std::string& key, double value);
void validate(const RunConfig& c);
ojson to_json(const RunConfig& c);

// Rectangular result: fixed columns, cells are numbers or strings.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<ojson>> rows;
    ojson extra = ojson::object();  // JSON-only payload (e.g. zero-level polylines)
};

// 17 significant digits, LF line endings, NaN as "nan"
std::string format_number(double v);
std::string to_csv(const Table& t);
// {"columns": [...], "rows": [{col: value, ...}, ...], ...extra}
ojson to_json(const Table& t);
Table table_from_json(const ojson& j);

// temp file next to the target, then rename; nothing is left behind on failure
void write_atomic(const std::string& path, const std::string& content);

struct Outcome {
    Table table;
    int n_points = 0;
    std::vector<double> failed;
    ojson notes = ojson::object();
};

Outcome execute(const RunConfig& c);

// 0 on success, 2 when some grid points failed, 1 on a fatal error
int run(const RunConfig& c, std::ostream& out, std::ostream& err);
int main_entry(int argc, char** argv);

}  // namespace nlsg::cli
