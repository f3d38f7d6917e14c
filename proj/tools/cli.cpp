#include "cli.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

namespace nlsg::cli {

namespace {

double parse_number(const std::string& s, const std::string& field) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw ConfigError("field '" + field + "': not a number: '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

SolveMode parse_mode(const std::string& s) {
    if (s == "full") return SolveMode::Full;
    if (s == "reduced") return SolveMode::Reduced;
    if (s == "auto") return SolveMode::Auto;
    throw ConfigError("field 'mode': expected full, reduced or auto, got '" + s + "'");
}

std::string mode_name(SolveMode m) {
    switch (m) {
        case SolveMode::Full: return "full";
        case SolveMode::Reduced: return "reduced";
        case SolveMode::Auto: return "auto";
    }
    return "?";
}

Region parse_region(const std::string& s) {
    const auto p = split(s, ':');
    if (p.size() != 4) throw ConfigError("field 'region': expected re_min:re_max:im_min:im_max");
    return {parse_number(p[0], "region"), parse_number(p[1], "region"), parse_number(p[2], "region"),
            parse_number(p[3], "region")};
}

cplx parse_point(const std::string& s) {
    const auto p = split(s, ',');
    if (p.size() != 2) throw ConfigError("field 'z': expected RE,IM");
    return {parse_number(p[0], "z"), parse_number(p[1], "z")};
}

}  // namespace

std::vector<double> parse_range(const std::string& spec, const std::string& field) {
    const auto p = split(spec, ':');
    if (p.size() == 1) return {parse_number(p[0], field)};
    if (p.size() != 3) throw ConfigError("field '" + field + "': expected a:b:n or a:b:nL, got '" + spec + "'");
    const double a = parse_number(p[0], field), b = parse_number(p[1], field);
    std::string ns = p[2];
    const bool log = !ns.empty() && (ns.back() == 'L' || ns.back() == 'l');
    if (log) ns.pop_back();
    const double nd = parse_number(ns, field);
    if (nd != std::floor(nd) || nd < 1) throw ConfigError("field '" + field + "': point count must be a positive integer");
    const int n = int(nd);
    if (log && !(a > 0 && b > 0)) throw ConfigError("field '" + field + "': log grid needs positive ends");
    if (n > 1 && a == b) throw ConfigError("field '" + field + "': grid ends coincide");
    std::vector<double> g(n);
    for (int k = 0; k < n; ++k) {
        const double s = n == 1 ? 0.0 : double(k) / (n - 1);
        g[k] = log ? a * std::pow(b / a, s) : a + s * (b - a);
    }
    if (n > 1) g.back() = b;
    return g;
}

const std::vector<std::string>& commands() {
    static const std::vector<std::string> c{"branch-points",  "alpha2-lt",          "first-break-curve",
                                            "obstruction-curve", "im-h-grid",       "verify-asymptotics",
                                            "integral-table"};
    return c;
}

void apply_tolerance(RunConfig& c, const std::string& key, double v) {
    if (key == "quad_abs") c.tol.quad_abs = v;
    else if (key == "newton_res") c.tol.newton_res = v;
    else if (key == "newton_max_iter") c.tol.newton_max_iter = int(v);
    else if (key == "contour_clearance") c.tol.contour_clearance = v;
    else throw ConfigError("field 'tol': unknown key '" + key + "'");
    c.tol_overrides[key] = v;
}

RunConfig config_from_json(const ojson& j, RunConfig c) {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    for (const auto& [key, v] : j.items()) {
        auto num = [&]() {
            if (!v.is_number()) throw ConfigError("config field '" + key + "': expected a number");
            return v.get<double>();
        };
        auto str = [&]() {
            if (!v.is_string()) throw ConfigError("config field '" + key + "': expected a string");
            return v.get<std::string>();
        };
        if (key == "command") c.command = str();
        else if (key == "mu") c.mu = num();
        else if (key == "x") c.x = num();
        else if (key == "t") c.t = num();
        else if (key == "x_range") c.x_range = str();
        else if (key == "t_range") c.t_range = str();
        else if (key == "genus") c.genus = int(num());
        else if (key == "mode") c.mode = parse_mode(str());
        else if (key == "out") c.out = str();
        else if (key == "format") c.format = str();
        else if (key == "jobs") c.jobs = int(num());
        else if (key == "nx") c.nx = int(num());
        else if (key == "ny") c.ny = int(num());
        else if (key == "region") c.region = parse_region(str());
        else if (key == "z") c.z = parse_point(str());
        else if (key == "criteria") {
            if (!v.is_array()) throw ConfigError("config field 'criteria': expected an array");
            c.criteria = v.get<std::vector<int>>();
        } else if (key == "tol") {
            if (!v.is_object()) throw ConfigError("config field 'tol': expected an object");
            for (const auto& [k, tv] : v.items()) {
                if (!tv.is_number()) throw ConfigError("config field 'tol." + k + "': expected a number");
                apply_tolerance(c, k, tv.get<double>());
            }
        } else {
            throw ConfigError("config: unknown field '" + key + "'");
        }
    }
    return c;
}

void validate(const RunConfig& c) {
    const auto& cmds = commands();
    if (std::find(cmds.begin(), cmds.end(), c.command) == cmds.end())
        throw ConfigError("field 'command': unknown command '" + c.command + "'");
    if (!(c.mu > 0 && c.mu < 2)) throw ConfigError("field 'mu': needs 0 < mu < 2");
    if (c.genus != 0 && c.genus != 2) throw ConfigError("field 'genus': expected 0 or 2");
    if (c.format != "csv" && c.format != "json") throw ConfigError("field 'format': expected csv or json");
    if (c.nx < 2 || c.ny < 2) throw ConfigError("field 'nx'/'ny': need at least 2");
    if (c.jobs < 0) throw ConfigError("field 'jobs': must be >= 0");
    try {
        c.tol.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("field 'tol': ") + e.what());
    }
    for (int id : c.criteria)
        if (id < 1 || id > 10) throw ConfigError("field 'criteria': ids run from 1 to 10");
}

ojson to_json(const RunConfig& c) {
    ojson j;
    j["command"] = c.command;
    j["mu"] = c.mu;
    if (c.x) j["x"] = *c.x;
    if (c.t) j["t"] = *c.t;
    if (c.x_range) j["x_range"] = *c.x_range;
    if (c.t_range) j["t_range"] = *c.t_range;
    j["genus"] = c.genus;
    j["mode"] = mode_name(c.mode);
    j["format"] = c.format;
    j["jobs"] = c.jobs;
    j["nx"] = c.nx;
    j["ny"] = c.ny;
    j["region"] = format_number(c.region.re_min) + ":" + format_number(c.region.re_max) + ":" +
                  format_number(c.region.im_min) + ":" + format_number(c.region.im_max);
    j["z"] = format_number(c.z.real()) + "," + format_number(c.z.imag());
    j["tol"] = {{"quad_abs", c.tol.quad_abs},
                {"newton_res", c.tol.newton_res},
                {"newton_max_iter", c.tol.newton_max_iter},
                {"contour_clearance", c.tol.contour_clearance}};
    if (!c.criteria.empty()) j["criteria"] = c.criteria;
    return j;
}

RunConfig parse_args(int argc, char** argv) {
    CLI::App app{"Phase-diagram and g-function computations for the focusing NLS box problem"};
    app.set_help_flag("-h,--help");
    std::string command, mode, region, z, x_range, t_range, out, format, config;
    double mu = 1, x = 0, t = 0;
    int genus = 2, jobs = 0, nx = 61, ny = 61;
    std::vector<std::string> tols;
    std::vector<int> criteria;
    app.add_option("command", command, "one of: branch-points, alpha2-lt, first-break-curve, obstruction-curve, "
                                       "im-h-grid, verify-asymptotics, integral-table")
        ->required();
    app.add_option("--config", config, "JSON file with any of the fields below; flags override it");
    app.add_option("--mu", mu, "0 < mu < 2");
    app.add_option("--x", x);
    app.add_option("--t", t);
    app.add_option("--x-range", x_range, "a:b:n (linear) or a:b:nL (log)");
    app.add_option("--t-range", t_range, "a:b:n (linear) or a:b:nL (log)");
    app.add_option("--genus", genus, "0 or 2");
    app.add_option("--mode", mode, "full, reduced or auto");
    app.add_option("--out", out, "output path (stdout when absent)");
    app.add_option("--format", format, "csv or json");
    app.add_option("--jobs", jobs, "worker threads for grid sampling (0: all cores)");
    app.add_option("--tol", tols, "KEY=VAL: quad_abs, newton_res, newton_max_iter, contour_clearance");
    app.add_option("--region", region, "re_min:re_max:im_min:im_max for im-h-grid");
    app.add_option("--nx", nx);
    app.add_option("--ny", ny);
    app.add_option("--z", z, "RE,IM evaluation point for integral-table");
    app.add_option("--criteria", criteria, "subset of acceptance checks for verify-asymptotics");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        std::exit(0);
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    RunConfig c;
    if (!config.empty()) {
        std::ifstream in(config);
        if (!in) throw ConfigError("config: cannot open '" + config + "'");
        ojson j;
        try {
            j = ojson::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("config '" + config + "': " + e.what());
        }
        c = config_from_json(j);
        c.config_file = config;
    }
    c.command = command;
    auto given = [&](const char* name) { return app.count(name) > 0; };
    if (given("--mu")) c.mu = mu;
    if (given("--x")) c.x = x;
    if (given("--t")) c.t = t;
    if (given("--x-range")) c.x_range = x_range;
    if (given("--t-range")) c.t_range = t_range;
    if (given("--genus")) c.genus = genus;
    if (given("--mode")) c.mode = parse_mode(mode);
    if (given("--out")) c.out = out;
    if (given("--format")) c.format = format;
    if (given("--jobs")) c.jobs = jobs;
    if (given("--region")) c.region = parse_region(region);
    if (given("--nx")) c.nx = nx;
    if (given("--ny")) c.ny = ny;
    if (given("--z")) c.z = parse_point(z);
    if (given("--criteria")) c.criteria = criteria;
    for (const auto& kv : tols) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("field 'tol': expected KEY=VAL, got '" + kv + "'");
        apply_tolerance(c, kv.substr(0, eq), parse_number(kv.substr(eq + 1), "tol"));
    }
    return c;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv(const Table& t) {
    std::string s;
    for (std::size_t k = 0; k < t.columns.size(); ++k) s += (k ? "," : "") + t.columns[k];
    s += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) s += ",";
            const ojson& v = row[k];
            if (v.is_number_float()) s += format_number(v.get<double>());
            else if (v.is_number()) s += std::to_string(v.get<long long>());
            else if (v.is_string()) s += v.get<std::string>();
            else if (v.is_boolean()) s += v.get<bool>() ? "1" : "0";
            else s += "nan";
        }
        s += "\n";
    }
    return s;
}

ojson to_json(const Table& t) {
    ojson j;
    j["columns"] = t.columns;
    ojson rows = ojson::array();
    for (const auto& row : t.rows) {
        ojson r = ojson::object();
        for (std::size_t k = 0; k < row.size(); ++k) r[t.columns[k]] = row[k];
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    for (const auto& [k, v] : t.extra.items()) j[k] = v;
    return j;
}

Table table_from_json(const ojson& j) {
    Table t;
    t.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
        std::vector<ojson> row;
        for (const auto& c : t.columns) row.push_back(r.at(c));
        t.rows.push_back(std::move(row));
    }
    for (const auto& [k, v] : j.items())
        if (k != "columns" && k != "rows") t.extra[k] = v;
    return t;
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot write '" + path + "': cannot create " + tmp.string());
        f << content;
        f.flush();
        if (!f) {
            f.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("cannot write '" + path + "': write failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ec2;
        fs::remove(tmp, ec2);
        throw IoError("cannot write '" + path + "': " + ec.message());
    }
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        validate(c);
        o = execute(c);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    const int status = o.failed.empty() ? 0 : 2;
    const std::string body = c.format == "json" ? to_json(o.table).dump(2) + "\n" : to_csv(o.table);
    try {
        if (c.out.empty()) {
            out << body;
        } else {
            write_atomic(c.out, body);
            ojson meta;
            meta["command"] = c.command;
            meta["config"] = to_json(c);
            if (!c.config_file.empty()) meta["config_file"] = c.config_file;
            meta["columns"] = o.table.columns;
            meta["n_points"] = o.n_points;
            meta["n_failed"] = o.failed.size();
            meta["failed"] = o.failed;
            meta["notes"] = o.notes;
            meta["exit_status"] = status;
            meta["elapsed_seconds"] =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            const std::time_t now = std::time(nullptr);
            char stamp[32];
            std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
            meta["finished_utc"] = stamp;
            write_atomic(c.out + ".meta.json", meta.dump(2) + "\n");
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    if (status == 2) err << "warning: " << o.failed.size() << " of " << o.n_points << " points failed\n";
    return status;
}

int main_entry(int argc, char** argv) {
    RunConfig c;
    try {
        c = parse_args(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return run(c, std::cout, std::cerr);
}

}  // namespace nlsg::cli
