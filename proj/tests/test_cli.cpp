// End-to-end tests of the command-line tool: exit codes, config validation
// with line-precise messages, CSV/JSON artifacts, determinism of reports,
// blow-up flagging, superposition gap reporting, and table reproduction.
//
// The binary path is injected by the build as CKLH_CLI_PATH.
#include "cklh/cklh.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout and stderr combined
};

RunResult run_cli(const std::string& args)
{
    const std::string cmd = std::string("\"") + CKLH_CLI_PATH + "\" " + args + " 2>&1";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::fgets(buf, sizeof buf, pipe) != nullptr) {
        out += buf;
    }
    const int rc = ::pclose(pipe);
    RunResult r;
    r.output = out;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

/// Fresh scratch directory under the system temp root, unique to this
/// process and wiped per call.
fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path()
                         / ("cklh-cli-" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json read_json(const fs::path& path) { return json::parse(read_text(path)); }

/// Parse a CSV written by the tool into header + numeric rows.
std::pair<std::vector<std::string>, std::vector<std::vector<double>>>
read_csv(const fs::path& path)
{
    std::istringstream in(read_text(path));
    std::string line;
    REQUIRE(std::getline(in, line));
    std::vector<std::string> header;
    {
        std::istringstream h(line);
        std::string field;
        while (std::getline(h, field, ',')) {
            header.push_back(field);
        }
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream r(line);
        std::string field;
        std::vector<double> row;
        while (std::getline(r, field, ',')) {
            row.push_back(std::stod(field));
        }
        REQUIRE(row.size() == header.size());
        rows.push_back(row);
    }
    return {header, rows};
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

} // namespace

TEST_CASE("cli usage: help, missing subcommand, bad arguments")
{
    const RunResult help = run_cli("--help");
    CHECK(help.exit_code == 0);
    CHECK(help.output.find("simulate") != std::string::npos);
    CHECK(help.output.find("superpose") != std::string::npos);
    CHECK(help.output.find("sweep") != std::string::npos);

    CHECK(run_cli("").exit_code == 2);

    const RunResult bad = run_cli("verify no-such-suite");
    CHECK(bad.exit_code == 2);
    CHECK(bad.output.find("unknown verification suite") != std::string::npos);

    CHECK(run_cli("table table9").exit_code == 2);
}

TEST_CASE("cli verify: passing suite, deterministic byte-identical reports")
{
    const fs::path a = scratch("verify-a");
    const fs::path b = scratch("verify-b");

    const RunResult ra = run_cli("verify brackets --seed 5 --samples 40 --out " + q(a));
    CHECK(ra.exit_code == 0);
    CHECK(ra.output.find("[PASS]") != std::string::npos);
    CHECK(ra.output.find("[FAIL]") == std::string::npos);

    const RunResult rb = run_cli("verify brackets --seed 5 --samples 40 --out " + q(b));
    CHECK(rb.exit_code == 0);

    const std::string ja = read_text(a / "verify_brackets.json");
    const std::string jb = read_text(b / "verify_brackets.json");
    CHECK(!ja.empty());
    CHECK(ja == jb);

    const json report = json::parse(ja);
    CHECK(report.at("schema") == "cklh-verify/1");
    CHECK(report.at("pass") == true);
    CHECK(report.at("failed") == 0);
    REQUIRE(report.at("checks").is_array());
    REQUIRE(!report.at("checks").empty());
    for (const json& c : report.at("checks")) {
        CHECK(c.at("pass") == true);
        CHECK(c.at("residual").get<double>() <= c.at("threshold").get<double>());
    }
}

TEST_CASE("cli simulate: trig-class scenario produces monotone finite trajectories")
{
    const fs::path dir = scratch("simulate-min");
    const fs::path cfg = dir / "config.json";
    write_text(cfg, R"({
  "schema": "cklh-scenario/1",
  "system": "class_i4",
  "kappas": [1.0],
  "coefficients": {
    "b1": 0.4,
    "b2": {"preset": "sinusoid", "amplitude": 0.3, "omega": 1.0},
    "b3": -0.2
  },
  "time": {"start": 0.0, "end": 2.0, "samples": 41},
  "initial_states": [[0.9, 0.2], [1.3, 0.5]]
})");

    const RunResult r = run_cli("simulate --config " + q(cfg) + " --out " + q(dir));
    INFO(r.output);
    REQUIRE(r.exit_code == 0);

    const json manifest = read_json(dir / "manifest.json");
    CHECK(manifest.at("schema") == "cklh-run/1");
    CHECK(manifest.at("config").at("system") == "class_i4");
    REQUIRE(manifest.at("trajectories").size() == 2);
    for (const json& tr : manifest.at("trajectories")) {
        CHECK(tr.at("status") == "complete");
        CHECK(tr.at("blow_up") == false);
        CHECK(tr.at("rows") == 41);
    }

    const auto [header, rows] = read_csv(dir / "trajectory_0.csv");
    REQUIRE(header == std::vector<std::string>{"t", "x", "y"});
    REQUIRE(rows.size() == 41);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (double v : rows[i]) {
            CHECK(std::isfinite(v));
        }
        if (i > 0) {
            CHECK(rows[i][0] > rows[i - 1][0]);
        }
    }
    CHECK(rows.front()[0] == 0.0);
    CHECK(rows.back()[0] == Catch::Approx(2.0));
}

TEST_CASE("cli simulate: diagonal initial state rejected with a line-cited message")
{
    const fs::path dir = scratch("simulate-diag");
    const fs::path cfg = dir / "config.json";
    write_text(cfg, R"({
  "schema": "cklh-scenario/1",
  "system": "class_i4",
  "kappas": [1.0],
  "coefficients": {"b1": 1.0},
  "time": {"start": 0.0, "end": 1.0},
  "initial_states": [[0.5, 0.5]]
})");

    const RunResult r = run_cli("simulate --config " + q(cfg) + " --out " + q(dir));
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("initial_states") != std::string::npos);
    CHECK(r.output.find("x != y") != std::string::npos);
    // Line-precise: the message cites config.json:<line of "initial_states">.
    CHECK(r.output.find("config.json:7") != std::string::npos);
}

TEST_CASE("cli simulate: blow-up is flagged in the manifest and partial CSV is written")
{
    const fs::path dir = scratch("simulate-blowup");
    const fs::path cfg = dir / "config.json";
    // Flat 1D Riccati dx/dt = 1 + x^2 from x(0) = 0: escapes at t = pi/2.
    write_text(cfg, R"({
  "schema": "cklh-scenario/1",
  "system": "riccati_1d",
  "kappas": [0.0],
  "coefficients": {"b1": 1.0, "b3": 1.0},
  "time": {"start": 0.0, "end": 3.0, "samples": 101},
  "initial_states": [[0.0]]
})");

    const RunResult r = run_cli("simulate --config " + q(cfg) + " --out " + q(dir));
    INFO(r.output);
    REQUIRE(r.exit_code == 0); // blow-up is reported, not an error

    const json manifest = read_json(dir / "manifest.json");
    const json& tr = manifest.at("trajectories").at(0);
    CHECK(tr.at("status") == "blow_up");
    CHECK(tr.at("blow_up") == true);
    const double reached = tr.at("t_end").get<double>();
    CHECK(reached > 1.0);
    CHECK(reached < 2.0); // escape time is pi/2 = 1.5708

    const auto [header, rows] = read_csv(dir / "trajectory_0.csv");
    REQUIRE(header == std::vector<std::string>{"t", "x"});
    REQUIRE(rows.size() > 10); // partial trajectory still written
    CHECK(rows.back()[0] <= reached + 1e-9);
    for (const auto& row : rows) {
        CHECK(std::isfinite(row[1]));
    }
}

TEST_CASE("cli simulate: svg plot emitted on request")
{
    const fs::path dir = scratch("simulate-svg");
    const fs::path cfg = dir / "config.json";
    write_text(cfg, R"({
  "schema": "cklh-scenario/1",
  "system": "ermakov_neg",
  "kappas": [-1.0],
  "params": {"lambda": 0.8},
  "coefficients": {"omega": {"preset": "sinusoid", "amplitude": 0.1, "omega": 0.9,
                             "phase": 0.5, "offset": 0.25}},
  "time": {"start": 0.0, "end": 2.0, "samples": 81},
  "initial_states": [[1.0, 0.8]]
})");

    const RunResult r = run_cli("simulate --config " + q(cfg) + " --out " + q(dir) + " --svg");
    INFO(r.output);
    REQUIRE(r.exit_code == 0);
    const std::string svg = read_text(dir / "trajectory_0.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("polyline") != std::string::npos);
    const json manifest = read_json(dir / "manifest.json");
    CHECK(manifest.at("trajectories").at(0).at("svg") == "trajectory_0.svg");
}

TEST_CASE("cli config validation: unknown keys and schema mismatches are cited")
{
    const fs::path dir = scratch("config-errors");

    const fs::path bogus = dir / "bogus.json";
    write_text(bogus, R"({
  "schema": "cklh-scenario/1",
  "system": "class_i4",
  "kappas": [1.0],
  "bogus": 1,
  "initial_states": [[0.9, 0.2]]
})");
    const RunResult rb = run_cli("simulate --config " + q(bogus));
    CHECK(rb.exit_code == 2);
    CHECK(rb.output.find("key 'bogus'") != std::string::npos);
    CHECK(rb.output.find("bogus.json:5") != std::string::npos);

    const fs::path old = dir / "old.json";
    write_text(old, R"({"schema": "cklh-scenario/0", "system": "class_i4",
                        "kappas": 1.0, "initial_states": [[0.9, 0.2]]})");
    const RunResult ro = run_cli("simulate --config " + q(old));
    CHECK(ro.exit_code == 2);
    CHECK(ro.output.find("unsupported schema") != std::string::npos);

    const fs::path broken = dir / "broken.json";
    write_text(broken, "{\n  \"schema\": \"cklh-scenario/1\",\n");
    const RunResult rj = run_cli("simulate --config " + q(broken));
    CHECK(rj.exit_code == 2);
    CHECK(rj.output.find("JSON parse error") != std::string::npos);

    const fs::path wrong_arity = dir / "arity.json";
    write_text(wrong_arity, R"({
  "schema": "cklh-scenario/1",
  "system": "class_p2",
  "kappas": [1.0],
  "initial_states": [[0.3, 0.45]]
})");
    const RunResult ra = run_cli("simulate --config " + q(wrong_arity));
    CHECK(ra.exit_code == 2);
    CHECK(ra.output.find("2 curvature label(s)") != std::string::npos);
}

TEST_CASE("cli superpose: hidden-state round-trip reconstructs within tolerance")
{
    const fs::path dir = scratch("superpose-hidden");
    const fs::path cfg = dir / "config.json";
    write_text(cfg, R"({
  "schema": "cklh-scenario/1",
  "system": "class_i4",
  "kappas": [0.5],
  "coefficients": {
    "b1": {"preset": "sinusoid", "amplitude": 0.2, "omega": 2.1},
    "b2": {"preset": "sinusoid", "amplitude": 0.15, "omega": 1.7, "phase": 0.3},
    "b3": {"preset": "sinusoid", "amplitude": 0.12, "omega": 2.3, "phase": 1.0}
  },
  "time": {"start": 0.0, "end": 5.0, "samples": 61},
  "particulars": [[0.7, -0.15], [1.6, 0.8]],
  "hidden": [1.1, 0.35]
})");

    const RunResult r = run_cli("superpose --config " + q(cfg) + " --out " + q(dir));
    INFO(r.output);
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("PASS") != std::string::npos);

    const json report = read_json(dir / "superpose.json");
    CHECK(report.at("schema") == "cklh-superpose/1");
    CHECK(report.at("pass") == true);
    CHECK(report.at("max_deviation").get<double>() <= 1e-6);
    CHECK(report.at("mu").size() == 2);

    const auto [header, rows] = read_csv(dir / "reconstruction.csv");
    REQUIRE(header == std::vector<std::string>{"t", "x", "y", "ref_x", "ref_y", "deviation"});
    CHECK(rows.size() == 61);
    for (const auto& row : rows) {
        CHECK(row[5] <= 1e-6);
    }

    // Same scenario with an absurdly tight tolerance must fail with exit 1.
    const fs::path tight_cfg = dir / "tight.json";
    write_text(tight_cfg, R"({
  "schema": "cklh-scenario/1",
  "system": "class_i4",
  "kappas": [0.5],
  "coefficients": {
    "b1": {"preset": "sinusoid", "amplitude": 0.2, "omega": 2.1},
    "b2": {"preset": "sinusoid", "amplitude": 0.15, "omega": 1.7, "phase": 0.3},
    "b3": {"preset": "sinusoid", "amplitude": 0.12, "omega": 2.3, "phase": 1.0}
  },
  "time": {"start": 0.0, "end": 3.0, "samples": 31},
  "tolerances": {"superpose": 1e-30},
  "particulars": [[0.7, -0.15], [1.6, 0.8]],
  "hidden": [1.1, 0.35]
})");
    const RunResult tight = run_cli("superpose --config " + q(tight_cfg) + " --out "
                                    + q(scratch("superpose-tight")));
    CHECK(tight.exit_code == 1);
    CHECK(tight.output.find("FAIL") != std::string::npos);
}

TEST_CASE("cli superpose: inadmissible branch windows are reported as gaps")
{
    // Calibrate in-process: scan for superposition constants whose branch
    // discriminant is negative at the initial time, so the reconstruction
    // must open with a gap window.
    const double kappa = 1.0;
    const cklh::I4State p0{0.9, 0.2};
    const cklh::I4State p1{1.3, 0.5};
    double mu1 = 0.0, mu2 = 0.0;
    bool found = false;
    for (double m1 = -8.0; m1 <= 8.0 && !found; m1 += 0.5) {
        for (double m2 = -8.0; m2 <= 8.0 && !found; m2 += 0.5) {
            if (cklh::i4_superposition_data(kappa, p0, p1, m1, m2).Xi < 0.0) {
                mu1 = m1;
                mu2 = m2;
                found = true;
            }
        }
    }
    REQUIRE(found);

    const fs::path dir = scratch("superpose-gaps");
    const fs::path cfg = dir / "config.json";
    std::ostringstream cfg_text;
    cfg_text << R"({
  "schema": "cklh-scenario/1",
  "system": "class_i4",
  "kappas": [1.0],
  "coefficients": {"b1": 0.4, "b2": 0.1, "b3": -0.2},
  "time": {"start": 0.0, "end": 2.0, "samples": 41},
  "particulars": [[0.9, 0.2], [1.3, 0.5]],
  "mu": [)" << mu1 << ", " << mu2 << "]\n}";
    write_text(cfg, cfg_text.str());

    const RunResult r = run_cli("superpose --config " + q(cfg) + " --out " + q(dir));
    INFO(r.output);
    REQUIRE(r.exit_code == 0); // no hidden reference: gaps are reported, not failed
    CHECK(r.output.find("gap") != std::string::npos);

    const json report = read_json(dir / "superpose.json");
    CHECK(report.at("gap_samples").get<int>() > 0);
    REQUIRE(report.at("gaps").is_array());
    CHECK(!report.at("gaps").empty());
    CHECK(report.at("gap_samples").get<int>() + report.at("reconstructed").get<int>()
          == report.at("samples").get<int>());
}

TEST_CASE("cli superpose: config preconditions are enforced")
{
    const fs::path dir = scratch("superpose-errors");

    // Generic curved product space: no closed-form rule is shipped.
    const fs::path both = dir / "both.json";
    write_text(both, R"({
  "schema": "cklh-scenario/1",
  "system": "class_p2",
  "kappas": [0.3, 0.4],
  "particulars": [[0.3, 0.45], [-0.2, 0.7]],
  "mu": [0.5, 0.5]
})");
    const RunResult rb = run_cli("superpose --config " + q(both));
    CHECK(rb.exit_code == 2);
    CHECK(rb.output.find("kappa2 = 0") != std::string::npos);

    // Hidden and mu together are ambiguous.
    const fs::path ambiguous = dir / "ambiguous.json";
    write_text(ambiguous, R"({
  "schema": "cklh-scenario/1",
  "system": "class_i4",
  "kappas": [0.0],
  "particulars": [[0.9, 0.2], [1.3, 0.5]],
  "mu": [0.5, 0.5],
  "hidden": [0.4, -0.3]
})");
    const RunResult ra = run_cli("superpose --config " + q(ambiguous));
    CHECK(ra.exit_code == 2);
    CHECK(ra.output.find("exactly one of") != std::string::npos);

    // Coincident particular solutions degenerate the rule.
    const fs::path coincident = dir / "coincident.json";
    write_text(coincident, R"({
  "schema": "cklh-scenario/1",
  "system": "class_i4",
  "kappas": [0.0],
  "particulars": [[0.9, 0.2], [0.9, 0.2]],
  "mu": [0.5, 0.5]
})");
    const RunResult rc = run_cli("superpose --config " + q(coincident));
    CHECK(rc.exit_code == 2);
    CHECK(rc.output.find("coincide") != std::string::npos);
}

TEST_CASE("cli superpose: three-solution rule for the curved 1D equation")
{
    const fs::path dir = scratch("superpose-riccati");
    const fs::path cfg = dir / "config.json";
    write_text(cfg, R"({
  "schema": "cklh-scenario/1",
  "system": "riccati_1d",
  "kappas": [1.0],
  "coefficients": {
    "b1": {"preset": "sinusoid", "amplitude": 0.2, "omega": 2.1},
    "b2": {"preset": "sinusoid", "amplitude": 0.15, "omega": 1.7, "phase": 0.3},
    "b3": {"preset": "sinusoid", "amplitude": 0.12, "omega": 2.3, "phase": 1.0}
  },
  "time": {"start": 0.0, "end": 5.0, "samples": 51},
  "particulars": [[0.0], [0.8], [1.5]],
  "hidden": [0.4]
})");

    const RunResult r = run_cli("superpose --config " + q(cfg) + " --out " + q(dir));
    INFO(r.output);
    REQUIRE(r.exit_code == 0);
    const json report = read_json(dir / "superpose.json");
    CHECK(report.at("pass") == true);
    CHECK(report.at("max_deviation").get<double>() <= 1e-6);
    CHECK(report.at("mu").size() == 1);
    const auto [header, rows] = read_csv(dir / "reconstruction.csv");
    REQUIRE(header == std::vector<std::string>{"t", "x", "ref_x", "deviation"});
    CHECK(rows.size() == 51);
}

TEST_CASE("cli table: rows reproduce general formulas; domain violations skip rows")
{
    const fs::path dir = scratch("table");

    const RunResult r2 = run_cli("table table2 --point 1 2 --out " + q(dir));
    INFO(r2.output);
    CHECK(r2.exit_code == 0);
    const json t2 = read_json(dir / "table_table2.json");
    CHECK(t2.at("schema") == "cklh-table/1");
    CHECK(t2.at("pass") == true);
    CHECK(t2.at("evaluated").get<int>() >= 1);
    CHECK(t2.at("skipped").get<int>() == 0);

    // y = 0 sits on the singular line of the product-space row: that row is
    // skipped with a note, the others still evaluate and agree.
    const RunResult r1 = run_cli("table table1 --point 0.3 0 --out " + q(dir));
    INFO(r1.output);
    CHECK(r1.exit_code == 0);
    CHECK(r1.output.find("SKIPPED") != std::string::npos);
    const json t1 = read_json(dir / "table_table1.json");
    CHECK(t1.at("pass") == true);
    CHECK(t1.at("evaluated").get<int>() >= 1);
    CHECK(t1.at("skipped").get<int>() >= 1);

    const RunResult r3 = run_cli("table table3 --point 0.3 0.7 --out " + q(dir));
    INFO(r3.output);
    CHECK(r3.exit_code == 0);
    const json t3 = read_json(dir / "table_table3.json");
    CHECK(t3.at("evaluated").get<int>() == 9);
    for (const json& row : t3.at("rows")) {
        CHECK(row.at("skipped") == false);
        CHECK(row.at("max_mismatch").get<double>() <= 1e-12);
    }
}

TEST_CASE("cli sweep: per-epsilon distances and fitted slopes near one")
{
    const fs::path dir = scratch("sweep");
    const RunResult r = run_cli("sweep --out " + q(dir));
    INFO(r.output);
    REQUIRE(r.exit_code == 0);

    const json report = read_json(dir / "sweep.json");
    CHECK(report.at("schema") == "cklh-sweep/1");
    CHECK(report.at("pass") == true);
    REQUIRE(report.at("cases").size() == 4);
    for (const json& c : report.at("cases")) {
        const double slope = c.at("slope").get<double>();
        CHECK(slope >= 0.9);
        CHECK(slope <= 1.1);
        CHECK(c.at("pass") == true);
    }

    const std::string raw = read_text(dir / "sweep.csv");
    CHECK(raw.rfind("case,epsilon,distance\n", 0) == 0);
    const std::size_t lines = static_cast<std::size_t>(
        std::count(raw.begin(), raw.end(), '\n'));
    CHECK(lines == 1 + 4 * report.at("epsilons").size());
}
