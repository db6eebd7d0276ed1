#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "darboux/commands.hpp"
#include "darboux/config.hpp"
#include "darboux/errors.hpp"
#include "darboux/io.hpp"
#include "helpers.hpp"

using namespace darboux;
namespace fs = std::filesystem;

namespace {

RunConfig config_in(const fs::path& dir, const std::string& text) {
    RunConfig c = parse_config(text);
    c.output_directory = dir.string();
    return c;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::ifstream in(path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        rows.push_back(fields);
    }
    return rows;
}

std::vector<double> legend_lengths(const std::string& svg) {
    std::vector<double> out;
    for (std::size_t at = svg.find(" L="); at != std::string::npos; at = svg.find(" L=", at + 1)) {
        out.push_back(std::stod(svg.substr(at + 3)));
    }
    return out;
}

std::size_t count(const std::string& haystack, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t at = haystack.find(needle); at != std::string::npos; at = haystack.find(needle, at + 1)) ++n;
    return n;
}

int cli(const std::string& args) {
    const std::string command = std::string(DARBOUX_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kGreatCircle = R"({"curve": {"fourier": {"u": {"offset": 1.5707963267948966}, "v": {"slope": 1}}}})";
const char* kLatitude = R"({"curve": {"fourier": {"u": {"offset": 1.0471975511965976}, "v": {"slope": 1}}}})";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(-INFINITY) == "-inf");
}

TEST_CASE("analyze a great circle") {
    const auto dir = testing::scratch_dir("analyze-gc");
    std::ostringstream log;
    CHECK(analyze_command(config_in(dir, kGreatCircle), log) == 0);
    const std::string summary = testing::slurp(dir / "summary.json");
    CHECK(summary.find("\"geodesic\": true") != std::string::npos);
    CHECK(summary.find("\"principal\": true") != std::string::npos);
    CHECK(summary.find("\"asymptotic\": false") != std::string::npos);
    const auto rows = read_csv(dir / "curve.csv");
    REQUIRE(rows.size() == 513);
    CHECK(rows[0].size() == 14);
    CHECK(testing::slurp(dir / "curve.csv").rfind(std::string(kCurveCsvHeader) + "\n", 0) == 0);
}

TEST_CASE("analyze a latitude circle") {
    const auto dir = testing::scratch_dir("analyze-lat");
    std::ostringstream log;
    CHECK(analyze_command(config_in(dir, kLatitude), log) == 0);
    const auto rows = read_csv(dir / "curve.csv");
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][8]) == doctest::Approx(0.5774).epsilon(1e-4));
}

TEST_CASE("analyze a straight line on the plane") {
    const auto dir = testing::scratch_dir("analyze-line");
    std::ostringstream log;
    const auto c = config_in(dir, R"({"surface": {"kind": "plane"},
        "curve": {"closed": false, "period": 2, "n": 64, "fourier": {"u": {"slope": 1}, "v": {"offset": 0.3, "slope": 0.5}}}})");
    CHECK(analyze_command(c, log) == 0);
    const auto rows = read_csv(dir / "curve.csv");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        for (std::size_t col : {8u, 9u, 10u, 11u}) CHECK(std::abs(std::stod(rows[i][col])) <= 1e-10);
        CHECK(rows[i][12] == "nan");
        CHECK(rows[i][13] == "nan");
    }
}

TEST_CASE("verify on the negative control alone passes and marks it") {
    const auto dir = testing::scratch_dir("verify-d");
    std::ostringstream log;
    const auto c = config_in(dir, R"({"verify": {"families": ["d"]}})");
    CHECK(verify_command(c, log) == 0);
    CHECK(log.str().find("fails as expected (negative control)") != std::string::npos);
    const std::string json = testing::slurp(dir / "verify.json");
    CHECK(json.find("negative control: length is not preserved") != std::string::npos);
}

TEST_CASE("verify reports the psi adjudication and fails on the printed forms") {
    const auto dir = testing::scratch_dir("verify-c");
    std::ostringstream log;
    CHECK(verify_command(config_in(dir, R"({"verify": {"families": ["c"]}})"), log) == 3);
    CHECK(log.str().find("psi constraints on family c") != std::string::npos);
    CHECK(log.str().find("neither psi k_g form holds") != std::string::npos);
}

TEST_CASE("halving N grows verify residuals about fourfold") {
    RunConfig c = parse_config(R"({"verify": {"families": ["a"]}})");
    const auto fine = run_verification(c);
    c.verify.n = 512;
    c.verify.dt = 2e-4;
    const auto coarse = run_verification(c);
    for (std::size_t i = 0; i < fine.fine.size(); ++i) {
        if (fine.fine[i].identity != "frame_T") continue;
        CHECK(coarse.fine[i].max_residual / fine.fine[i].max_residual == doctest::Approx(4.0).epsilon(0.25));
    }
}

TEST_CASE("simulate, render and the length legend") {
    const auto dir = testing::scratch_dir("rotation");
    std::ostringstream log;
    // Rotation of a latitude circle about the polar axis: every snapshot has the same length.
    const auto c = config_in(dir, R"({"curve": {"n": 128, "fourier": {"u": {"offset": 1.0471975511965976}, "v": {"slope": 1}}},
        "flow": {"f1_mode": "prescribed", "f1": "1", "f2": "0"},
        "simulation": {"dt": 0.01, "steps": 90, "snapshot_stride": 10}})");
    CHECK(simulate_command(c, log) == 0);
    CHECK(render_command(dir / "snapshots.csv", dir / "trajectory.svg", log) == 0);
    const std::string svg = testing::slurp(dir / "trajectory.svg");
    CHECK(count(svg, "<polygon") == 10);
    const auto lengths = legend_lengths(svg);
    REQUIRE(lengths.size() == 10);
    for (double l : lengths) CHECK(std::abs(l - lengths[0]) <= 1e-6);
    const std::string diagnostics = testing::slurp(dir / "diagnostics.jsonl");
    CHECK(count(diagnostics, "\n") == 91);
    CHECK(diagnostics.rfind("{\"step\":0,\"t\":0.0,\"L\":", 0) == 0);
}

TEST_CASE("single snapshot renders one closed polyline of N points") {
    const auto dir = testing::scratch_dir("single");
    std::ostringstream log;
    const auto c = config_in(dir, R"({"curve": {"n": 64, "fourier": {"u": {"offset": 1.5707963267948966}, "v": {"slope": 1}}},
        "flow": {"f2": "0"}, "simulation": {"steps": 1, "snapshot_stride": 5}})");
    CHECK(simulate_command(c, log) == 0);
    CHECK(render_command(dir / "snapshots.csv", dir / "one.svg", log) == 0);
    const std::string svg = testing::slurp(dir / "one.svg");
    CHECK(count(svg, "<polygon") == 1);
    const auto start = svg.find("points=\"");
    const auto end = svg.find('"', start + 8);
    CHECK(count(svg.substr(start, end - start), ",") == 64);
}

TEST_CASE("negative control drifts and the legend shows decay") {
    const auto dir = testing::scratch_dir("negative");
    std::ostringstream log;
    const auto c = config_in(dir, R"({"curve": {"n": 128, "fourier": {"u": {"offset": 1.0471975511965976}, "v": {"slope": 1}}},
        "flow": {"f1_mode": "prescribed", "f1": "0", "f2": "1"},
        "simulation": {"dt": 0.001, "steps": 100, "snapshot_stride": 1, "drift_tolerance": 0.001}})");
    try {
        (void)simulate_command(c, log);
        FAIL("expected DriftExceeded");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DriftExceeded);
    }
    CHECK(render_command(dir / "snapshots.csv", dir / "trajectory.svg", log) == 0);
    const auto lengths = legend_lengths(testing::slurp(dir / "trajectory.svg"));
    REQUIRE(lengths.size() >= 2);
    for (std::size_t i = 1; i < lengths.size(); ++i) CHECK(lengths[i] < lengths[i - 1]);
}

TEST_CASE("empty trajectory") {
    const auto dir = testing::scratch_dir("empty");
    {
        std::ofstream out(dir / "snapshots.csv");
        write_snapshot_header(out, true);
    }
    std::ostringstream log;
    try {
        (void)render_command(dir / "snapshots.csv", dir / "x.svg", log);
        FAIL("expected EmptyTrajectory");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyTrajectory);
    }
}

TEST_CASE("malformed snapshot file") {
    std::istringstream in("# closed=true\nt,index\n");
    CHECK_THROWS_AS((void)read_snapshots(in), Error);
}

TEST_CASE("overrides") {
    const auto c = apply_overrides(default_config(), {std::string("x"), 256, 0.5, 3, 2.0});
    CHECK(c.output_directory == "x");
    CHECK(c.curve.n == 256);
    CHECK(c.verify.n == 256);
    CHECK(c.simulation.dt == 0.5);
    CHECK(c.simulation.steps == 3);
    CHECK(c.tolerances.scale == 2.0);
    CHECK_THROWS_AS((void)apply_overrides(default_config(), {std::nullopt, 4, {}, {}, {}}), Error);
}

TEST_CASE("command-line exit codes") {
    const auto dir = testing::scratch_dir("exit-codes");
    CHECK(cli("analyze --out " + (dir / "ok").string()) == 0);
    CHECK(cli("analyze --n 4 --out " + dir.string()) == 2);
    CHECK(cli("analyze --config " + (dir / "missing.json").string()) == 4);
    CHECK(cli("frobnicate") == 2);
    {
        std::ofstream bad(dir / "bad.json");
        bad << R"({"surface": {"kind": "torus", "ring_radius": 1, "tube_radius": 2}})";
    }
    CHECK(cli("analyze --config " + (dir / "bad.json").string()) == 2);
    CHECK(cli("verify --out " + (dir / "v").string()) == 3);
    CHECK(cli("render --snapshots " + (dir / "none.csv").string() + " --out " + dir.string()) == 4);
}

}
