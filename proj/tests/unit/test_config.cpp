#include <doctest.h>

#include <filesystem>
#include <string>

#include "darboux/config.hpp"
#include "darboux/errors.hpp"
#include "helpers.hpp"

using namespace darboux;

namespace {

Error failure(const std::string& text) {
    try {
        (void)parse_config(text);
    } catch (const Error& e) {
        return e;
    }
    FAIL("expected an error for " << text);
    return Error(ErrorKind::IoError, "");
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("minimal great circle config takes the defaults") {
    const auto c = parse_config(R"({"surface": {"kind": "sphere"},
        "curve": {"fourier": {"u": {"offset": 1.5707963267948966}, "v": {"slope": 1}}}})");
    CHECK(c.curve.n == 512);
    CHECK(c.curve.closed);
    CHECK(c.surface.radius == 1.0);
    CHECK(c.simulation.dt == 1e-3);
    CHECK(c.verify.n == 1024);
    CHECK(c.output_directory == "out");
    CHECK(c == parse_config("{}"));
}

TEST_CASE("empty document echoes every default") {
    const std::string text = emit_config(parse_config("{}"));
    for (const char* key : {"\"surface\"", "\"curve\"", "\"flow\"", "\"simulation\"", "\"verify\"",
                            "\"tolerances\"", "\"output_directory\"", "\"closure_policy\"", "\"drift_tolerance\""}) {
        CHECK(text.find(key) != std::string::npos);
    }
}

TEST_CASE("torus with a tube wider than its ring") {
    const Error e = failure(R"({"surface": {"kind": "torus", "ring_radius": 1, "tube_radius": 2}})");
    CHECK(e.kind() == ErrorKind::ValidationError);
    CHECK(e.detail() == "surface.tube_radius: tube radius exceeds ring radius");
}

TEST_CASE("unknown and misplaced keys are rejected by name") {
    CHECK(failure(R"({"curve": {"nn": 3}})").detail() == "curve.nn: unknown key");
    CHECK(failure(R"({"colour": 1})").detail() == "colour: unknown key");
    CHECK(failure(R"({"surface": {"kind": "torus", "radius": 1}})").detail() ==
          "surface.radius: not a parameter of a torus surface");
    CHECK(failure(R"({"curve": {"fourier": {"w": {}}}})").detail() == "curve.fourier.w: unknown key");
}

TEST_CASE("type and value errors name the field") {
    CHECK(failure(R"({"curve": {"n": "many"}})").detail() == "curve.n: expected a non-negative integer");
    CHECK(failure(R"({"curve": {"n": 8}})").detail() == "curve.n: needs at least 16 samples");
    CHECK(failure(R"({"simulation": {"dt": 0}})").detail() == "simulation.dt: must be positive");
    CHECK(failure(R"({"flow": {"closure_policy": "loose"}})").kind() == ErrorKind::ValidationError);
    CHECK(failure(R"({"verify": {"families": ["z"]}})").detail() == "verify.families: unknown family 'z'");
    CHECK(failure(R"({"surface": {"kind": "klein"}})").detail() == "surface.kind: unknown surface kind 'klein'");
    CHECK(failure(R"({"simulation": {"dt": 0.1, "steps": 20, "horizon": 1}})").detail() ==
          "simulation.steps: dt * steps exceeds the horizon");
}

TEST_CASE("closed curves may only wind along periodic axes") {
    const Error e = failure(R"({"surface": {"kind": "plane"}, "curve": {"fourier": {"u": {"slope": 1}}}})");
    CHECK(e.detail() == "curve.fourier.u.slope: a closed curve cannot wind along a non-periodic chart axis");
    const Error half = failure(R"({"curve": {"fourier": {"u": {"offset": 1}, "v": {"slope": 0.5}}}})");
    CHECK(half.detail() == "curve.fourier.v.slope: a closed curve must wind a whole number of times");
    CHECK_NOTHROW((void)parse_config(
        R"({"surface": {"kind": "plane"}, "curve": {"closed": false, "period": 1, "fourier": {"u": {"slope": 1}}}})"));
}

TEST_CASE("malformed JSON reports line and column") {
    const Error e = failure("{\n  \"curve\": {\n    \"n\": 12,\n  }\n}");
    CHECK(e.kind() == ErrorKind::ParseError);
    CHECK(e.detail().rfind("line 4, column 3", 0) == 0);
}

TEST_CASE("expression errors are parse errors naming the field") {
    const Error e = failure(R"({"flow": {"f2": "sin(s"}})");
    CHECK(e.kind() == ErrorKind::ParseError);
    CHECK(e.detail().rfind("flow.f2: column 6", 0) == 0);
    CHECK(failure(R"({"surface": {"kind": "monge", "height": "u*w"}})").detail().rfind("surface.height:", 0) == 0);
}

TEST_CASE("round trips") {
    for (const char* text : {
             "{}",
             R"({"surface": {"kind": "torus", "ring_radius": 3, "tube_radius": 0.5},
                 "curve": {"fourier": {"u": {"slope": 2, "cos": [0.1]}, "v": {"slope": 3, "sin": [0, 0.2]}}},
                 "flow": {"f2": "cos(t) * kg", "f1_mode": "prescribed", "f1": "1"},
                 "simulation": {"horizon": 2}})",
             R"({"surface": {"kind": "monge", "height": "0.5*u*u - 0.5*v*v", "u_range": [-2, 2]},
                 "curve": {"closed": false, "period": 1,
                           "samples": [[0,0],[0.1,0],[0.2,0],[0.3,0],[0.4,0],[0.5,0],[0.6,0],[0.7,0],
                                       [0.8,0],[0.9,0],[1.0,0],[1.1,0],[1.2,0],[1.3,0],[1.4,0],[1.5,0]]},
                 "verify": {"families": ["c", "d"]}, "output_directory": "elsewhere"})",
         }) {
        const RunConfig first = parse_config(text);
        const std::string emitted = emit_config(first);
        const RunConfig second = parse_config(emitted);
        CHECK(first == second);
        CHECK(emit_config(second) == emitted);
    }
}

TEST_CASE("documented simulate config is already canonical") {
    const auto path = std::filesystem::path(DARBOUX_SOURCE_DIR) / "docs" / "simulate-great-circle.json";
    const std::string text = testing::slurp(path);
    REQUIRE_FALSE(text.empty());
    CHECK(emit_config(load_config(path)) == text);
}

TEST_CASE("missing file is an I/O error") {
    try {
        (void)load_config("/nonexistent/darboux.json");
        FAIL("expected IoError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::IoError);
    }
}

TEST_CASE("builders") {
    const auto c = parse_config(R"({"curve": {"n": 64}, "flow": {"f2": "2 * s + L"}, "tolerances": {"scale": 3}})");
    const auto curve = make_curve(c);
    CHECK(curve.size() == 64);
    CHECK(curve.closed());
    const auto spec = make_flow_spec(c);
    FlowPoint p;
    p.s = 1;
    p.length = 5;
    CHECK(spec.f2(p) == 7);
    CHECK(make_simulation_config(c).n == 64);
    CHECK(make_analysis_options(c).tolerance.scale == 3);
}

}
