#include <doctest.h>

#include <cmath>
#include <map>

#include "darboux/errors.hpp"
#include "darboux/family.hpp"
#include "darboux/stencil.hpp"
#include "helpers.hpp"

using namespace darboux;
using testing::kPi;

namespace {

std::map<std::string, ResidualReport> by_identity(const std::vector<ResidualReport>& reports) {
    std::map<std::string, ResidualReport> out;
    for (const auto& r : reports) out[r.identity] = r;
    return out;
}

FramedFamily family(const std::string& label) {
    for (auto& f : builtin_families()) {
        if (f.label == label) return f;
    }
    FAIL("no such family");
    return {};
}

}  // namespace

TEST_SUITE("family") {

TEST_CASE("catalog has five labelled families") {
    const auto all = builtin_families();
    REQUIRE(all.size() == 5);
    CHECK(all[0].label == "a");
    CHECK(all[4].label == "e");
    CHECK_FALSE(all[3].inextensible);
    CHECK_FALSE(all[3].arclength_uniform);
}

TEST_CASE("unit-speed families sample at unit speed") {
    for (const char* label : {"a", "b", "c", "e"}) {
        const auto slice = sample_family(family(label), 0.0, 512);
        for (double v : slice.scalars.speed) CHECK(v == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("torus knot arclength table") {
    const TorusKnotArclength table;
    CHECK(table.length() == doctest::Approx(31.8986006664123).epsilon(1e-12));
    double last = -1;
    for (int i = 0; i <= 20; ++i) {
        const double s = table.length() * i / 20.0;
        const double w = table.parameter(s);
        CHECK(w > last);
        last = w;
        const double speed = std::sqrt(4 * std::pow(2 + std::cos(3 * w), 2) + 9);
        CHECK(table.parameter_rate(s) * speed == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("adaptedness and unit speed are enforced") {
    FramedFamily bad = translating_circle();
    bad.normal = [](double u, double) { return Vector3{-std::sin(u), std::cos(u), 0}; };
    try {
        (void)sample_family(bad, 0.0, 128);
        FAIL("expected AdaptednessViolation");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::AdaptednessViolation);
    }

    FramedFamily fast = translating_circle();
    fast.position = [](double u, double t) { return Vector3{2 * std::cos(u), 2 * std::sin(u), t}; };
    fast.position_u = [](double u, double) { return Vector3{-2 * std::sin(u), 2 * std::cos(u), 0}; };
    try {
        (void)sample_family(fast, 0.0, 128);
        FAIL("expected RequiresUnitSpeed");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::RequiresUnitSpeed);
    }
}

TEST_CASE("velocity decomposition reconstructs the velocity") {
    for (const auto& f : builtin_families()) {
        const auto d = decompose_velocity(f, 0.0, 512, 1e-4);
        CHECK(d.reconstruction_error < 1e-12);
    }
    // Helix on a widening cylinder: the normal speed is the widening rate.
    const auto d = decompose_velocity(widening_helix(0.6, 0.1, 2.0), 0.0, 512, 1e-4);
    for (double f3 : d.f3) CHECK(f3 == doctest::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("shrinking latitude loses length at rate pi") {
    const auto a = arclength_variation(shrinking_latitude(kPi / 3), 0.0, 1024, 1e-4);
    CHECK(a.dS_dt == doctest::Approx(-kPi).epsilon(1e-6));
    const auto b = arclength_variation(translating_circle(), 0.0, 1024, 1e-4);
    CHECK(std::abs(b.dS_dt) <= 1e-6);
}

TEST_CASE("tolerance model") {
    ToleranceModel m;
    m.constant = 10;
    m.scale = 2;
    CHECK(m.tolerance(2 * kPi, 100, 0.01) == doctest::Approx(20 * (std::pow(2 * kPi / 100, 2) + 1e-4)));
}

TEST_CASE("speed variation and frame evolution hold at second order on the rotating circle") {
    const auto f = family("a");
    const auto fine = by_identity(all_residuals(f, 0.0, 1024, 1e-4));
    const auto coarse = by_identity(all_residuals(f, 0.0, 512, 2e-4));
    CHECK(fine.at("speed_variation").pass);
    for (const char* id : {"frame_T", "frame_g", "frame_n"}) {
        CHECK(fine.at(id).holds);
        CHECK(coarse.at(id).max_residual / fine.at(id).max_residual == doctest::Approx(4.0).epsilon(0.1));
    }
}

TEST_CASE("derived curvature evolution holds where the printed forms do not") {
    for (const char* label : {"a", "c", "e"}) {
        const auto r = by_identity(all_residuals(family(label), 0.0, 1024, 1e-4));
        CHECK(r.at("kg_evolution.full").holds);
        CHECK(r.at("kn_evolution.full").holds);
        CHECK(r.at("tg_evolution.full").holds);
    }
    // The printed k_g form misses psi k_n; on the tilted circle that term is 1/2.
    const auto a = by_identity(all_residuals(family("a"), 0.0, 1024, 1e-4));
    CHECK(a.at("kg_evolution").max_residual == doctest::Approx(0.5).epsilon(1e-3));
    CHECK_FALSE(a.at("kg_evolution").pass);
}

TEST_CASE("psi k_g variants on the widening helix") {
    const auto c = by_identity(all_residuals(family("c"), 0.0, 1024, 1e-4));
    CHECK(c.at("psi_kn_constraint").holds);
    CHECK(c.at("psi_kg_constraint.f3s").max_residual == doctest::Approx(0.16).epsilon(1e-3));
    // The proof variant leaves exactly the widening rate.
    CHECK(c.at("psi_kg_constraint.f2s").max_residual == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("geodesic specializations apply on the helix") {
    const auto c = by_identity(all_residuals(family("c"), 0.0, 1024, 1e-4));
    for (const char* id : {"speed_variation.geodesic", "inextensibility.geodesic", "frame_T.geodesic",
                           "frame_g.geodesic", "frame_n.geodesic", "kn_evolution.geodesic", "tg_evolution.geodesic",
                           "psi_kn_constraint.geodesic"}) {
        CHECK_MESSAGE(c.at(id).applicable, id);
        CHECK_MESSAGE(c.at(id).pass, id);
    }
    CHECK_FALSE(c.at("frame_T.asymptotic").applicable);
}

TEST_CASE("shrinking latitude is the negative control") {
    AnalysisOptions options;
    options.require_unit_speed = false;
    const auto d = by_identity(all_residuals(family("d"), 0.0, 1024, 1e-4, options));
    const auto& inext = d.at("inextensibility");
    CHECK_FALSE(inext.expected_to_hold);
    CHECK_FALSE(inext.holds);
    CHECK(inext.pass);
    CHECK(inext.max_residual >= 0.1);
    CHECK(std::abs(inext.auxiliary) >= 0.5);
    CHECK(d.at("speed_variation").pass);
    CHECK(d.at("frame_T.principal").pass);
    CHECK_FALSE(d.at("kg_evolution").applicable);
    CHECK(d.at("kg_evolution").note.find("not inextensible") != std::string::npos);
}

TEST_CASE("frame forms need unit speed unless told otherwise") {
    const auto f = family("d");
    const auto jet = family_jet(f, 0.0, 256, 1e-4);
    CHECK_THROWS_AS((void)frame_evolution_residuals(f, jet), Error);
    CHECK_THROWS_AS((void)curvature_evolution_residuals(f, jet), Error);
    const auto skipped = by_identity(all_residuals(f, 0.0, 256, 1e-4));
    CHECK_FALSE(skipped.at("frame_T").applicable);
}

TEST_CASE("convergence comparison") {
    ResidualReport fine;
    fine.identity = "x";
    fine.family = "a";
    fine.max_residual = 1e-4;
    ResidualReport coarse = fine;
    coarse.max_residual = 4e-4;
    auto r = compare_resolutions({coarse}, {fine});
    REQUIRE(r.size() == 1);
    CHECK(r[0].ratio == doctest::Approx(4.0));
    CHECK(r[0].converged);
    coarse.max_residual = 2e-4;
    CHECK_FALSE(compare_resolutions({coarse}, {fine})[0].converged);
    coarse.max_residual = 2e-6;
    fine.max_residual = 1e-6;
    CHECK(compare_resolutions({coarse}, {fine})[0].converged);
}

}
