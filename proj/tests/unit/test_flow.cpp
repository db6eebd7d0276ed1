#include <doctest.h>

#include <cmath>

#include "darboux/errors.hpp"
#include "darboux/flow.hpp"
#include "darboux/stencil.hpp"
#include "helpers.hpp"

using namespace darboux;
using testing::kPi;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::IoError;
}

FlowSpec balanced_sine() {
    FlowSpec spec;
    spec.f2 = [](const FlowPoint& p) { return std::sin(2 * kPi * p.s / p.length); };
    spec.closure = ClosurePolicy::Balance;
    return spec;
}

}  // namespace

TEST_SUITE("flow") {

TEST_CASE("integrated f1 on a great circle needs no shift") {
    const auto c = testing::latitude(kPi / 2, 256);
    const auto s = analyze(c);
    std::vector<double> f2(256, 1.0);
    const auto f = integrate_f1(s, c.step(), true, f2, std::vector<double>(256, 0.0), 0.5, ClosurePolicy::Strict);
    CHECK(f.shift == 0.0);
    for (double x : f.f1) CHECK(x == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("closure policies on a latitude circle") {
    const auto c = testing::latitude(kPi / 3, 256);
    const auto s = analyze(c);
    const std::vector<double> zero(256, 0.0);
    CHECK(kind_of([&] {
              (void)integrate_f1(s, c.step(), true, std::vector<double>(256, 1.0), zero, 0.0, ClosurePolicy::Strict);
          }) == ErrorKind::ClosureIncompatible);
    const auto f =
        integrate_f1(s, c.step(), true, std::vector<double>(256, 1.0), zero, 0.0, ClosurePolicy::Balance);
    CHECK(f.shift == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(stencil::max_abs(f.f2) < 1e-12);
    CHECK(inextensibility_node_residual(s, c.step(), true, f.f1, f.f2, zero) < 1e-12);
}

TEST_CASE("balancing fails when the geodesic curvature integrates to zero") {
    const auto c = testing::latitude(kPi / 2, 256);
    const auto s = analyze(c);
    CHECK(kind_of([&] {
              (void)integrate_f1(s, c.step(), true, std::vector<double>(256, 0.0), std::vector<double>(256, 1.0),
                                 0.0, ClosurePolicy::Balance);
          }) == ErrorKind::BalanceImpossible);
}

TEST_CASE("tangential pullback") {
    const auto sphere = ParametricSurface::sphere();
    const ChartPoint p{1.0, 0.5};
    const auto d = sphere.partials(p);
    const ChartPoint r = tangential_pullback(sphere, p, 2.0 * d.x_u - 0.5 * d.x_v);
    CHECK(r.u == doctest::Approx(2.0));
    CHECK(r.v == doctest::Approx(-0.5));
    CHECK(kind_of([&] { (void)tangential_pullback(sphere, p, unit_normal(sphere, p.u, p.v)); }) ==
          ErrorKind::NonTangentialVelocity);
}

TEST_CASE("balanced flow conserves length") {
    const auto c = testing::latitude(kPi / 2, 128);
    SimulationConfig cfg;
    cfg.n = 128;
    cfg.dt = 1e-3;
    cfg.steps = 100;
    cfg.snapshot_stride = 25;
    std::size_t seen = 0;
    std::size_t snaps = 0;
    const auto result = run(c, balanced_sine(), cfg, [&](const StepDiagnostics& d, const Snapshot* s) {
        CHECK(d.step == seen);
        ++seen;
        if (s) ++snaps;
    });
    CHECK(seen == 101);
    CHECK(snaps == 5);
    CHECK(result.snapshots.size() == 5);
    CHECK(result.snapshots.back().t == doctest::Approx(0.1));
    for (const auto& d : result.diagnostics) {
        CHECK(d.drift <= 1e-10);
        CHECK(d.residual <= 1e-10);
        CHECK(d.regularity_margin > 0.9);
    }
}

TEST_CASE("normal-speed flow without compensation drifts") {
    const auto c = testing::latitude(kPi / 3, 128);
    FlowSpec spec;
    spec.f1_mode = F1Mode::Prescribed;
    spec.f1 = [](const FlowPoint&) { return 0.0; };
    spec.f2 = [](const FlowPoint&) { return 1.0; };
    SimulationConfig cfg;
    cfg.n = 128;
    cfg.steps = 100;
    cfg.drift_tolerance = 1e-3;
    std::size_t last = 0;
    CHECK(kind_of([&] {
              (void)run(c, spec, cfg, [&](const StepDiagnostics& d, const Snapshot*) { last = d.step; });
          }) == ErrorKind::DriftExceeded);
    CHECK(last < 100);
}

TEST_CASE("run validates its configuration") {
    const auto c = testing::latitude(kPi / 2, 64);
    SimulationConfig cfg;
    cfg.n = 64;
    cfg.dt = 0;
    CHECK(kind_of([&] { (void)run(c, balanced_sine(), cfg); }) == ErrorKind::ValidationError);
    cfg.dt = 1e-3;
    cfg.n = 65;
    CHECK(kind_of([&] { (void)run(c, balanced_sine(), cfg); }) == ErrorKind::ValidationError);
    cfg.n = 64;
    cfg.horizon = 0.5;
    CHECK(kind_of([&] { (void)run(c, balanced_sine(), cfg); }) == ErrorKind::ValidationError);
}

TEST_CASE("rigid rotation is integrated at fourth order") {
    const auto sphere = testing::unit_sphere();
    FourierPath path;
    path.period = 2 * kPi;
    path.u.offset = kPi / 2;
    path.u.cos = {0.4};
    path.v.sin = {0.4};
    const auto circle = DiscreteCurve::from_path(sphere, path.chart_path(), 2 * kPi, 2048, true);
    FlowSpec spec;
    spec.f1_mode = F1Mode::Prescribed;
    const auto K = [](const FlowPoint& p) { return cross(Vector3{1, 0, 0}, p.position); };
    spec.f1 = [K](const FlowPoint& p) { return dot(K(p), p.T); };
    spec.f2 = [K](const FlowPoint& p) { return dot(K(p), p.g); };
    const auto start = circle.points();
    const auto error_at = [&](double dt) {
        SimulationConfig cfg;
        cfg.n = 2048;
        cfg.dt = dt;
        cfg.steps = static_cast<std::size_t>(std::llround(0.4 / dt));
        cfg.snapshot_stride = cfg.steps;
        cfg.drift_tolerance = 1;
        const auto end = run(circle, spec, cfg).snapshots.back().curve.points();
        const double c = std::cos(0.4), s = std::sin(0.4);
        double e = 0;
        for (std::size_t i = 0; i < end.size(); ++i) {
            const Vector3 q = start[i];
            e = std::max(e, (end[i] - Vector3{q.x, c * q.y - s * q.z, s * q.y + c * q.z}).norm());
        }
        return e;
    };
    const double coarse = error_at(0.04);
    const double fine = error_at(0.02);
    CHECK(coarse / fine == doctest::Approx(16.0).epsilon(0.3));
}

}
