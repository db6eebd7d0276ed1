#include "darboux/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "darboux/errors.hpp"
#include "darboux/stencil.hpp"

namespace darboux {

namespace {

std::vector<double> integrand(const GeometricScalars& s, const std::vector<double>& f2, const std::vector<double>& f3) {
    std::vector<double> q(f2.size());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = (f2[i] * s.k_g[i] + f3[i] * s.k_n[i]) * s.speed[i];
    return q;
}

DiscreteCurve moved(const DiscreteCurve& base, const std::vector<ChartPoint>& params) {
    return DiscreteCurve::from_samples(base.surface_ptr(), params, base.period(), base.closed());
}

std::vector<ChartPoint> advance(const std::vector<ChartPoint>& p, const std::vector<ChartPoint>& rate, double h) {
    std::vector<ChartPoint> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] + h * rate[i];
    return out;
}

double regularity_margin(const DiscreteCurve& c) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& p : c.params()) m = std::min(m, area_element(c.surface(), p.u, p.v));
    return m;
}

}  // namespace

F1Field integrate_f1(const GeometricScalars& scalars, double h, bool closed, std::vector<double> f2,
                     const std::vector<double>& f3, double f1_at_0, ClosurePolicy policy, double closure_tolerance) {
    const std::size_t n = scalars.speed.size();
    if (f2.size() != n || f3.size() != n) throw Error(ErrorKind::ValidationError, "flow field length differs from curve");
    F1Field out;
    std::vector<double> q = integrand(scalars, f2, f3);
    if (closed) {
        out.loop_integral = stencil::trapezoid_total(q, h, true);
        const double allowed = closure_tolerance * scalars.length;
        if (std::abs(out.loop_integral) > allowed) {
            if (policy == ClosurePolicy::Strict) {
                std::ostringstream msg;
                msg << "loop integral of (f2 k_g + f3 k_n) v is " << out.loop_integral << ", allowed " << allowed;
                throw Error(ErrorKind::ClosureIncompatible, msg.str());
            }
            std::vector<double> kgv(n);
            for (std::size_t i = 0; i < n; ++i) kgv[i] = scalars.k_g[i] * scalars.speed[i];
            const double denom = stencil::trapezoid_total(kgv, h, true);
            if (std::abs(denom) <= kBalanceDenominatorFloor) {
                std::ostringstream msg;
                msg << "loop integral of k_g v is " << denom << "; no constant shift of f2 can close f1";
                throw Error(ErrorKind::BalanceImpossible, msg.str());
            }
            out.shift = out.loop_integral / denom;
            for (double& x : f2) x -= out.shift;
            q = integrand(scalars, f2, f3);
        }
    }
    out.f1 = stencil::cumulative_trapezoid(q, h);
    for (double& x : out.f1) x += f1_at_0;
    out.f2 = std::move(f2);
    return out;
}

double inextensibility_node_residual(const GeometricScalars& scalars, double h, bool closed,
                                     const std::vector<double>& f1, const std::vector<double>& f2,
                                     const std::vector<double>& f3) {
    const std::vector<double> q = integrand(scalars, f2, f3);
    const std::size_t n = q.size();
    double worst = 0.0;
    const std::size_t segments = closed ? n : n - 1;
    for (std::size_t i = 0; i < segments; ++i) {
        const std::size_t j = (i + 1) % n;
        const double v = 0.5 * (scalars.speed[i] + scalars.speed[j]);
        const double r = ((f1[j] - f1[i]) / h - 0.5 * (q[i] + q[j])) / v;
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

ChartPoint tangential_pullback(const ParametricSurface& surface, ChartPoint p, const Vector3& V,
                               double tangency_tolerance) {
    const SurfacePartials d = surface.partials(p);
    const Vector3 normal = unit_normal(surface, p.u, p.v);
    const double size = V.norm();
    if (std::abs(V.dot(normal)) > tangency_tolerance * size) {
        std::ostringstream msg;
        msg << "|<V, n>| = " << std::abs(V.dot(normal)) << " for |V| = " << size;
        throw Error(ErrorKind::NonTangentialVelocity, msg.str());
    }
    const double E = d.x_u.dot(d.x_u);
    const double F = d.x_u.dot(d.x_v);
    const double G = d.x_v.dot(d.x_v);
    const double b1 = V.dot(d.x_u);
    const double b2 = V.dot(d.x_v);
    const double det = E * G - F * F;
    return {(G * b1 - F * b2) / det, (E * b2 - F * b1) / det};
}

FlowFields evaluate_flow(const DiscreteCurve& curve, const FlowSpec& spec, double t) {
    if (!spec.f2) throw Error(ErrorKind::ValidationError, "flow has no f2");
    if (spec.f1_mode == F1Mode::Prescribed && !spec.f1) {
        throw Error(ErrorKind::ValidationError, "prescribed flow has no f1");
    }
    const CurveSamples samples = curve.samples();
    FlowFields out;
    out.frame = darboux_frame(samples, spec.tangency_tolerance);
    out.scalars = darboux_scalars(samples, out.frame);
    const std::size_t n = curve.size();
    const GeometricScalars& s = out.scalars;

    std::vector<FlowPoint> points(n);
    std::vector<double> f2(n);
    for (std::size_t i = 0; i < n; ++i) {
        points[i] = {s.arclength[i], s.length, s.k_g[i], s.k_n[i], s.tau_g[i], t,
                     samples.points[i], out.frame.T[i], out.frame.g[i], out.frame.n[i]};
        f2[i] = spec.f2(points[i]);
    }
    const std::vector<double> f3(n, 0.0);
    if (spec.f1_mode == F1Mode::Integrated) {
        F1Field field = integrate_f1(s, samples.h, samples.closed, std::move(f2), f3, spec.f1_at_0, spec.closure,
                                     spec.closure_tolerance);
        out.f1 = std::move(field.f1);
        out.f2 = std::move(field.f2);
    } else {
        out.f1.resize(n);
        for (std::size_t i = 0; i < n; ++i) out.f1[i] = spec.f1(points[i]);
        out.f2 = std::move(f2);
    }
    out.residual = inextensibility_node_residual(s, samples.h, samples.closed, out.f1, out.f2, f3);

    out.chart_rate.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vector3 V = out.f1[i] * out.frame.T[i] + out.f2[i] * out.frame.g[i];
        out.chart_rate[i] = tangential_pullback(curve.surface(), curve.params()[i], V, spec.tangency_tolerance);
    }
    return out;
}

FlowState step(const FlowState& state, const FlowSpec& spec, double dt) {
    const DiscreteCurve& c = state.curve;
    const std::vector<ChartPoint>& p = c.params();
    const auto k1 = evaluate_flow(c, spec, state.t).chart_rate;
    const auto k2 = evaluate_flow(moved(c, advance(p, k1, 0.5 * dt)), spec, state.t + 0.5 * dt).chart_rate;
    const auto k3 = evaluate_flow(moved(c, advance(p, k2, 0.5 * dt)), spec, state.t + 0.5 * dt).chart_rate;
    const auto k4 = evaluate_flow(moved(c, advance(p, k3, dt)), spec, state.t + dt).chart_rate;
    std::vector<ChartPoint> next(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        next[i] = p[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return {moved(c, next), state.t + dt};
}

RunResult run(const DiscreteCurve& initial, const FlowSpec& spec, const SimulationConfig& config,
              const RunObserver& observer) {
    if (!(config.dt > 0.0)) throw Error(ErrorKind::ValidationError, "simulation dt must be positive");
    if (config.snapshot_stride == 0) throw Error(ErrorKind::ValidationError, "snapshot_stride must be at least 1");
    if (config.n != initial.size()) {
        std::ostringstream msg;
        msg << "simulation n = " << config.n << " but the curve has " << initial.size() << " samples";
        throw Error(ErrorKind::ValidationError, msg.str());
    }
    if (config.horizon && config.dt * static_cast<double>(config.steps) > *config.horizon * (1.0 + 1e-12)) {
        throw Error(ErrorKind::ValidationError, "dt * steps exceeds the time horizon");
    }

    RunResult result;
    FlowState state{moved(initial, initial.params()), 0.0};
    double length0 = 0.0;
    for (std::size_t k = 0;; ++k) {
        const FlowFields fields = evaluate_flow(state.curve, spec, state.t);
        if (k == 0) length0 = fields.scalars.length;
        StepDiagnostics d;
        d.step = k;
        d.t = state.t;
        d.length = fields.scalars.length;
        d.drift = std::abs(d.length - length0) / length0;
        d.residual = fields.residual;
        d.regularity_margin = regularity_margin(state.curve);
        result.diagnostics.push_back(d);

        const Snapshot* snap = nullptr;
        if (k % config.snapshot_stride == 0) {
            result.snapshots.push_back({k, state.t, state.curve});
            snap = &result.snapshots.back();
        }
        if (observer) observer(d, snap);
        if (d.drift > config.drift_tolerance) {
            std::ostringstream msg;
            msg << "relative length drift " << d.drift << " at step " << k << " exceeds " << config.drift_tolerance;
            throw Error(ErrorKind::DriftExceeded, msg.str());
        }
        if (k == config.steps) break;
        // Keep t an exact multiple of dt so snapshot times do not accumulate rounding.
        state = step(state, spec, config.dt);
        state.t = config.dt * static_cast<double>(k + 1);
    }
    return result;
}

}  // namespace darboux
