#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "darboux/curve.hpp"
#include "darboux/surface.hpp"
#include "darboux/vector3.hpp"

namespace darboux {

enum class F1Mode { Integrated, Prescribed };
enum class ClosurePolicy { Strict, Balance };

/// What a flow coefficient may depend on at one sample.
struct FlowPoint {
    double s = 0.0;
    double length = 0.0;
    double k_g = 0.0;
    double k_n = 0.0;
    double tau_g = 0.0;
    double t = 0.0;
    Vector3 position;
    Vector3 T;
    Vector3 g;
    Vector3 n;
};

using FlowFunction = std::function<double(const FlowPoint&)>;

/// Tangential flow alpha_t = f1 T + f2 g on a fixed surface (f3 = 0).
struct FlowSpec {
    FlowFunction f2;
    F1Mode f1_mode = F1Mode::Integrated;
    /// Used in prescribed mode only.
    FlowFunction f1;
    double f1_at_0 = 0.0;
    ClosurePolicy closure = ClosurePolicy::Strict;
    /// Loop integrals up to closure_tolerance * L count as compatible.
    double closure_tolerance = 1e-8;
    double tangency_tolerance = 1e-6;
};

struct SimulationConfig {
    double dt = 1e-3;
    std::size_t steps = 1000;
    std::size_t n = 512;
    double drift_tolerance = 1e-6;
    std::size_t snapshot_stride = 100;
    /// Upper end of the time domain; dt * steps may not exceed it.
    std::optional<double> horizon;
};

struct F1Field {
    std::vector<double> f1;
    /// f2 after any balancing shift.
    std::vector<double> f2;
    double loop_integral = 0.0;
    double shift = 0.0;
};

inline constexpr double kBalanceDenominatorFloor = 1e-10;

/// f1 = f1_at_0 + cumulative trapezoid of (f2 k_g + f3 k_n) v du. On closed
/// curves the loop integral must vanish: strict raises ClosureIncompatible
/// when it exceeds closure_tolerance * L; balance shifts f2 by the constant
/// that cancels it (BalanceImpossible when the loop integral of k_g v is at
/// most 1e-10).
[[nodiscard]] F1Field integrate_f1(const GeometricScalars& scalars, double h, bool closed, std::vector<double> f2,
                                   const std::vector<double>& f3, double f1_at_0, ClosurePolicy policy,
                                   double closure_tolerance = 1e-8);

/// Largest mismatch between the node differences of f1 and the trapezoid
/// average of (f2 k_g + f3 k_n) v, per unit arclength. This is the discrete
/// form of df1/ds = f2 k_g + f3 k_n that integrate_f1 enforces.
[[nodiscard]] double inextensibility_node_residual(const GeometricScalars& scalars, double h, bool closed,
                                                   const std::vector<double>& f1, const std::vector<double>& f2,
                                                   const std::vector<double>& f3);

/// Chart velocity (du/dt, dv/dt) whose push-forward is V. NonTangentialVelocity
/// when |<V, n>| > tangency_tolerance * |V|.
[[nodiscard]] ChartPoint tangential_pullback(const ParametricSurface& surface, ChartPoint p, const Vector3& V,
                                             double tangency_tolerance = 1e-6);

/// Flow fields of one state.
struct FlowFields {
    GeometricScalars scalars;
    DarbouxFrameField frame;
    std::vector<double> f1;
    std::vector<double> f2;
    std::vector<ChartPoint> chart_rate;
    double residual = 0.0;
};

[[nodiscard]] FlowFields evaluate_flow(const DiscreteCurve& curve, const FlowSpec& spec, double t);

struct FlowState {
    DiscreteCurve curve;
    double t = 0.0;
};

/// One classical Runge-Kutta step in chart coordinates.
[[nodiscard]] FlowState step(const FlowState& state, const FlowSpec& spec, double dt);

struct StepDiagnostics {
    std::size_t step = 0;
    double t = 0.0;
    double length = 0.0;
    double drift = 0.0;
    double residual = 0.0;
    /// Smallest |x_u x x_v| along the curve.
    double regularity_margin = 0.0;
};

struct Snapshot {
    std::size_t step = 0;
    double t = 0.0;
    DiscreteCurve curve;
};

struct RunResult {
    std::vector<Snapshot> snapshots;
    std::vector<StepDiagnostics> diagnostics;
};

/// Called after every step with its diagnostics and, on snapshot steps, the snapshot.
using RunObserver = std::function<void(const StepDiagnostics&, const Snapshot*)>;

/// Integrates `steps` steps from the initial curve (measured with ambient
/// differences throughout). Snapshots at step 0 and every snapshot_stride
/// steps. DriftExceeded as soon as the relative length drift passes
/// drift_tolerance; the observer has already seen that step.
[[nodiscard]] RunResult run(const DiscreteCurve& initial, const FlowSpec& spec, const SimulationConfig& config,
                            const RunObserver& observer = {});

}  // namespace darboux
