#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "darboux/curve.hpp"
#include "darboux/surface.hpp"
#include "darboux/vector3.hpp"

namespace darboux {

enum class FamilySource { SurfaceBound, Analytic };

/// Two-parameter map (u, t) -> (alpha, n) with n a unit normal orthogonal to the
/// curve tangent. u runs over [0, period) (closed) or [0, period] (open); t over
/// [t_begin, t_end).
struct FramedFamily {
    std::string label;
    std::string name;
    std::function<Vector3(double, double)> position;
    std::function<Vector3(double, double)> normal;
    /// Exact d(alpha)/du; central differences of `position` are used when empty.
    std::function<Vector3(double, double)> position_u;
    double period = 0.0;
    bool closed = true;
    double t_begin = 0.0;
    double t_end = 1.0;
    bool arclength_uniform = false;
    /// Whether the family is known to preserve length. Only affects the
    /// expected outcome recorded in reports.
    bool inextensible = true;
    FamilySource source = FamilySource::Analytic;
    double adaptedness_tolerance = 1e-8;
};

/// Family on a fixed surface given by a time-dependent chart path; normals come
/// from the surface.
[[nodiscard]] FramedFamily surface_bound_family(std::string label, std::string name,
                                                std::shared_ptr<const ParametricSurface> surface,
                                                std::function<ChartPoint(double, double)> chart,
                                                std::function<ChartPoint(double, double)> chart_u,
                                                double period, bool closed, double t_begin, double t_end,
                                                bool arclength_uniform, bool inextensible);

/// One time slice of a family, framed with the family's own normals.
struct FamilySlice {
    double t = 0.0;
    CurveSamples samples;
    DarbouxFrameField frame;
    GeometricScalars scalars;
};

/// AdaptednessViolation when |n| drifts from 1 by more than 1e-10 or
/// <alpha_u, n> exceeds the family's adaptedness tolerance times |alpha_u|.
/// RequiresUnitSpeed when a family claiming unit speed has |v - 1| > 1e-6.
[[nodiscard]] FamilySlice sample_family(const FramedFamily& family, double t, std::size_t n);

struct VelocityDecomposition {
    std::vector<double> f1;
    std::vector<double> f2;
    std::vector<double> f3;
    std::vector<double> psi;
    std::vector<Vector3> alpha_t;
    /// max |alpha_t - (f1 T + f2 g + f3 n)|.
    double reconstruction_error = 0.0;
};

struct ArclengthVariation {
    std::vector<double> dv_dt;
    double dS_dt = 0.0;
};

/// Everything the identity checks need at one (t, N, dt): the slice, the
/// velocity decomposition, and time derivatives of the frame, speed and
/// scalars. Time derivatives are central when t - dt and t + dt both lie in
/// the time domain and one-sided three-point at its ends.
struct FamilyJet {
    FamilySlice slice;
    VelocityDecomposition velocity;
    std::vector<Vector3> T_t;
    std::vector<Vector3> g_t;
    std::vector<Vector3> n_t;
    ArclengthVariation arclength;
    std::vector<double> k_g_t;
    std::vector<double> k_n_t;
    std::vector<double> tau_g_t;
    double dt = 0.0;
};

[[nodiscard]] FamilyJet family_jet(const FramedFamily& family, double t, std::size_t n, double dt);

[[nodiscard]] VelocityDecomposition decompose_velocity(const FramedFamily& family, double t, std::size_t n, double dt);
[[nodiscard]] ArclengthVariation arclength_variation(const FramedFamily& family, double t, std::size_t n, double dt);

/// tol(N, dt) = scale * C * ((U/N)^2 + dt^2).
struct ToleranceModel {
    double constant = 10.0;
    double scale = 1.0;

    [[nodiscard]] double tolerance(double period, std::size_t n, double dt) const;
};

struct ResidualReport {
    std::string identity;
    std::string family;
    std::size_t n = 0;
    double dt = 0.0;
    double max_residual = 0.0;
    double rms_residual = 0.0;
    /// Largest magnitude among the individual terms of the identity.
    double max_term = 0.0;
    double tolerance = 0.0;
    int expected_order = 2;
    /// False when the identity's premise (unit speed, inextensibility, a
    /// classification flag) is not met on this slice; such reports are skipped.
    bool applicable = true;
    bool expected_to_hold = true;
    bool holds = false;
    bool pass = false;
    /// Extra measured quantity where one applies, e.g. dS/dt for the inextensibility check.
    double auxiliary = 0.0;
    std::string note;
};

struct AnalysisOptions {
    ToleranceModel tolerance;
    /// Threshold for the geodesic / asymptotic / principal flags that select corollary forms.
    double tol_class = 1e-6;
    /// Evaluate the frame-evolution forms even when the family is not unit speed.
    bool require_unit_speed = true;
};

/// dv/dt = df1/du - f2 v k_g - f3 v k_n, plus the geodesic and asymptotic forms when they apply.
[[nodiscard]] std::vector<ResidualReport> speed_variation_residual(const FramedFamily& family, const FamilyJet& jet,
                                                                   const AnalysisOptions& options = {});
/// df1/ds = f2 k_g + f3 k_n; `auxiliary` carries dS/dt over the whole curve.
[[nodiscard]] std::vector<ResidualReport> inextensibility_residual(const FramedFamily& family, const FamilyJet& jet,
                                                                   const AnalysisOptions& options = {});
/// T_t, g_t, n_t against the frame-evolution right-hand sides and their
/// geodesic / asymptotic / curvature-line specializations.
[[nodiscard]] std::vector<ResidualReport> frame_evolution_residuals(const FramedFamily& family, const FamilyJet& jet,
                                                                    const AnalysisOptions& options = {});
/// Time evolution of k_g, k_n, tau_g and the two psi constraints as printed,
/// the compatibility forms derived directly from the frame equations
/// (suffix ".full"), and the specializations.
[[nodiscard]] std::vector<ResidualReport> curvature_evolution_residuals(const FramedFamily& family,
                                                                        const FamilyJet& jet,
                                                                        const AnalysisOptions& options = {});

/// All of the above at one (t, N, dt).
[[nodiscard]] std::vector<ResidualReport> all_residuals(const FramedFamily& family, double t, std::size_t n, double dt,
                                                        const AnalysisOptions& options = {});

/// Catalog: (a) rigid rotation of a tilted circle on the unit sphere, (b)
/// translating planar circle, (c) helix on a widening cylinder with r^2 + b^2 = 1,
/// (d) shrinking latitude circle (length not preserved), (e) rotating (2,3)
/// torus knot on torus(2, 1) in arclength parametrization.
[[nodiscard]] std::vector<FramedFamily> builtin_families();

[[nodiscard]] FramedFamily tilted_circle_rotation(double angular_radius, double tilt, double omega);
[[nodiscard]] FramedFamily translating_circle();
[[nodiscard]] FramedFamily widening_helix(double r0, double rate, double length);
[[nodiscard]] FramedFamily shrinking_latitude(double theta0);
[[nodiscard]] FramedFamily rotating_torus_knot(double omega);

/// Arclength reparametrization w(s) of the (2,3) torus knot (2w, 3w) on torus(2, 1).
class TorusKnotArclength {
public:
    TorusKnotArclength();

    [[nodiscard]] double length() const;
    /// Knot parameter w in [0, 2 pi) at arclength s.
    [[nodiscard]] double parameter(double s) const;
    /// dw/ds at arclength s.
    [[nodiscard]] double parameter_rate(double s) const;

private:
    [[nodiscard]] double arclength_at(double w) const;
    [[nodiscard]] double speed_at(double w) const;

    std::vector<double> cos_coeffs_;
    double mean_speed_ = 0.0;
};

/// Chart path of the torus knot at unit speed, suitable for DiscreteCurve::from_path.
[[nodiscard]] ChartPath torus_knot_unit_speed_path(double omega_t = 0.0);

}  // namespace darboux

namespace darboux {

/// Residuals of the same identity at a coarse (N/2, 2 dt) and a fine (N, dt)
/// resolution. A pair converges when the ratio reaches `required_ratio` or
/// both residuals already sit below the noise floor.
struct ConvergenceReport {
    std::string identity;
    std::string family;
    double coarse = 0.0;
    double fine = 0.0;
    double ratio = 0.0;
    bool converged = false;
};

inline constexpr double kConvergenceNoiseFloor = 1e-5;

[[nodiscard]] std::vector<ConvergenceReport> compare_resolutions(const std::vector<ResidualReport>& coarse,
                                                                 const std::vector<ResidualReport>& fine,
                                                                 double required_ratio = 3.0,
                                                                 double noise_floor = kConvergenceNoiseFloor);

}  // namespace darboux
