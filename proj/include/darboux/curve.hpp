#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "darboux/surface.hpp"
#include "darboux/vector3.hpp"

namespace darboux {

/// A curve in chart coordinates, optionally with its exact parameter derivative.
struct ChartPath {
    std::function<ChartPoint(double)> position;
    std::function<ChartPoint(double)> velocity;
};

/// offset + slope*u + sum_k (cos[k-1] cos(k w u) + sin[k-1] sin(k w u)), w = 2 pi / period.
struct FourierAxis {
    double offset = 0.0;
    double slope = 0.0;
    std::vector<double> cos;
    std::vector<double> sin;

    [[nodiscard]] double value(double u, double period) const;
    [[nodiscard]] double derivative(double u, double period) const;

    friend bool operator==(const FourierAxis&, const FourierAxis&) = default;
};

struct FourierPath {
    FourierAxis u;
    FourierAxis v;
    double period = 0.0;

    [[nodiscard]] ChartPath chart_path() const;

    friend bool operator==(const FourierPath&, const FourierPath&) = default;
};

/// Ambient samples of a curve plus the normal field used to frame it.
/// `velocity` holds the exact d(alpha)/du when known and is empty otherwise.
struct CurveSamples {
    std::vector<Vector3> points;
    std::vector<Vector3> velocity;
    std::vector<Vector3> normals;
    double h = 0.0;
    bool closed = false;

    [[nodiscard]] std::size_t size() const { return points.size(); }
};

inline constexpr std::size_t kMinimumSamples = 16;

/// Uniform samples of a curve on a surface, stored in chart coordinates so the
/// curve lies on the surface exactly. Closed curves store no duplicate endpoint
/// and have spacing U/N; open curves include both ends and have spacing U/(N-1).
class DiscreteCurve {
public:
    static DiscreteCurve from_path(std::shared_ptr<const ParametricSurface> surface, const ChartPath& path,
                                   double period, std::size_t n, bool closed);
    static DiscreteCurve from_samples(std::shared_ptr<const ParametricSurface> surface,
                                      std::vector<ChartPoint> params, double period, bool closed,
                                      std::vector<ChartPoint> chart_velocity = {});

    [[nodiscard]] const ParametricSurface& surface() const { return *surface_; }
    [[nodiscard]] const std::shared_ptr<const ParametricSurface>& surface_ptr() const { return surface_; }
    [[nodiscard]] const std::vector<ChartPoint>& params() const { return params_; }
    [[nodiscard]] const std::vector<ChartPoint>& chart_velocity() const { return chart_velocity_; }
    [[nodiscard]] bool closed() const { return closed_; }
    [[nodiscard]] std::size_t size() const { return params_.size(); }
    [[nodiscard]] double period() const { return period_; }
    [[nodiscard]] double step() const;

    [[nodiscard]] std::vector<Vector3> points() const;
    /// Points, exact velocities when available, and surface normals.
    [[nodiscard]] CurveSamples samples() const;

private:
    DiscreteCurve() = default;

    std::shared_ptr<const ParametricSurface> surface_;
    std::vector<ChartPoint> params_;
    std::vector<ChartPoint> chart_velocity_;
    double period_ = 0.0;
    bool closed_ = false;
};

struct SpeedArclength {
    std::vector<double> speed;
    std::vector<double> arclength;
    double length = 0.0;
};

/// Speed |d(alpha)/du| (exact when velocities are known, central differences of
/// the ambient points otherwise) and trapezoid arclength. DegenerateCurve when
/// any speed is at most 1e-12.
[[nodiscard]] SpeedArclength speed_and_arclength(const CurveSamples& samples);
[[nodiscard]] SpeedArclength speed_and_arclength(const DiscreteCurve& curve);

/// (1/v) d/du with the stencils of stencil::derivative.
[[nodiscard]] std::vector<double> d_ds(const std::vector<double>& field, const std::vector<double>& speed,
                                       double h, bool closed);
[[nodiscard]] std::vector<Vector3> d_ds(const std::vector<Vector3>& field, const std::vector<double>& speed,
                                        double h, bool closed);
[[nodiscard]] std::vector<double> d_ds(const std::vector<double>& field, const DiscreteCurve& curve);

struct DarbouxFrameField {
    std::vector<Vector3> T;
    std::vector<Vector3> g;
    std::vector<Vector3> n;
};

inline constexpr double kDefaultTangencyTolerance = 1e-6;

/// T from the curve velocity, n from the normal field, g = n x T. The raw
/// tangent must satisfy |<T, n>| <= tangency_tolerance (NonTangentCurve
/// otherwise); it is then projected onto the tangent plane so the frame is
/// orthonormal to rounding.
[[nodiscard]] DarbouxFrameField darboux_frame(const CurveSamples& samples,
                                              double tangency_tolerance = kDefaultTangencyTolerance);
[[nodiscard]] DarbouxFrameField darboux_frame(const DiscreteCurve& curve,
                                              double tangency_tolerance = kDefaultTangencyTolerance);

/// Per-sample invariants. Frenet fields are NaN where the curvature is below
/// the vanishing threshold.
struct GeometricScalars {
    std::vector<double> speed;
    std::vector<double> arclength;
    double length = 0.0;
    std::vector<double> k_g;
    std::vector<double> k_n;
    std::vector<double> tau_g;
    /// <alpha_s, alpha_ss x n> and <alpha_s, n x n_s>, computed independently of the frame derivatives.
    std::vector<double> k_g_secondary;
    std::vector<double> tau_g_secondary;
    std::vector<double> kappa;
    std::vector<double> tau;
    std::vector<double> phi;
    std::vector<double> dphi_ds;
};

/// k_g = <T_s, g>, k_n = <T_s, n>, tau_g = <g_s, n>, with the cross-check values.
[[nodiscard]] GeometricScalars darboux_scalars(const CurveSamples& samples, const DarbouxFrameField& frame);

struct FrenetFrameField {
    std::vector<Vector3> T;
    std::vector<Vector3> N;
    std::vector<Vector3> B;
    std::vector<bool> defined;
};

struct FrenetScalars {
    FrenetFrameField frame;
    std::vector<double> kappa;
    std::vector<double> tau;
    std::vector<double> phi;
    std::vector<double> dphi_ds;
};

inline constexpr double kVanishingCurvature = 1e-8;

/// kappa = |T_s|, N = T_s / kappa, B = T x N, tau = <N_s, B>, phi = atan2(k_n, k_g)
/// unwrapped along the curve. tau, phi and dphi/ds are NaN wherever kappa (at
/// the sample or inside its stencil) is at most eps_kappa.
[[nodiscard]] FrenetScalars frenet_scalars(const CurveSamples& samples, const DarbouxFrameField& frame,
                                           const GeometricScalars& darboux,
                                           double eps_kappa = kVanishingCurvature);

/// Frame plus every scalar, Frenet fields included.
[[nodiscard]] GeometricScalars analyze(const CurveSamples& samples,
                                       double tangency_tolerance = kDefaultTangencyTolerance);
[[nodiscard]] GeometricScalars analyze(const DiscreteCurve& curve,
                                       double tangency_tolerance = kDefaultTangencyTolerance);

struct Classification {
    bool geodesic = false;
    bool asymptotic = false;
    bool principal = false;

    friend bool operator==(const Classification&, const Classification&) = default;
};

[[nodiscard]] Classification classify(const GeometricScalars& scalars, double tol_class);

/// Maximum discrepancies between the Frenet and Darboux descriptions. The last
/// two compare tau_g against tau + dphi/ds and tau - dphi/ds.
struct RelationResiduals {
    double k_g_vs_kappa_cos_phi = 0.0;
    double k_n_vs_kappa_sin_phi = 0.0;
    double tau_g_vs_tau_plus_dphi = 0.0;
    double tau_g_vs_tau_minus_dphi = 0.0;
    std::size_t samples_used = 0;
};

[[nodiscard]] RelationResiduals frenet_darboux_relations(const GeometricScalars& scalars);

/// Largest |primary - secondary| for k_g and tau_g.
struct SecondaryAgreement {
    double k_g = 0.0;
    double tau_g = 0.0;
};

[[nodiscard]] SecondaryAgreement secondary_agreement(const GeometricScalars& scalars);

}  // namespace darboux
