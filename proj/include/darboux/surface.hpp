#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string_view>

#include "darboux/vector3.hpp"

namespace darboux {

/// Coordinates in a surface chart's parameter rectangle.
struct ChartPoint {
    double u = 0.0;
    double v = 0.0;

    friend constexpr ChartPoint operator+(ChartPoint a, ChartPoint b) { return {a.u + b.u, a.v + b.v}; }
    friend constexpr ChartPoint operator-(ChartPoint a, ChartPoint b) { return {a.u - b.u, a.v - b.v}; }
    friend constexpr ChartPoint operator*(double s, ChartPoint a) { return {s * a.u, s * a.v}; }
    friend constexpr bool operator==(const ChartPoint&, const ChartPoint&) = default;
};

/// One side of the parameter rectangle. Periodic axes identify `lower` with `upper`.
struct AxisDomain {
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    bool periodic = false;

    [[nodiscard]] double period() const { return upper - lower; }
};

struct SurfacePartials {
    Vector3 x_u;
    Vector3 x_v;
    Vector3 x_uu;
    Vector3 x_uv;
    Vector3 x_vv;
};

struct FirstFundamentalForm {
    double E = 0.0;
    double F = 0.0;
    double G = 0.0;

    [[nodiscard]] double determinant() const { return E * G - F * F; }
};

enum class SurfaceKind { Sphere, Torus, Cylinder, Plane, Monge };

[[nodiscard]] std::string_view to_string(SurfaceKind kind);

/// Height field for a Monge patch (u, v, h(u, v)). Missing derivatives are
/// replaced by order-2 central differences with step `fd_step`.
struct HeightField {
    std::function<double(double, double)> h;
    std::function<double(double, double)> h_u;
    std::function<double(double, double)> h_v;
    std::function<double(double, double)> h_uu;
    std::function<double(double, double)> h_uv;
    std::function<double(double, double)> h_vv;
    double fd_step = 1e-5;
};

inline constexpr double kDefaultRegularityEpsilon = 1e-8;

/// Chart from a parameter rectangle into E^3 with analytic first and second
/// partials. Charts are pinned:
///   sphere   (R sin th cos ph, R sin th sin ph, R cos th), th in [0, pi], ph periodic in [0, 2pi)
///   torus    ((R + r cos v) cos u, (R + r cos v) sin u, r sin v), both axes periodic
///   cylinder (R cos u, R sin u, v), u periodic
///   plane    (u, v, 0)
///   monge    (u, v, h(u, v))
/// and in every case x_u x x_v is the outward (or +z) normal.
class ParametricSurface {
public:
    static ParametricSurface sphere(double radius = 1.0);
    static ParametricSurface torus(double ring_radius, double tube_radius);
    static ParametricSurface cylinder(double radius);
    static ParametricSurface plane();
    static ParametricSurface monge(HeightField height, AxisDomain u_domain = {}, AxisDomain v_domain = {});

    [[nodiscard]] SurfaceKind kind() const { return kind_; }
    /// Sphere/cylinder radius or torus ring radius.
    [[nodiscard]] double primary_radius() const { return a_; }
    /// Torus tube radius.
    [[nodiscard]] double tube_radius() const { return b_; }
    [[nodiscard]] const AxisDomain& u_domain() const { return u_domain_; }
    [[nodiscard]] const AxisDomain& v_domain() const { return v_domain_; }

    [[nodiscard]] double regularity_epsilon() const { return eps_reg_; }
    [[nodiscard]] ParametricSurface with_regularity_epsilon(double eps) const;

    /// Maps periodic axes into [lower, upper); throws OutOfDomain when a
    /// non-periodic coordinate leaves its interval.
    [[nodiscard]] ChartPoint wrap(ChartPoint p) const;

    [[nodiscard]] Vector3 point(ChartPoint p) const;
    [[nodiscard]] SurfacePartials partials(ChartPoint p) const;

private:
    ParametricSurface(SurfaceKind kind, double a, double b, AxisDomain u, AxisDomain v);

    [[nodiscard]] double height(double u, double v) const;
    void height_partials(double u, double v, double& hu, double& hv,
                         double& huu, double& huv, double& hvv) const;

    SurfaceKind kind_;
    double a_ = 0.0;
    double b_ = 0.0;
    AxisDomain u_domain_;
    AxisDomain v_domain_;
    double eps_reg_ = kDefaultRegularityEpsilon;
    std::optional<HeightField> height_;
};

[[nodiscard]] Vector3 evaluate(const ParametricSurface& surface, double u, double v);

/// (x_u x x_v) / |x_u x x_v|; DegenerateChart when the cross product falls below
/// the surface's regularity epsilon.
[[nodiscard]] Vector3 unit_normal(const ParametricSurface& surface, double u, double v);

[[nodiscard]] FirstFundamentalForm first_fundamental_form(const ParametricSurface& surface, double u, double v);

/// |x_u x x_v| at a point, without the regularity check.
[[nodiscard]] double area_element(const ParametricSurface& surface, double u, double v);

}  // namespace darboux
