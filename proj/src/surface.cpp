#include "darboux/surface.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "darboux/errors.hpp"

namespace darboux {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_axis(double x, const AxisDomain& d, const char* axis) {
    if (!std::isfinite(x)) {
        throw Error(ErrorKind::OutOfDomain, std::string("non-finite ") + axis + " coordinate");
    }
    if (d.periodic) {
        const double p = d.period();
        double r = std::fmod(x - d.lower, p);
        if (r < 0.0) r += p;
        // fmod can round up to exactly p for tiny negative inputs
        if (r >= p) r -= p;
        return d.lower + r;
    }
    if (x < d.lower || x > d.upper) {
        std::ostringstream msg;
        msg << axis << " = " << x << " outside [" << d.lower << ", " << d.upper << "]";
        throw Error(ErrorKind::OutOfDomain, msg.str());
    }
    return x;
}

}  // namespace

std::string_view to_string(SurfaceKind kind) {
    switch (kind) {
        case SurfaceKind::Sphere: return "sphere";
        case SurfaceKind::Torus: return "torus";
        case SurfaceKind::Cylinder: return "cylinder";
        case SurfaceKind::Plane: return "plane";
        case SurfaceKind::Monge: return "monge";
    }
    return "unknown";
}

ParametricSurface::ParametricSurface(SurfaceKind kind, double a, double b, AxisDomain u, AxisDomain v)
    : kind_(kind), a_(a), b_(b), u_domain_(u), v_domain_(v) {}

ParametricSurface ParametricSurface::sphere(double radius) {
    if (!(radius > 0.0)) throw Error(ErrorKind::ValidationError, "sphere radius must be positive");
    return {SurfaceKind::Sphere, radius, 0.0, {0.0, std::numbers::pi, false}, {0.0, kTwoPi, true}};
}

ParametricSurface ParametricSurface::torus(double ring_radius, double tube_radius) {
    if (!(ring_radius > 0.0) || !(tube_radius > 0.0)) {
        throw Error(ErrorKind::ValidationError, "torus radii must be positive");
    }
    if (tube_radius > ring_radius) {
        throw Error(ErrorKind::ValidationError, "tube radius exceeds ring radius");
    }
    return {SurfaceKind::Torus, ring_radius, tube_radius, {0.0, kTwoPi, true}, {0.0, kTwoPi, true}};
}

ParametricSurface ParametricSurface::cylinder(double radius) {
    if (!(radius > 0.0)) throw Error(ErrorKind::ValidationError, "cylinder radius must be positive");
    return {SurfaceKind::Cylinder, radius, 0.0, {0.0, kTwoPi, true}, {}};
}

ParametricSurface ParametricSurface::plane() { return {SurfaceKind::Plane, 0.0, 0.0, {}, {}}; }

ParametricSurface ParametricSurface::monge(HeightField height, AxisDomain u_domain, AxisDomain v_domain) {
    if (!height.h) throw Error(ErrorKind::ValidationError, "monge patch needs a height function");
    if (!(height.fd_step > 0.0)) throw Error(ErrorKind::ValidationError, "monge fd_step must be positive");
    ParametricSurface s{SurfaceKind::Monge, 0.0, 0.0, u_domain, v_domain};
    s.height_ = std::move(height);
    return s;
}

ParametricSurface ParametricSurface::with_regularity_epsilon(double eps) const {
    if (!(eps >= 0.0)) throw Error(ErrorKind::ValidationError, "regularity epsilon must be non-negative");
    ParametricSurface copy = *this;
    copy.eps_reg_ = eps;
    return copy;
}

ChartPoint ParametricSurface::wrap(ChartPoint p) const {
    return {wrap_axis(p.u, u_domain_, "u"), wrap_axis(p.v, v_domain_, "v")};
}

double ParametricSurface::height(double u, double v) const { return height_->h(u, v); }

void ParametricSurface::height_partials(double u, double v, double& hu, double& hv,
                                        double& huu, double& huv, double& hvv) const {
    const HeightField& hf = *height_;
    const double d = hf.fd_step;
    const auto& h = hf.h;
    hu = hf.h_u ? hf.h_u(u, v) : (h(u + d, v) - h(u - d, v)) / (2.0 * d);
    hv = hf.h_v ? hf.h_v(u, v) : (h(u, v + d) - h(u, v - d)) / (2.0 * d);
    const double h0 = (hf.h_uu && hf.h_vv) ? 0.0 : h(u, v);
    huu = hf.h_uu ? hf.h_uu(u, v) : (h(u + d, v) - 2.0 * h0 + h(u - d, v)) / (d * d);
    hvv = hf.h_vv ? hf.h_vv(u, v) : (h(u, v + d) - 2.0 * h0 + h(u, v - d)) / (d * d);
    huv = hf.h_uv ? hf.h_uv(u, v)
                  : (h(u + d, v + d) - h(u + d, v - d) - h(u - d, v + d) + h(u - d, v - d)) / (4.0 * d * d);
}

Vector3 ParametricSurface::point(ChartPoint p) const {
    const ChartPoint q = wrap(p);
    const double u = q.u;
    const double v = q.v;
    switch (kind_) {
        case SurfaceKind::Sphere:
            return {a_ * std::sin(u) * std::cos(v), a_ * std::sin(u) * std::sin(v), a_ * std::cos(u)};
        case SurfaceKind::Torus: {
            const double ring = a_ + b_ * std::cos(v);
            return {ring * std::cos(u), ring * std::sin(u), b_ * std::sin(v)};
        }
        case SurfaceKind::Cylinder:
            return {a_ * std::cos(u), a_ * std::sin(u), v};
        case SurfaceKind::Plane:
            return {u, v, 0.0};
        case SurfaceKind::Monge:
            return {u, v, height(u, v)};
    }
    return {};
}

SurfacePartials ParametricSurface::partials(ChartPoint p) const {
    const ChartPoint q = wrap(p);
    const double u = q.u;
    const double v = q.v;
    SurfacePartials d;
    switch (kind_) {
        case SurfaceKind::Sphere: {
            const double st = std::sin(u), ct = std::cos(u), sp = std::sin(v), cp = std::cos(v);
            d.x_u = a_ * Vector3{ct * cp, ct * sp, -st};
            d.x_v = a_ * Vector3{-st * sp, st * cp, 0.0};
            d.x_uu = a_ * Vector3{-st * cp, -st * sp, -ct};
            d.x_uv = a_ * Vector3{-ct * sp, ct * cp, 0.0};
            d.x_vv = a_ * Vector3{-st * cp, -st * sp, 0.0};
            break;
        }
        case SurfaceKind::Torus: {
            const double su = std::sin(u), cu = std::cos(u), sv = std::sin(v), cv = std::cos(v);
            const double ring = a_ + b_ * cv;
            d.x_u = {-ring * su, ring * cu, 0.0};
            d.x_v = {-b_ * sv * cu, -b_ * sv * su, b_ * cv};
            d.x_uu = {-ring * cu, -ring * su, 0.0};
            d.x_uv = {b_ * sv * su, -b_ * sv * cu, 0.0};
            d.x_vv = {-b_ * cv * cu, -b_ * cv * su, -b_ * sv};
            break;
        }
        case SurfaceKind::Cylinder: {
            const double su = std::sin(u), cu = std::cos(u);
            d.x_u = {-a_ * su, a_ * cu, 0.0};
            d.x_v = {0.0, 0.0, 1.0};
            d.x_uu = {-a_ * cu, -a_ * su, 0.0};
            break;
        }
        case SurfaceKind::Plane:
            d.x_u = {1.0, 0.0, 0.0};
            d.x_v = {0.0, 1.0, 0.0};
            break;
        case SurfaceKind::Monge: {
            double hu = 0, hv = 0, huu = 0, huv = 0, hvv = 0;
            height_partials(u, v, hu, hv, huu, huv, hvv);
            d.x_u = {1.0, 0.0, hu};
            d.x_v = {0.0, 1.0, hv};
            d.x_uu = {0.0, 0.0, huu};
            d.x_uv = {0.0, 0.0, huv};
            d.x_vv = {0.0, 0.0, hvv};
            break;
        }
    }
    return d;
}

Vector3 evaluate(const ParametricSurface& surface, double u, double v) { return surface.point({u, v}); }

double area_element(const ParametricSurface& surface, double u, double v) {
    const SurfacePartials d = surface.partials({u, v});
    return d.x_u.cross(d.x_v).norm();
}

Vector3 unit_normal(const ParametricSurface& surface, double u, double v) {
    const SurfacePartials d = surface.partials({u, v});
    const Vector3 c = d.x_u.cross(d.x_v);
    const double n = c.norm();
    if (!(n > surface.regularity_epsilon())) {
        std::ostringstream msg;
        msg << "|x_u x x_v| = " << n << " at (" << u << ", " << v << ")";
        throw Error(ErrorKind::DegenerateChart, msg.str());
    }
    return c / n;
}

FirstFundamentalForm first_fundamental_form(const ParametricSurface& surface, double u, double v) {
    const SurfacePartials d = surface.partials({u, v});
    const double n = d.x_u.cross(d.x_v).norm();
    if (!(n > surface.regularity_epsilon())) {
        std::ostringstream msg;
        msg << "|x_u x x_v| = " << n << " at (" << u << ", " << v << ")";
        throw Error(ErrorKind::DegenerateChart, msg.str());
    }
    return {d.x_u.dot(d.x_u), d.x_u.dot(d.x_v), d.x_v.dot(d.x_v)};
}

}  // namespace darboux
