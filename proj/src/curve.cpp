#include "darboux/curve.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "darboux/errors.hpp"
#include "darboux/stencil.hpp"

namespace darboux {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMinimumSpeed = 1e-12;

std::vector<Vector3> raw_tangent(const CurveSamples& s) {
    if (!s.velocity.empty()) return s.velocity;
    return stencil::derivative(s.points, s.h, s.closed);
}

void require_shape(const CurveSamples& s) {
    if (s.points.size() < kMinimumSamples) {
        throw Error(ErrorKind::ValidationError, "curve needs at least 16 samples");
    }
    if (s.normals.size() != s.points.size() || (!s.velocity.empty() && s.velocity.size() != s.points.size())) {
        throw Error(ErrorKind::ValidationError, "curve sample arrays differ in length");
    }
    if (!(s.h > 0.0)) throw Error(ErrorKind::ValidationError, "curve spacing must be positive");
}

}  // namespace

double FourierAxis::value(double u, double period) const {
    const double w = kTwoPi / period;
    double x = offset + slope * u;
    for (std::size_t k = 0; k < cos.size(); ++k) x += cos[k] * std::cos(static_cast<double>(k + 1) * w * u);
    for (std::size_t k = 0; k < sin.size(); ++k) x += sin[k] * std::sin(static_cast<double>(k + 1) * w * u);
    return x;
}

double FourierAxis::derivative(double u, double period) const {
    const double w = kTwoPi / period;
    double d = slope;
    for (std::size_t k = 0; k < cos.size(); ++k) {
        const double kw = static_cast<double>(k + 1) * w;
        d -= cos[k] * kw * std::sin(kw * u);
    }
    for (std::size_t k = 0; k < sin.size(); ++k) {
        const double kw = static_cast<double>(k + 1) * w;
        d += sin[k] * kw * std::cos(kw * u);
    }
    return d;
}

ChartPath FourierPath::chart_path() const {
    const FourierPath self = *this;
    return {
        [self](double s) { return ChartPoint{self.u.value(s, self.period), self.v.value(s, self.period)}; },
        [self](double s) {
            return ChartPoint{self.u.derivative(s, self.period), self.v.derivative(s, self.period)};
        },
    };
}

DiscreteCurve DiscreteCurve::from_path(std::shared_ptr<const ParametricSurface> surface, const ChartPath& path,
                                       double period, std::size_t n, bool closed) {
    if (!path.position) throw Error(ErrorKind::ValidationError, "chart path has no position map");
    if (n < kMinimumSamples) throw Error(ErrorKind::ValidationError, "curve needs at least 16 samples");
    if (!(period > 0.0)) throw Error(ErrorKind::ValidationError, "curve period must be positive");
    const double h = stencil::spacing(period, n, closed);
    std::vector<ChartPoint> params(n);
    std::vector<ChartPoint> vel;
    if (path.velocity) vel.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) * h;
        params[i] = path.position(s);
        if (path.velocity) vel[i] = path.velocity(s);
    }
    return from_samples(std::move(surface), std::move(params), period, closed, std::move(vel));
}

DiscreteCurve DiscreteCurve::from_samples(std::shared_ptr<const ParametricSurface> surface,
                                          std::vector<ChartPoint> params, double period, bool closed,
                                          std::vector<ChartPoint> chart_velocity) {
    if (!surface) throw Error(ErrorKind::ValidationError, "curve has no surface");
    if (params.size() < kMinimumSamples) throw Error(ErrorKind::ValidationError, "curve needs at least 16 samples");
    if (!(period > 0.0)) throw Error(ErrorKind::ValidationError, "curve period must be positive");
    if (!chart_velocity.empty() && chart_velocity.size() != params.size()) {
        throw Error(ErrorKind::ValidationError, "chart velocity count differs from sample count");
    }
    for (auto& p : params) p = surface->wrap(p);
    DiscreteCurve c;
    c.surface_ = std::move(surface);
    c.params_ = std::move(params);
    c.chart_velocity_ = std::move(chart_velocity);
    c.period_ = period;
    c.closed_ = closed;
    return c;
}

double DiscreteCurve::step() const { return stencil::spacing(period_, params_.size(), closed_); }

std::vector<Vector3> DiscreteCurve::points() const {
    std::vector<Vector3> pts;
    pts.reserve(params_.size());
    for (const auto& p : params_) pts.push_back(surface_->point(p));
    return pts;
}

CurveSamples DiscreteCurve::samples() const {
    CurveSamples s;
    s.h = step();
    s.closed = closed_;
    s.points = points();
    s.normals.reserve(size());
    for (const auto& p : params_) s.normals.push_back(unit_normal(*surface_, p.u, p.v));
    if (!chart_velocity_.empty()) {
        s.velocity.reserve(size());
        for (std::size_t i = 0; i < size(); ++i) {
            const SurfacePartials d = surface_->partials(params_[i]);
            s.velocity.push_back(chart_velocity_[i].u * d.x_u + chart_velocity_[i].v * d.x_v);
        }
    }
    return s;
}

SpeedArclength speed_and_arclength(const CurveSamples& samples) {
    require_shape(samples);
    const std::vector<Vector3> tangent = raw_tangent(samples);
    SpeedArclength out;
    out.speed.resize(tangent.size());
    for (std::size_t i = 0; i < tangent.size(); ++i) {
        out.speed[i] = tangent[i].norm();
        if (!(out.speed[i] > kMinimumSpeed)) {
            std::ostringstream msg;
            msg << "speed " << out.speed[i] << " at sample " << i;
            throw Error(ErrorKind::DegenerateCurve, msg.str());
        }
    }
    out.arclength = stencil::cumulative_trapezoid(out.speed, samples.h);
    out.length = stencil::trapezoid_total(out.speed, samples.h, samples.closed);
    return out;
}

SpeedArclength speed_and_arclength(const DiscreteCurve& curve) { return speed_and_arclength(curve.samples()); }

std::vector<double> d_ds(const std::vector<double>& field, const std::vector<double>& speed, double h, bool closed) {
    std::vector<double> d = stencil::derivative(field, h, closed);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] /= speed[i];
    return d;
}

std::vector<Vector3> d_ds(const std::vector<Vector3>& field, const std::vector<double>& speed, double h,
                          bool closed) {
    std::vector<Vector3> d = stencil::derivative(field, h, closed);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] /= speed[i];
    return d;
}

std::vector<double> d_ds(const std::vector<double>& field, const DiscreteCurve& curve) {
    if (field.size() != curve.size()) throw Error(ErrorKind::ValidationError, "field length differs from curve");
    const SpeedArclength sa = speed_and_arclength(curve);
    return d_ds(field, sa.speed, curve.step(), curve.closed());
}

DarbouxFrameField darboux_frame(const CurveSamples& samples, double tangency_tolerance) {
    require_shape(samples);
    const std::vector<Vector3> tangent = raw_tangent(samples);
    DarbouxFrameField f;
    const std::size_t n = samples.size();
    f.T.resize(n);
    f.g.resize(n);
    f.n = samples.normals;
    for (std::size_t i = 0; i < n; ++i) {
        const double speed = tangent[i].norm();
        if (!(speed > kMinimumSpeed)) {
            std::ostringstream msg;
            msg << "speed " << speed << " at sample " << i;
            throw Error(ErrorKind::DegenerateCurve, msg.str());
        }
        const Vector3 t = tangent[i] / speed;
        const double off = t.dot(f.n[i]);
        if (std::abs(off) > tangency_tolerance) {
            std::ostringstream msg;
            msg << "|<T, n>| = " << std::abs(off) << " at sample " << i;
            throw Error(ErrorKind::NonTangentCurve, msg.str());
        }
        f.T[i] = (t - off * f.n[i]).normalized();
        f.g[i] = f.n[i].cross(f.T[i]);
    }
    return f;
}

DarbouxFrameField darboux_frame(const DiscreteCurve& curve, double tangency_tolerance) {
    return darboux_frame(curve.samples(), tangency_tolerance);
}

GeometricScalars darboux_scalars(const CurveSamples& samples, const DarbouxFrameField& frame) {
    SpeedArclength sa = speed_and_arclength(samples);
    const std::size_t n = samples.size();
    const double h = samples.h;
    const bool closed = samples.closed;

    const std::vector<Vector3> T_s = d_ds(frame.T, sa.speed, h, closed);
    const std::vector<Vector3> g_s = d_ds(frame.g, sa.speed, h, closed);

    std::vector<Vector3> alpha_s = raw_tangent(samples);
    for (std::size_t i = 0; i < n; ++i) alpha_s[i] /= sa.speed[i];
    const std::vector<Vector3> alpha_ss = d_ds(alpha_s, sa.speed, h, closed);
    const std::vector<Vector3> n_s = d_ds(frame.n, sa.speed, h, closed);

    GeometricScalars out;
    out.k_g.resize(n);
    out.k_n.resize(n);
    out.tau_g.resize(n);
    out.k_g_secondary.resize(n);
    out.tau_g_secondary.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.k_g[i] = T_s[i].dot(frame.g[i]);
        out.k_n[i] = T_s[i].dot(frame.n[i]);
        out.tau_g[i] = g_s[i].dot(frame.n[i]);
        out.k_g_secondary[i] = alpha_s[i].dot(alpha_ss[i].cross(frame.n[i]));
        out.tau_g_secondary[i] = alpha_s[i].dot(frame.n[i].cross(n_s[i]));
    }
    out.speed = std::move(sa.speed);
    out.arclength = std::move(sa.arclength);
    out.length = sa.length;
    return out;
}

FrenetScalars frenet_scalars(const CurveSamples& samples, const DarbouxFrameField& frame,
                             const GeometricScalars& darboux, double eps_kappa) {
    const std::size_t n = samples.size();
    const double h = samples.h;
    const bool closed = samples.closed;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const Vector3 nan3{nan, nan, nan};

    const std::vector<Vector3> T_s = d_ds(frame.T, darboux.speed, h, closed);
    FrenetScalars out;
    out.frame.T = frame.T;
    out.frame.N.assign(n, nan3);
    out.frame.B.assign(n, nan3);
    out.frame.defined.assign(n, false);
    out.kappa.resize(n);
    std::vector<double> raw_phi(n, nan);
    for (std::size_t i = 0; i < n; ++i) {
        out.kappa[i] = T_s[i].norm();
        if (out.kappa[i] > eps_kappa) {
            out.frame.defined[i] = true;
            out.frame.N[i] = T_s[i] / out.kappa[i];
            out.frame.B[i] = frame.T[i].cross(out.frame.N[i]);
            raw_phi[i] = std::atan2(darboux.k_n[i], darboux.k_g[i]);
        }
    }

    // NaN normals propagate through the stencil, so tau is undefined next to
    // any vanishing-curvature sample as well.
    const std::vector<Vector3> N_s = d_ds(out.frame.N, darboux.speed, h, closed);
    out.tau.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.tau[i] = N_s[i].dot(out.frame.B[i]);

    out.phi.assign(n, nan);
    bool have_previous = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isnan(raw_phi[i])) {
            have_previous = false;
            continue;
        }
        out.phi[i] = have_previous ? out.phi[i - 1] + std::remainder(raw_phi[i] - raw_phi[i - 1], kTwoPi)
                                   : raw_phi[i];
        have_previous = true;
    }
    out.dphi_ds = stencil::angle_derivative(raw_phi, h, closed);
    for (std::size_t i = 0; i < n; ++i) out.dphi_ds[i] /= darboux.speed[i];
    return out;
}

GeometricScalars analyze(const CurveSamples& samples, double tangency_tolerance) {
    const DarbouxFrameField frame = darboux_frame(samples, tangency_tolerance);
    GeometricScalars s = darboux_scalars(samples, frame);
    FrenetScalars f = frenet_scalars(samples, frame, s);
    s.kappa = std::move(f.kappa);
    s.tau = std::move(f.tau);
    s.phi = std::move(f.phi);
    s.dphi_ds = std::move(f.dphi_ds);
    return s;
}

GeometricScalars analyze(const DiscreteCurve& curve, double tangency_tolerance) {
    return analyze(curve.samples(), tangency_tolerance);
}

Classification classify(const GeometricScalars& scalars, double tol_class) {
    return {stencil::max_abs(scalars.k_g) <= tol_class, stencil::max_abs(scalars.k_n) <= tol_class,
            stencil::max_abs(scalars.tau_g) <= tol_class};
}

RelationResiduals frenet_darboux_relations(const GeometricScalars& s) {
    RelationResiduals r;
    for (std::size_t i = 0; i < s.k_g.size(); ++i) {
        if (std::isnan(s.phi[i]) || std::isnan(s.tau[i]) || std::isnan(s.dphi_ds[i])) continue;
        ++r.samples_used;
        r.k_g_vs_kappa_cos_phi = std::max(r.k_g_vs_kappa_cos_phi, std::abs(s.k_g[i] - s.kappa[i] * std::cos(s.phi[i])));
        r.k_n_vs_kappa_sin_phi = std::max(r.k_n_vs_kappa_sin_phi, std::abs(s.k_n[i] - s.kappa[i] * std::sin(s.phi[i])));
        r.tau_g_vs_tau_plus_dphi =
            std::max(r.tau_g_vs_tau_plus_dphi, std::abs(s.tau_g[i] - (s.tau[i] + s.dphi_ds[i])));
        r.tau_g_vs_tau_minus_dphi =
            std::max(r.tau_g_vs_tau_minus_dphi, std::abs(s.tau_g[i] - (s.tau[i] - s.dphi_ds[i])));
    }
    return r;
}

SecondaryAgreement secondary_agreement(const GeometricScalars& s) {
    SecondaryAgreement a;
    for (std::size_t i = 0; i < s.k_g.size(); ++i) {
        a.k_g = std::max(a.k_g, std::abs(s.k_g[i] - s.k_g_secondary[i]));
        a.tau_g = std::max(a.tau_g, std::abs(s.tau_g[i] - s.tau_g_secondary[i]));
    }
    return a;
}

}  // namespace darboux
