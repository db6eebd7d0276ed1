#include "darboux/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "darboux/errors.hpp"
#include "darboux/stencil.hpp"

namespace darboux {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Tap {
    double time;
    double weight;
};

std::vector<Tap> time_stencil(const FramedFamily& f, double t, double dt) {
    if (!(dt > 0.0)) throw Error(ErrorKind::ValidationError, "time step must be positive");
    if (t < f.t_begin || t >= f.t_end) {
        std::ostringstream msg;
        msg << "t = " << t << " outside [" << f.t_begin << ", " << f.t_end << ")";
        throw Error(ErrorKind::OutOfDomain, msg.str());
    }
    const double w = 1.0 / (2.0 * dt);
    if (t - dt >= f.t_begin && t + dt < f.t_end) return {{t - dt, -w}, {t + dt, w}};
    if (t + 2.0 * dt < f.t_end) return {{t, -3.0 * w}, {t + dt, 4.0 * w}, {t + 2.0 * dt, -w}};
    if (t - 2.0 * dt >= f.t_begin) return {{t, 3.0 * w}, {t - dt, -4.0 * w}, {t - 2.0 * dt, w}};
    throw Error(ErrorKind::OutOfDomain, "time domain too short for the requested step");
}

template <typename T>
void accumulate(std::vector<T>& acc, const std::vector<T>& field, double w) {
    if (acc.empty()) acc.assign(field.size(), T{});
    for (std::size_t i = 0; i < field.size(); ++i) acc[i] += field[i] * w;
}

/// Spatial derivatives shared by every identity.
struct SpaceDerivatives {
    std::vector<double> v, kg, kn, tg;
    std::vector<double> f1, f2, f3, psi;
    std::vector<double> f1_u, f1_s, f2_s, f3_s, f2_ss, f3_ss;
    std::vector<double> kg_s, kn_s, tg_s, psi_s;
};

SpaceDerivatives space_derivatives(const FamilyJet& jet) {
    const auto& s = jet.slice;
    const double h = s.samples.h;
    const bool closed = s.samples.closed;
    SpaceDerivatives d;
    d.v = s.scalars.speed;
    d.kg = s.scalars.k_g;
    d.kn = s.scalars.k_n;
    d.tg = s.scalars.tau_g;
    d.f1 = jet.velocity.f1;
    d.f2 = jet.velocity.f2;
    d.f3 = jet.velocity.f3;
    d.psi = jet.velocity.psi;
    d.f1_u = stencil::derivative(d.f1, h, closed);
    d.f1_s = d_ds(d.f1, d.v, h, closed);
    d.f2_s = d_ds(d.f2, d.v, h, closed);
    d.f3_s = d_ds(d.f3, d.v, h, closed);
    d.f2_ss = d_ds(d.f2_s, d.v, h, closed);
    d.f3_ss = d_ds(d.f3_s, d.v, h, closed);
    d.kg_s = d_ds(d.kg, d.v, h, closed);
    d.kn_s = d_ds(d.kn, d.v, h, closed);
    d.tg_s = d_ds(d.tg, d.v, h, closed);
    d.psi_s = d_ds(d.psi, d.v, h, closed);
    return d;
}

class ReportBuilder {
public:
    ReportBuilder(const FramedFamily& family, const FamilyJet& jet, const AnalysisOptions& options)
        : family_(family), jet_(jet), options_(options) {}

    ResidualReport make(std::string identity, const std::vector<double>& residual, double max_term,
                        bool expected_to_hold = true) const {
        ResidualReport r = skeleton(std::move(identity));
        r.max_residual = stencil::max_abs(residual);
        r.rms_residual = stencil::rms(residual);
        r.max_term = max_term;
        r.expected_to_hold = expected_to_hold;
        r.holds = r.max_residual <= r.tolerance;
        r.pass = r.holds == expected_to_hold;
        return r;
    }

    ResidualReport skipped(std::string identity, std::string why) const {
        ResidualReport r = skeleton(std::move(identity));
        r.applicable = false;
        r.pass = true;
        r.note = std::move(why);
        return r;
    }

private:
    ResidualReport skeleton(std::string identity) const {
        ResidualReport r;
        r.identity = std::move(identity);
        r.family = family_.label;
        r.n = jet_.slice.samples.size();
        r.dt = jet_.dt;
        r.tolerance = options_.tolerance.tolerance(family_.period, r.n, r.dt);
        return r;
    }

    const FramedFamily& family_;
    const FamilyJet& jet_;
    const AnalysisOptions& options_;
};

double max_of(std::initializer_list<const std::vector<double>*> fields) {
    double m = 0.0;
    for (const auto* f : fields) m = std::max(m, stencil::max_abs(*f));
    return m;
}

std::vector<double> product(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

std::vector<double> product(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& c) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i] * c[i];
    return out;
}

const char* const kNotUnitSpeed = "premise not met: family is not unit speed";
const char* const kNotInextensible = "premise not met: flow is not inextensible";

// Printed forms first, then the forms derived from the frame equations, then
// the geodesic, asymptotic and curvature-line specializations.
const char* const kCurvatureIdentities[] = {
    "kg_evolution",           "kn_evolution",          "tg_evolution",
    "psi_kn_constraint",      "psi_kg_constraint.f3s", "psi_kg_constraint.f2s",
    "kg_evolution.full",      "kn_evolution.full",     "tg_evolution.full",
    "kn_evolution.geodesic",  "tg_evolution.geodesic", "psi_kn_constraint.geodesic",
    "kg_evolution.asymptotic", "tg_evolution.asymptotic", "psi_kg_constraint.asymptotic",
    "kg_evolution.principal", "kn_evolution.principal",
};

}  // namespace

FramedFamily surface_bound_family(std::string label, std::string name, std::shared_ptr<const ParametricSurface> surface,
                                  std::function<ChartPoint(double, double)> chart,
                                  std::function<ChartPoint(double, double)> chart_u, double period, bool closed,
                                  double t_begin, double t_end, bool arclength_uniform, bool inextensible) {
    FramedFamily f;
    f.label = std::move(label);
    f.name = std::move(name);
    f.position = [surface, chart](double u, double t) { return surface->point(chart(u, t)); };
    f.normal = [surface, chart](double u, double t) {
        const ChartPoint p = surface->wrap(chart(u, t));
        return unit_normal(*surface, p.u, p.v);
    };
    if (chart_u) {
        f.position_u = [surface, chart, chart_u](double u, double t) {
            const SurfacePartials d = surface->partials(chart(u, t));
            const ChartPoint c = chart_u(u, t);
            return c.u * d.x_u + c.v * d.x_v;
        };
    }
    f.period = period;
    f.closed = closed;
    f.t_begin = t_begin;
    f.t_end = t_end;
    f.arclength_uniform = arclength_uniform;
    f.inextensible = inextensible;
    f.source = FamilySource::SurfaceBound;
    return f;
}

FamilySlice sample_family(const FramedFamily& family, double t, std::size_t n) {
    if (n < kMinimumSamples) throw Error(ErrorKind::ValidationError, "family slices need at least 16 samples");
    FamilySlice slice;
    slice.t = t;
    CurveSamples& s = slice.samples;
    s.closed = family.closed;
    s.h = stencil::spacing(family.period, n, family.closed);
    s.points.resize(n);
    s.normals.resize(n);
    if (family.position_u) s.velocity.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = static_cast<double>(i) * s.h;
        s.points[i] = family.position(u, t);
        s.normals[i] = family.normal(u, t);
        if (family.position_u) s.velocity[i] = family.position_u(u, t);
        const double unit_error = std::abs(s.normals[i].norm() - 1.0);
        if (unit_error > 1e-10) {
            std::ostringstream msg;
            msg << family.label << ": | |n| - 1 | = " << unit_error << " at sample " << i;
            throw Error(ErrorKind::AdaptednessViolation, msg.str());
        }
    }
    const std::vector<Vector3> tangent =
        s.velocity.empty() ? stencil::derivative(s.points, s.h, s.closed) : s.velocity;
    for (std::size_t i = 0; i < n; ++i) {
        const double off = std::abs(tangent[i].dot(s.normals[i]));
        if (off > family.adaptedness_tolerance * tangent[i].norm()) {
            std::ostringstream msg;
            msg << family.label << ": <alpha_u, n> = " << off << " at sample " << i;
            throw Error(ErrorKind::AdaptednessViolation, msg.str());
        }
    }
    slice.frame = darboux_frame(s);
    slice.scalars = darboux_scalars(s, slice.frame);
    FrenetScalars fr = frenet_scalars(s, slice.frame, slice.scalars);
    slice.scalars.kappa = std::move(fr.kappa);
    slice.scalars.tau = std::move(fr.tau);
    slice.scalars.phi = std::move(fr.phi);
    slice.scalars.dphi_ds = std::move(fr.dphi_ds);
    if (family.arclength_uniform) {
        double worst = 0.0;
        for (double v : slice.scalars.speed) worst = std::max(worst, std::abs(v - 1.0));
        if (worst > 1e-6) {
            std::ostringstream msg;
            msg << family.label << " claims unit speed but |v - 1| reaches " << worst;
            throw Error(ErrorKind::RequiresUnitSpeed, msg.str());
        }
    }
    return slice;
}

FamilyJet family_jet(const FramedFamily& family, double t, std::size_t n, double dt) {
    const std::vector<Tap> taps = time_stencil(family, t, dt);
    FamilyJet jet;
    jet.dt = dt;
    jet.slice = sample_family(family, t, n);

    std::vector<Vector3> alpha_t;
    std::vector<double> v_t;
    for (const Tap& tap : taps) {
        const FamilySlice other = tap.time == t ? jet.slice : sample_family(family, tap.time, n);
        accumulate(alpha_t, other.samples.points, tap.weight);
        accumulate(jet.T_t, other.frame.T, tap.weight);
        accumulate(jet.g_t, other.frame.g, tap.weight);
        accumulate(jet.n_t, other.frame.n, tap.weight);
        accumulate(v_t, other.scalars.speed, tap.weight);
        accumulate(jet.k_g_t, other.scalars.k_g, tap.weight);
        accumulate(jet.k_n_t, other.scalars.k_n, tap.weight);
        accumulate(jet.tau_g_t, other.scalars.tau_g, tap.weight);
    }

    const DarbouxFrameField& fr = jet.slice.frame;
    VelocityDecomposition& vd = jet.velocity;
    vd.f1.resize(n);
    vd.f2.resize(n);
    vd.f3.resize(n);
    vd.psi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        vd.f1[i] = alpha_t[i].dot(fr.T[i]);
        vd.f2[i] = alpha_t[i].dot(fr.g[i]);
        vd.f3[i] = alpha_t[i].dot(fr.n[i]);
        vd.psi[i] = jet.g_t[i].dot(fr.n[i]);
        const Vector3 rebuilt = vd.f1[i] * fr.T[i] + vd.f2[i] * fr.g[i] + vd.f3[i] * fr.n[i];
        vd.reconstruction_error = std::max(vd.reconstruction_error, (alpha_t[i] - rebuilt).norm());
    }
    vd.alpha_t = std::move(alpha_t);

    jet.arclength.dS_dt = stencil::trapezoid_total(v_t, jet.slice.samples.h, jet.slice.samples.closed);
    jet.arclength.dv_dt = std::move(v_t);
    return jet;
}

VelocityDecomposition decompose_velocity(const FramedFamily& family, double t, std::size_t n, double dt) {
    return family_jet(family, t, n, dt).velocity;
}

ArclengthVariation arclength_variation(const FramedFamily& family, double t, std::size_t n, double dt) {
    return family_jet(family, t, n, dt).arclength;
}

double ToleranceModel::tolerance(double period, std::size_t n, double dt) const {
    const double h = period / static_cast<double>(n);
    return scale * constant * (h * h + dt * dt);
}

std::vector<ResidualReport> speed_variation_residual(const FramedFamily& family, const FamilyJet& jet,
                                                     const AnalysisOptions& options) {
    const SpaceDerivatives d = space_derivatives(jet);
    const ReportBuilder rb(family, jet, options);
    const std::vector<double>& v_t = jet.arclength.dv_dt;
    const std::vector<double> f2vkg = product(d.f2, d.v, d.kg);
    const std::vector<double> f3vkn = product(d.f3, d.v, d.kn);
    const std::size_t n = v_t.size();
    std::vector<double> full(n), geodesic(n), asymptotic(n);
    for (std::size_t i = 0; i < n; ++i) {
        full[i] = v_t[i] - (d.f1_u[i] - f2vkg[i] - f3vkn[i]);
        geodesic[i] = v_t[i] - (d.f1_u[i] - f3vkn[i]);
        asymptotic[i] = v_t[i] - (d.f1_u[i] - f2vkg[i]);
    }
    const double term = max_of({&v_t, &d.f1_u, &f2vkg, &f3vkn});
    const Classification c = classify(jet.slice.scalars, options.tol_class);
    std::vector<ResidualReport> out;
    out.push_back(rb.make("speed_variation", full, term));
    out.push_back(c.geodesic ? rb.make("speed_variation.geodesic", geodesic, term)
                             : rb.skipped("speed_variation.geodesic", "curve is not geodesic"));
    out.push_back(c.asymptotic ? rb.make("speed_variation.asymptotic", asymptotic, term)
                               : rb.skipped("speed_variation.asymptotic", "curve is not asymptotic"));
    return out;
}

std::vector<ResidualReport> inextensibility_residual(const FramedFamily& family, const FamilyJet& jet,
                                                     const AnalysisOptions& options) {
    const SpaceDerivatives d = space_derivatives(jet);
    const ReportBuilder rb(family, jet, options);
    const std::vector<double> f2kg = product(d.f2, d.kg);
    const std::vector<double> f3kn = product(d.f3, d.kn);
    const std::size_t n = d.f1.size();
    std::vector<double> full(n), geodesic(n), asymptotic(n);
    for (std::size_t i = 0; i < n; ++i) {
        full[i] = d.f1_s[i] - f2kg[i] - f3kn[i];
        geodesic[i] = d.f1_s[i] - f3kn[i];
        asymptotic[i] = d.f1_s[i] - f2kg[i];
    }
    const double term = max_of({&d.f1_s, &f2kg, &f3kn});
    const Classification c = classify(jet.slice.scalars, options.tol_class);
    const bool expected = family.inextensible;
    std::vector<ResidualReport> out;
    out.push_back(rb.make("inextensibility", full, term, expected));
    out.push_back(c.geodesic ? rb.make("inextensibility.geodesic", geodesic, term, expected)
                             : rb.skipped("inextensibility.geodesic", "curve is not geodesic"));
    out.push_back(c.asymptotic ? rb.make("inextensibility.asymptotic", asymptotic, term, expected)
                               : rb.skipped("inextensibility.asymptotic", "curve is not asymptotic"));
    for (auto& r : out) {
        r.auxiliary = jet.arclength.dS_dt;
        if (r.applicable && !expected) r.note = "negative control: length is not preserved";
    }
    return out;
}

std::vector<ResidualReport> frame_evolution_residuals(const FramedFamily& family, const FamilyJet& jet,
                                                      const AnalysisOptions& options) {
    if (options.require_unit_speed && !family.arclength_uniform) {
        throw Error(ErrorKind::RequiresUnitSpeed, family.label + ": frame evolution needs a unit-speed family");
    }
    const SpaceDerivatives d = space_derivatives(jet);
    const ReportBuilder rb(family, jet, options);
    const DarbouxFrameField& fr = jet.slice.frame;
    const std::size_t n = d.f1.size();

    const std::vector<double> f1kg = product(d.f1, d.kg);
    const std::vector<double> f1kn = product(d.f1, d.kn);
    const std::vector<double> f3tg = product(d.f3, d.tg);
    const std::vector<double> f2tg = product(d.f2, d.tg);
    const double term = max_of({&f1kg, &f1kn, &f3tg, &f2tg, &d.f2_s, &d.f3_s, &d.psi});

    // Coefficients of g in T_t (A) and of n in T_t (B), with optional terms dropped.
    struct Variant {
        const char* suffix;
        bool keep_f1kg;
        bool keep_f1kn;
        bool keep_torsion;
        const char* skip_reason;
    };
    const Classification c = classify(jet.slice.scalars, options.tol_class);
    const Variant variants[] = {
        {"", true, true, true, nullptr},
        {".geodesic", false, true, true, c.geodesic ? nullptr : "curve is not geodesic"},
        {".asymptotic", true, false, true, c.asymptotic ? nullptr : "curve is not asymptotic"},
        {".principal", true, true, false, c.principal ? nullptr : "curve is not a curvature line"},
    };

    std::vector<ResidualReport> out;
    for (const Variant& var : variants) {
        const std::string suffix = var.suffix;
        if (var.skip_reason != nullptr) {
            for (const char* eq : {"frame_T", "frame_g", "frame_n"}) out.push_back(rb.skipped(eq + suffix, var.skip_reason));
            continue;
        }
        std::vector<double> rT(n), rg(n), rn(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double A = (var.keep_f1kg ? f1kg[i] : 0.0) + d.f2_s[i] - (var.keep_torsion ? f3tg[i] : 0.0);
            const double B = (var.keep_f1kn ? f1kn[i] : 0.0) + d.f3_s[i] + (var.keep_torsion ? f2tg[i] : 0.0);
            rT[i] = (jet.T_t[i] - (A * fr.g[i] + B * fr.n[i])).norm();
            rg[i] = (jet.g_t[i] - (-A * fr.T[i] + d.psi[i] * fr.n[i])).norm();
            rn[i] = (jet.n_t[i] - (-B * fr.T[i] - d.psi[i] * fr.g[i])).norm();
        }
        out.push_back(rb.make("frame_T" + suffix, rT, term));
        out.push_back(rb.make("frame_g" + suffix, rg, term));
        out.push_back(rb.make("frame_n" + suffix, rn, term));
    }
    return out;
}

std::vector<ResidualReport> curvature_evolution_residuals(const FramedFamily& family, const FamilyJet& jet,
                                                          const AnalysisOptions& options) {
    if (!family.arclength_uniform) {
        throw Error(ErrorKind::RequiresUnitSpeed, family.label + ": curvature evolution needs a unit-speed family");
    }
    const ReportBuilder rb(family, jet, options);
    const Classification c = classify(jet.slice.scalars, options.tol_class);
    std::vector<ResidualReport> out;

    if (!family.inextensible) {
        for (const char* name : kCurvatureIdentities) out.push_back(rb.skipped(name, kNotInextensible));
        return out;
    }

    const SpaceDerivatives d = space_derivatives(jet);
    const std::size_t n = d.f1.size();
    // Every product that appears in some right-hand side, kept as fields so the
    // non-vacuity magnitude can be taken over them.
    const auto& kg = d.kg;
    const auto& kn = d.kn;
    const auto& tg = d.tg;
    const std::vector<double> t_f1s_kg = product(d.f1_s, kg), t_f1_kgs = product(d.f1, d.kg_s);
    const std::vector<double> t_f3s_tg = product(d.f3_s, tg), t_f3_tgs = product(d.f3, d.tg_s);
    const std::vector<double> t_f1_kn_tg = product(d.f1, kn, tg), t_f2_tg2 = product(d.f2, tg, tg);
    const std::vector<double> t_f1s_kn = product(d.f1_s, kn), t_f1_kns = product(d.f1, d.kn_s);
    const std::vector<double> t_f2s_tg = product(d.f2_s, tg), t_f2_tgs = product(d.f2, d.tg_s);
    const std::vector<double> t_f1_kg_tg = product(d.f1, kg, tg), t_f3_tg2 = product(d.f3, tg, tg);
    const std::vector<double> t_f1_kg_kn = product(d.f1, kg, kn), t_f2s_kn = product(d.f2_s, kn);
    const std::vector<double> t_f3_kn_tg = product(d.f3, kn, tg);
    const std::vector<double> t_psi_kn = product(d.psi, kn), t_psi_kg = product(d.psi, kg);
    const double term = max_of({&t_f1s_kg, &t_f1_kgs, &d.f2_ss, &t_f3s_tg, &t_f3_tgs, &t_f1_kn_tg, &t_f2_tg2,
                                &t_f1s_kn, &t_f1_kns, &d.f3_ss, &t_f2s_tg, &t_f2_tgs, &t_f1_kg_tg, &t_f3_tg2,
                                &t_f1_kg_kn, &t_f2s_kn, &t_f3_kn_tg, &d.psi_s, &t_psi_kn, &t_psi_kg});

    std::vector<std::vector<double>> r(std::size(kCurvatureIdentities), std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double kg_head = t_f1s_kg[i] + t_f1_kgs[i] + d.f2_ss[i] - t_f3s_tg[i] - t_f3_tgs[i];
        const double kn_head = t_f1s_kn[i] + t_f1_kns[i] + d.f3_ss[i] + t_f2s_tg[i] + t_f2_tgs[i];
        const double A = d.f1[i] * kg[i] + d.f2_s[i] - d.f3[i] * tg[i];
        const double B = d.f1[i] * kn[i] + d.f3_s[i] + d.f2[i] * tg[i];
        const double kg_t = jet.k_g_t[i];
        const double kn_t = jet.k_n_t[i];
        const double tg_t = jet.tau_g_t[i];
        const double psi = d.psi[i];

        const double kg_printed = kg_head - t_f1_kn_tg[i] - t_f3s_tg[i] - t_f2_tg2[i];
        const double kn_printed = kn_head + t_f1_kg_tg[i] + t_f2s_tg[i] - t_f3_tg2[i];
        const double tg_printed = -t_f1_kg_kn[i] - t_f2s_kn[i] + t_f3_kn_tg[i] + d.psi_s[i];
        const double psi_kn_rhs = (-d.f1[i] * kn[i] - d.f3_s[i] - d.f2[i] * tg[i]) * tg[i];
        const double psi_kg_f3s = (-d.f1[i] * kg[i] - d.f3_s[i] + d.f3[i] * tg[i]) * tg[i];
        const double psi_kg_f2s = (-d.f1[i] * kg[i] - d.f2_s[i] + d.f3[i] * tg[i]) * tg[i];

        r[0][i] = kg_t - kg_printed;
        r[1][i] = kn_t - kn_printed;
        r[2][i] = tg_t - tg_printed;
        r[3][i] = psi * kn[i] - psi_kn_rhs;
        r[4][i] = psi * kg[i] - psi_kg_f3s;
        r[5][i] = psi * kg[i] - psi_kg_f2s;
        r[6][i] = kg_t - (kg_head - B * tg[i] + psi * kn[i]);
        r[7][i] = kn_t - (kn_head + A * tg[i] - psi * kg[i]);
        r[8][i] = tg_t - (d.psi_s[i] - A * kn[i] + B * kg[i]);
        r[9][i] = kn_t - (kn_printed - t_f1_kg_tg[i]);
        r[10][i] = tg_t - (-t_f2s_kn[i] + t_f3_kn_tg[i] + d.psi_s[i]);
        r[11][i] = r[3][i];
        r[12][i] = kg_t - (kg_printed + t_f1_kn_tg[i]);
        r[13][i] = tg_t - d.psi_s[i];
        r[14][i] = r[5][i];
        r[15][i] = kg_t - (t_f1s_kg[i] + t_f1_kgs[i] + d.f2_ss[i]);
        r[16][i] = kn_t - (t_f1s_kn[i] + t_f1_kns[i] + d.f3_ss[i]);
    }
    for (std::size_t k = 0; k < std::size(kCurvatureIdentities); ++k) {
        const std::string name = kCurvatureIdentities[k];
        const char* skip = nullptr;
        if (name.ends_with(".geodesic") && !c.geodesic) skip = "curve is not geodesic";
        if (name.ends_with(".asymptotic") && !c.asymptotic) skip = "curve is not asymptotic";
        if (name.ends_with(".principal") && !c.principal) skip = "curve is not a curvature line";
        out.push_back(skip ? rb.skipped(name, skip) : rb.make(name, r[k], term));
    }
    return out;
}

std::vector<ResidualReport> all_residuals(const FramedFamily& family, double t, std::size_t n, double dt,
                                          const AnalysisOptions& options) {
    const FamilyJet jet = family_jet(family, t, n, dt);
    const ReportBuilder rb(family, jet, options);
    std::vector<ResidualReport> out = speed_variation_residual(family, jet, options);
    const auto append = [&out](std::vector<ResidualReport> more) {
        for (auto& r : more) out.push_back(std::move(r));
    };
    append(inextensibility_residual(family, jet, options));
    if (family.arclength_uniform || !options.require_unit_speed) {
        append(frame_evolution_residuals(family, jet, options));
    } else {
        for (const char* eq : {"frame_T", "frame_g", "frame_n"}) {
            for (const char* suffix : {"", ".geodesic", ".asymptotic", ".principal"}) {
                out.push_back(rb.skipped(std::string(eq) + suffix, kNotUnitSpeed));
            }
        }
    }
    if (family.arclength_uniform) {
        append(curvature_evolution_residuals(family, jet, options));
    } else {
        for (const char* name : kCurvatureIdentities) {
            out.push_back(rb.skipped(name, family.inextensible ? kNotUnitSpeed : kNotInextensible));
        }
    }
    return out;
}

std::vector<ConvergenceReport> compare_resolutions(const std::vector<ResidualReport>& coarse,
                                                   const std::vector<ResidualReport>& fine, double required_ratio,
                                                   double noise_floor) {
    std::vector<ConvergenceReport> out;
    for (const ResidualReport& f : fine) {
        if (!f.applicable) continue;
        const auto it = std::find_if(coarse.begin(), coarse.end(), [&](const ResidualReport& c) {
            return c.identity == f.identity && c.family == f.family && c.applicable;
        });
        if (it == coarse.end()) continue;
        ConvergenceReport r;
        r.identity = f.identity;
        r.family = f.family;
        r.coarse = it->max_residual;
        r.fine = f.max_residual;
        r.ratio = r.fine > 0.0 ? r.coarse / r.fine : std::numeric_limits<double>::infinity();
        r.converged = r.ratio >= required_ratio || (r.coarse <= noise_floor && r.fine <= noise_floor);
        out.push_back(std::move(r));
    }
    return out;
}

// ---- catalog ---------------------------------------------------------------

FramedFamily tilted_circle_rotation(double angular_radius, double tilt, double omega) {
    const double sr = std::sin(angular_radius);
    const double cr = std::cos(angular_radius);
    const Vector3 c{std::sin(tilt), 0.0, std::cos(tilt)};
    const Vector3 e1{std::cos(tilt), 0.0, -std::sin(tilt)};
    const Vector3 e2{0.0, 1.0, 0.0};
    const auto rotate = [omega](const Vector3& p, double t) {
        const double ca = std::cos(omega * t), sa = std::sin(omega * t);
        return Vector3{ca * p.x - sa * p.y, sa * p.x + ca * p.y, p.z};
    };
    FramedFamily f;
    f.label = "a";
    f.name = "tilted_circle_rotation";
    f.position = [=](double u, double t) {
        const double a = u / sr;
        return rotate(cr * c + sr * (std::cos(a) * e1 + std::sin(a) * e2), t);
    };
    f.normal = f.position;
    f.position_u = [=](double u, double t) {
        const double a = u / sr;
        return rotate(-std::sin(a) * e1 + std::cos(a) * e2, t);
    };
    f.period = kTwoPi * sr;
    f.closed = true;
    f.t_begin = 0.0;
    f.t_end = kTwoPi;
    f.arclength_uniform = true;
    f.inextensible = true;
    return f;
}

FramedFamily translating_circle() {
    FramedFamily f;
    f.label = "b";
    f.name = "translating_circle";
    f.position = [](double u, double t) { return Vector3{std::cos(u), std::sin(u), t}; };
    f.normal = [](double, double) { return Vector3{0.0, 0.0, 1.0}; };
    f.position_u = [](double u, double) { return Vector3{-std::sin(u), std::cos(u), 0.0}; };
    f.period = kTwoPi;
    f.closed = true;
    f.t_begin = 0.0;
    f.t_end = 1.0;
    f.arclength_uniform = true;
    f.inextensible = true;
    return f;
}

FramedFamily widening_helix(double r0, double rate, double length) {
    const auto radius = [=](double t) { return r0 + rate * t; };
    const auto pitch = [=](double t) {
        const double r = radius(t);
        return std::sqrt(1.0 - r * r);
    };
    FramedFamily f;
    f.label = "c";
    f.name = "widening_helix";
    f.position = [=](double u, double t) {
        const double r = radius(t);
        return Vector3{r * std::cos(u), r * std::sin(u), pitch(t) * u};
    };
    f.normal = [](double u, double) { return Vector3{std::cos(u), std::sin(u), 0.0}; };
    f.position_u = [=](double u, double t) {
        const double r = radius(t);
        return Vector3{-r * std::sin(u), r * std::cos(u), pitch(t)};
    };
    f.period = length;
    f.closed = false;
    f.t_begin = 0.0;
    // keep r below 0.95 so the pitch stays away from zero
    f.t_end = rate > 0.0 ? std::min(1.0, (0.95 - r0) / rate) : 1.0;
    f.arclength_uniform = true;
    f.inextensible = true;
    return f;
}

FramedFamily shrinking_latitude(double theta0) {
    auto sphere = std::make_shared<const ParametricSurface>(ParametricSurface::sphere());
    return surface_bound_family(
        "d", "shrinking_latitude", sphere, [=](double u, double t) { return ChartPoint{theta0 - t, u}; },
        [](double, double) { return ChartPoint{0.0, 1.0}; }, kTwoPi, true, 0.0, std::min(0.5, theta0 - 0.1), false,
        false);
}

TorusKnotArclength::TorusKnotArclength() {
    // speed of w -> (2w, 3w) on torus(2, 1) is sqrt(4 (2 + cos 3w)^2 + 9); it is
    // even and 2 pi / 3 periodic, so a cosine series integrates exactly.
    constexpr std::size_t M = 4096;
    std::vector<double> samples(M);
    for (std::size_t j = 0; j < M; ++j) samples[j] = speed_at(kTwoPi * static_cast<double>(j) / M);
    double a0 = 0.0;
    for (double s : samples) a0 += s;
    mean_speed_ = a0 / M;
    for (std::size_t k = 1; k < M / 2; ++k) {
        double ak = 0.0;
        for (std::size_t j = 0; j < M; ++j) {
            ak += samples[j] * std::cos(kTwoPi * static_cast<double>(k * j % M) / M);
        }
        ak *= 2.0 / M;
        cos_coeffs_.push_back(ak);
        // coefficients live on multiples of 3 and reach the rounding floor near k = 60
        if (k % 3 == 0 && k >= 30 && std::abs(ak) < 1e-16 * mean_speed_) break;
    }
}

double TorusKnotArclength::speed_at(double w) const {
    const double ring = 2.0 + std::cos(3.0 * w);
    return std::sqrt(4.0 * ring * ring + 9.0);
}

double TorusKnotArclength::length() const { return kTwoPi * mean_speed_; }

double TorusKnotArclength::arclength_at(double w) const {
    double s = mean_speed_ * w;
    for (std::size_t k = 0; k < cos_coeffs_.size(); ++k) {
        const double kk = static_cast<double>(k + 1);
        s += cos_coeffs_[k] * std::sin(kk * w) / kk;
    }
    return s;
}

double TorusKnotArclength::parameter(double s) const {
    const double L = length();
    const double turns = std::floor(s / L);
    const double local = s - turns * L;
    double w = local / mean_speed_;
    for (int it = 0; it < 30; ++it) {
        const double step = (arclength_at(w) - local) / speed_at(w);
        w -= step;
        if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w))) break;
    }
    return w + turns * kTwoPi;
}

double TorusKnotArclength::parameter_rate(double s) const { return 1.0 / speed_at(parameter(s)); }

ChartPath torus_knot_unit_speed_path(double omega_t) {
    auto arc = std::make_shared<const TorusKnotArclength>();
    return {
        [arc, omega_t](double s) {
            const double w = arc->parameter(s);
            return ChartPoint{2.0 * w + omega_t, 3.0 * w};
        },
        [arc](double s) {
            const double r = arc->parameter_rate(s);
            return ChartPoint{2.0 * r, 3.0 * r};
        },
    };
}

FramedFamily rotating_torus_knot(double omega) {
    auto torus = std::make_shared<const ParametricSurface>(ParametricSurface::torus(2.0, 1.0));
    auto arc = std::make_shared<const TorusKnotArclength>();
    FramedFamily f = surface_bound_family(
        "e", "rotating_torus_knot", torus,
        [arc, omega](double s, double t) {
            const double w = arc->parameter(s);
            return ChartPoint{2.0 * w + omega * t, 3.0 * w};
        },
        [arc](double s, double) {
            const double r = arc->parameter_rate(s);
            return ChartPoint{2.0 * r, 3.0 * r};
        },
        arc->length(), true, 0.0, 6.0 * kPi, true, true);
    return f;
}

std::vector<FramedFamily> builtin_families() {
    return {
        tilted_circle_rotation(kPi / 3.0, kPi / 6.0, 1.0),
        translating_circle(),
        widening_helix(0.6, 0.25, 2.0),
        shrinking_latitude(kPi / 3.0),
        // peak distance from the axis is 3, so this keeps point speeds at most 1
        rotating_torus_knot(1.0 / 3.0),
    };
}

}  // namespace darboux
