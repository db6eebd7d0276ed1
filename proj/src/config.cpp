#include "darboux/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "darboux/errors.hpp"
#include "darboux/expression.hpp"

namespace darboux {

using json = nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
    throw Error(ErrorKind::ValidationError, field + ": " + what);
}

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

/// Reads one JSON object, remembering which keys were consumed so leftovers
/// can be rejected.
class Section {
public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) invalid(path_, "expected an object");
    }

    [[nodiscard]] bool has(const std::string& key) const { return node_.contains(key); }

    const json* get(const std::string& key) {
        seen_.insert(key);
        const auto it = node_.find(key);
        return it == node_.end() ? nullptr : &*it;
    }

    double number(const std::string& key, double fallback) {
        const json* v = get(key);
        return v ? as_number(*v, field(key)) : fallback;
    }

    std::size_t count(const std::string& key, std::size_t fallback) {
        const json* v = get(key);
        if (!v) return fallback;
        if (!v->is_number_unsigned()) invalid(field(key), "expected a non-negative integer");
        return v->get<std::size_t>();
    }

    bool boolean(const std::string& key, bool fallback) {
        const json* v = get(key);
        if (!v) return fallback;
        if (!v->is_boolean()) invalid(field(key), "expected true or false");
        return v->get<bool>();
    }

    std::string text(const std::string& key, std::string fallback) {
        const json* v = get(key);
        if (!v) return fallback;
        if (!v->is_string()) invalid(field(key), "expected a string");
        return v->get<std::string>();
    }

    std::vector<double> numbers(const std::string& key) {
        const json* v = get(key);
        if (!v) return {};
        if (!v->is_array()) invalid(field(key), "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v->size(); ++i) {
            out.push_back(as_number((*v)[i], field(key) + "[" + std::to_string(i) + "]"));
        }
        return out;
    }

    std::array<double, 2> range(const std::string& key, std::array<double, 2> fallback) {
        if (!has(key)) {
            seen_.insert(key);
            return fallback;
        }
        const std::vector<double> v = numbers(key);
        if (v.size() != 2) invalid(field(key), "expected [lower, upper]");
        if (!(v[0] < v[1])) invalid(field(key), "lower bound must be below upper bound");
        return {v[0], v[1]};
    }

    /// Rejects a key that does not belong in this section.
    void forbid(const std::string& key, const std::string& why) {
        if (has(key)) invalid(field(key), why);
        seen_.insert(key);
    }

    void finish() const {
        for (const auto& item : node_.items()) {
            if (!seen_.contains(item.key())) invalid(field(item.key()), "unknown key");
        }
    }

    [[nodiscard]] std::string field(const std::string& key) const { return join(path_, key); }

    static double as_number(const json& v, const std::string& field) {
        if (!v.is_number()) invalid(field, "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) invalid(field, "expected a finite number");
        return x;
    }

private:
    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

void require_positive(double value, const std::string& field) {
    if (!(value > 0.0)) invalid(field, "must be positive");
}

Expression parse_expression(const std::string& text, const std::vector<std::string>& variables,
                            const std::string& field) {
    try {
        return Expression::parse(text, variables);
    } catch (const Error& e) {
        throw Error(e.kind(), field + ": " + e.detail());
    }
}

std::optional<SurfaceKind> surface_kind_from(const std::string& name) {
    for (SurfaceKind k : {SurfaceKind::Sphere, SurfaceKind::Torus, SurfaceKind::Cylinder, SurfaceKind::Plane,
                          SurfaceKind::Monge}) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

SurfaceConfig read_surface(const json& node) {
    Section sec(node, "surface");
    SurfaceConfig out;
    const std::string kind = sec.text("kind", "sphere");
    const auto parsed = surface_kind_from(kind);
    if (!parsed) invalid("surface.kind", "unknown surface kind '" + kind + "'");
    out.kind = *parsed;
    const std::string not_here = "not a parameter of a " + kind + " surface";
    const bool has_radius = out.kind == SurfaceKind::Sphere || out.kind == SurfaceKind::Cylinder;
    if (has_radius) {
        out.radius = sec.number("radius", out.radius);
    } else {
        sec.forbid("radius", not_here);
    }
    if (out.kind == SurfaceKind::Torus) {
        out.ring_radius = sec.number("ring_radius", out.ring_radius);
        out.tube_radius = sec.number("tube_radius", out.tube_radius);
    } else {
        sec.forbid("ring_radius", not_here);
        sec.forbid("tube_radius", not_here);
    }
    if (out.kind == SurfaceKind::Monge) {
        out.height = sec.text("height", out.height);
        out.u_range = sec.range("u_range", out.u_range);
        out.v_range = sec.range("v_range", out.v_range);
    } else {
        sec.forbid("height", not_here);
        sec.forbid("u_range", not_here);
        sec.forbid("v_range", not_here);
    }
    out.regularity_epsilon = sec.number("regularity_epsilon", out.regularity_epsilon);
    sec.finish();
    return out;
}

FourierAxis read_axis(const json& node, const std::string& path) {
    Section sec(node, path);
    FourierAxis axis;
    axis.offset = sec.number("offset", 0.0);
    axis.slope = sec.number("slope", 0.0);
    axis.cos = sec.numbers("cos");
    axis.sin = sec.numbers("sin");
    sec.finish();
    return axis;
}

CurveConfig read_curve(const json& node) {
    Section sec(node, "curve");
    CurveConfig out;
    out.closed = sec.boolean("closed", out.closed);
    out.period = sec.number("period", out.period);
    const bool has_fourier = sec.has("fourier");
    const bool has_samples = sec.has("samples");
    if (has_fourier && has_samples) invalid("curve", "give either fourier or samples, not both");
    if (const json* f = sec.get("fourier")) {
        Section fs(*f, "curve.fourier");
        FourierPath path;
        if (const json* u = fs.get("u")) path.u = read_axis(*u, "curve.fourier.u");
        if (const json* v = fs.get("v")) path.v = read_axis(*v, "curve.fourier.v");
        fs.finish();
        out.fourier = path;
    }
    if (const json* s = sec.get("samples")) {
        if (!s->is_array()) invalid("curve.samples", "expected an array of [u, v] pairs");
        out.fourier.reset();
        for (std::size_t i = 0; i < s->size(); ++i) {
            const std::string field = "curve.samples[" + std::to_string(i) + "]";
            const json& pair = (*s)[i];
            if (!pair.is_array() || pair.size() != 2) invalid(field, "expected [u, v]");
            out.samples.push_back({Section::as_number(pair[0], field), Section::as_number(pair[1], field)});
        }
        if (out.samples.empty()) invalid("curve.samples", "must not be empty");
        out.n = out.samples.size();
    }
    if (sec.has("n")) {
        const std::size_t n = sec.count("n", out.n);
        if (has_samples && n != out.samples.size()) invalid("curve.n", "does not match the number of samples");
        out.n = n;
    }
    if (out.fourier) out.fourier->period = out.period;
    sec.finish();
    return out;
}

FlowConfig read_flow(const json& node) {
    Section sec(node, "flow");
    FlowConfig out;
    out.f2 = sec.text("f2", out.f2);
    const std::string mode = sec.text("f1_mode", "integrated");
    if (mode == "integrated") {
        out.f1_mode = F1Mode::Integrated;
    } else if (mode == "prescribed") {
        out.f1_mode = F1Mode::Prescribed;
    } else {
        invalid("flow.f1_mode", "expected \"integrated\" or \"prescribed\"");
    }
    out.f1 = sec.text("f1", out.f1);
    out.f1_at_0 = sec.number("f1_at_0", out.f1_at_0);
    const std::string policy = sec.text("closure_policy", "strict");
    if (policy == "strict") {
        out.closure_policy = ClosurePolicy::Strict;
    } else if (policy == "balance") {
        out.closure_policy = ClosurePolicy::Balance;
    } else {
        invalid("flow.closure_policy", "expected \"strict\" or \"balance\"");
    }
    out.closure_tolerance = sec.number("closure_tolerance", out.closure_tolerance);
    sec.finish();
    return out;
}

SimulationSettings read_simulation(const json& node) {
    Section sec(node, "simulation");
    SimulationSettings out;
    out.dt = sec.number("dt", out.dt);
    out.steps = sec.count("steps", out.steps);
    out.drift_tolerance = sec.number("drift_tolerance", out.drift_tolerance);
    out.snapshot_stride = sec.count("snapshot_stride", out.snapshot_stride);
    if (const json* h = sec.get("horizon")) out.horizon = Section::as_number(*h, "simulation.horizon");
    sec.finish();
    return out;
}

VerifySettings read_verify(const json& node) {
    Section sec(node, "verify");
    VerifySettings out;
    out.n = sec.count("n", out.n);
    out.dt = sec.number("dt", out.dt);
    out.t = sec.number("t", out.t);
    if (const json* f = sec.get("families")) {
        if (!f->is_array()) invalid("verify.families", "expected an array of family labels");
        out.families.clear();
        for (const json& label : *f) {
            if (!label.is_string()) invalid("verify.families", "expected an array of family labels");
            out.families.push_back(label.get<std::string>());
        }
    }
    out.required_ratio = sec.number("required_ratio", out.required_ratio);
    sec.finish();
    return out;
}

ToleranceSettings read_tolerances(const json& node) {
    Section sec(node, "tolerances");
    ToleranceSettings out;
    out.scale = sec.number("scale", out.scale);
    out.constant = sec.number("constant", out.constant);
    out.classification = sec.number("classification", out.classification);
    out.tangency = sec.number("tangency", out.tangency);
    sec.finish();
    return out;
}

/// "line L, column C" of a 1-based byte offset.
std::string location(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

json emit_axis(const FourierAxis& axis) {
    return json{{"offset", axis.offset}, {"slope", axis.slope}, {"cos", axis.cos}, {"sin", axis.sin}};
}

/// A closed curve must return to its start: each chart axis may only drift
/// by a whole number of periods, and only along a periodic axis.
void check_closure(const FourierAxis& axis, const AxisDomain& domain, double period, const std::string& field) {
    if (axis.slope == 0.0) return;
    if (!domain.periodic) invalid(field, "a closed curve cannot wind along a non-periodic chart axis");
    const double turns = axis.slope * period / domain.period();
    if (std::abs(turns - std::round(turns)) > 1e-9) {
        invalid(field, "a closed curve must wind a whole number of times");
    }
}

}  // namespace

FourierPath equator_path() {
    FourierPath path;
    path.u.offset = std::numbers::pi / 2.0;
    path.v.slope = 1.0;
    path.period = 2.0 * std::numbers::pi;
    return path;
}

RunConfig default_config() { return RunConfig{}; }

std::string_view to_string(F1Mode mode) {
    return mode == F1Mode::Integrated ? "integrated" : "prescribed";
}

std::string_view to_string(ClosurePolicy policy) {
    return policy == ClosurePolicy::Strict ? "strict" : "balance";
}

RunConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        std::string what = e.what();
        if (const auto colon = what.rfind(": "); colon != std::string::npos) what = what.substr(colon + 2);
        throw Error(ErrorKind::ParseError, location(text, e.byte) + ": " + what);
    }
    Section top(doc, "");
    RunConfig config;
    if (const json* s = top.get("surface")) config.surface = read_surface(*s);
    if (const json* c = top.get("curve")) config.curve = read_curve(*c);
    if (const json* f = top.get("flow")) config.flow = read_flow(*f);
    if (const json* s = top.get("simulation")) config.simulation = read_simulation(*s);
    if (const json* v = top.get("verify")) config.verify = read_verify(*v);
    if (const json* t = top.get("tolerances")) config.tolerances = read_tolerances(*t);
    config.output_directory = top.text("output_directory", config.output_directory);
    top.finish();
    validate_config(config);
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot read config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

void validate_config(const RunConfig& config) {
    const SurfaceConfig& s = config.surface;
    switch (s.kind) {
        case SurfaceKind::Sphere:
        case SurfaceKind::Cylinder:
            require_positive(s.radius, "surface.radius");
            break;
        case SurfaceKind::Torus:
            require_positive(s.ring_radius, "surface.ring_radius");
            require_positive(s.tube_radius, "surface.tube_radius");
            if (s.tube_radius > s.ring_radius) invalid("surface.tube_radius", "tube radius exceeds ring radius");
            break;
        case SurfaceKind::Monge:
            (void)parse_expression(s.height, height_variables(), "surface.height");
            break;
        case SurfaceKind::Plane:
            break;
    }
    require_positive(s.regularity_epsilon, "surface.regularity_epsilon");

    const CurveConfig& c = config.curve;
    require_positive(c.period, "curve.period");
    if (c.n < kMinimumSamples) invalid("curve.n", "needs at least " + std::to_string(kMinimumSamples) + " samples");
    if (!c.fourier && c.samples.empty()) invalid("curve", "needs a fourier path or samples");
    if (c.fourier && c.closed) {
        const auto surface = make_surface(s);
        check_closure(c.fourier->u, surface->u_domain(), c.period, "curve.fourier.u.slope");
        check_closure(c.fourier->v, surface->v_domain(), c.period, "curve.fourier.v.slope");
    }

    const FlowConfig& f = config.flow;
    (void)parse_expression(f.f2, flow_variables(), "flow.f2");
    (void)parse_expression(f.f1, flow_variables(), "flow.f1");
    require_positive(f.closure_tolerance, "flow.closure_tolerance");

    const SimulationSettings& sim = config.simulation;
    require_positive(sim.dt, "simulation.dt");
    if (sim.steps == 0) invalid("simulation.steps", "must be at least 1");
    require_positive(sim.drift_tolerance, "simulation.drift_tolerance");
    if (sim.snapshot_stride == 0) invalid("simulation.snapshot_stride", "must be at least 1");
    if (sim.horizon) {
        require_positive(*sim.horizon, "simulation.horizon");
        if (sim.dt * static_cast<double>(sim.steps) > *sim.horizon * (1.0 + 1e-12)) {
            invalid("simulation.steps", "dt * steps exceeds the horizon");
        }
    }

    const VerifySettings& v = config.verify;
    if (v.n < 2 * kMinimumSamples) {
        invalid("verify.n", "needs at least " + std::to_string(2 * kMinimumSamples) + " so the coarse run has enough samples");
    }
    require_positive(v.dt, "verify.dt");
    require_positive(v.required_ratio, "verify.required_ratio");
    std::set<std::string> known;
    for (const FramedFamily& fam : builtin_families()) known.insert(fam.label);
    for (const std::string& label : v.families) {
        if (!known.contains(label)) invalid("verify.families", "unknown family '" + label + "'");
    }

    const ToleranceSettings& t = config.tolerances;
    require_positive(t.scale, "tolerances.scale");
    require_positive(t.constant, "tolerances.constant");
    require_positive(t.classification, "tolerances.classification");
    require_positive(t.tangency, "tolerances.tangency");
    if (config.output_directory.empty()) invalid("output_directory", "must not be empty");
}

std::string emit_config(const RunConfig& config) {
    json surface{{"kind", std::string(to_string(config.surface.kind))},
                 {"regularity_epsilon", config.surface.regularity_epsilon}};
    switch (config.surface.kind) {
        case SurfaceKind::Sphere:
        case SurfaceKind::Cylinder:
            surface["radius"] = config.surface.radius;
            break;
        case SurfaceKind::Torus:
            surface["ring_radius"] = config.surface.ring_radius;
            surface["tube_radius"] = config.surface.tube_radius;
            break;
        case SurfaceKind::Monge:
            surface["height"] = config.surface.height;
            surface["u_range"] = config.surface.u_range;
            surface["v_range"] = config.surface.v_range;
            break;
        case SurfaceKind::Plane:
            break;
    }

    const CurveConfig& c = config.curve;
    json curve{{"closed", c.closed}, {"n", c.n}, {"period", c.period}};
    if (!c.samples.empty()) {
        json samples = json::array();
        for (const ChartPoint& p : c.samples) samples.push_back({p.u, p.v});
        curve["samples"] = samples;
    } else if (c.fourier) {
        curve["fourier"] = json{{"u", emit_axis(c.fourier->u)}, {"v", emit_axis(c.fourier->v)}};
    }

    const FlowConfig& f = config.flow;
    json flow{{"f2", f.f2},
              {"f1_mode", std::string(to_string(f.f1_mode))},
              {"f1", f.f1},
              {"f1_at_0", f.f1_at_0},
              {"closure_policy", std::string(to_string(f.closure_policy))},
              {"closure_tolerance", f.closure_tolerance}};

    const SimulationSettings& s = config.simulation;
    json simulation{{"dt", s.dt},
                    {"steps", s.steps},
                    {"drift_tolerance", s.drift_tolerance},
                    {"snapshot_stride", s.snapshot_stride}};
    if (s.horizon) simulation["horizon"] = *s.horizon;

    const VerifySettings& v = config.verify;
    json verify{{"n", v.n}, {"dt", v.dt}, {"t", v.t}, {"families", v.families}, {"required_ratio", v.required_ratio}};

    const ToleranceSettings& t = config.tolerances;
    json tolerances{{"scale", t.scale},
                    {"constant", t.constant},
                    {"classification", t.classification},
                    {"tangency", t.tangency}};

    const json doc{{"surface", surface},       {"curve", curve},           {"flow", flow},
                   {"simulation", simulation}, {"verify", verify},         {"tolerances", tolerances},
                   {"output_directory", config.output_directory}};
    return doc.dump(2) + "\n";
}

std::shared_ptr<const ParametricSurface> make_surface(const SurfaceConfig& config) {
    ParametricSurface surface = ParametricSurface::plane();
    switch (config.kind) {
        case SurfaceKind::Sphere: surface = ParametricSurface::sphere(config.radius); break;
        case SurfaceKind::Torus: surface = ParametricSurface::torus(config.ring_radius, config.tube_radius); break;
        case SurfaceKind::Cylinder: surface = ParametricSurface::cylinder(config.radius); break;
        case SurfaceKind::Plane: break;
        case SurfaceKind::Monge: {
            auto expr = std::make_shared<Expression>(
                parse_expression(config.height, height_variables(), "surface.height"));
            HeightField field;
            field.h = [expr](double u, double v) {
                const double values[] = {u, v};
                return expr->evaluate(values);
            };
            surface = ParametricSurface::monge(field, {config.u_range[0], config.u_range[1], false},
                                               {config.v_range[0], config.v_range[1], false});
            break;
        }
    }
    return std::make_shared<const ParametricSurface>(surface.with_regularity_epsilon(config.regularity_epsilon));
}

DiscreteCurve make_curve(const RunConfig& config) {
    const auto surface = make_surface(config.surface);
    const CurveConfig& c = config.curve;
    if (!c.samples.empty()) return DiscreteCurve::from_samples(surface, c.samples, c.period, c.closed);
    FourierPath path = *c.fourier;
    path.period = c.period;
    return DiscreteCurve::from_path(surface, path.chart_path(), c.period, c.n, c.closed);
}

namespace {

FlowFunction flow_function(const std::string& text, const std::string& field) {
    auto expr = std::make_shared<Expression>(parse_expression(text, flow_variables(), field));
    return [expr](const FlowPoint& p) {
        const double values[] = {p.s, p.t, p.k_g, p.k_n, p.tau_g, p.length};
        return expr->evaluate(values);
    };
}

}  // namespace

FlowSpec make_flow_spec(const RunConfig& config) {
    FlowSpec spec;
    spec.f2 = flow_function(config.flow.f2, "flow.f2");
    spec.f1_mode = config.flow.f1_mode;
    spec.f1 = flow_function(config.flow.f1, "flow.f1");
    spec.f1_at_0 = config.flow.f1_at_0;
    spec.closure = config.flow.closure_policy;
    spec.closure_tolerance = config.flow.closure_tolerance;
    spec.tangency_tolerance = config.tolerances.tangency;
    return spec;
}

SimulationConfig make_simulation_config(const RunConfig& config) {
    SimulationConfig sim;
    sim.dt = config.simulation.dt;
    sim.steps = config.simulation.steps;
    sim.n = config.curve.samples.empty() ? config.curve.n : config.curve.samples.size();
    sim.drift_tolerance = config.simulation.drift_tolerance;
    sim.snapshot_stride = config.simulation.snapshot_stride;
    sim.horizon = config.simulation.horizon;
    return sim;
}

AnalysisOptions make_analysis_options(const RunConfig& config) {
    AnalysisOptions options;
    options.tolerance.constant = config.tolerances.constant;
    options.tolerance.scale = config.tolerances.scale;
    options.tol_class = config.tolerances.classification;
    return options;
}

}  // namespace darboux
