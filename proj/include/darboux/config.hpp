#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "darboux/curve.hpp"
#include "darboux/family.hpp"
#include "darboux/flow.hpp"
#include "darboux/surface.hpp"

namespace darboux {

struct SurfaceConfig {
    SurfaceKind kind = SurfaceKind::Sphere;
    /// Sphere and cylinder.
    double radius = 1.0;
    /// Torus.
    double ring_radius = 2.0;
    double tube_radius = 1.0;
    /// Monge patch: height expression in u, v over a rectangle.
    std::string height = "0";
    std::array<double, 2> u_range{-1.0, 1.0};
    std::array<double, 2> v_range{-1.0, 1.0};
    double regularity_epsilon = kDefaultRegularityEpsilon;

    friend bool operator==(const SurfaceConfig&, const SurfaceConfig&) = default;
};

/// (pi/2, u): the equator of the sphere chart.
[[nodiscard]] FourierPath equator_path();

/// Either a Fourier path in chart coordinates or an explicit list of chart samples.
struct CurveConfig {
    bool closed = true;
    std::size_t n = 512;
    double period = 2.0 * std::numbers::pi;
    std::optional<FourierPath> fourier = equator_path();
    /// Used instead of the Fourier path when non-empty.
    std::vector<ChartPoint> samples;

    friend bool operator==(const CurveConfig&, const CurveConfig&) = default;
};

struct FlowConfig {
    std::string f2 = "0";
    F1Mode f1_mode = F1Mode::Integrated;
    std::string f1 = "0";
    double f1_at_0 = 0.0;
    ClosurePolicy closure_policy = ClosurePolicy::Strict;
    double closure_tolerance = 1e-8;

    friend bool operator==(const FlowConfig&, const FlowConfig&) = default;
};

struct SimulationSettings {
    double dt = 1e-3;
    std::size_t steps = 1000;
    double drift_tolerance = 1e-6;
    std::size_t snapshot_stride = 100;
    std::optional<double> horizon;

    friend bool operator==(const SimulationSettings&, const SimulationSettings&) = default;
};

struct VerifySettings {
    std::size_t n = 1024;
    double dt = 1e-4;
    double t = 0.0;
    std::vector<std::string> families{"a", "b", "c", "d", "e"};
    double required_ratio = 3.0;

    friend bool operator==(const VerifySettings&, const VerifySettings&) = default;
};

struct ToleranceSettings {
    double scale = 1.0;
    double constant = 10.0;
    double classification = 1e-6;
    double tangency = kDefaultTangencyTolerance;

    friend bool operator==(const ToleranceSettings&, const ToleranceSettings&) = default;
};

/// Every section is optional in the document and takes the defaults above.
/// The default curve is the equator of the unit sphere.
struct RunConfig {
    SurfaceConfig surface;
    CurveConfig curve;
    FlowConfig flow;
    SimulationSettings simulation;
    VerifySettings verify;
    ToleranceSettings tolerances;
    std::string output_directory = "out";

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

[[nodiscard]] RunConfig default_config();

/// ParseError with line and column for malformed JSON or expressions;
/// ValidationError naming the field for unknown keys, wrong types and bad values.
[[nodiscard]] RunConfig parse_config(std::string_view text);
/// IoError when the file cannot be read.
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

/// Canonical form: every field with its value (defaults included), keys
/// sorted, two-space indent, trailing newline.
[[nodiscard]] std::string emit_config(const RunConfig& config);

/// Re-checks value constraints, e.g. after command-line overrides.
void validate_config(const RunConfig& config);

[[nodiscard]] std::shared_ptr<const ParametricSurface> make_surface(const SurfaceConfig& config);
[[nodiscard]] DiscreteCurve make_curve(const RunConfig& config);
[[nodiscard]] FlowSpec make_flow_spec(const RunConfig& config);
[[nodiscard]] SimulationConfig make_simulation_config(const RunConfig& config);
[[nodiscard]] AnalysisOptions make_analysis_options(const RunConfig& config);

[[nodiscard]] std::string_view to_string(F1Mode mode);
[[nodiscard]] std::string_view to_string(ClosurePolicy policy);

}  // namespace darboux
