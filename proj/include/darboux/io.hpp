#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "darboux/curve.hpp"
#include "darboux/family.hpp"
#include "darboux/flow.hpp"

namespace darboux {

/// 17 significant digits; "nan", "inf" and "-inf" for non-finite values.
[[nodiscard]] std::string format_number(double value);

/// Column order of the per-sample CSV.
inline constexpr const char* kCurveCsvHeader = "index,u,v,x,y,z,speed,S,k_g,k_n,tau_g,kappa,tau,phi";

/// Header line plus one row per sample. Undefined Frenet values print as nan.
void write_curve_csv(std::ostream& out, const DiscreteCurve& curve, const GeometricScalars& scalars);

/// Snapshot file: a "# closed=true|false" line, the curve header prefixed by
/// a t column, then rows appended by write_snapshot_rows.
void write_snapshot_header(std::ostream& out, bool closed);
void write_snapshot_rows(std::ostream& out, double t, const DiscreteCurve& curve, const GeometricScalars& scalars);

struct SnapshotPoints {
    double t = 0.0;
    std::vector<Vector3> points;
};

struct SnapshotSet {
    bool closed = true;
    std::vector<SnapshotPoints> snapshots;
};

/// Reads a snapshot file back, grouping rows by t. ParseError on malformed input.
[[nodiscard]] SnapshotSet read_snapshots(std::istream& in);

/// One JSON object per line with step, t, L, drift and residual.
[[nodiscard]] std::string diagnostics_line(const StepDiagnostics& d);

/// Polyline length of ambient points, including the closing segment when closed.
[[nodiscard]] double polyline_length(const std::vector<Vector3>& points, bool closed);

/// Orthographic view of every snapshot, coloured from blue (earliest) to red
/// (latest), with a legend of times and polyline lengths. EmptyTrajectory when
/// there is nothing to draw.
[[nodiscard]] std::string render_svg(const SnapshotSet& set);

[[nodiscard]] std::string reports_to_json(const std::vector<ResidualReport>& reports);

}  // namespace darboux
