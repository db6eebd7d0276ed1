#include "darboux/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "darboux/errors.hpp"

namespace darboux {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

std::string fixed(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, value);
    return buf;
}

void write_rows(std::ostream& out, const std::optional<double>& t, const DiscreteCurve& curve,
                const GeometricScalars& s) {
    const auto& params = curve.params();
    const auto points = curve.points();
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (t) out << format_number(*t) << ',';
        out << i;
        for (double x : {params[i].u, params[i].v, points[i].x, points[i].y, points[i].z, s.speed[i],
                         s.arclength[i], s.k_g[i], s.k_n[i], s.tau_g[i], s.kappa[i], s.tau[i], s.phi[i]}) {
            out << ',' << format_number(x);
        }
        out << '\n';
    }
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

double parse_field(const std::string& text, std::size_t line) {
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": malformed number '" + text + "'");
    }
    return value;
}

}  // namespace

void write_curve_csv(std::ostream& out, const DiscreteCurve& curve, const GeometricScalars& scalars) {
    out << kCurveCsvHeader << '\n';
    write_rows(out, std::nullopt, curve, scalars);
}

void write_snapshot_header(std::ostream& out, bool closed) {
    out << "# closed=" << (closed ? "true" : "false") << '\n';
    out << "t," << kCurveCsvHeader << '\n';
}

void write_snapshot_rows(std::ostream& out, double t, const DiscreteCurve& curve, const GeometricScalars& scalars) {
    write_rows(out, t, curve, scalars);
}

SnapshotSet read_snapshots(std::istream& in) {
    SnapshotSet set;
    const std::string header = std::string("t,") + kCurveCsvHeader;
    std::string line;
    std::size_t number = 0;
    bool seen_header = false;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line == "# closed=true") set.closed = true;
            if (line == "# closed=false") set.closed = false;
            continue;
        }
        if (!seen_header) {
            if (line != header) {
                throw Error(ErrorKind::ParseError, "line " + std::to_string(number) + ": expected header '" + header + "'");
            }
            seen_header = true;
            continue;
        }
        const auto fields = split(line);
        if (fields.size() != 15) {
            throw Error(ErrorKind::ParseError, "line " + std::to_string(number) + ": expected 15 columns, found " +
                                                   std::to_string(fields.size()));
        }
        const double t = parse_field(fields[0], number);
        const Vector3 p{parse_field(fields[4], number), parse_field(fields[5], number), parse_field(fields[6], number)};
        if (set.snapshots.empty() || set.snapshots.back().t != t) set.snapshots.push_back({t, {}});
        set.snapshots.back().points.push_back(p);
    }
    return set;
}

std::string diagnostics_line(const StepDiagnostics& d) {
    nlohmann::ordered_json line;
    line["step"] = d.step;
    line["t"] = d.t;
    line["L"] = d.length;
    line["drift"] = d.drift;
    line["residual"] = d.residual;
    return line.dump();
}

double polyline_length(const std::vector<Vector3>& points, bool closed) {
    double total = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) total += (points[i] - points[i - 1]).norm();
    if (closed && points.size() > 1) total += (points.front() - points.back()).norm();
    return total;
}

std::string render_svg(const SnapshotSet& set) {
    std::size_t drawn = 0;
    for (const auto& snap : set.snapshots) drawn += snap.points.size();
    if (drawn == 0) throw Error(ErrorKind::EmptyTrajectory, "no snapshot points to render");

    constexpr double azimuth = 35.0 * std::numbers::pi / 180.0;
    constexpr double elevation = 25.0 * std::numbers::pi / 180.0;
    const Vector3 right{-std::sin(azimuth), std::cos(azimuth), 0.0};
    const Vector3 up{-std::sin(elevation) * std::cos(azimuth), -std::sin(elevation) * std::sin(azimuth),
                     std::cos(elevation)};

    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin;
    double ymin = xmin;
    double ymax = -xmin;
    for (const auto& snap : set.snapshots) {
        for (const Vector3& p : snap.points) {
            const double x = dot(p, right);
            const double y = -dot(p, up);
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }

    constexpr double plot = 600.0;
    constexpr double margin = 40.0;
    constexpr double legend_width = 260.0;
    const double extent = std::max({xmax - xmin, ymax - ymin, 1e-12});
    const double scale = plot / extent;
    const double xoff = margin + 0.5 * (plot - scale * (xmax - xmin));
    const double yoff = margin + 0.5 * (plot - scale * (ymax - ymin));
    const double width = plot + 2 * margin + legend_width;
    const double height = std::max(plot + 2 * margin, 60.0 + 18.0 * static_cast<double>(set.snapshots.size()));

    const double t0 = set.snapshots.front().t;
    const double t1 = set.snapshots.back().t;
    const auto colour = [&](double t) {
        const double a = t1 > t0 ? (t - t0) / (t1 - t0) : 0.0;
        const auto mix = [a](int from, int to) {
            return static_cast<int>(std::lround(from + a * (to - from)));
        };
        char buf[16];
        std::snprintf(buf, sizeof buf, "#%02x%02x%02x", mix(31, 209), mix(78, 73), mix(156, 91));
        return std::string(buf);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0) << "\" height=\""
        << fixed(height, 0) << "\" viewBox=\"0 0 " << fixed(width, 0) << ' ' << fixed(height, 0) << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& snap : set.snapshots) {
        if (snap.points.empty()) continue;
        svg << '<' << (set.closed ? "polygon" : "polyline") << " fill=\"none\" stroke=\"" << colour(snap.t)
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < snap.points.size(); ++i) {
            const double x = xoff + scale * (dot(snap.points[i], right) - xmin);
            const double y = yoff + scale * (-dot(snap.points[i], up) - ymin);
            svg << (i ? " " : "") << fixed(x, 3) << ',' << fixed(y, 3);
        }
        svg << "\"/>\n";
    }
    const double lx = plot + 2 * margin;
    svg << "<text x=\"" << fixed(lx, 0) << "\" y=\"30\" font-family=\"monospace\" font-size=\"13\">t / length</text>\n";
    for (std::size_t k = 0; k < set.snapshots.size(); ++k) {
        const auto& snap = set.snapshots[k];
        char label[96];
        std::snprintf(label, sizeof label, "t=%.6g L=%.9f", snap.t, polyline_length(snap.points, set.closed));
        const double y = 50.0 + 18.0 * static_cast<double>(k);
        svg << "<line x1=\"" << fixed(lx, 0) << "\" y1=\"" << fixed(y - 4, 0) << "\" x2=\"" << fixed(lx + 20, 0)
            << "\" y2=\"" << fixed(y - 4, 0) << "\" stroke=\"" << colour(snap.t) << "\" stroke-width=\"3\"/>\n";
        svg << "<text x=\"" << fixed(lx + 26, 0) << "\" y=\"" << fixed(y, 0)
            << "\" font-family=\"monospace\" font-size=\"12\">" << label << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string reports_to_json(const std::vector<ResidualReport>& reports) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const ResidualReport& r : reports) {
        nlohmann::ordered_json j;
        j["identity"] = r.identity;
        j["family"] = r.family;
        j["n"] = r.n;
        j["dt"] = r.dt;
        j["max_residual"] = r.max_residual;
        j["rms_residual"] = r.rms_residual;
        j["max_term"] = r.max_term;
        j["tolerance"] = r.tolerance;
        j["expected_order"] = r.expected_order;
        j["applicable"] = r.applicable;
        j["expected_to_hold"] = r.expected_to_hold;
        j["holds"] = r.holds;
        j["pass"] = r.pass;
        j["auxiliary"] = r.auxiliary;
        j["note"] = r.note;
        out.push_back(j);
    }
    return out.dump(2) + "\n";
}

}  // namespace darboux
