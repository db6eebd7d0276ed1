#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "darboux/curve.hpp"
#include "darboux/surface.hpp"

namespace testing {

inline constexpr double kPi = std::numbers::pi;

/// Randomized inputs draw from DARBOUX_SEED when set so failures can be replayed.
inline std::mt19937_64 rng() {
    std::uint64_t seed = 20240611;
    if (const char* env = std::getenv("DARBOUX_SEED")) seed = std::strtoull(env, nullptr, 10);
    return std::mt19937_64(seed);
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("darboux-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline std::shared_ptr<const darboux::ParametricSurface> unit_sphere() {
    return std::make_shared<const darboux::ParametricSurface>(darboux::ParametricSurface::sphere());
}

/// Circle of colatitude theta0 on the unit sphere, traversed once.
inline darboux::DiscreteCurve latitude(double theta0, std::size_t n) {
    darboux::FourierPath p;
    p.period = 2 * kPi;
    p.u.offset = theta0;
    p.v.slope = 1;
    return darboux::DiscreteCurve::from_path(unit_sphere(), p.chart_path(), p.period, n, true);
}

/// Unit-speed helix (r cos s, r sin s, b s) on the cylinder of radius r, r^2 + b^2 = 1.
inline darboux::DiscreteCurve balanced_helix(double r, std::size_t n, double length = 4.0) {
    const double b = std::sqrt(1 - r * r);
    auto cyl = std::make_shared<const darboux::ParametricSurface>(darboux::ParametricSurface::cylinder(r));
    darboux::FourierPath p;
    p.period = length;
    p.u.slope = 1;
    p.v.slope = b;
    return darboux::DiscreteCurve::from_path(cyl, p.chart_path(), length, n, false);
}

}  // namespace testing
