#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

// Order-2 finite differences and trapezoid quadrature on uniform grids.
// Closed grids are periodic with no duplicated endpoint; open grids include
// both endpoints.

namespace darboux::stencil {

/// d/du of uniformly sampled values. Interior (and every closed-grid) sample
/// uses the central difference. Open ends extrapolate the three nearest
/// central differences quadratically, which is a one-sided order-2 stencil
/// whose leading error matches the interior one, so nested differences stay
/// order 2 up to the boundary.
template <typename T>
std::vector<T> derivative(const std::vector<T>& f, double h, bool closed) {
    const std::size_t n = f.size();
    std::vector<T> d(n);
    if (n < 5) return d;
    const double inv = 1.0 / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) * inv;
    if (closed) {
        d[0] = (f[1] - f[n - 1]) * inv;
        d[n - 1] = (f[0] - f[n - 2]) * inv;
    } else {
        d[0] = 3.0 * d[1] - 3.0 * d[2] + d[3];
        d[n - 1] = 3.0 * d[n - 2] - 3.0 * d[n - 3] + d[n - 4];
    }
    return d;
}

/// Same as derivative() for an angle field: differences are wrapped into (-pi, pi].
inline std::vector<double> angle_derivative(const std::vector<double>& a, double h, bool closed) {
    const auto wrap = [](double x) {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        x = std::remainder(x, two_pi);
        return x;
    };
    const std::size_t n = a.size();
    std::vector<double> d(n, 0.0);
    if (n < 5) return d;
    const double inv = 1.0 / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = wrap(a[i + 1] - a[i - 1]) * inv;
    if (closed) {
        d[0] = wrap(a[1] - a[n - 1]) * inv;
        d[n - 1] = wrap(a[0] - a[n - 2]) * inv;
    } else {
        d[0] = 3.0 * d[1] - 3.0 * d[2] + d[3];
        d[n - 1] = 3.0 * d[n - 2] - 3.0 * d[n - 3] + d[n - 4];
    }
    return d;
}

/// Running trapezoid integral with value 0 at the first sample.
inline std::vector<double> cumulative_trapezoid(const std::vector<double>& f, double h) {
    std::vector<double> s(f.size(), 0.0);
    for (std::size_t i = 1; i < f.size(); ++i) s[i] = s[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
    return s;
}

/// Integral over the whole grid; on a closed grid this includes the segment
/// from the last sample back to the first.
inline double trapezoid_total(const std::vector<double>& f, double h, bool closed) {
    if (f.empty()) return 0.0;
    double total = 0.0;
    for (std::size_t i = 1; i < f.size(); ++i) total += 0.5 * h * (f[i - 1] + f[i]);
    if (closed) total += 0.5 * h * (f.back() + f.front());
    return total;
}

/// Grid spacing for N samples over a parameter interval of length U.
inline double spacing(double period, std::size_t n, bool closed) {
    return closed ? period / static_cast<double>(n) : period / static_cast<double>(n - 1);
}

inline double max_abs(const std::vector<double>& f) {
    double m = 0.0;
    for (double x : f) {
        if (std::isnan(x)) continue;
        m = std::max(m, std::abs(x));
    }
    return m;
}

inline double rms(const std::vector<double>& f) {
    double acc = 0.0;
    std::size_t count = 0;
    for (double x : f) {
        if (std::isnan(x)) continue;
        acc += x * x;
        ++count;
    }
    return count == 0 ? 0.0 : std::sqrt(acc / static_cast<double>(count));
}

}  // namespace darboux::stencil
