#pragma once

#include <cmath>
#include <ostream>

namespace darboux {

/// Point or direction in ambient Euclidean 3-space.
struct Vector3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vector3() = default;
    constexpr Vector3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vector3& operator+=(const Vector3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vector3& operator-=(const Vector3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vector3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
    constexpr Vector3& operator/=(double s) { x /= s; y /= s; z /= s; return *this; }

    [[nodiscard]] constexpr double dot(const Vector3& o) const { return x * o.x + y * o.y + z * o.z; }
    [[nodiscard]] constexpr Vector3 cross(const Vector3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    [[nodiscard]] constexpr double squared_norm() const { return dot(*this); }
    [[nodiscard]] double norm() const { return std::sqrt(squared_norm()); }
    [[nodiscard]] Vector3 normalized() const {
        const double n = norm();
        return {x / n, y / n, z / n};
    }

    friend constexpr Vector3 operator+(Vector3 a, const Vector3& b) { return a += b; }
    friend constexpr Vector3 operator-(Vector3 a, const Vector3& b) { return a -= b; }
    friend constexpr Vector3 operator-(const Vector3& a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr Vector3 operator*(Vector3 a, double s) { return a *= s; }
    friend constexpr Vector3 operator*(double s, Vector3 a) { return a *= s; }
    friend constexpr Vector3 operator/(Vector3 a, double s) { return a /= s; }
    friend constexpr bool operator==(const Vector3&, const Vector3&) = default;

    friend std::ostream& operator<<(std::ostream& os, const Vector3& v) {
        return os << '(' << v.x << ", " << v.y << ", " << v.z << ')';
    }
};

[[nodiscard]] constexpr double dot(const Vector3& a, const Vector3& b) { return a.dot(b); }
[[nodiscard]] constexpr Vector3 cross(const Vector3& a, const Vector3& b) { return a.cross(b); }

}  // namespace darboux
