#pragma once

#include <cmath>
#include <iosfwd>

namespace driftmc {

/// Plane vector used for positions, velocities and wind samples.
/// All quantities are rescaled so that magnitudes are of order 1.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    double norm() const { return std::hypot(x, y); }
    double norm_sq() const { return x * x + y * y; }

    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

/// 2x2 matrix, row-major. Used for field Jacobians.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    constexpr Mat2() = default;
    constexpr Mat2(double m11, double m12, double m21, double m22)
        : a11(m11), a12(m12), a21(m21), a22(m22) {}

    constexpr Vec2 operator*(Vec2 v) const {
        return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
    }
    constexpr Mat2 operator+(const Mat2& o) const {
        return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
    }
    constexpr Mat2 operator-(const Mat2& o) const {
        return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
    }
    constexpr Mat2 operator*(double s) const {
        return {a11 * s, a12 * s, a21 * s, a22 * s};
    }
    Mat2& operator+=(const Mat2& o) {
        a11 += o.a11; a12 += o.a12; a21 += o.a21; a22 += o.a22;
        return *this;
    }
    double max_abs() const {
        return std::max(std::max(std::fabs(a11), std::fabs(a12)),
                        std::max(std::fabs(a21), std::fabs(a22)));
    }
};

constexpr Mat2 operator*(double s, const Mat2& m) { return m * s; }

/// Compass angle of a plane vector in degrees: 0 = North (+y), 90 = East (+x),
/// increasing clockwise, result in [0, 360).
double compass_angle_deg(Vec2 v);

/// Reduce a phase to [0, 1).
double wrap_phase(double theta);

/// Split t into tide-cycle index k and in-cycle phase theta in [0,1), so that
/// t = eps*(k + theta). Values of t/eps within 1e-9 of an integer snap to that
/// integer; without the snap, rounding in t/eps would occasionally place a
/// cycle-start query at phase 1-ulp inside the previous cycle.
void phase_split(double t, double eps, long long& cycle, double& theta);

std::ostream& operator<<(std::ostream& os, Vec2 v);

}  // namespace driftmc
