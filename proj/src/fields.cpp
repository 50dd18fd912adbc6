#include "driftmc/fields.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "driftmc/errors.hpp"
#include "driftmc/quadrature.hpp"

namespace driftmc {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

double compass_angle_deg(Vec2 v) {
    const double deg = std::atan2(v.x, v.y) * 180.0 / kPi;
    return deg < 0.0 ? deg + 360.0 : deg;
}

double wrap_phase(double theta) {
    double f = theta - std::floor(theta);
    return f >= 1.0 ? 0.0 : f;  // guards against floor rounding at -eps
}

void phase_split(double t, double eps, long long& cycle, double& theta) {
    const double q = t / eps;
    double k = std::floor(q);
    double f = q - k;
    const double snap = 1e-9 * (1.0 + std::fabs(q));
    if (f > 1.0 - snap) {
        k += 1.0;
        f = 0.0;
    } else if (f < snap) {
        f = 0.0;
    }
    cycle = static_cast<long long>(k);
    theta = f;
}

std::ostream& operator<<(std::ostream& os, Vec2 v) {
    return os << '(' << v.x << ", " << v.y << ')';
}

Vec2 TideField::theta_antiderivative(double t, double theta, Vec2 x) const {
    const double th = wrap_phase(theta);
    if (th == 0.0) return {};
    const double ix = adaptive_simpson(
        [&](double s) { return value(t, s, x).x; }, 0.0, th, 1e-10);
    const double iy = adaptive_simpson(
        [&](double s) { return value(t, s, x).y; }, 0.0, th, 1e-10);
    return {ix, iy};
}

Mat2 TideField::theta_antiderivative_jacobian(double t, double theta, Vec2 x) const {
    const double th = wrap_phase(theta);
    if (th == 0.0) return {};
    Mat2 out;
    out.a11 = adaptive_simpson([&](double s) { return jacobian(t, s, x).a11; }, 0.0, th, 1e-10);
    out.a12 = adaptive_simpson([&](double s) { return jacobian(t, s, x).a12; }, 0.0, th, 1e-10);
    out.a21 = adaptive_simpson([&](double s) { return jacobian(t, s, x).a21; }, 0.0, th, 1e-10);
    out.a22 = adaptive_simpson([&](double s) { return jacobian(t, s, x).a22; }, 0.0, th, 1e-10);
    return out;
}

Vec2 TideField::theta_antiderivative_time_derivative(double t, double theta, Vec2 x) const {
    const double th = wrap_phase(theta);
    if (th == 0.0) return {};
    const double ix = adaptive_simpson(
        [&](double s) { return time_derivative(t, s, x).x; }, 0.0, th, 1e-10);
    const double iy = adaptive_simpson(
        [&](double s) { return time_derivative(t, s, x).y; }, 0.0, th, 1e-10);
    return {ix, iy};
}

TideField::PhasePoint TideField::phase_point(double t, double theta, Vec2 x) const {
    return {theta_antiderivative(t, theta, x), theta_antiderivative_time_derivative(t, theta, x),
            jacobian(t, theta, x), theta_antiderivative_jacobian(t, theta, x)};
}

// ---------------------------------------------------------------------------
// Analytic tide field: amplitude c(t) = 2 + sin(6 pi t), shape
//   g(theta) = ( sin(2 pi theta) + 1/4 sin(4 pi theta), 1/2 sin(2 pi theta) ),
// M = c(t) * x1 * g(theta). The running phase integral is
//   G(theta) = ( (1-cos 2 pi theta)/(2 pi) + (1-cos 4 pi theta)/(16 pi),
//                (1-cos 2 pi theta)/(4 pi) ).
// ---------------------------------------------------------------------------

namespace {

inline double amp(double t) { return 2.0 + std::sin(6.0 * kPi * t); }
inline double amp_dt(double t) { return 6.0 * kPi * std::cos(6.0 * kPi * t); }

inline Vec2 tide_shape(double theta) {
    const double s2 = std::sin(kTwoPi * theta);
    const double s4 = std::sin(2.0 * kTwoPi * theta);
    return {s2 + 0.25 * s4, 0.5 * s2};
}

inline Vec2 tide_shape_dtheta(double theta) {
    const double c2 = std::cos(kTwoPi * theta);
    const double c4 = std::cos(2.0 * kTwoPi * theta);
    return {kTwoPi * c2 + kPi * c4, kPi * c2};
}

inline Vec2 tide_shape_integral(double theta) {
    const double c2 = std::cos(kTwoPi * theta);
    const double c4 = std::cos(2.0 * kTwoPi * theta);
    return {(1.0 - c2) / kTwoPi + (1.0 - c4) / (8.0 * kTwoPi), (1.0 - c2) / (2.0 * kTwoPi)};
}

}  // namespace

Vec2 AnalyticTideField::value(double t, double theta, Vec2 x) const {
    return amp(t) * x.x * tide_shape(wrap_phase(theta));
}

Vec2 AnalyticTideField::theta_derivative(double t, double theta, Vec2 x) const {
    return amp(t) * x.x * tide_shape_dtheta(wrap_phase(theta));
}

Vec2 AnalyticTideField::time_derivative(double t, double theta, Vec2 x) const {
    return amp_dt(t) * x.x * tide_shape(wrap_phase(theta));
}

Mat2 AnalyticTideField::jacobian(double t, double theta, Vec2 x) const {
    (void)x;  // linear in x1, independent of x2
    const Vec2 g = amp(t) * tide_shape(wrap_phase(theta));
    return {g.x, 0.0, g.y, 0.0};
}

Vec2 AnalyticTideField::theta_antiderivative(double t, double theta, Vec2 x) const {
    return amp(t) * x.x * tide_shape_integral(wrap_phase(theta));
}

Mat2 AnalyticTideField::theta_antiderivative_jacobian(double t, double theta, Vec2 x) const {
    (void)x;
    const Vec2 gi = amp(t) * tide_shape_integral(wrap_phase(theta));
    return {gi.x, 0.0, gi.y, 0.0};
}

Vec2 AnalyticTideField::theta_antiderivative_time_derivative(double t, double theta, Vec2 x) const {
    return amp_dt(t) * x.x * tide_shape_integral(wrap_phase(theta));
}

TideField::PhasePoint AnalyticTideField::phase_point(double t, double theta, Vec2 x) const {
    // Shares one sincos pair per argument; the 4 pi theta terms come from
    // double-angle identities.
    const double a = 6.0 * kPi * t;
    const double ca = std::cos(a);
    const double sa = std::sin(a);
    const double c = 2.0 + sa;
    const double c_dt = 6.0 * kPi * ca;
    const double u = kTwoPi * wrap_phase(theta);
    const double s2 = std::sin(u);
    const double c2 = std::cos(u);
    const double s4 = 2.0 * s2 * c2;
    const double c4 = 2.0 * c2 * c2 - 1.0;
    const Vec2 g{s2 + 0.25 * s4, 0.5 * s2};
    const Vec2 gi{(1.0 - c2) / kTwoPi + (1.0 - c4) / (8.0 * kTwoPi), (1.0 - c2) / (2.0 * kTwoPi)};
    PhasePoint out;
    out.a1 = c * x.x * gi;
    out.a1_dt = c_dt * x.x * gi;
    out.jac = {c * g.x, 0.0, c * g.y, 0.0};
    out.a1_jac = {c * gi.x, 0.0, c * gi.y, 0.0};
    return out;
}

// ---------------------------------------------------------------------------
// Analytic perturbation field: N = (2 + cos(6 pi t)) * x2 * (s, s) with
// s = sin(2 pi theta); the Jacobian lives in the second column only.
// ---------------------------------------------------------------------------

Vec2 AnalyticPerturbationField::value(double t, double theta, Vec2 x) const {
    const double s = std::sin(kTwoPi * wrap_phase(theta));
    const double a = (2.0 + std::cos(6.0 * kPi * t)) * x.y;
    return {a * s, a * s};
}

Vec2 AnalyticPerturbationField::theta_derivative(double t, double theta, Vec2 x) const {
    const double c = kTwoPi * std::cos(kTwoPi * wrap_phase(theta));
    const double a = (2.0 + std::cos(6.0 * kPi * t)) * x.y;
    return {a * c, a * c};
}

Vec2 AnalyticPerturbationField::time_derivative(double t, double theta, Vec2 x) const {
    const double s = std::sin(kTwoPi * wrap_phase(theta));
    const double a = -6.0 * kPi * std::sin(6.0 * kPi * t) * x.y;
    return {a * s, a * s};
}

Mat2 AnalyticPerturbationField::jacobian(double t, double theta, Vec2 x) const {
    (void)x;
    const double s = std::sin(kTwoPi * wrap_phase(theta));
    const double a = 2.0 + std::cos(6.0 * kPi * t);
    return {0.0, a * s, 0.0, a * s};
}

std::shared_ptr<const TideField> make_tide_field(const std::string& name) {
    if (name == "paper-tide") return std::make_shared<AnalyticTideField>();
    if (name == "none" || name == "zero") return std::make_shared<ZeroTideField>();
    throw ConfigError("unknown tide field '" + name + "' (expected: paper-tide, none)");
}

std::shared_ptr<const PerturbationField> make_perturbation_field(const std::string& name) {
    if (name == "paper-perturbation") return std::make_shared<AnalyticPerturbationField>();
    if (name == "none" || name == "zero") return std::make_shared<ZeroPerturbationField>();
    throw ConfigError("unknown perturbation field '" + name +
                      "' (expected: paper-perturbation, none)");
}

FieldBundle make_field_bundle(const std::string& tide_name, const std::string& perturbation_name) {
    return {make_tide_field(tide_name), make_perturbation_field(perturbation_name)};
}

}  // namespace driftmc
