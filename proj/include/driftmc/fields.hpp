#pragma once

#include <memory>
#include <string>

#include "driftmc/geometry.hpp"

namespace driftmc {

/// Tide velocity field M(t, theta, x).
///
/// t is slow time in [0,1], theta the tide phase (the field is 1-periodic in
/// theta with zero theta-mean), x the position. Implementations must supply
/// the partial derivatives the drift equations consume, plus the running
/// phase integral A1(t, theta, x) = integral_0^theta M(t, s, x) ds and its
/// position-Jacobian and time-derivative (the averaged equations need all
/// three as inner integrals). Phases are reduced modulo 1 before use.
///
/// Implementations are immutable after construction and safe for concurrent
/// reads.
class TideField {
  public:
    virtual ~TideField() = default;

    virtual Vec2 value(double t, double theta, Vec2 x) const = 0;
    virtual Vec2 theta_derivative(double t, double theta, Vec2 x) const = 0;
    virtual Vec2 time_derivative(double t, double theta, Vec2 x) const = 0;
    virtual Mat2 jacobian(double t, double theta, Vec2 x) const = 0;

    /// integral_0^theta M(t, s, x) ds with theta reduced mod 1 (the integral
    /// over any whole period vanishes). Default: adaptive quadrature of
    /// value() to 1e-10, for fields without a closed-form antiderivative.
    virtual Vec2 theta_antiderivative(double t, double theta, Vec2 x) const;

    /// integral_0^theta grad M(t, s, x) ds. Default: quadrature of jacobian().
    virtual Mat2 theta_antiderivative_jacobian(double t, double theta, Vec2 x) const;

    /// integral_0^theta dM/dt(t, s, x) ds. Default: quadrature of time_derivative().
    virtual Vec2 theta_antiderivative_time_derivative(double t, double theta, Vec2 x) const;

    /// Everything the phase-averaged equations need at one (t, theta, x).
    /// Default composes the virtuals above; closed-form fields can override
    /// to share subexpressions (this sits on the slow integrator's hot path).
    struct PhasePoint {
        Vec2 a1;      ///< theta_antiderivative
        Vec2 a1_dt;   ///< theta_antiderivative_time_derivative
        Mat2 jac;     ///< jacobian
        Mat2 a1_jac;  ///< theta_antiderivative_jacobian
    };
    virtual PhasePoint phase_point(double t, double theta, Vec2 x) const;
};

/// Meteorologically induced current perturbation N(t, theta, x),
/// 1-periodic in theta. Same immutability contract as TideField.
class PerturbationField {
  public:
    virtual ~PerturbationField() = default;

    virtual Vec2 value(double t, double theta, Vec2 x) const = 0;
    virtual Vec2 theta_derivative(double t, double theta, Vec2 x) const = 0;
    virtual Vec2 time_derivative(double t, double theta, Vec2 x) const = 0;
    virtual Mat2 jacobian(double t, double theta, Vec2 x) const = 0;
};

/// Built-in analytic tide field
///   M(t, theta, x) = (2 + sin 6 pi t) * x1 * ( sin 2 pi theta + 1/4 sin 4 pi theta,
///                                              1/2 sin 2 pi theta )
/// whose particle paths are non-circular tide loops. Zero theta-mean by
/// construction; all derivatives and phase integrals are closed-form.
class AnalyticTideField final : public TideField {
  public:
    Vec2 value(double t, double theta, Vec2 x) const override;
    Vec2 theta_derivative(double t, double theta, Vec2 x) const override;
    Vec2 time_derivative(double t, double theta, Vec2 x) const override;
    Mat2 jacobian(double t, double theta, Vec2 x) const override;
    Vec2 theta_antiderivative(double t, double theta, Vec2 x) const override;
    Mat2 theta_antiderivative_jacobian(double t, double theta, Vec2 x) const override;
    Vec2 theta_antiderivative_time_derivative(double t, double theta, Vec2 x) const override;
    PhasePoint phase_point(double t, double theta, Vec2 x) const override;
};

/// Built-in analytic perturbation field
///   N(t, theta, x) = (2 + cos 6 pi t) * x2 * ( sin 2 pi theta, sin 2 pi theta ),
/// with gradient orthogonal to the tide field's.
class AnalyticPerturbationField final : public PerturbationField {
  public:
    Vec2 value(double t, double theta, Vec2 x) const override;
    Vec2 theta_derivative(double t, double theta, Vec2 x) const override;
    Vec2 time_derivative(double t, double theta, Vec2 x) const override;
    Mat2 jacobian(double t, double theta, Vec2 x) const override;
};

class ZeroTideField final : public TideField {
  public:
    Vec2 value(double, double, Vec2) const override { return {}; }
    Vec2 theta_derivative(double, double, Vec2) const override { return {}; }
    Vec2 time_derivative(double, double, Vec2) const override { return {}; }
    Mat2 jacobian(double, double, Vec2) const override { return {}; }
    Vec2 theta_antiderivative(double, double, Vec2) const override { return {}; }
    Mat2 theta_antiderivative_jacobian(double, double, Vec2) const override { return {}; }
    Vec2 theta_antiderivative_time_derivative(double, double, Vec2) const override { return {}; }
};

class ZeroPerturbationField final : public PerturbationField {
  public:
    Vec2 value(double, double, Vec2) const override { return {}; }
    Vec2 theta_derivative(double, double, Vec2) const override { return {}; }
    Vec2 time_derivative(double, double, Vec2) const override { return {}; }
    Mat2 jacobian(double, double, Vec2) const override { return {}; }
};

/// The pair of sea-velocity fields a simulation runs on. Immutable; share
/// freely between concurrent workers.
struct FieldBundle {
    std::shared_ptr<const TideField> tide;
    std::shared_ptr<const PerturbationField> perturbation;
};

/// Registry lookup. Known names: "paper-tide", "none" (tide);
/// "paper-perturbation", "none" (perturbation). Throws ConfigError otherwise.
std::shared_ptr<const TideField> make_tide_field(const std::string& name);
std::shared_ptr<const PerturbationField> make_perturbation_field(const std::string& name);
FieldBundle make_field_bundle(const std::string& tide_name, const std::string& perturbation_name);

}  // namespace driftmc
