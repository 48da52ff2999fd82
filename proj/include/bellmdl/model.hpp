#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "bellmdl/errors.hpp"
#include "bellmdl/numerics.hpp"

// The one-parameter family of measurement-dependent local hidden-variable
// models for the singlet state. The hidden variable is a unit vector lambda;
// the auxiliary directions tied to the detector settings are delta-pinned to
// the settings themselves and integrate out, so the model reduces to a
// density over lambda that depends on the relative detector angle phi and a
// family parameter gamma:
//
//   weight kernel   f(u, v) = (c / |uv|) (u^2 + v^2)^gamma,
//                   c = c1 where sgn(u) = sgn(v), c = c2 otherwise
//   reduced density g(phi') = |cos phi' cos(phi'-phi)| f(cos phi', cos(phi'-phi))
//                           = c_region (cos^2 phi' + cos^2(phi'-phi))^gamma
//
// after the polar angle is integrated out analytically (contributing the
// factor theta_prefactor(gamma)). The coefficients (c1, c2) are fixed by
// normalization and by requiring the correlation to equal -cos phi.

namespace bellmdl {

// ===========================================================================
// Domain types
// ===========================================================================

/// Family parameter gamma. The coefficient-fixing integrals require
/// gamma > -1/2, enforced at construction.
class GammaParam {
public:
    explicit GammaParam(double value) : value_(value) {
        if (!(value > -0.5))
            throw DomainError("GammaParam: requires gamma > -1/2, got " +
                              std::to_string(value));
    }
    double value() const noexcept { return value_; }

    friend bool operator==(const GammaParam& a, const GammaParam& b) noexcept {
        return a.value_ == b.value_;
    }

private:
    double value_;
};

/// Relative detector angle phi in the open interval (0, pi). The endpoints
/// are rejected: there the sign-disagreement (resp. agreement) region
/// degenerates and the closed-form coefficients divide by zero.
class SettingAngle {
public:
    explicit SettingAngle(double radians) : phi_(radians) {
        if (!(radians > 0.0 && radians < std::numbers::pi))
            throw DomainError("SettingAngle: requires 0 < phi < pi, got " +
                              std::to_string(radians));
    }
    double radians() const noexcept { return phi_; }

private:
    double phi_;
};

/// Hidden variable in spherical coordinates: theta in [0, pi],
/// phi in [0, 2*pi).
struct HiddenVariable {
    double theta;
    double phi;

    HiddenVariable(double theta_rad, double phi_rad) : theta(theta_rad), phi(phi_rad) {
        if (!(theta >= 0.0 && theta <= std::numbers::pi))
            throw DomainError("HiddenVariable: theta must be in [0, pi]");
        if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi))
            throw DomainError("HiddenVariable: phi must be in [0, 2*pi)");
    }

    std::array<double, 3> to_cartesian() const {
        return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                std::cos(theta)};
    }
};

/// Solved normalization coefficients for one family member. Carries the
/// (phi, gamma) it was solved for, so densities for different settings
/// cannot be mixed up by accident.
struct Coefficients {
    double c1;
    double c2;
    SettingAngle phi;
    GammaParam gamma;

    Coefficients(double c1_val, double c2_val, SettingAngle phi_val, GammaParam gamma_val)
        : c1(c1_val), c2(c2_val), phi(phi_val), gamma(gamma_val) {
        if (!(c1 > 0.0 && c2 > 0.0))
            throw DomainError("Coefficients: c1 and c2 must be positive");
    }
};

/// The two angular integrals of (cos^2 phi' + cos^2(phi'-phi))^gamma, taken
/// over the sign-agreement set of phi' (i_plus) and its complement (i_minus).
struct RegionIntegrals {
    double i_plus;
    double i_minus;
};

// ===========================================================================
// Sign structure
// ===========================================================================

/// True when u and v carry the same sign. Points with u = 0 or v = 0 (a
/// measure-zero set) are assigned to the agreement region by convention so
/// point evaluations are deterministic.
inline bool signs_agree(double u, double v) noexcept {
    if (u == 0.0 || v == 0.0) return true;
    return (u > 0.0) == (v > 0.0);
}

inline bool signs_agree_at(double phi_prime, double phi) noexcept {
    return signs_agree(std::cos(phi_prime), std::cos(phi_prime - phi));
}

/// The four azimuths in (0, 2*pi) where cos(phi') or cos(phi'-phi) changes
/// sign, sorted. Quadrature over [0, 2*pi] must break panels here.
inline std::vector<double> sign_boundaries(const SettingAngle& phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> b = {
        std::numbers::pi / 2.0,
        3.0 * std::numbers::pi / 2.0,
        std::fmod(phi.radians() + std::numbers::pi / 2.0, two_pi),
        std::fmod(phi.radians() + 3.0 * std::numbers::pi / 2.0, two_pi),
    };
    std::sort(b.begin(), b.end());
    return b;
}

// ===========================================================================
// Densities
// ===========================================================================

/// The weight kernel f(u, v) = (c/|uv|) (u^2+v^2)^gamma with c selected by
/// sign agreement. Undefined on the sign boundaries u = 0 or v = 0.
inline double weight_f(double u, double v, const Coefficients& coeffs) {
    if (u == 0.0 || v == 0.0)
        throw DomainError("weight_f: undefined on the sign boundary u = 0 or v = 0");
    const double c = signs_agree(u, v) ? coeffs.c1 : coeffs.c2;
    const double g = coeffs.gamma.value();
    return c * std::pow(u * u + v * v, g) / std::abs(u * v);
}

/// Reduced azimuthal density g(phi') = |cos phi' cos(phi'-phi)| * f(...),
/// evaluated in the cancelled form c_region * (cos^2 phi' + cos^2(phi'-phi))^gamma,
/// which extends continuously across each sign region. Nonnegative everywhere.
inline double reduced_density_g(double phi_prime, const Coefficients& coeffs) {
    const double u = std::cos(phi_prime);
    const double v = std::cos(phi_prime - coeffs.phi.radians());
    const double c = signs_agree(u, v) ? coeffs.c1 : coeffs.c2;
    const double g = coeffs.gamma.value();
    const double base = u * u + v * v;
    return g == 0.0 ? c : c * std::pow(base, g);
}

// ===========================================================================
// Coefficient determination
// ===========================================================================

/// I+/I- by adaptive quadrature over [0, 2*pi] with panels broken at the
/// four sign boundaries, so each panel lies in a single sign region.
inline RegionIntegrals region_integrals(const SettingAngle& phi, const GammaParam& gamma,
                                        const QuadratureSpec& spec = {}) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    QuadratureSpec local = spec;
    local.breakpoints = sign_boundaries(phi);

    const double g = gamma.value();
    const double phi_val = phi.radians();
    const auto base_pow = [phi_val, g](double t) {
        const double u = std::cos(t);
        const double v = std::cos(t - phi_val);
        return g == 0.0 ? 1.0 : std::pow(u * u + v * v, g);
    };

    const double i_plus = integrate(
        [&](double t) { return signs_agree_at(t, phi_val) ? base_pow(t) : 0.0; }, 0.0,
        two_pi, local);
    const double i_minus = integrate(
        [&](double t) { return signs_agree_at(t, phi_val) ? 0.0 : base_pow(t); }, 0.0,
        two_pi, local);
    return RegionIntegrals{i_plus, i_minus};
}

/// Solves the two constraints (normalization = 1, correlation = -cos phi)
/// for (c1, c2). In region-integral form the system is diagonal:
///   c1 = (1 + cos phi) / (2 S(gamma) I+),
///   c2 = (1 - cos phi) / (2 S(gamma) I-).
inline Coefficients solve_coefficients(const SettingAngle& phi, const GammaParam& gamma,
                                       const QuadratureSpec& spec = {}) {
    const RegionIntegrals ri = region_integrals(phi, gamma, spec);
    const double s = theta_prefactor(gamma.value());
    const double cos_phi = std::cos(phi.radians());
    return Coefficients{(1.0 + cos_phi) / (2.0 * s * ri.i_plus),
                        (1.0 - cos_phi) / (2.0 * s * ri.i_minus), phi, gamma};
}

/// Closed forms at gamma = 0:
///   c1 = (1 + cos phi) / (8 (pi - phi)),  c2 = (1 - cos phi) / (8 phi).
inline Coefficients coefficients_gamma0_closed(const SettingAngle& phi) {
    const double p = phi.radians();
    return Coefficients{(1.0 + std::cos(p)) / (8.0 * (std::numbers::pi - p)),
                        (1.0 - std::cos(p)) / (8.0 * p), phi, GammaParam{0.0}};
}

// ===========================================================================
// Outcome functions
// ===========================================================================

/// A(x, lambda) = sgn(x . lambda) for the detector direction at azimuth
/// x_angle in the equatorial plane. With sin(theta) >= 0 this is
/// sgn(cos(phi_lambda - x_angle)). The measure-zero boundary x . lambda = 0
/// resolves to +1.
inline int outcome_a(double x_angle, const HiddenVariable& lambda) {
    const double dot = std::sin(lambda.theta) * std::cos(lambda.phi - x_angle);
    return dot < 0.0 ? -1 : +1;
}

/// B(y, lambda) = -sgn(y . lambda).
inline int outcome_b(double y_angle, const HiddenVariable& lambda) {
    return -outcome_a(y_angle, lambda);
}

// ===========================================================================
// Constraint verification
// ===========================================================================

struct ConstraintResiduals {
    double norm;  // |S * int g dphi' - 1|
    double corr;  // |S * int cos(phi') cos(phi'-phi) f dphi' - cos phi|
};

/// Plugs coefficients back into the two defining constraints and returns the
/// residuals. Both vanish (to quadrature tolerance) for solved coefficients.
inline ConstraintResiduals verify_constraints(const Coefficients& coeffs,
                                              const QuadratureSpec& spec = {}) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    QuadratureSpec local = spec;
    local.breakpoints = sign_boundaries(coeffs.phi);

    const double s = theta_prefactor(coeffs.gamma.value());
    const double phi_val = coeffs.phi.radians();

    const double norm = integrate(
        [&](double t) { return reduced_density_g(t, coeffs); }, 0.0, two_pi, local);
    // cos(phi') cos(phi'-phi) f = +g on sign agreement, -g on disagreement.
    const double corr = integrate(
        [&](double t) {
            const double g = reduced_density_g(t, coeffs);
            return signs_agree_at(t, phi_val) ? g : -g;
        },
        0.0, two_pi, local);

    return ConstraintResiduals{std::abs(s * norm - 1.0),
                               std::abs(s * corr - std::cos(phi_val))};
}

}  // namespace bellmdl
