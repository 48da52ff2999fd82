#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "bellmdl/errors.hpp"
#include "bellmdl/model.hpp"
#include "bellmdl/numerics.hpp"

// Correlation E(x, y) of the model, evaluated two ways: by quadrature of the
// reduced density (a self-consistency check that reproduces -cos phi by
// construction) and by Monte Carlo simulation of the hidden variable. Also
// the original Bell inequality and the CHSH combination.

namespace bellmdl {

// ===========================================================================
// Result types
// ===========================================================================

struct CorrelationEstimate {
    double mean = 0.0;         // sample mean of A*B, in [-1, 1]
    double std_err = 0.0;      // sample standard deviation / sqrt(n_accepted)
    std::uint64_t n_accepted = 0;
    std::uint64_t n_proposed = 0;
    std::uint64_t seed = 0;
};

/// |E(x,y) - E(x,z)| <= 1 + E(y,z): lhs, rhs and the violation flag.
struct BellCheckResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool violated = false;
};

// ===========================================================================
// Quadrature route
// ===========================================================================

/// E(phi) = -S(gamma) * int_0^2pi cos(phi') cos(phi'-phi) f(...) dphi' with
/// solved coefficients. Equals -cos(phi) up to quadrature error; this is the
/// constraint the coefficients were solved against, evaluated independently
/// of the diagonal solve path.
inline double expectation_quadrature(const SettingAngle& phi, const GammaParam& gamma,
                                     const QuadratureSpec& spec = {}) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const Coefficients coeffs = solve_coefficients(phi, gamma, spec);

    QuadratureSpec local = spec;
    local.breakpoints = sign_boundaries(phi);
    const double phi_val = phi.radians();
    const double signed_integral = integrate(
        [&](double t) {
            const double g = reduced_density_g(t, coeffs);
            return signs_agree_at(t, phi_val) ? g : -g;
        },
        0.0, two_pi, local);
    return -theta_prefactor(gamma.value()) * signed_integral;
}

// ===========================================================================
// Monte Carlo route
// ===========================================================================

/// Rejection sampler for the normalized azimuthal marginal
/// p(phi') = S(gamma) * g(phi'). Proposals are uniform on [0, 2*pi) with the
/// analytic envelope M = max(c1, c2) * max((1+|cos phi|)^g, (1-|cos phi|)^g),
/// which bounds g because cos^2 phi' + cos^2(phi'-phi) ranges over
/// [1-|cos phi|, 1+|cos phi|].
///
/// Stream contract: the generator is std::mt19937_64 seeded directly with
/// `seed`; each proposal consumes exactly two draws (proposal angle, then
/// acceptance uniform), each mapped to [0, 1) from the top 53 bits. The
/// sequence of accepted values is therefore reproducible across platforms.
class PhiMarginalSampler {
public:
    PhiMarginalSampler(const SettingAngle& phi, const GammaParam& gamma,
                       std::uint64_t seed, const QuadratureSpec& spec = {})
        : coeffs_(solve_coefficients(phi, gamma, spec)), seed_(seed), rng_(seed) {
        const double g = gamma.value();
        const double c = std::abs(std::cos(phi.radians()));
        envelope_ = std::max(coeffs_.c1, coeffs_.c2) *
                    std::max(std::pow(1.0 + c, g), std::pow(1.0 - c, g));
    }

    double next() {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        for (;;) {
            ++n_proposed_;
            const double t = two_pi * uniform01();
            const double u = uniform01();
            if (u * envelope_ <= reduced_density_g(t, coeffs_)) {
                ++n_accepted_;
                return t;
            }
        }
    }

    const Coefficients& coefficients() const noexcept { return coeffs_; }
    double envelope() const noexcept { return envelope_; }
    std::uint64_t n_proposed() const noexcept { return n_proposed_; }
    std::uint64_t n_accepted() const noexcept { return n_accepted_; }
    std::uint64_t seed() const noexcept { return seed_; }

private:
    double uniform01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    Coefficients coeffs_;
    double envelope_ = 0.0;
    std::uint64_t seed_ = 0;
    std::mt19937_64 rng_;
    std::uint64_t n_proposed_ = 0;
    std::uint64_t n_accepted_ = 0;
};

/// n i.i.d. draws from the azimuthal marginal at (phi, gamma).
inline std::vector<double> sample_phi_marginal(const SettingAngle& phi,
                                               const GammaParam& gamma, std::size_t n,
                                               std::uint64_t seed) {
    if (n < 1) throw DomainError("sample_phi_marginal: requires n >= 1");
    PhiMarginalSampler sampler(phi, gamma, seed);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(sampler.next());
    return out;
}

/// Monte Carlo estimate of <AB> at (phi, gamma). Outcomes depend only on the
/// azimuth of lambda (sin theta >= 0), so lambda is formed with theta = pi/2
/// and only the azimuthal marginal is sampled. The mean converges to
/// -cos(phi); std_err is the sample standard deviation over sqrt(n).
inline CorrelationEstimate estimate_correlation_mc(const SettingAngle& phi,
                                                   const GammaParam& gamma, std::size_t n,
                                                   std::uint64_t seed) {
    if (n < 100) throw DomainError("estimate_correlation_mc: requires n >= 100");
    PhiMarginalSampler sampler(phi, gamma, seed);
    constexpr double half_pi = std::numbers::pi / 2.0;

    std::int64_t sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const HiddenVariable lambda{half_pi, sampler.next()};
        sum += outcome_a(0.0, lambda) * outcome_b(phi.radians(), lambda);
    }
    const double mean = static_cast<double>(sum) / static_cast<double>(n);
    // A*B is +/-1, so sum of squares is n and the sample variance collapses.
    const double variance =
        (static_cast<double>(n) * (1.0 - mean * mean)) / (static_cast<double>(n) - 1.0);
    const double std_err = std::sqrt(variance / static_cast<double>(n));
    return CorrelationEstimate{mean, std_err, sampler.n_accepted(), sampler.n_proposed(),
                               seed};
}

// ===========================================================================
// Inequality checks
// ===========================================================================

namespace detail {
inline void require_open_angle(double radians, const char* what) {
    if (!(radians > 0.0 && radians < std::numbers::pi))
        throw DomainError(std::string(what) + ": angles must lie in (0, pi)");
}
}  // namespace detail

/// Original Bell inequality |E(xy) - E(xz)| <= 1 + E(yz), for any correlation
/// function of the relative angle (quantum -cos, or the model's expectation
/// at fixed gamma).
template <class E>
BellCheckResult bell_original_check(double phi_xy, double phi_xz, double phi_yz,
                                    E&& correlation) {
    detail::require_open_angle(phi_xy, "bell_original_check");
    detail::require_open_angle(phi_xz, "bell_original_check");
    detail::require_open_angle(phi_yz, "bell_original_check");
    const double lhs = std::abs(correlation(phi_xy) - correlation(phi_xz));
    const double rhs = 1.0 + correlation(phi_yz);
    return BellCheckResult{lhs, rhs, lhs > rhs};
}

/// CHSH combination |E(ab) - E(ab')| + |E(a'b) + E(a'b')| for two settings
/// per party; local hidden-variable bound 2, quantum maximum 2*sqrt(2).
template <class E>
double chsh_value(double phi_ab, double phi_ab_prime, double phi_aprime_b,
                  double phi_aprime_bprime, E&& correlation) {
    detail::require_open_angle(phi_ab, "chsh_value");
    detail::require_open_angle(phi_ab_prime, "chsh_value");
    detail::require_open_angle(phi_aprime_b, "chsh_value");
    detail::require_open_angle(phi_aprime_bprime, "chsh_value");
    return std::abs(correlation(phi_ab) - correlation(phi_ab_prime)) +
           std::abs(correlation(phi_aprime_b) + correlation(phi_aprime_bprime));
}

}  // namespace bellmdl
