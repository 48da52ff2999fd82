#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numbers>
#include <string>
#include <unordered_map>
#include <vector>

#include "bellmdl/errors.hpp"
#include "bellmdl/model.hpp"
#include "bellmdl/numerics.hpp"

// Measurement-dependence distance between the hidden-variable densities of
// two setting pairs,
//
//   d(phi_a, phi_b) = S(gamma) * int_0^2pi |g(phi'; phi_a) - g(phi'; phi_b)| dphi',
//
// its closed forms at gamma = 0 along phi_b = pi - phi_a, and the maximum
// d_max(gamma) over the symmetry-restricted region
// 0 < phi_a <= pi/2, phi_a <= phi_b <= pi - phi_a.

namespace bellmdl {

/// The two relative angles whose densities are compared.
struct DistancePair {
    SettingAngle phi_a;
    SettingAngle phi_b;
};

struct DmaxResult {
    GammaParam gamma;
    DistancePair argmax;
    double d_max = 0.0;
    int grid_n = 0;
    double refine_tol = 0.0;
};

namespace detail {

// Zeros of g_a - g_b located per panel by sign scan plus root polish. After
// splitting at the sign boundaries of both settings, g_a - g_b is smooth on
// each panel, so |g_a - g_b| only kinks at these crossings.
inline std::vector<double> density_crossings(const Coefficients& ca, const Coefficients& cb,
                                             const std::vector<double>& panel_edges) {
    constexpr int scan_points = 48;
    const auto h = [&](double t) {
        return reduced_density_g(t, ca) - reduced_density_g(t, cb);
    };

    std::vector<double> crossings;
    for (std::size_t i = 0; i + 1 < panel_edges.size(); ++i) {
        const double lo = panel_edges[i];
        const double hi = panel_edges[i + 1];
        const double width = hi - lo;
        if (width <= 1e-12) continue;

        double prev_t = lo + width / (scan_points + 1);
        double prev_h = h(prev_t);
        for (int k = 2; k <= scan_points; ++k) {
            const double t = lo + width * k / (scan_points + 1);
            const double ht = h(t);
            if (prev_h == 0.0) {
                crossings.push_back(prev_t);
            } else if (ht != 0.0 && (prev_h > 0.0) != (ht > 0.0)) {
                crossings.push_back(find_root(h, prev_t, t, 1e-13));
            }
            prev_t = t;
            prev_h = ht;
        }
    }
    return crossings;
}

inline double distance_from_coefficients(const Coefficients& ca, const Coefficients& cb,
                                         const QuadratureSpec& spec) {
    if (!(ca.gamma == cb.gamma))
        throw DomainError("distance_d: coefficients solved for different gamma values");
    constexpr double two_pi = 2.0 * std::numbers::pi;

    std::vector<double> edges = sign_boundaries(ca.phi);
    const std::vector<double> edges_b = sign_boundaries(cb.phi);
    edges.insert(edges.end(), edges_b.begin(), edges_b.end());
    std::sort(edges.begin(), edges.end());

    std::vector<double> panel_edges = edges;
    panel_edges.insert(panel_edges.begin(), 0.0);
    panel_edges.push_back(two_pi);
    const std::vector<double> crossings = density_crossings(ca, cb, panel_edges);
    edges.insert(edges.end(), crossings.begin(), crossings.end());

    QuadratureSpec local = spec;
    local.breakpoints = std::move(edges);
    const double integral = integrate(
        [&](double t) {
            return std::abs(reduced_density_g(t, ca) - reduced_density_g(t, cb));
        },
        0.0, two_pi, local);
    return theta_prefactor(ca.gamma.value()) * integral;
}

}  // namespace detail

/// L1 distance between the normalized azimuthal densities of the two setting
/// pairs, each with its own solved coefficients. Always in [0, 2].
inline double distance_d(const DistancePair& pair, const GammaParam& gamma,
                         const QuadratureSpec& spec = {}) {
    const Coefficients ca = solve_coefficients(pair.phi_a, gamma, spec);
    const Coefficients cb = solve_coefficients(pair.phi_b, gamma, spec);
    return detail::distance_from_coefficients(ca, cb, spec);
}

/// Closed form of d(phi, pi - phi) at gamma = 0:
///   (2 phi + pi cos phi - pi) / (pi - phi),  for 0 < phi <= pi/2.
inline double distance_gamma0_antidiagonal(const SettingAngle& phi) {
    const double p = phi.radians();
    if (p > std::numbers::pi / 2.0 + 1e-12)
        throw DomainError("distance_gamma0_antidiagonal: requires phi <= pi/2");
    return (2.0 * p + std::numbers::pi * std::cos(p) - std::numbers::pi) /
           (std::numbers::pi - p);
}

/// Stationarity condition for the gamma = 0 antidiagonal maximum:
/// 1 + (phi - pi) sin phi + cos phi, whose root in (0, pi/2] locates the
/// maximizing angle.
inline double stationarity_residual(double phi) {
    if (!(phi > 0.0 && phi < std::numbers::pi))
        throw DomainError("stationarity_residual: requires 0 < phi < pi");
    return 1.0 + (phi - std::numbers::pi) * std::sin(phi) + std::cos(phi);
}

struct Gamma0Maximum {
    double phi_star = 0.0;
    double d_max = 0.0;
};

/// Analytic route to the gamma = 0 maximum: root of the stationarity
/// equation on [0.5, 1.2], then the closed-form distance at the root.
inline Gamma0Maximum solve_gamma0_maximum() {
    const double phi_star =
        find_root([](double p) { return stationarity_residual(p); }, 0.5, 1.2, 1e-13);
    return Gamma0Maximum{phi_star, distance_gamma0_antidiagonal(SettingAngle{phi_star})};
}

namespace detail {

// Coefficient solves dominate the grid scan; the same phi_a repeats across a
// whole grid row, so memoize solves by the angle's bit pattern.
class CoefficientCache {
public:
    CoefficientCache(GammaParam gamma, QuadratureSpec spec)
        : gamma_(gamma), spec_(std::move(spec)) {}

    const Coefficients& at(double phi) {
        std::uint64_t key = 0;
        std::memcpy(&key, &phi, sizeof(key));
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            it = cache_.emplace(key, solve_coefficients(SettingAngle{phi}, gamma_, spec_))
                     .first;
        }
        return it->second;
    }

private:
    GammaParam gamma_;
    QuadratureSpec spec_;
    std::unordered_map<std::uint64_t, Coefficients> cache_;
};

}  // namespace detail

/// Maximizes distance_d over the restricted region
/// 0 < phi_a <= pi/2, phi_a <= phi_b <= pi - phi_a by coarse grid scan plus
/// pattern-search refinement.
inline DmaxResult find_dmax(const GammaParam& gamma, int grid_n = 181,
                            double refine_tol = 1e-6, const QuadratureSpec& spec = {}) {
    if (grid_n < 32) throw DomainError("find_dmax: grid_n must be >= 32");
    constexpr double pi = std::numbers::pi;

    detail::CoefficientCache cache(gamma, spec);
    const auto objective = [&](double phi_a, double phi_b) {
        if (phi_a == phi_b) return 0.0;  // identical densities
        return detail::distance_from_coefficients(cache.at(phi_a), cache.at(phi_b), spec);
    };

    const SearchRegion region{1e-3, pi / 2.0, [](double a) { return a; },
                              [pi](double a) { return pi - a; }};
    const Maximum2D best = maximize_region(objective, region, grid_n, refine_tol);
    return DmaxResult{gamma,
                      DistancePair{SettingAngle{best.x}, SettingAngle{best.y}},
                      best.value, grid_n, refine_tol};
}

/// find_dmax for each gamma in turn, preserving input order.
inline std::vector<DmaxResult> dmax_scan(const std::vector<GammaParam>& gammas,
                                         int grid_n = 181, double refine_tol = 1e-6,
                                         const QuadratureSpec& spec = {}) {
    if (gammas.empty()) throw DomainError("dmax_scan: gamma list must not be empty");
    std::vector<DmaxResult> results;
    results.reserve(gammas.size());
    for (const GammaParam& g : gammas) {
        try {
            results.push_back(find_dmax(g, grid_n, refine_tol, spec));
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("dmax_scan at gamma = " + std::to_string(g.value()) +
                                   ": " + e.what());
        }
    }
    return results;
}

}  // namespace bellmdl
