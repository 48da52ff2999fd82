#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "bellmdl/errors.hpp"

// Self-contained numerical kernels: log-gamma, adaptive quadrature over
// integrands with known kink/jump locations, a bracketing root finder, and
// bounded 2-D maximization. Everything here is a pure function of its inputs
// and safe to call from multiple threads.

namespace bellmdl {

// ===========================================================================
// Quadrature
// ===========================================================================

/// Controls for the adaptive panel integrator. `breakpoints` lists interior
/// abscissae where the integrand may kink or jump; panel boundaries are
/// placed there so each panel sees a smooth integrand. Breakpoints outside
/// the open integration interval are ignored.
struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_subdivisions = 500;
    std::vector<double> breakpoints{};
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1] (QUADPACK dqk15).
// Gauss nodes are the odd-index Kronrod abscissae plus the centre.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.99145537112081263920685469752633,
    0.94910791234275852452618968404785,
    0.86486442335976907278971278864093,
    0.74153118559939443986386477328079,
    0.58608723546769113029414483825873,
    0.40584515137739716690660641207696,
    0.20778495500789846760068940377324,
    0.0,
};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.02293532201052922496373200805897,
    0.06309209262997855329070066318920,
    0.10479001032225018383987632254152,
    0.14065325971552591874518959051024,
    0.16900472663926790282658342659855,
    0.19035057806478540991325640242101,
    0.20443294007529889241416199923465,
    0.20948214108472782801299917489171,
};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.12948496616886969327061143267908,
    0.27970539148927666790146777142378,
    0.38183005050511894495036977548898,
    0.41795918367346938775510204081633,
};

struct Panel {
    double lo = 0.0;
    double hi = 0.0;
    double integral = 0.0;
    double error = 0.0;
};

// One Gauss-Kronrod 15-point pass over [lo, hi]. The error estimate follows
// the QUADPACK heuristic: |K15 - G7| rescaled against the integral of
// |f - mean| so smooth panels converge without over-subdivision.
template <class F>
Panel evaluate_panel(F&& f, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    const double fc = f(mid);
    double resk = kKronrodWeights[7] * fc;
    double resg = kGaussWeights[3] * fc;
    double resabs = kKronrodWeights[7] * std::abs(fc);

    std::array<double, 7> f_below{};
    std::array<double, 7> f_above{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        f_below[j] = f(mid - dx);
        f_above[j] = f(mid + dx);
        resk += kKronrodWeights[j] * (f_below[j] + f_above[j]);
        resabs += kKronrodWeights[j] * (std::abs(f_below[j]) + std::abs(f_above[j]));
        if (j % 2 == 1) resg += kGaussWeights[(j - 1) / 2] * (f_below[j] + f_above[j]);
    }

    const double reskh = 0.5 * resk;
    double resasc = kKronrodWeights[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j) {
        resasc += kKronrodWeights[j] *
                  (std::abs(f_below[j] - reskh) + std::abs(f_above[j] - reskh));
    }
    resasc *= half;
    resabs *= half;

    double err = std::abs(resk - resg) * half;
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    err = std::max(err, 50.0 * eps * resabs);

    return Panel{lo, hi, resk * half, err};
}

// Interior breakpoints clipped to (lo, hi), sorted, deduplicated. Points
// closer together than ~1e-13 of the span collapse to one.
inline std::vector<double> normalized_breakpoints(const std::vector<double>& pts,
                                                  double lo, double hi) {
    std::vector<double> out;
    out.reserve(pts.size());
    for (double p : pts) {
        if (p > lo && p < hi) out.push_back(p);
    }
    std::sort(out.begin(), out.end());
    const double min_gap = 1e-13 * (hi - lo);
    std::vector<double> dedup;
    for (double p : out) {
        if (dedup.empty() || p - dedup.back() > min_gap) dedup.push_back(p);
    }
    if (!dedup.empty() && hi - dedup.back() <= min_gap) dedup.pop_back();
    return dedup;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod quadrature of f over [lo, hi]. Panel boundaries
/// include every breakpoint in `spec`, so kinks or jumps located there do
/// not degrade convergence. Stops once the summed error estimate is below
/// max(abs_tol, rel_tol * |result|); throws ConvergenceError if
/// max_subdivisions panel splits are exhausted first.
template <class F>
double integrate(F&& f, double lo, double hi, const QuadratureSpec& spec = {}) {
    if (!(lo < hi)) throw DomainError("integrate: requires lo < hi");
    if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0))
        throw DomainError("integrate: tolerances must be positive");
    if (spec.max_subdivisions < 1)
        throw DomainError("integrate: max_subdivisions must be >= 1");

    std::vector<double> cuts = detail::normalized_breakpoints(spec.breakpoints, lo, hi);
    cuts.insert(cuts.begin(), lo);
    cuts.push_back(hi);

    std::vector<detail::Panel> panels;
    panels.reserve(cuts.size() + 16);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        panels.push_back(detail::evaluate_panel(f, cuts[i], cuts[i + 1]));
    }

    for (int splits = 0;; ++splits) {
        double total = 0.0;
        double err = 0.0;
        for (const auto& p : panels) {
            total += p.integral;
            err += p.error;
        }
        if (!std::isfinite(total))
            throw ConvergenceError("integrate: integrand produced a non-finite value");
        if (err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) return total;
        if (splits >= spec.max_subdivisions)
            throw ConvergenceError("integrate: tolerance not reached within " +
                                   std::to_string(spec.max_subdivisions) + " subdivisions");

        std::size_t worst = 0;
        for (std::size_t i = 1; i < panels.size(); ++i) {
            if (panels[i].error > panels[worst].error) worst = i;
        }
        const detail::Panel victim = panels[worst];
        const double mid = 0.5 * (victim.lo + victim.hi);
        panels[worst] = detail::evaluate_panel(f, victim.lo, mid);
        panels.push_back(detail::evaluate_panel(f, mid, victim.hi));
    }
}

// ===========================================================================
// Special functions
// ===========================================================================

/// ln Gamma(x) for x > 0, via the Lanczos approximation (g = 5.2421875,
/// 14 terms); relative error well below 1e-12 on (0, 30].
inline double ln_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("ln_gamma: requires x > 0");
    static constexpr std::array<double, 14> cof = {
        57.1562356658629235,     -59.5979603554754912,
        14.1360979747417471,     -0.491913816097620199,
        0.339946499848118887e-4, 0.465236289270485756e-4,
        -0.983744753048795646e-4, 0.158088703224912494e-3,
        -0.210264441724104883e-3, 0.217439618115212643e-3,
        -0.164318106536763890e-3, 0.844182239838527433e-4,
        -0.261908384015814087e-4, 0.368991826595316234e-5,
    };
    double y = x;
    double tmp = x + 5.24218750000000000;
    tmp = (x + 0.5) * std::log(tmp) - tmp;
    double ser = 0.999999999999997092;
    for (double c : cof) ser += c / ++y;
    return tmp + std::log(2.5066282746310005 * ser / x);
}

/// S(gamma) = sqrt(pi) * Gamma(gamma+1) / Gamma(gamma+3/2), the value of the
/// polar integral  int_0^pi sin^(2*gamma+1) theta dtheta. Defined for
/// gamma > -1/2.
inline double theta_prefactor(double gamma) {
    if (!(gamma > -0.5)) throw DomainError("theta_prefactor: requires gamma > -1/2");
    return std::sqrt(std::numbers::pi) *
           std::exp(ln_gamma(gamma + 1.0) - ln_gamma(gamma + 1.5));
}

// ===========================================================================
// Root finding
// ===========================================================================

struct RootResult {
    double root = 0.0;
    double bracket_lo = 0.0;  // final bracket, root is one endpoint
    double bracket_hi = 0.0;
    int iterations = 0;
};

/// Brent's method: bisection-safeguarded secant / inverse quadratic
/// interpolation. Requires a sign change over [lo, hi]; terminates when the
/// bracket width falls below tol (plus a machine-precision floor).
template <class F>
RootResult find_root_bracketed(F&& f, double lo, double hi, double tol) {
    if (!(lo < hi)) throw DomainError("find_root: requires lo < hi");
    if (!(tol > 0.0)) throw DomainError("find_root: tol must be positive");

    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return RootResult{a, a, a, 0};
    if (fb == 0.0) return RootResult{b, b, b, 0};
    if ((fa > 0.0) == (fb > 0.0))
        throw DomainError("find_root: f(lo) and f(hi) have the same sign");

    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr int max_iter = 200;
    double c = a, fc = fa;
    double d = b - a, e = d;

    for (int iter = 1; iter <= max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;     b = c;     c = a;
            fa = fb;   fb = fc;   fc = fa;
        }
        const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) {
            return RootResult{b, std::min(b, c), std::max(b, c), iter};
        }
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // attempt inverse quadratic / secant step
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    throw ConvergenceError("find_root: no convergence after " +
                           std::to_string(max_iter) + " iterations");
}

template <class F>
double find_root(F&& f, double lo, double hi, double tol) {
    return find_root_bracketed(std::forward<F>(f), lo, hi, tol).root;
}

// ===========================================================================
// Bounded 2-D maximization
// ===========================================================================

/// Triangular-ish search region: phi1 in [phi1_lo, phi1_hi], and for each
/// phi1 the second coordinate ranges over [phi2_lo(phi1), phi2_hi(phi1)].
/// Encodes the restricted angle-pair region phi1 <= phi2 <= pi - phi1.
struct SearchRegion {
    double phi1_lo;
    double phi1_hi;
    std::function<double(double)> phi2_lo;
    std::function<double(double)> phi2_hi;

    SearchRegion(double lo, double hi, std::function<double(double)> lo_fn,
                 std::function<double(double)> hi_fn)
        : phi1_lo(lo), phi1_hi(hi), phi2_lo(std::move(lo_fn)), phi2_hi(std::move(hi_fn)) {
        constexpr double half_pi = std::numbers::pi / 2.0;
        if (!(0.0 < phi1_lo && phi1_lo < phi1_hi && phi1_hi <= half_pi + 1e-12))
            throw DomainError("SearchRegion: requires 0 < phi1_lo < phi1_hi <= pi/2");
        if (!phi2_lo || !phi2_hi) throw DomainError("SearchRegion: missing phi2 bounds");
        for (int i = 0; i <= 32; ++i) {
            const double p = phi1_lo + (phi1_hi - phi1_lo) * i / 32.0;
            if (phi2_lo(p) > phi2_hi(p) + 1e-12)
                throw DomainError("SearchRegion: phi2_lo > phi2_hi inside the region");
        }
    }

    double clamp_phi2(double phi1, double phi2) const {
        return std::clamp(phi2, phi2_lo(phi1), std::max(phi2_lo(phi1), phi2_hi(phi1)));
    }
};

struct Maximum2D {
    double x = 0.0;
    double y = 0.0;
    double value = 0.0;
};

/// Coarse coarse_n x coarse_n grid scan over the region followed by an
/// 8-direction pattern search from the best cell. The pattern step halves on
/// failure and the search stops once it falls below refine_tol. Grid ties
/// resolve to the lexicographically smallest pair.
template <class F>
Maximum2D maximize_region(F&& f, const SearchRegion& region, int coarse_n,
                          double refine_tol) {
    if (coarse_n < 16) throw DomainError("maximize_region: coarse_n must be >= 16");
    if (!(refine_tol > 0.0)) throw DomainError("maximize_region: refine_tol must be positive");

    Maximum2D best{0.0, 0.0, -std::numeric_limits<double>::infinity()};
    const double x_span = region.phi1_hi - region.phi1_lo;
    double max_y_step = 0.0;

    for (int i = 0; i < coarse_n; ++i) {
        const double x = region.phi1_lo + x_span * i / (coarse_n - 1);
        const double y_lo = region.phi2_lo(x);
        const double y_hi = region.phi2_hi(x);
        const double y_span = y_hi - y_lo;
        const int m = y_span > 0.0 ? coarse_n : 1;
        if (m > 1) max_y_step = std::max(max_y_step, y_span / (coarse_n - 1));
        for (int j = 0; j < m; ++j) {
            const double y = m == 1 ? y_lo : y_lo + y_span * j / (coarse_n - 1);
            const double v = f(x, y);
            const bool better =
                v > best.value ||
                (v == best.value && (x < best.x || (x == best.x && y < best.y)));
            if (better) best = Maximum2D{x, y, v};
        }
    }

    // 8-direction pattern search, clamped into the region.
    static constexpr std::array<std::array<int, 2>, 8> dirs = {{
        {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1},
    }};
    double step = std::max({x_span / (coarse_n - 1), max_y_step, refine_tol});
    while (step > refine_tol) {
        Maximum2D candidate = best;
        for (const auto& d : dirs) {
            const double cx = std::clamp(best.x + d[0] * step, region.phi1_lo, region.phi1_hi);
            const double cy = region.clamp_phi2(cx, best.y + d[1] * step);
            if (cx == best.x && cy == best.y) continue;
            const double v = f(cx, cy);
            if (v > candidate.value) candidate = Maximum2D{cx, cy, v};
        }
        if (candidate.value > best.value) {
            best = candidate;
        } else {
            step *= 0.5;
        }
    }
    return best;
}

}  // namespace bellmdl
