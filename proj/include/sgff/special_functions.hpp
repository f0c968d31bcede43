#pragma once

// Complex special functions: log-Gamma, Barnes log-G, and the two-body form
// factor F built from an eight-factor Barnes-G ratio. Everything is computed
// in log form and exponentiated only at the end, so large ratios never
// overflow.

#include <cmath>
#include <complex>
#include <numbers>

#include "sgff/errors.hpp"

namespace sgff {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

// Model constants. b and g are locked together by b = g^2 / (2(8*pi + g^2)).
struct CouplingParams {
    double b;       // in (0, 1/2)
    double b_hat;   // 1/2 - b
    double g;       // > 0
    double mass;    // > 0

    static CouplingParams from_b(double b, double mass = 1.0) {
        if (!(b > 0.0 && b < 0.5))
            throw config_error("CouplingParams: b must lie in (0, 1/2), got " + std::to_string(b));
        if (!(mass > 0.0)) throw config_error("CouplingParams: mass must be positive");
        const double g = std::sqrt(16.0 * pi * b / (1.0 - 2.0 * b));
        return {b, 0.5 - b, g, mass};
    }

    static CouplingParams from_g(double g, double mass = 1.0) {
        if (!(g > 0.0)) throw config_error("CouplingParams: g must be positive");
        const double b = 0.5 * g * g / (8.0 * pi + g * g);
        return {b, 0.5 - b, g, mass};
    }

    double sin_2pi_b() const { return std::sin(2.0 * pi * b); }
};

namespace detail {

// Lanczos approximation, g = 7, 9 terms. Good to ~1e-14 relative on the
// right half plane.
inline constexpr double lanczos_coeff[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

inline bool near_nonpositive_integer(cplx z, double tol = 1e-13) {
    const double r = std::round(z.real());
    return r <= 0.5 && std::abs(z.real() - r) < tol && std::abs(z.imag()) < tol;
}

}  // namespace detail

// Principal-branch log Gamma for Re z >= 1/2; continued by the reflection
// formula otherwise (there the branch may differ from principal by 2*pi*i,
// which exponentiation removes).
inline cplx log_gamma(cplx z) {
    if (detail::near_nonpositive_integer(z))
        throw pole_error("log_gamma: pole at non-positive integer z");
    if (z.real() < 0.5) {
        return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma(1.0 - z);
    }
    z -= 1.0;
    cplx x = detail::lanczos_coeff[0];
    for (int i = 1; i < 9; ++i) x += detail::lanczos_coeff[i] / (z + static_cast<double>(i));
    const cplx t = z + 7.5;
    return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

inline cplx gamma_fn(cplx z) { return std::exp(log_gamma(z)); }

namespace detail {

inline constexpr double zeta_prime_m1 = -0.16542114370045092921;

// log G(1+z) for large z, |arg z| < pi. Coefficients are
// B_{2k+2} / (4k(k+1)).
inline cplx log_barnes_g_asymptotic(cplx z_plus_1) {
    const cplx z = z_plus_1 - 1.0;
    const cplx lz = std::log(z);
    cplx s = 0.5 * z * z * lz - 0.75 * z * z + 0.5 * z * std::log(2.0 * pi) - lz / 12.0 +
             zeta_prime_m1;
    constexpr double coeff[8] = {-1.0 / 240.0,        1.0 / 1008.0,
                                 -1.0 / 1440.0,       5.0 / 5280.0,
                                 -691.0 / 327600.0,   7.0 / 1008.0,
                                 -3617.0 / 114240.0,  43867.0 / 229824.0};
    const cplx z2 = z * z;
    cplx zp = z2;
    for (double c : coeff) {
        s += c / zp;
        zp *= z2;
    }
    return s;
}

}  // namespace detail

// Barnes log-G. Upward recursion log G(z) = log G(z+1) - log Gamma(z) into
// the region where the asymptotic expansion converges (|z| >= 8 and
// Re z >= 8). G vanishes at non-positive integers; that is signalled as a
// pole_error since log G diverges there.
inline cplx log_barnes_g(cplx z) {
    if (detail::near_nonpositive_integer(z))
        throw pole_error("log_barnes_g: G vanishes at non-positive integer z");
    cplx shift = 0.0;
    int guard = 0;
    while (z.real() < 8.0 || std::abs(z) < 8.0) {
        shift += log_gamma(z);
        z += 1.0;
        if (++guard > 96) throw domain_fault("log_barnes_g: recursion failed to terminate");
    }
    return detail::log_barnes_g_asymptotic(z) - shift;
}

inline cplx barnes_g(cplx z) { return std::exp(log_barnes_g(z)); }

// Two-body form factor: an eight-factor Barnes-G ratio divided by
// Gamma(1+z) Gamma(-z), with z = i*beta/(2*pi). Regular on the real line,
// F(0) = 0 through the reciprocal-Gamma zero.
inline cplx two_body_F(cplx beta, const CouplingParams& params) {
    const cplx z = cplx(0.0, 1.0) * beta / (2.0 * pi);
    const double b = params.b;
    const double bh = params.b_hat;

    // Integer z makes 1/(Gamma(1+z) Gamma(-z)) vanish while the G-ratio
    // stays finite, so F has an exact zero there (beta = 0 on the reals).
    const double zr = std::round(z.real());
    if (std::abs(z.real() - zr) < 1e-13 && std::abs(z.imag()) < 1e-13) return cplx(0.0, 0.0);

    cplx log_f = 0.0;
    const cplx num[4] = {1.0 - b - z, 2.0 - b + z, 1.0 - bh - z, 2.0 - bh + z};
    const cplx den[4] = {b - z, 1.0 + b + z, bh - z, 1.0 + bh + z};
    for (const cplx& a : num) log_f += log_barnes_g(a);
    for (const cplx& a : den) log_f -= log_barnes_g(a);
    log_f -= log_gamma(1.0 + z) + log_gamma(-z);
    return std::exp(log_f);
}

}  // namespace sgff
