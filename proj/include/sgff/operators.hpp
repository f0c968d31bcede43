#pragma once

// Operator labels as p-function evaluators plus spin and growth index.
// Built-ins: the elementary field, a spin-s synthetic, an even (Z2-invariant)
// synthetic, and an ell-coupled synthetic used to probe kinematic poles.

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <utility>

#include "sgff/quadrature.hpp"
#include "sgff/special_functions.hpp"

namespace sgff {

struct OperatorSpec {
    std::string label;
    std::string adjoint_label;
    double spin = 0.0;
    double growth = 0.0;
    // p(beta_n | ell_n); must be symmetric under simultaneous permutations
    // and 2*pi*i periodic in each beta coordinate.
    std::function<cplx(std::span<const cplx>, std::span<const int>)> p;

    cplx p0() const { return p({}, {}); }
};

// integral_0^{2 pi b} t / sin t dt; the integrand extends continuously to 1
// at t = 0 and the upper limit stays below pi for b < 1/2.
inline double field_log_integral(double b) {
    auto f = [](double t) -> cplx {
        return std::abs(t) < 1e-12 ? cplx(1.0) : cplx(t / std::sin(t));
    };
    return integrate_1d(f, 0.0, 2.0 * pi * b, 1e-13, 1e-15).value.real();
}

// c = (-i / sqrt(2 sin pi b)) * exp{ (1/2pi) integral_0^{2 pi b} t dt / sin t }.
inline cplx field_constant(const CouplingParams& params) {
    const double integral = field_log_integral(params.b);
    return cplx(0.0, -1.0) / std::sqrt(2.0 * std::sin(pi * params.b)) *
           std::exp(integral / (2.0 * pi));
}

// p_n(beta | ell) = c^n * (2 pi i b / g) * sum_p (-1)^{ell_p}; spin and
// growth index both vanish. The empty tuple gives p_0 = 0.
inline OperatorSpec make_field_operator(const CouplingParams& params) {
    const cplx c = field_constant(params);
    const cplx prefactor = cplx(0.0, 2.0 * pi * params.b / params.g);
    OperatorSpec spec;
    spec.label = "field";
    spec.adjoint_label = "field";
    spec.spin = 0.0;
    spec.growth = 0.0;
    spec.p = [c, prefactor](std::span<const cplx> beta, std::span<const int> ell) -> cplx {
        cplx alt(0.0);
        for (int l : ell) alt += (l == 0) ? 1.0 : -1.0;
        return std::pow(c, static_cast<double>(beta.size())) * prefactor * alt;
    };
    return spec;
}

// p_n(beta | ell) = sum_a exp(s * beta_a) * (-1)^{|ell|} with integer spin s:
// symmetric, 2 pi i periodic, and scaling by exactly exp(theta s) under a
// uniform shift at every n, so the spin is n-independent as required.
inline OperatorSpec make_synthetic_spin(double s) {
    if (s != std::round(s))
        throw config_error("make_synthetic_spin: spin must be an integer for periodicity");
    OperatorSpec spec;
    spec.label = "synthetic-spin-" + std::to_string(static_cast<int>(s));
    spec.adjoint_label = spec.label + "-adj";
    spec.spin = s;
    spec.growth = std::abs(s);
    spec.p = [s](std::span<const cplx> beta, std::span<const int> ell) -> cplx {
        cplx sum(0.0);
        for (const cplx& x : beta) sum += std::exp(s * x);
        int parity = 0;
        for (int l : ell) parity ^= l;
        return parity ? -sum : sum;
    };
    return spec;
}

// p_n(beta | ell) = (-1)^{|ell|}: a self-adjoint spin-0 operator with
// non-vanishing even form factors (p_0 = 1).
inline OperatorSpec make_even_operator() {
    OperatorSpec spec;
    spec.label = "synthetic-even";
    spec.adjoint_label = "synthetic-even";
    spec.spin = 0.0;
    spec.growth = 0.0;
    spec.p = [](std::span<const cplx>, std::span<const int> ell) -> cplx {
        int parity = 0;
        for (int l : ell) parity ^= l;
        return parity ? -1.0 : 1.0;
    };
    return spec;
}

// p_n(beta | ell) = exp(sum ell_a beta_a): couples ell to beta, so its n = 2
// form factor carries a genuine kinematic pole. Probe use only.
inline OperatorSpec make_ell_coupled_operator() {
    OperatorSpec spec;
    spec.label = "synthetic-ell-exp";
    spec.adjoint_label = "synthetic-ell-exp-adj";
    spec.spin = 0.0;
    spec.growth = 1.0;
    spec.p = [](std::span<const cplx> beta, std::span<const int> ell) -> cplx {
        cplx sum(0.0);
        for (size_t i = 0; i < beta.size(); ++i)
            if (ell[i]) sum += beta[i];
        return std::exp(sum);
    };
    return spec;
}

// p for the adjoint operator: conj(p(conj(beta) + i pi e | reversed ell)).
inline OperatorSpec adjoint_of(const OperatorSpec& spec) {
    OperatorSpec adj;
    adj.label = spec.adjoint_label;
    adj.adjoint_label = spec.label;
    adj.spin = spec.spin;
    adj.growth = spec.growth;
    auto base = spec.p;
    adj.p = [base](std::span<const cplx> beta, std::span<const int> ell) -> cplx {
        std::vector<cplx> shifted(beta.size());
        for (size_t i = 0; i < beta.size(); ++i)
            shifted[i] = std::conj(beta[i]) + cplx(0.0, pi);
        std::vector<int> rev(ell.rbegin(), ell.rend());
        return std::conj(base(shifted, rev));
    };
    return adj;
}

}  // namespace sgff
