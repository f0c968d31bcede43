#pragma once

// The K-transform, n-particle form factors, adjoints, the epsilon-shifted
// form-factor products over a rapidity layout, and a numeric pole probe.

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "sgff/operators.hpp"
#include "sgff/rapidity.hpp"
#include "sgff/scattering.hpp"
#include "sgff/special_functions.hpp"

namespace sgff {

inline constexpr int k_transform_max_n = 12;

// K_n[p](beta) = sum over ell in {0,1}^n of (-1)^{|ell|}
// prod_{k<s} { 1 - i (ell_k - ell_s) sin(2 pi b) / sinh(beta_k - beta_s) } p(beta|ell).
// Exponential in n; hard-capped at n = 12.
inline cplx k_transform(const OperatorSpec& spec, std::span<const cplx> beta,
                        const CouplingParams& params) {
    const int n = static_cast<int>(beta.size());
    if (n > k_transform_max_n) throw cap_error("k_transform: n exceeds the hard cap of 12");
    if (n == 0) return spec.p0();

    const double s2 = params.sin_2pi_b();
    std::vector<cplx> inv_sinh(static_cast<size_t>(n) * n);
    for (int k = 0; k < n; ++k)
        for (int s = k + 1; s < n; ++s) {
            const cplx sh = std::sinh(beta[k] - beta[s]);
            if (std::abs(sh) < 1e-13)
                throw coincidence_error("k_transform: coincident rapidities at pair (" +
                                        std::to_string(k) + "," + std::to_string(s) + ")");
            inv_sinh[k * n + s] = 1.0 / sh;
        }

    std::vector<int> ell(n, 0);
    cplx total(0.0);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        int ones = 0;
        for (int i = 0; i < n; ++i) {
            ell[i] = (mask >> i) & 1;
            ones += ell[i];
        }
        cplx bracket(1.0);
        for (int k = 0; k < n; ++k)
            for (int s = k + 1; s < n; ++s) {
                const int d = ell[k] - ell[s];
                if (d != 0) bracket *= 1.0 - cplx(0.0, d * s2) * inv_sinh[k * n + s];
            }
        const cplx term = bracket * spec.p(beta, ell);
        total += (ones & 1) ? -term : term;
    }
    return total;
}

// F^(alpha)(beta_n) = prod_{a<b} F(beta_a - beta_b) * K_n[p](beta_n).
// The empty tuple returns p_0.
inline cplx form_factor(const OperatorSpec& spec, std::span<const cplx> beta,
                        const CouplingParams& params) {
    const int n = static_cast<int>(beta.size());
    if (n == 0) return spec.p0();
    cplx f_product(1.0);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) f_product *= two_body_F(beta[a] - beta[b], params);
    return f_product * k_transform(spec, beta, params);
}

// conj( F^(alpha)( reverse(conj(beta)) + i pi e ) ): the form factor of the
// adjoint operator evaluated directly from its defining relation. Agrees
// with form_factor(adjoint_of(spec), beta).
inline cplx adjoint_form_factor(const OperatorSpec& spec, std::span<const cplx> beta,
                                const CouplingParams& params) {
    std::vector<cplx> arg(beta.size());
    for (size_t i = 0; i < beta.size(); ++i)
        arg[i] = std::conj(beta[beta.size() - 1 - i]) + cplx(0.0, pi);
    return std::conj(form_factor(spec, arg, params));
}

namespace detail {

// Argument list of the operator-p form factor inside the layout product:
// the backward blocks (p,a), a = p-1..1, each reversed and shifted by
// +i(pi - eta1_{pa}), followed by the forward blocks (b,p), b = k..p+1,
// shifted by +i eta2_{bp}. `flip` negates every imaginary shift (the
// distinguished-operator arrangement, which also puts forward blocks first).
inline std::vector<cplx> ff_arguments(const RapidityLayout& gamma, int p,
                                      std::span<const double> eta1, std::span<const double> eta2,
                                      bool flip) {
    const int k = gamma.k();
    std::vector<cplx> args;
    auto push_backward = [&](double sign) {
        for (int a = p - 1; a >= 1; --a) {
            const auto blk = gamma.block(p, a);
            const cplx shift(0.0, sign * (pi - eta1[block_index(p, a)]));
            for (size_t j = blk.size(); j-- > 0;) args.push_back(blk[j] + shift);
        }
    };
    auto push_forward = [&](double sign) {
        for (int b = k; b >= p + 1; --b) {
            const auto blk = gamma.block(b, p);
            const cplx shift(0.0, sign * eta2[block_index(b, p)]);
            for (const cplx& v : blk) args.push_back(v + shift);
        }
    };
    if (!flip) {
        push_backward(+1.0);
        push_forward(+1.0);
    } else {
        push_forward(-1.0);
        push_backward(-1.0);
    }
    return args;
}

}  // namespace detail

// prod_p F^(alpha_p)( backward blocks + i pi e_{eps_p}, forward blocks ):
// the form-factor product entering the integrands. eps has one entry per
// operator; e_eps = (1 - eps/pi)(1,...,1).
inline cplx ff_product_eps(std::span<const OperatorSpec> specs, const RapidityLayout& gamma,
                           std::span<const double> eps, const CouplingParams& params) {
    const int k = gamma.k();
    std::vector<double> eta1(block_count(k), 0.0), eta2(block_count(k), 0.0);
    for (int b = 2; b <= k; ++b)
        for (int a = 1; a < b; ++a) eta1[block_index(b, a)] = eps[b - 1];
    cplx r(1.0);
    for (int p = 1; p <= k; ++p) {
        const auto args = detail::ff_arguments(gamma, p, eta1, eta2, false);
        r *= form_factor(specs[p - 1], args, params);
    }
    return r;
}

// Same product with operator t given the flipped argument arrangement
// (forward blocks first, all shifts negated). eta1/eta2 carry the per-block
// deformations; the plain eps version is eta1_{ba} = eps_b, eta2 = 0.
inline cplx ff_product_t(std::span<const OperatorSpec> specs, const RapidityLayout& gamma, int t,
                         std::span<const double> eta1, std::span<const double> eta2,
                         const CouplingParams& params) {
    const int k = gamma.k();
    if (t < 1 || t > k) throw config_error("ff_product_t: t out of range");
    cplx r(1.0);
    for (int p = 1; p <= k; ++p) {
        const auto args = detail::ff_arguments(gamma, p, eta1, eta2, p == t);
        r *= form_factor(specs[p - 1], args, params);
    }
    return r;
}

inline cplx ff_product_t_eps(std::span<const OperatorSpec> specs, const RapidityLayout& gamma,
                             int t, std::span<const double> eps, const CouplingParams& params) {
    const int k = gamma.k();
    std::vector<double> eta1(block_count(k), 0.0), eta2(block_count(k), 0.0);
    for (int b = 2; b <= k; ++b)
        for (int a = 1; a < b; ++a) eta1[block_index(b, a)] = eps[b - 1];
    return ff_product_t(specs, gamma, t, eta1, eta2, params);
}

// --- pole probe -------------------------------------------------------------

struct PoleProbeResult {
    cplx residue{0.0};        // c_{-1} of the Laurent fit
    double fit_residual = 0;  // relative misfit of the simple-pole model
    bool simple_pole = false;
    std::array<cplx, 3> samples{};
};

// Fits samples f(delta_j e^{i phi}) to c_{-1}/(delta e^{i phi}) + c_0 and
// reports the residue with the model misfit. A clean simple pole fits to
// better than 1e-3 relative per sample; a double pole or noise does not.
template <class Sampler>
PoleProbeResult pole_probe_fn(const Sampler& f, double phi = 0.3) {
    const std::array<double, 3> deltas{1e-2, 1e-3, 1e-4};
    const cplx dir = std::exp(cplx(0.0, phi));
    PoleProbeResult out;
    std::array<cplx, 3> u;  // basis value 1/z_j
    for (int j = 0; j < 3; ++j) {
        out.samples[j] = f(deltas[j] * dir);
        u[j] = 1.0 / (deltas[j] * dir);
    }
    // least squares over complex (c_{-1}, c_0) for f_j = c_{-1} u_j + c_0;
    // the 1/z basis weights the smallest offset most, so the analytic part
    // of a regular function barely leaks into the residue.
    double suu = 0.0;
    cplx su_conj(0.0), suf(0.0), sf(0.0);
    for (int j = 0; j < 3; ++j) {
        suu += std::norm(u[j]);
        su_conj += std::conj(u[j]);
        suf += std::conj(u[j]) * out.samples[j];
        sf += out.samples[j];
    }
    const cplx cm1 = (3.0 * suf - su_conj * sf) / (3.0 * suu - std::norm(su_conj));
    const cplx c0 = (sf - cm1 * std::conj(su_conj)) / 3.0;
    double resid = 0.0;
    for (int j = 0; j < 3; ++j)
        resid = std::max(resid, std::abs(out.samples[j] - (cm1 * u[j] + c0)) /
                                    std::max(std::abs(out.samples[j]), 1e-300));
    out.residue = cm1;
    out.fit_residual = resid;
    out.simple_pole = resid < 1e-3 && std::abs(cm1) * std::abs(u[2]) > 1e-8 * std::abs(c0);
    return out;
}

// Probes F^(alpha) near beta_a = beta_b + i pi (the kinematic location) by
// sliding beta_a around it.
inline PoleProbeResult pole_probe(const OperatorSpec& spec, std::span<const cplx> beta_base,
                                  int which_a, int which_b, const CouplingParams& params) {
    std::vector<cplx> beta(beta_base.begin(), beta_base.end());
    const cplx pole = beta[which_b] + cplx(0.0, pi);
    return pole_probe_fn([&](cplx d) {
        beta[which_a] = pole + d;
        return form_factor(spec, beta, params);
    });
}

}  // namespace sgff
