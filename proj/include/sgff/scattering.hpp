#pragma once

// The scalar S-matrix, vector exchange products, and the global scattering
// factors entering the multi-point integrands.

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "sgff/rapidity.hpp"
#include "sgff/special_functions.hpp"

namespace sgff {

// S(beta) = (sinh beta - i sin 2 pi b) / (sinh beta + i sin 2 pi b).
// Poles sit at beta in 2 i pi b + 2 i pi Z; a proximity guard raises instead
// of returning a huge number, so silent blowups cannot corrupt averages.
inline cplx s_matrix(cplx beta, const CouplingParams& params) {
    const cplx sh = std::sinh(beta);
    const cplx i_s2(0.0, params.sin_2pi_b());
    const cplx den = sh + i_s2;
    if (std::abs(den) < 1e-12) throw pole_error("s_matrix: pole at beta = " + std::to_string(beta.real()));
    return (sh - i_s2) / den;
}

// prod_j prod_l S(a_j - b_l); empty product is 1.
inline cplx s_vector(std::span<const cplx> a, std::span<const cplx> b,
                     const CouplingParams& params) {
    cplx r(1.0, 0.0);
    for (size_t j = 0; j < a.size(); ++j)
        for (size_t l = 0; l < b.size(); ++l) {
            try {
                r *= s_matrix(a[j] - b[l], params);
            } catch (const pole_error&) {
                throw pole_error("s_vector: S-pole at pair (" + std::to_string(j) + "," +
                                 std::to_string(l) + ")");
            }
        }
    return r;
}

// Reordering factor S(X | Y) where Y_i = X[perm[i]]: one factor
// S(X_i - X_j) for every pair i < j whose order the permutation flips.
// Unitarity makes this independent of the transposition decomposition.
inline cplx s_perm(std::span<const cplx> x, std::span<const int> perm,
                   const CouplingParams& params) {
    std::vector<int> pos(x.size());
    for (size_t i = 0; i < perm.size(); ++i) pos[perm[i]] = static_cast<int>(i);
    cplx r(1.0, 0.0);
    for (size_t i = 0; i < x.size(); ++i)
        for (size_t j = i + 1; j < x.size(); ++j)
            if (pos[i] > pos[j]) r *= s_matrix(x[i] - x[j], params);
    return r;
}

// Global factor: one vector exchange product per quadruple v > p > u > s,
// pairing blocks (v,u) and (p,s). Identically 1 for k <= 3.
inline cplx s_global(const RapidityLayout& gamma, const CouplingParams& params) {
    const int k = gamma.k();
    cplx r(1.0, 0.0);
    for (int v = 4; v <= k; ++v)
        for (int p = 3; p < v; ++p)
            for (int u = 2; u < p; ++u)
                for (int s = 1; s < u; ++s)
                    r *= s_vector(gamma.block(v, u), gamma.block(p, s), params);
    return r;
}

// Distinguished-operator factor: s_global times extra vector exchanges
// tying the blocks ending or starting at t to everything across it.
inline cplx s_t(const RapidityLayout& gamma, int t, const CouplingParams& params) {
    const int k = gamma.k();
    if (t < 1 || t > k) throw config_error("s_t: t out of range");
    cplx r = s_global(gamma, params);
    for (int v = t + 1; v <= k; ++v)
        for (int u = 1; u <= t - 1; ++u) {
            for (int s = 1; s <= t - 1; ++s)
                r *= s_vector(gamma.block(t, s), gamma.block(v, u), params);
            for (int s = t + 1; s <= k; ++s)
                r *= s_vector(gamma.block(v, u), gamma.block(s, t), params);
        }
    return r;
}

// The unsimplified product whose value is identically 1: the ratio
// s_global(sigma_t . gamma) / s_global(gamma) times every vector exchange
// generated when the operators t and t+1 are swapped through the rest.
// Evaluating it literally and checking against 1 is the algebraic core of
// the local-commutativity verification.
inline cplx s_add(const RapidityLayout& gamma, int t, const CouplingParams& params) {
    const int k = gamma.k();
    if (t < 1 || t + 1 > k) throw config_error("s_add: need 1 <= t <= k-1");
    const RapidityLayout swapped = gamma.transposed_pair(t);
    cplx r = s_global(swapped, params) / s_global(gamma, params);
    for (int v = t + 2; v <= k; ++v) {
        for (int u = 1; u <= t - 1; ++u)
            r *= s_vector(gamma.block(t, u), gamma.block(v, t + 1), params);
        for (int u = t + 2; u <= k; ++u)
            r *= s_vector(gamma.block(v, t + 1), gamma.block(u, t), params);
    }
    for (int u = 1; u <= t - 1; ++u)
        for (int v = 1; v <= t - 1; ++v)
            r *= s_vector(gamma.block(t + 1, u), gamma.block(t, v), params);
    for (int v = t + 1; v <= k; ++v)
        for (int u = 1; u <= t - 1; ++u)
            r *= s_vector(gamma.block(v, t), gamma.block(t + 1, u), params);
    for (int u = 1; u <= t - 1; ++u) {
        r *= s_vector(gamma.block(t + 1, u), gamma.block(t + 1, t), params);
        r *= s_vector(gamma.block(t, u), gamma.block(t + 1, u), params);
    }
    for (int u = t + 2; u <= k; ++u)
        r *= s_vector(gamma.block(u, t), gamma.block(u, t + 1), params);
    return r;
}

}  // namespace sgff
