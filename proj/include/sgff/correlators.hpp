#pragma once

// Regularized multi-rapidity integrals I^(n), their distinguished-operator
// representations, r-truncated correlators W^(r), partial sums, and the
// un-smeared two-point kernel. The epsilon regulator is driven down a
// geometric schedule and Richardson-extrapolated; every result carries both
// a quadrature and an extrapolation error estimate.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sgff/form_factors.hpp"
#include "sgff/minkowski.hpp"
#include "sgff/operators.hpp"
#include "sgff/quadrature.hpp"
#include "sgff/rapidity.hpp"
#include "sgff/scattering.hpp"

namespace sgff {

struct QuadConfig {
    double tol_rel = 1e-6;
    double tol_abs = 1e-12;
    int dim_cap = 6;           // adaptive quadrature for |n| <= 3, QMC above
    long qmc_budget = 1 << 20;
    uint64_t seed = 0x5eedULL;
    double gamma_margin = 1.0;
    std::vector<double> eps_schedule = {pi / 16.0, pi / 32.0, pi / 64.0};
    std::vector<double> eps_weights;  // per-operator scale; empty = all ones

    std::vector<double> eps_for(int k, double eps_base) const {
        std::vector<double> e(k, eps_base);
        if (!eps_weights.empty()) {
            if (static_cast<int>(eps_weights.size()) != k)
                throw config_error("QuadConfig: eps_weights size != k");
            for (int i = 0; i < k; ++i) e[i] *= eps_weights[i];
        }
        return e;
    }
};

// Contour deformations for the distinguished-operator representation. All
// entries are per block and scale down the epsilon schedule, so the
// extrapolation drives the joint limit.
struct DeformationParams {
    std::vector<double> delta_s;     // imaginary shift of the S^(t) argument
    std::vector<double> delta_r;     // imaginary shift of the R[G] argument
    std::vector<double> eta1_extra;  // added to eps_b in the eta1 slots
    std::vector<double> eta2;

    static DeformationParams zeros(int k) {
        DeformationParams d;
        d.delta_s.assign(block_count(k), 0.0);
        d.delta_r.assign(block_count(k), 0.0);
        d.eta1_extra.assign(block_count(k), 0.0);
        d.eta2.assign(block_count(k), 0.0);
        return d;
    }

    // eta1^(cb) + eta2^(dc) must stay positive for every b < c < d.
    void validate(int k, std::span<const double> eta1_effective) const {
        for (int b = 1; b <= k; ++b)
            for (int c = b + 1; c <= k; ++c)
                for (int d = c + 1; d <= k; ++d)
                    if (eta1_effective[block_index(c, b)] + eta2[block_index(d, c)] <= 0.0)
                        throw config_error("DeformationParams: eta1+eta2 constraint violated");
    }
};

struct ShellEntry {
    int level = 0;  // |n|
    cplx value{0.0};
    double quad_err = 0.0;
    double eps_err = 0.0;
};

struct CorrelatorResult {
    cplx value{0.0};
    double quad_err = 0.0;
    double eps_err = 0.0;
    std::vector<MultiIndex> terms_used;
    std::string truncation_tag;
    std::vector<ShellEntry> shells;
    double last_shell_mag = 0.0;

    double combined_err() const { return quad_err + eps_err; }

    void accumulate(const CorrelatorResult& term, const MultiIndex& n) {
        value += term.value;
        quad_err += term.quad_err;
        eps_err += term.eps_err;
        terms_used.push_back(n);
        const int level = n.total();
        auto it = std::find_if(shells.begin(), shells.end(),
                               [&](const ShellEntry& s) { return s.level == level; });
        if (it == shells.end()) {
            shells.push_back({level, term.value, term.quad_err, term.eps_err});
            std::sort(shells.begin(), shells.end(),
                      [](const ShellEntry& a, const ShellEntry& b) { return a.level < b.level; });
        } else {
            it->value += term.value;
            it->quad_err += term.quad_err;
            it->eps_err += term.eps_err;
        }
    }
};

// --- multi-index enumeration ------------------------------------------------

// Truncation vector r: one particle budget per cut between adjacent
// operators. A multi-index belongs to N_r when every cut sum matches.
struct TruncationVector {
    std::vector<int> r;

    bool contains(const MultiIndex& n) const {
        if (static_cast<int>(r.size()) != n.k() - 1) return false;
        const auto cuts = n.cut_sums();
        for (size_t p = 0; p < r.size(); ++p)
            if (cuts[p] != r[p]) return false;
        return true;
    }
};

// All n with cut sums fixed to r, in lexicographic block order.
inline std::vector<MultiIndex> enumerate_truncation(int k, std::span<const int> r,
                                                    long cap = 1000000) {
    if (static_cast<int>(r.size()) != k - 1)
        throw config_error("enumerate_truncation: r must have k-1 entries");
    std::vector<MultiIndex> out;
    MultiIndex n(k);
    const int nb = block_count(k);
    std::function<void(int)> rec = [&](int idx) {
        if (idx == nb) {
            const auto cuts = n.cut_sums();
            for (int p = 0; p < k - 1; ++p)
                if (cuts[p] != r[p]) return;
            if (static_cast<long>(out.size()) >= cap)
                throw cap_error("enumerate_truncation: more than cap multi-indices");
            out.push_back(n);
            return;
        }
        const auto [b, a] = block_id(idx);
        int hi = r[a - 1];
        for (int p = a; p < b; ++p) hi = std::min(hi, r[p - 1]);
        for (int v = 0; v <= hi; ++v) {
            n.raw(idx) = v;
            rec(idx + 1);
        }
        n.raw(idx) = 0;
    };
    rec(0);
    return out;
}

// All n with |n| <= total_cap.
inline std::vector<MultiIndex> enumerate_up_to(int k, int total_cap, long cap = 1000000) {
    std::vector<MultiIndex> out;
    MultiIndex n(k);
    const int nb = block_count(k);
    std::function<void(int, int)> rec = [&](int idx, int used) {
        if (idx == nb) {
            if (static_cast<long>(out.size()) >= cap)
                throw cap_error("enumerate_up_to: more than cap multi-indices");
            out.push_back(n);
            return;
        }
        for (int v = 0; v + used <= total_cap; ++v) {
            n.raw(idx) = v;
            rec(idx + 1, used + v);
        }
        n.raw(idx) = 0;
    };
    rec(0, 0);
    return out;
}

namespace detail {

// Box half-width such that the Gaussian damping of the integrand tail is
// negligible at the boundary: sigma^2 (m cosh(Gamma) - k0)^2 / 2 >= 46.
inline double gamma_max_for(const ProductTestFunction& g, double mass, double margin) {
    double sig_min = 1e9, k0_max = 0.0;
    for (const auto& f : g.factors) {
        sig_min = std::min(sig_min, f.min_sigma());
        k0_max = std::max(k0_max, std::abs(f.wavevector.x0));
    }
    const double reach = std::sqrt(2.0 * 46.0) / sig_min + k0_max;
    return std::acosh(std::max(2.0, reach / mass)) + margin;
}

// Map per-block values to per-flat-coordinate values.
inline std::vector<double> per_block_to_flat(const MultiIndex& n,
                                             std::span<const double> per_block) {
    std::vector<double> flat;
    flat.reserve(n.total());
    for (int i = 0; i < block_count(n.k()); ++i)
        for (int j = 0; j < n.raw()[i]; ++j) flat.push_back(per_block[i]);
    return flat;
}

// Shared driver: for each epsilon in the schedule evaluate the |n|-dim
// integral of `make(eps, scale)` over the asymmetrized box, then Richardson-
// extrapolate. `scale` shrinks like eps so auxiliary deformations vanish in
// the same limit.
template <class MakeIntegrand>
CorrelatorResult eval_eps_schedule(const MultiIndex& n, int k, const QuadConfig& quad,
                                   double gamma_box, MakeIntegrand&& make) {
    const int dims = n.total();
    CorrelatorResult out;
    out.terms_used.push_back(n);
    if (dims > quad.dim_cap) throw cap_error("eval: |n| exceeds the dimension cap");

    const double norm = n.factorial() * std::pow(2.0 * pi, dims);
    std::vector<double> lo(dims), hi(dims);
    for (int d = 0; d < dims; ++d) {
        const double off = 0.017 * (d + 1);  // avoids exact node coincidences
        lo[d] = -gamma_box + off;
        hi[d] = gamma_box + off;
    }

    std::vector<cplx> values;
    double worst_quad = 0.0;
    const size_t n_eps = quad.eps_schedule.size();
    for (size_t j = 0; j < n_eps; ++j) {
        const double eps_base = quad.eps_schedule[j];
        const double scale = eps_base / quad.eps_schedule.front();
        auto fn = make(quad.eps_for(k, eps_base), scale);
        std::function<cplx(std::span<const double>)> wrapped =
            [&fn](std::span<const double> x) -> cplx {
            try {
                return fn(x);
            } catch (const coincidence_error&) {
                std::vector<double> nudged(x.begin(), x.end());
                for (size_t d = 0; d < nudged.size(); ++d) nudged[d] += 1e-9 * (d + 1.0);
                return fn(nudged);
            }
        };
        QuadResult q = (dims <= 3)
                           ? integrate_nd(wrapped, dims, lo, hi, quad.tol_rel, quad.tol_abs)
                           : integrate_qmc(wrapped, dims, lo, hi, quad.qmc_budget, quad.seed);
        values.push_back(q.value / norm);
        worst_quad = std::max(worst_quad, q.err / norm);
        if (!std::isfinite(q.value.real()) || !std::isfinite(q.value.imag()))
            throw convergence_error("eval: non-finite quadrature value");
    }
    auto [value, eps_err] = Richardson::extrapolate(values);
    out.value = value;
    out.eps_err = eps_err;
    out.quad_err = 3.0 * worst_quad;  // extrapolation amplifies by |2|+|1|
    return out;
}

}  // namespace detail

// I^(n)[G]: lim over the epsilon schedule of
// int d^{|n|}gamma / (n! (2 pi)^{|n|}) S(gamma) R[G](gamma) F_{alpha;eps}(gamma).
inline CorrelatorResult eval_I_n(std::span<const OperatorSpec> specs,
                                 const ProductTestFunction& g, const MultiIndex& n,
                                 const CouplingParams& params, const QuadConfig& quad) {
    const int k = n.k();
    if (static_cast<int>(specs.size()) != k) throw config_error("eval_I_n: specs size != k");
    if (n.total() == 0) {
        CorrelatorResult out;
        cplx v(1.0);
        for (const auto& s : specs) v *= s.p0();
        RapidityLayout empty(n);
        out.value = v * momentum_transform(g, empty, params.mass);
        out.terms_used.push_back(n);
        return out;
    }
    const double gamma_box = detail::gamma_max_for(g, params.mass, quad.gamma_margin);
    return detail::eval_eps_schedule(
        n, k, quad, gamma_box, [&](std::vector<double> eps, double) {
            return [&, eps = std::move(eps)](std::span<const double> x) -> cplx {
                RapidityLayout gma(n);
                gma.fill_flat(x);
                return s_global(gma, params) * momentum_transform(g, gma, params.mass) *
                       ff_product_eps(specs, gma, eps, params);
            };
        });
}

// Same integral with a caller-supplied weight in place of R[G] (used for the
// reduced J-form and for momentum-space support probes).
inline CorrelatorResult eval_I_n_weighted(
    std::span<const OperatorSpec> specs, const std::function<cplx(const RapidityLayout&)>& weight,
    const MultiIndex& n, const CouplingParams& params, const QuadConfig& quad, double gamma_box) {
    const int k = n.k();
    if (n.total() == 0) {
        CorrelatorResult out;
        cplx v(1.0);
        for (const auto& s : specs) v *= s.p0();
        RapidityLayout empty(n);
        out.value = v * weight(empty);
        out.terms_used.push_back(n);
        return out;
    }
    return detail::eval_eps_schedule(
        n, k, quad, gamma_box, [&](std::vector<double> eps, double) {
            return [&, eps = std::move(eps)](std::span<const double> x) -> cplx {
                RapidityLayout gma(n);
                gma.fill_flat(x);
                return s_global(gma, params) * weight(gma) *
                       ff_product_eps(specs, gma, eps, params);
            };
        });
}

// J^(n)[H] on a closed-form Gaussian H in the difference variables.
inline CorrelatorResult eval_J_n(std::span<const OperatorSpec> specs, const GaussianOnRd& h,
                                 const MultiIndex& n, const CouplingParams& params,
                                 const QuadConfig& quad, double gamma_box) {
    return eval_I_n_weighted(
        specs,
        [&](const RapidityLayout& gma) { return reduced_transform(h, gma, params.mass); }, n,
        params, quad, gamma_box);
}

// Distinguished-operator representation with optional contour deformations.
inline CorrelatorResult eval_I_n_t(std::span<const OperatorSpec> specs,
                                   const ProductTestFunction& g, const MultiIndex& n, int t,
                                   const DeformationParams& deform, const CouplingParams& params,
                                   const QuadConfig& quad) {
    const int k = n.k();
    if (static_cast<int>(specs.size()) != k) throw config_error("eval_I_n_t: specs size != k");
    if (t < 1 || t > k) throw config_error("eval_I_n_t: t out of range");
    if (n.total() == 0) return eval_I_n(specs, g, n, params, quad);

    const double gamma_box = detail::gamma_max_for(g, params.mass, quad.gamma_margin);
    return detail::eval_eps_schedule(
        n, k, quad, gamma_box, [&](std::vector<double> eps, double scale) {
            std::vector<double> eta1(block_count(k), 0.0), eta2(block_count(k), 0.0);
            for (int b = 2; b <= k; ++b)
                for (int a = 1; a < b; ++a) {
                    const int i = block_index(b, a);
                    eta1[i] = eps[b - 1] + scale * deform.eta1_extra[i];
                    eta2[i] = scale * deform.eta2[i];
                }
            deform.validate(k, eta1);
            std::vector<double> ds(block_count(k)), dr(block_count(k));
            for (int i = 0; i < block_count(k); ++i) {
                ds[i] = scale * deform.delta_s[i];
                dr[i] = scale * deform.delta_r[i];
            }
            auto ds_flat = detail::per_block_to_flat(n, ds);
            auto dr_flat = detail::per_block_to_flat(n, dr);
            return [&, eps = std::move(eps), eta1 = std::move(eta1), eta2 = std::move(eta2),
                    ds_flat = std::move(ds_flat),
                    dr_flat = std::move(dr_flat)](std::span<const double> x) -> cplx {
                RapidityLayout gma(n);
                gma.fill_flat(x);
                return s_t(gma.shifted_by(ds_flat), t, params) *
                       momentum_transform(g, gma.shifted_by(dr_flat), params.mass) *
                       ff_product_t(specs, gma, t, eta1, eta2, params);
            };
        });
}

// W^(r) = sum over N_r of I^(n).
inline CorrelatorResult eval_W_r(std::span<const OperatorSpec> specs, const ProductTestFunction& g,
                                 std::span<const int> r, const CouplingParams& params,
                                 const QuadConfig& quad) {
    CorrelatorResult out;
    out.truncation_tag = "r-truncated";
    for (const MultiIndex& n : enumerate_truncation(g.k(), r))
        out.accumulate(eval_I_n(specs, g, n, params, quad), n);
    if (!out.shells.empty()) out.last_shell_mag = std::abs(out.shells.back().value);
    return out;
}

// Partial sum over all n with |n| <= total_cap. The magnitude of the last
// shell is reported as the truncation diagnostic; convergence of the full
// series is conjectural and never claimed.
inline CorrelatorResult eval_W_partial(std::span<const OperatorSpec> specs,
                                       const ProductTestFunction& g, int total_cap,
                                       const CouplingParams& params, const QuadConfig& quad) {
    CorrelatorResult out;
    out.truncation_tag = "partial<=" + std::to_string(total_cap);
    for (const MultiIndex& n : enumerate_up_to(g.k(), total_cap))
        out.accumulate(eval_I_n(specs, g, n, params, quad), n);
    if (!out.shells.empty()) out.last_shell_mag = std::abs(out.shells.back().value);
    return out;
}

// Un-smeared two-point kernel at space-like separation x: partial sum of
//   shell_n = 1/(n! (2 pi)^n) int d^n u  F^(1)(u) F^(2)(rev u + i pi e)
//             e^{i pbar(u - i delta sign(x1)) * x},
// where the uniform contour rotation delta makes the integrand decay like
// exp(-m sin(delta) (|x1|-|x0|) sum cosh u). The rotation leaves the
// form-factor part untouched for spin-0 operators and multiplies spin-s ones
// by a known phase. The epsilon limit is taken analytically: with a single
// argument group per form factor nothing pinches.
inline CorrelatorResult two_point_kernel(const OperatorSpec& spec1, const OperatorSpec& spec2,
                                         TwoVector x, int total_cap, const CouplingParams& params,
                                         const QuadConfig& quad) {
    if (minkowski_norm2(x) >= 0.0)
        throw domain_fault("two_point_kernel: separation must be space-like");
    CorrelatorResult out;
    out.truncation_tag = "kernel<=" + std::to_string(total_cap);

    const double m = params.mass;
    const double delta = std::min({0.35, 0.8 * 2.0 * pi * params.b, 0.8 * 2.0 * pi * params.b_hat});
    const double rot = (x.x1 >= 0.0 ? 1.0 : -1.0) * delta;
    const double gap = std::abs(x.x1) - std::abs(x.x0);
    const double damping = m * std::sin(delta) * gap;
    const double gamma_box = std::acosh(std::max(2.0, 50.0 / damping)) + quad.gamma_margin;
    const cplx spin_phase = std::exp(cplx(0.0, -rot * (spec1.spin + spec2.spin)));

    {  // shell 0
        MultiIndex zero(2);
        ShellEntry s0{0, spec1.p0() * spec2.p0(), 0.0, 0.0};
        out.shells.push_back(s0);
        out.value += s0.value;
        out.terms_used.push_back(zero);
    }
    for (int n = 1; n <= total_cap; ++n) {
        const double norm = [&] {
            double f = 1.0;
            for (int j = 2; j <= n; ++j) f *= j;
            return f * std::pow(2.0 * pi, n);
        }();
        std::function<cplx(std::span<const double>)> fn =
            [&](std::span<const double> u) -> cplx {
            std::vector<cplx> fwd(u.begin(), u.end());
            std::vector<cplx> bwd(n);
            for (int j = 0; j < n; ++j) bwd[j] = fwd[n - 1 - j] + cplx(0.0, pi);
            cplx phase_arg(0.0);
            for (int j = 0; j < n; ++j) {
                const CTwoVector p = two_momentum(fwd[j] - cplx(0.0, rot), m);
                phase_arg += p.x0 * x.x0 - p.x1 * x.x1;
            }
            try {
                return form_factor(spec1, fwd, params) * form_factor(spec2, bwd, params) *
                       std::exp(cplx(0.0, 1.0) * phase_arg);
            } catch (const coincidence_error&) {
                std::vector<double> nudged(u.begin(), u.end());
                for (int d = 0; d < n; ++d) nudged[d] += 1e-9 * (d + 1.0);
                return fn(nudged);
            }
        };
        std::vector<double> lo(n), hi(n);
        for (int d = 0; d < n; ++d) {
            lo[d] = -gamma_box + 0.017 * (d + 1);
            hi[d] = gamma_box + 0.017 * (d + 1);
        }
        QuadResult q = (n <= 3) ? integrate_nd(fn, n, lo, hi, quad.tol_rel, quad.tol_abs)
                                : integrate_qmc(fn, n, lo, hi, quad.qmc_budget, quad.seed);
        MultiIndex idx(2);
        idx.at(2, 1) = n;
        ShellEntry sh{n, spin_phase * q.value / norm, q.err / norm, 0.0};
        out.shells.push_back(sh);
        out.value += sh.value;
        out.quad_err += sh.quad_err;
        out.terms_used.push_back(idx);
    }
    out.last_shell_mag = std::abs(out.shells.back().value);
    return out;
}

}  // namespace sgff
