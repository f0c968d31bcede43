#pragma once

// Numerical verification of the Wightman-axiom properties: covariance,
// spectral condition, hermiticity, local commutativity, positivity and
// clustering, plus the partition matrix elements feeding the positivity
// check. Each check returns a report of named cases with lhs/rhs values,
// tolerance and verdict.

#include <cmath>
#include <complex>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sgff/correlators.hpp"

namespace sgff {

struct CheckCase {
    std::string name;
    cplx lhs{0.0};
    cplx rhs{0.0};
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

struct CheckReport {
    std::string check;
    std::vector<CheckCase> cases;
    bool pass = true;

    void add(CheckCase c) {
        pass = pass && c.pass;
        cases.push_back(std::move(c));
    }
    void add(const std::string& name, cplx lhs, cplx rhs, double tol, std::string note = "") {
        CheckCase c{name, lhs, rhs, tol, std::abs(lhs - rhs) <= tol, std::move(note)};
        add(std::move(c));
    }
};

namespace detail {

inline RapidityLayout random_real_layout(int k, int max_block, std::mt19937_64& rng,
                                         int min_total = 0) {
    std::uniform_int_distribution<int> size_d(0, max_block);
    std::uniform_real_distribution<double> val(-3.0, 3.0);
    for (;;) {
        MultiIndex n(k);
        for (int i = 0; i < block_count(k); ++i) n.raw(i) = size_d(rng);
        if (n.total() < min_total) continue;
        RapidityLayout g(n);
        for (cplx& v : g.flat()) v = val(rng);
        return g;
    }
}

}  // namespace detail

// --- covariance --------------------------------------------------------------

// I^(n)[U_{theta,v} G] = prod_a e^{-theta s_a} I^(n)[G], summed into the
// partial correlator. Pass band: 3x the combined reported errors.
inline CheckReport check_covariance(std::span<const OperatorSpec> specs,
                                    const ProductTestFunction& g, double theta, TwoVector v,
                                    int n_cap, const CouplingParams& params,
                                    const QuadConfig& quad) {
    CheckReport report;
    report.check = "covariance";
    double spin_sum = 0.0;
    for (const auto& s : specs) spin_sum += s.spin;

    const auto base = eval_W_partial(specs, g, n_cap, params, quad);
    struct Move {
        std::string name;
        double theta;
        TwoVector v;
    };
    for (const Move& mv : {Move{"translation", 0.0, v}, Move{"boost", theta, {0.0, 0.0}},
                           Move{"boost+translation", theta, v}}) {
        const auto moved = eval_W_partial(specs, g.poincare(mv.theta, mv.v), n_cap, params, quad);
        const cplx rhs = std::exp(-mv.theta * spin_sum) * base.value;
        const double tol = 3.0 * (moved.combined_err() + base.combined_err()) +
                           1e-9 * std::abs(base.value) + 1e-14;
        report.add(mv.name, moved.value, rhs, tol);
    }
    return report;
}

// --- spectral condition -------------------------------------------------------

// Reduced momenta of crossing cuts lie strictly inside the forward cone, and
// the reduced correlator vanishes on momentum-space test functions supported
// outside it.
inline CheckReport check_spectral(int k, int n_samples, uint64_t seed,
                                  const CouplingParams& params, const QuadConfig& quad) {
    CheckReport report;
    report.check = "spectral";
    std::mt19937_64 rng(seed);
    const double m = params.mass;

    int violations = 0;
    long tested = 0;
    for (int i = 0; i < n_samples; ++i) {
        const auto g = detail::random_real_layout(k, 2, rng, 1);
        for (int l = 1; l < k; ++l) {
            int crossing = 0;
            for (int b = l + 1; b <= k; ++b)
                for (int a = 1; a <= l; ++a) crossing += g.size(b, a);
            const auto p = reduced_momentum(g, l, m);
            if (crossing == 0) {
                if (std::abs(p.x0) != 0.0 || std::abs(p.x1) != 0.0) ++violations;
                continue;
            }
            ++tested;
            const double p0 = p.x0.real();
            const double p2 = reduced_momentum_sq(g, l, m);
            if (!(p0 > 0.0) || !(p2 >= m * m)) ++violations;
        }
    }
    CheckCase cone;
    cone.name = "forward-cone inequalities";
    cone.lhs = cplx(static_cast<double>(violations));
    cone.rhs = cplx(0.0);
    cone.tolerance = 0.0;
    cone.pass = violations == 0;
    cone.note = std::to_string(tested) + " crossing cuts sampled";
    report.add(std::move(cone));

    // support probe at k = 2, one rapidity: the reduced transform of a
    // momentum-space Gaussian only responds inside the cone.
    const auto field = make_field_operator(params);
    const std::vector<OperatorSpec> specs{field, field};
    MultiIndex n(2);
    n.at(2, 1) = 1;
    auto weight_for = [&](TwoVector q0, double width) {
        return [q0, width, m](const RapidityLayout& gl) -> cplx {
            cplx r(1.0);
            for (int l = 1; l < gl.k(); ++l) {
                const CTwoVector p = reduced_momentum(gl, l, m);
                const cplx d0 = p.x0 - q0.x0;
                const cplx d1 = p.x1 - q0.x1;
                r *= std::exp(-(d0 * d0 + d1 * d1) / (2.0 * width * width));
            }
            return r;
        };
    };
    const double gamma_box = 6.0;
    const auto outside = eval_I_n_weighted(specs, weight_for({-5.0 * m, 0.0}, 0.1 * m), n, params,
                                           quad, gamma_box);
    const auto inside = eval_I_n_weighted(specs, weight_for({1.2 * m, 0.35 * m}, 0.3 * m), n,
                                          params, quad, gamma_box);
    const double floor = 1e-10 * std::abs(inside.value) + 10.0 * outside.combined_err() + 1e-14;
    report.add("support outside the cone", outside.value, cplx(0.0), floor);
    CheckCase positive;
    positive.name = "support inside the cone";
    positive.lhs = inside.value;
    positive.rhs = cplx(0.0);
    positive.tolerance = floor;
    positive.pass = std::abs(inside.value) > 100.0 * floor;
    positive.note = "positive control, must be resolvably non-zero";
    report.add(std::move(positive));
    return report;
}

// --- hermiticity ---------------------------------------------------------------

// W^(r)_alpha[G] = conj( W^(rev r)_{rev alpha-adjoint}[ conj(iota G) ] ).
inline CheckReport check_hermiticity(std::span<const OperatorSpec> specs,
                                     const ProductTestFunction& g, std::span<const int> r,
                                     const CouplingParams& params, const QuadConfig& quad) {
    CheckReport report;
    report.check = "hermiticity";
    const auto lhs = eval_W_r(specs, g, r, params, quad);

    std::vector<OperatorSpec> reversed;
    for (size_t i = specs.size(); i-- > 0;) reversed.push_back(adjoint_of(specs[i]));
    std::vector<int> rev_r(r.rbegin(), r.rend());
    const auto mirrored = eval_W_r(reversed, g.inverted().conjugated(), rev_r, params, quad);

    const double tol = 3.0 * (lhs.combined_err() + mirrored.combined_err()) +
                       1e-9 * std::abs(lhs.value) + 1e-14;
    report.add("two-sided evaluation", lhs.value, std::conj(mirrored.value), tol);
    return report;
}

// --- local commutativity --------------------------------------------------------

struct LocalityReport {
    CheckReport report;
    double commutator = 0.0;
    double gauss_tail_bound = 0.0;
    double truncation_tail = 0.0;
    double combined_error = 0.0;
    double bound = 0.0;
    bool support_ok = true;
};

// Compares W_partial with the order of operators t, t+1 swapped against the
// transposed test function. Gaussians are not compactly supported, so the
// verdict uses a documented tail bound: the spill-over probability of the
// packet pair into the timelike region times the correlator scale, plus a
// coarse estimate of the first neglected shell.
inline LocalityReport check_locality(std::span<const OperatorSpec> specs,
                                     const ProductTestFunction& g, int t, int n_cap,
                                     const CouplingParams& params, const QuadConfig& quad) {
    LocalityReport out;
    out.report.check = "locality";
    const auto& ft = g.factors[t - 1];
    const auto& ft1 = g.factors[t];
    const TwoVector dc = ft.center - ft1.center;
    const double sigma = std::max(ft.min_sigma(), ft1.min_sigma());
    const double gap = std::abs(dc.x1) - std::abs(dc.x0);
    out.support_ok = gap >= 6.0 * sigma;

    const auto w = eval_W_partial(specs, g, n_cap, params, quad);
    std::vector<OperatorSpec> swapped(specs.begin(), specs.end());
    std::swap(swapped[t - 1], swapped[t]);
    const auto wt = eval_W_partial(swapped, g.transposed(t), n_cap, params, quad);
    out.commutator = std::abs(w.value - wt.value);
    out.combined_error = w.combined_err() + wt.combined_err();

    double scale = 0.0;
    for (const auto& sh : w.shells) scale = std::max(scale, std::abs(sh.value));
    out.gauss_tail_bound = std::erfc(std::max(gap, 0.0) / (4.0 * sigma)) * scale;

    // first neglected non-zero shell, at low accuracy and a single epsilon
    {
        auto coarse = quad;
        coarse.tol_rel = 3e-3;
        coarse.qmc_budget = 1 << 13;
        coarse.eps_schedule = {quad.eps_schedule.front()};
        double tail = 0.0;
        for (int extra = 1; extra <= 2; ++extra) {
            double shell_mag = 0.0;
            for (const auto& n : enumerate_up_to(g.k(), n_cap + extra)) {
                if (n.total() != n_cap + extra) continue;
                shell_mag += std::abs(eval_I_n(specs, g, n, params, coarse).value);
            }
            tail = shell_mag;
            if (shell_mag > 0.0) break;
        }
        out.truncation_tail = 2.0 * tail;
    }

    out.bound = out.gauss_tail_bound + out.truncation_tail + 3.0 * out.combined_error;
    CheckCase c;
    c.name = "commutator estimate vs tail bound";
    c.lhs = cplx(out.commutator);
    c.rhs = cplx(0.0);
    c.tolerance = out.bound;
    c.pass = out.support_ok ? (out.commutator <= out.bound) : true;
    c.note = out.support_ok ? "" : "support-violation warning: packets not 6 sigma separated";
    out.report.add(std::move(c));
    return out;
}

// --- partition matrix elements ----------------------------------------------

struct MatrixElementTerm {
    std::vector<std::pair<int, int>> pins;  // identified (lambda index, beta index)
    cplx coefficient{0.0};                  // includes the (2 pi)^{|pins|} weight
};

// Partition sum over A = A1 u A2 (lambda set) and B = B1 u B2 (beta set, B1
// ordered) with |A1| = |B1|. Dirac factors are returned as exact coordinate
// identifications with their 2 pi weights; the coefficient carries the two
// reordering S-factors and the form factor of the surviving arguments, with
// the identified beta coordinates substituted by their lambda partners.
inline std::vector<MatrixElementTerm> matrix_element(const OperatorSpec& spec,
                                                     std::span<const cplx> lambda,
                                                     std::span<const cplx> beta, double eps,
                                                     const CouplingParams& params) {
    const int n = static_cast<int>(lambda.size());
    const int m = static_cast<int>(beta.size());
    if (n + m > 6) throw cap_error("matrix_element: n + m exceeds 6");
    std::vector<MatrixElementTerm> terms;

    std::vector<int> b_indices(m);
    for (int i = 0; i < m; ++i) b_indices[i] = i;

    for (unsigned a_mask = 0; a_mask < (1u << n); ++a_mask) {
        std::vector<int> a1, a2;
        for (int i = 0; i < n; ++i) ((a_mask >> i) & 1 ? a1 : a2).push_back(i);
        const int j = static_cast<int>(a1.size());
        if (j > m) continue;

        // ordered selections of j beta indices
        std::vector<int> sel(j);
        std::vector<bool> used(m, false);
        std::function<void(int)> choose = [&](int depth) {
            if (depth == j) {
                MatrixElementTerm term;
                term.pins.reserve(j);
                std::vector<cplx> beta_sub(beta.begin(), beta.end());
                for (int a = 0; a < j; ++a) {
                    term.pins.emplace_back(a1[a], sel[a]);
                    beta_sub[sel[a]] = lambda[a1[a]];
                }
                // S( rev A | rev A2 u rev A1 ) on the lambda values
                std::vector<cplx> xl(lambda.rbegin(), lambda.rend());
                std::vector<int> perm;
                perm.reserve(n);
                for (auto it = a2.rbegin(); it != a2.rend(); ++it) perm.push_back(n - 1 - *it);
                for (auto it = a1.rbegin(); it != a1.rend(); ++it) perm.push_back(n - 1 - *it);
                const cplx s1 = s_perm(xl, perm, params);
                // S( B | B1 u B2 ) on the substituted beta values
                std::vector<int> permb;
                permb.reserve(m);
                for (int i : sel) permb.push_back(i);
                for (int i = 0; i < m; ++i)
                    if (!used[i]) permb.push_back(i);
                const cplx s2 = s_perm(beta_sub, permb, params);
                // F( rev A2 + i pi e_eps, B2 )
                std::vector<cplx> args;
                for (auto it = a2.rbegin(); it != a2.rend(); ++it)
                    args.push_back(lambda[*it] + cplx(0.0, pi - eps));
                for (int i = 0; i < m; ++i)
                    if (!used[i]) args.push_back(beta_sub[i]);
                const cplx ff = form_factor(spec, args, params);
                term.coefficient = std::pow(2.0 * pi, j) * s1 * s2 * ff;
                terms.push_back(std::move(term));
                return;
            }
            for (int i = 0; i < m; ++i) {
                if (used[i]) continue;
                used[i] = true;
                sel[depth] = i;
                choose(depth + 1);
                used[i] = false;
            }
        };
        choose(0);
    }
    return terms;
}

// Pointwise value at generic arguments: only the pin-free term survives.
inline cplx matrix_element_value(const OperatorSpec& spec, std::span<const cplx> lambda,
                                 std::span<const cplx> beta, double eps,
                                 const CouplingParams& params) {
    for (const auto& t : matrix_element(spec, lambda, beta, eps, params))
        if (t.pins.empty()) return t.coefficient;
    return cplx(0.0);
}

// --- positivity -----------------------------------------------------------------

struct PositivityReport {
    CheckReport report;
    std::vector<std::vector<cplx>> gram;
    double min_eigenvalue = 0.0;
    double trace = 0.0;
};

// Gram matrix of vacuum + one- and two-particle sectors over a family of
// one-point test functions (optionally mixed with vacuum constants):
//   M_ij = sum_r 1/(r! (2 pi)^r) int d^r theta conj(G_r[i]) G_r[j],
// with G_r built from the matrix-element chain of length one. Positivity
// requires the smallest eigenvalue to be non-negative up to rounding.
inline PositivityReport check_positivity(const OperatorSpec& spec,
                                         std::span<const GaussianPacket> family,
                                         std::span<const cplx> vacuum_components, int r_max,
                                         const CouplingParams& params, const QuadConfig& quad) {
    PositivityReport out;
    out.report.check = "positivity";
    const int nf = static_cast<int>(family.size());
    const double m = params.mass;
    const double eps = quad.eps_schedule.empty() ? 1e-3 : quad.eps_schedule.back() / 4.0;

    auto g_sector = [&](int j, std::span<const cplx> theta) -> cplx {
        // chain of length one: phase transform of f_j times M_{r;0}(theta; {})
        std::vector<cplx> lam(theta.begin(), theta.end());
        const cplx mel = matrix_element_value(spec, lam, {}, eps, params);
        CTwoVector q = pbar(theta, m);
        return family[j].fourier(q) * mel;
    };

    double gamma_box = 0.0;
    {
        double sig_min = 1e9, k0 = 0.0;
        for (const auto& f : family) {
            sig_min = std::min(sig_min, f.min_sigma());
            k0 = std::max(k0, std::abs(f.wavevector.x0));
        }
        gamma_box = std::acosh(std::max(2.0, (std::sqrt(2.0 * 46.0) / sig_min + k0) / m)) +
                    quad.gamma_margin;
    }

    out.gram.assign(nf, std::vector<cplx>(nf, cplx(0.0)));
    for (int i = 0; i < nf; ++i)
        for (int j = 0; j < nf; ++j) {
            cplx total = std::conj(vacuum_components[i]) * vacuum_components[j];
            for (int r = 1; r <= r_max; ++r) {
                std::function<cplx(std::span<const double>)> integrand =
                    [&](std::span<const double> x) -> cplx {
                    std::vector<cplx> theta(x.begin(), x.end());
                    try {
                        return std::conj(g_sector(i, theta)) * g_sector(j, theta);
                    } catch (const coincidence_error&) {
                        for (size_t d = 0; d < theta.size(); ++d) theta[d] += 1e-9 * (d + 1.0);
                        return std::conj(g_sector(i, theta)) * g_sector(j, theta);
                    }
                };
                std::vector<double> lo(r), hi(r);
                for (int d = 0; d < r; ++d) {
                    lo[d] = -gamma_box + 0.017 * (d + 1);
                    hi[d] = gamma_box + 0.017 * (d + 1);
                }
                double fact = 1.0;
                for (int v = 2; v <= r; ++v) fact *= v;
                const auto q = (r <= 3)
                                   ? integrate_nd(integrand, r, lo, hi, quad.tol_rel, quad.tol_abs)
                                   : integrate_qmc(integrand, r, lo, hi, quad.qmc_budget, quad.seed);
                total += q.value / (fact * std::pow(2.0 * pi, r));
            }
            out.gram[i][j] = total;
        }

    // 2x2 (or 1x1) hermitian eigenvalues in closed form
    if (nf == 1) {
        out.min_eigenvalue = out.gram[0][0].real();
        out.trace = out.gram[0][0].real();
    } else {
        const double a = out.gram[0][0].real();
        const double d = out.gram[1][1].real();
        const cplx b = 0.5 * (out.gram[0][1] + std::conj(out.gram[1][0]));
        const double tr = a + d;
        const double disc = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
        out.min_eigenvalue = 0.5 * tr - disc;
        out.trace = tr;
    }
    CheckCase c;
    c.name = "gram matrix least eigenvalue";
    c.lhs = cplx(out.min_eigenvalue);
    c.rhs = cplx(0.0);
    c.tolerance = 1e-8 * out.trace;
    c.pass = out.min_eigenvalue >= -1e-8 * out.trace;
    out.report.add(std::move(c));
    return out;
}

// --- clustering ------------------------------------------------------------------

struct ClusterReport {
    CheckReport report;
    double fitted_exponent = 0.0;
    std::vector<double> separations;
    std::vector<double> cross_magnitudes;
    std::vector<double> differences;
};

// The index-swap map on layouts behind the reversed-cluster support set:
// blocks inside the two groups swap roles and the cross blocks pick up an
// i pi shift, flipping the reduced momentum of the cut between the groups.
inline RapidityLayout cluster_swap_map(const RapidityLayout& g, int p, int q) {
    const int k = p + q;
    if (g.k() != k) throw config_error("cluster_swap_map: size mismatch");
    MultiIndex m(k);
    for (int b = 2; b <= k; ++b)
        for (int a = 1; a < b; ++a) {
            if (b <= p)
                m.at(b + q, a + q) = g.size(b, a);
            else if (a >= p + 1)
                m.at(b - p, a - p) = g.size(b, a);
            else
                m.at(a + q, b - p) = g.size(b, a);
        }
    RapidityLayout out(m);
    for (int b = 2; b <= k; ++b)
        for (int a = 1; a < b; ++a) {
            std::span<const cplx> src = g.block(b, a);
            std::span<cplx> dst;
            cplx shift(0.0);
            if (b <= p)
                dst = out.block(b + q, a + q);
            else if (a >= p + 1)
                dst = out.block(b - p, a - p);
            else {
                dst = out.block(a + q, b - p);
                shift = cplx(0.0, pi);
            }
            for (size_t i = 0; i < src.size(); ++i) dst[i] = src[i] + shift;
        }
    return out;
}

inline ClusterReport check_cluster(std::span<const OperatorSpec> f_specs,
                                   std::span<const OperatorSpec> g_specs,
                                   const ProductTestFunction& f, const ProductTestFunction& g,
                                   TwoVector v, std::span<const double> lambdas,
                                   const CouplingParams& params, const QuadConfig& quad) {
    ClusterReport out;
    out.report.check = "cluster";
    if (minkowski_norm2(v) >= 0.0) throw domain_fault("check_cluster: v must be space-like");
    const int p = f.k(), q = g.k();
    const int k = p + q;
    std::vector<OperatorSpec> specs(f_specs.begin(), f_specs.end());
    specs.insert(specs.end(), g_specs.begin(), g_specs.end());

    auto combined = [&](double lam) {
        ProductTestFunction G = f;
        for (const auto& pk : g.factors) {
            GaussianPacket shifted = pk;
            shifted.center = pk.center + v * lam;
            // e^{i k * (x - lam v)} smearing keeps the packet's own phase
            shifted.amplitude = pk.amplitude * std::exp(cplx(0.0, -minkowski_dot(pk.wavevector, v * lam)));
            G.factors.push_back(shifted);
        }
        return G;
    };

    // (i) exact factorisation when no block crosses the split
    {
        MultiIndex n(k);
        if (p >= 2) n.at(2, 1) = 1;
        if (q >= 2) n.at(p + 2, p + 1) = 1;
        MultiIndex nf(p), ng(q);
        if (p >= 2) nf.at(2, 1) = 1;
        if (q >= 2) ng.at(2, 1) = 1;
        const double lam = lambdas.empty() ? 2.0 : lambdas[0];
        const auto whole = eval_I_n(specs, combined(lam), n, params, quad);
        const auto left = eval_I_n(f_specs, f, nf, params, quad);
        ProductTestFunction g_shift = combined(lam);
        g_shift.factors.erase(g_shift.factors.begin(), g_shift.factors.begin() + p);
        const auto right = eval_I_n(g_specs, g_shift, ng, params, quad);
        const cplx prod = left.value * right.value;
        const double tol = 3.0 * (whole.combined_err() +
                                  left.combined_err() * std::abs(right.value) +
                                  right.combined_err() * std::abs(left.value)) +
                           1e-8 * std::abs(prod) + 1e-14;
        out.report.add("zero-cross factorisation", whole.value, prod, tol);
    }

    // (ii) decay of the leading cross term; the profile follows K0(m d), so
    // the exponent is fitted with the d^{-1/2} prefactor removed
    {
        MultiIndex n(k);
        n.at(p + 1, p) = 1;
        for (double lam : lambdas) {
            const auto G = combined(lam);
            TwoVector dc = G.factors[p].center - G.factors[p - 1].center;
            const double d = std::sqrt(-minkowski_norm2(dc));
            const auto cross = eval_I_n(specs, G, n, params, quad);
            out.separations.push_back(d);
            out.cross_magnitudes.push_back(std::abs(cross.value));
        }
        // least squares of log|M| = c - mhat d - 0.5 log d
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int np = static_cast<int>(out.separations.size());
        for (int i = 0; i < np; ++i) {
            const double x = out.separations[i];
            const double y = std::log(out.cross_magnitudes[i]) + 0.5 * std::log(x);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double slope = (np * sxy - sx * sy) / (np * sxx - sx * sx);
        out.fitted_exponent = -slope;
        CheckCase c;
        c.name = "cross-term decay exponent";
        c.lhs = cplx(out.fitted_exponent);
        c.rhs = cplx(params.mass);
        c.tolerance = 0.1 * params.mass;
        c.pass = std::abs(out.fitted_exponent - params.mass) <= 0.1 * params.mass;
        out.report.add(std::move(c));
    }

    // (iii) partial-sum difference shrinks monotonically along the grid
    {
        const int n_cap = 1;
        const auto wf = eval_W_partial(f_specs, f, n_cap, params, quad);
        const auto wg = eval_W_partial(g_specs, g, n_cap, params, quad);
        for (double lam : lambdas) {
            const auto w = eval_W_partial(specs, combined(lam), n_cap, params, quad);
            out.differences.push_back(std::abs(w.value - wf.value * wg.value));
        }
        bool monotone = true;
        for (size_t i = 1; i < out.differences.size(); ++i)
            monotone = monotone && out.differences[i] < out.differences[i - 1];
        CheckCase c;
        c.name = "partial-sum difference decreases";
        c.lhs = cplx(out.differences.back());
        c.rhs = cplx(0.0);
        c.tolerance = out.differences.front();
        c.pass = monotone;
        out.report.add(std::move(c));
    }
    return out;
}

}  // namespace sgff
