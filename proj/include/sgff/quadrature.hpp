#pragma once

// Quadrature engine: adaptive Gauss-Kronrod (G7K15) in one dimension,
// iterated for 2-3 dimensions, and a scrambled Sobol rule for higher
// dimensions. Evaluation order is fixed, so identical inputs give
// bit-identical sums.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sgff/errors.hpp"
#include "sgff/special_functions.hpp"

namespace sgff {

struct QuadResult {
    cplx value{0.0, 0.0};
    double err = 0.0;
    long evals = 0;
};

namespace detail {

// Positive G7K15 abscissae with Kronrod and (embedded) Gauss weights.
struct GkNode {
    double x, wk, wg;
};
inline constexpr GkNode gk_nodes[8] = {
    {0.000000000000000000000000000000000, 0.209482141084727828012999174891714, 0.417959183673469387755102040816327},
    {0.405845151377397166906606412076961, 0.190350578064785409913256402421014, 0.381830050505118944950369775488975},
    {0.741531185599394439863864773280788, 0.140653259715525918745189590510238, 0.279705391489276667901467771423780},
    {0.949107912342758524526189684047851, 0.063092092629978553290700663189204, 0.129484966168869693270611432679082},
    {0.207784955007898467600689403773245, 0.204432940075298892414161999234649, 0.0},
    {0.586087235467691130294144838258730, 0.169004726639267902826583426598550, 0.0},
    {0.864864423359769072789712788640926, 0.104790010322250183839876322541518, 0.0},
    {0.991455371120812639206854697526329, 0.022935322010529224963732008058970, 0.0}};

template <class F>
inline void gk15(const F& f, double a, double b, cplx& value, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    cplx k15(0.0), g7(0.0);
    const cplx f0 = f(c);
    k15 += gk_nodes[0].wk * f0;
    g7 += gk_nodes[0].wg * f0;
    for (int i = 1; i < 8; ++i) {
        const cplx fp = f(c + h * gk_nodes[i].x);
        const cplx fm = f(c - h * gk_nodes[i].x);
        k15 += gk_nodes[i].wk * (fp + fm);
        g7 += gk_nodes[i].wg * (fp + fm);
    }
    value = h * k15;
    err = std::abs(h * (k15 - g7));
}

}  // namespace detail

// Adaptive bisection on [a, b]. Stops when the local error estimate is below
// max(tol_rel * |whole|, tol_abs) distributed over subintervals.
template <class F>
QuadResult integrate_1d(const F& f, double a, double b, double tol_rel = 1e-9,
                        double tol_abs = 1e-14, int max_depth = 48) {
    struct Seg {
        double a, b;
        cplx v;
        double e;
        int depth;
    };
    QuadResult out;
    cplx v0;
    double e0;
    detail::gk15(f, a, b, v0, e0);
    out.evals = 15;
    std::vector<Seg> stack{{a, b, v0, e0, 0}};
    const double scale = std::max(std::abs(v0), 1e-30);
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        const double local_tol =
            std::max(tol_abs, tol_rel * scale) * (s.b - s.a) / (b - a);
        if (s.e <= local_tol || s.depth >= max_depth) {
            out.value += s.v;
            out.err += s.e;
            continue;
        }
        const double m = 0.5 * (s.a + s.b);
        cplx vl, vr;
        double el, er;
        detail::gk15(f, s.a, m, vl, el);
        detail::gk15(f, m, s.b, vr, er);
        out.evals += 30;
        stack.push_back({s.a, m, vl, el, s.depth + 1});
        stack.push_back({m, s.b, vr, er, s.depth + 1});
    }
    return out;
}

namespace detail {

// Gauss-Legendre nodes/weights on (-1, 1), cached per order.
inline const std::pair<std::vector<double>, std::vector<double>>& legendre_rule(int n) {
    thread_local std::vector<std::pair<std::vector<double>, std::vector<double>>> cache(512);
    auto& slot = cache.at(n);
    if (!slot.first.empty()) return slot;
    std::vector<double> x(n), w(n);
    auto eval_pair = [n](double t) {  // returns (P_n(t), P_n'(t))
        double p0 = 1.0, p1 = t;
        for (int j = 2; j <= n; ++j) {
            const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        return std::pair{p1, n * (t * p1 - p0) / (t * t - 1.0)};
    };
    for (int i = 0; i < n; ++i) {
        double t = std::cos(pi * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 60; ++iter) {
            const auto [p, dp] = eval_pair(t);
            const double step = p / dp;
            t -= step;
            if (std::abs(step) < 1e-15) break;
        }
        const auto [p, dp] = eval_pair(t);
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    slot = {std::move(x), std::move(w)};
    return slot;
}

template <class F>
cplx tensor_gl(const F& f, int dim, std::span<const double> lo, std::span<const double> hi,
               int order, long& evals) {
    const auto& [xs, ws] = legendre_rule(order);
    std::vector<double> x(dim);
    std::vector<int> idx(dim, 0);
    cplx acc(0.0);
    while (true) {
        double w = 1.0;
        for (int d = 0; d < dim; ++d) {
            const double half = 0.5 * (hi[d] - lo[d]);
            x[d] = lo[d] + half * (1.0 + xs[idx[d]]);
            w *= half * ws[idx[d]];
        }
        acc += w * f(x);
        ++evals;
        int d = 0;
        while (d < dim && ++idx[d] == order) {
            idx[d] = 0;
            ++d;
        }
        if (d == dim) break;
    }
    return acc;
}

}  // namespace detail

// Multi-dimensional quadrature over a box. One dimension falls back to the
// adaptive rule; two and three use dual-resolution Gauss-Legendre tensor
// grids (the integrands are smooth with super-exponential decay, where
// Gauss-Legendre converges geometrically), with the grid difference as the
// error estimate.
inline QuadResult integrate_nd(const std::function<cplx(std::span<const double>)>& f, int dim,
                               std::span<const double> lo, std::span<const double> hi,
                               double tol_rel = 1e-6, double tol_abs = 1e-12) {
    if (dim < 1) throw config_error("integrate_nd: dim must be >= 1");
    QuadResult out;
    if (dim == 1) {
        std::vector<double> x(1);
        long evals = 0;
        auto g = [&](double t) {
            x[0] = t;
            ++evals;
            return f(x);
        };
        out = integrate_1d(g, lo[0], hi[0], tol_rel, tol_abs);
        out.evals = evals;
        return out;
    }
    // grid orders scale with the requested tolerance
    int coarse, fine;
    if (dim == 2) {
        if (tol_rel >= 3e-5) {
            coarse = 40;
            fine = 60;
        } else if (tol_rel >= 3e-8) {
            coarse = 64;
            fine = 96;
        } else {
            coarse = 96;
            fine = 128;
        }
    } else {
        if (tol_rel >= 3e-5) {
            coarse = 24;
            fine = 34;
        } else if (tol_rel >= 3e-8) {
            coarse = 36;
            fine = 52;
        } else {
            coarse = 44;
            fine = 62;
        }
    }
    long evals = 0;
    const cplx a = detail::tensor_gl(f, dim, lo, hi, coarse, evals);
    const cplx b = detail::tensor_gl(f, dim, lo, hi, fine, evals);
    out.value = b;
    out.err = std::abs(b - a);
    out.evals = evals;
    return out;
}

// --- Sobol low-discrepancy points -----------------------------------------

// First dimensions of the Joe-Kuo direction-number table, with XOR
// scrambling derived from the seed. Supports up to 8 dimensions.
class Sobol {
  public:
    Sobol(int dim, uint64_t seed) : dim_(dim), x_(dim, 0), mask_(dim, 0), index_(0) {
        if (dim < 1 || dim > 8) throw cap_error("Sobol: dimension must be 1..8");
        static constexpr int sdeg[8] = {0, 1, 2, 3, 3, 4, 4, 5};
        static constexpr int apol[8] = {0, 0, 1, 1, 2, 1, 4, 2};
        static constexpr int minit[8][5] = {{0, 0, 0, 0, 0}, {1, 0, 0, 0, 0}, {1, 3, 0, 0, 0},
                                            {1, 3, 1, 0, 0}, {1, 1, 1, 0, 0}, {1, 1, 3, 3, 0},
                                            {1, 3, 5, 13, 0}, {1, 1, 5, 5, 17}};
        v_.assign(dim_, std::vector<uint32_t>(bits_, 0));
        for (int j = 0; j < bits_; ++j) v_[0][j] = 1u << (31 - j);
        for (int d = 1; d < dim_; ++d) {
            const int s = sdeg[d];
            const int a = apol[d];
            for (int j = 0; j < s; ++j) v_[d][j] = static_cast<uint32_t>(minit[d][j]) << (31 - j);
            for (int j = s; j < bits_; ++j) {
                uint32_t vj = v_[d][j - s] ^ (v_[d][j - s] >> s);
                for (int l = 1; l < s; ++l)
                    if ((a >> (s - 1 - l)) & 1) vj ^= v_[d][j - l];
                v_[d][j] = vj;
            }
        }
        uint64_t st = seed;
        for (int d = 0; d < dim_; ++d) mask_[d] = static_cast<uint32_t>(splitmix(st) >> 32);
    }

    // Next point in (0,1)^dim (Gray-code order).
    void next(std::span<double> out) {
        const uint64_t i = index_++;
        int c = 0;
        uint64_t w = ~i & (i + 1);
        while (w > 1) {
            w >>= 1;
            ++c;
        }
        for (int d = 0; d < dim_; ++d) {
            x_[d] ^= v_[d][c];
            out[d] = ((x_[d] ^ mask_[d]) + 0.5) * 0x1p-32;
        }
    }

  private:
    static uint64_t splitmix(uint64_t& s) {
        s += 0x9e3779b97f4a7c15ULL;
        uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static constexpr int bits_ = 32;
    int dim_;
    std::vector<std::vector<uint32_t>> v_;
    std::vector<uint32_t> x_;
    std::vector<uint32_t> mask_;
    uint64_t index_;
};

// Quasi-Monte-Carlo over a box, with a logistic map concentrating points
// near the origin (the integrands decay at least like sech in each
// coordinate). Error from the spread of 8 fixed-order batch means.
inline QuadResult integrate_qmc(const std::function<cplx(std::span<const double>)>& f, int dim,
                                std::span<const double> lo, std::span<const double> hi,
                                long budget, uint64_t seed) {
    Sobol sobol(dim, seed);
    std::vector<double> u(dim), x(dim);
    const int batches = 8;
    const long per_batch = std::max<long>(budget / batches, 1);
    std::vector<cplx> batch_mean(batches, cplx(0.0));
    for (int bi = 0; bi < batches; ++bi) {
        cplx acc(0.0);
        for (long i = 0; i < per_batch; ++i) {
            sobol.next(u);
            double jac = 1.0;
            for (int d = 0; d < dim; ++d) {
                // map (0,1) -> (lo, hi) through a logistic profile centred on
                // the box midpoint; weight = 1/density
                const double c = 0.5 * (lo[d] + hi[d]);
                const double half = 0.5 * (hi[d] - lo[d]);
                const double a = half / 6.0;
                const double t = std::clamp(u[d], 1e-12, 1.0 - 1e-12);
                const double y = a * std::log(t / (1.0 - t));
                if (std::abs(y) > half) {
                    jac = 0.0;
                    break;
                }
                x[d] = c + y;
                jac *= a / (t * (1.0 - t));
            }
            if (jac != 0.0) acc += jac * f(x);
        }
        batch_mean[bi] = acc / static_cast<double>(per_batch);
    }
    cplx mean(0.0);
    for (const cplx& m : batch_mean) mean += m;
    mean /= static_cast<double>(batches);
    double var = 0.0;
    for (const cplx& m : batch_mean) var += std::norm(m - mean);
    var /= batches * (batches - 1.0);
    QuadResult out;
    out.value = mean;
    out.err = std::sqrt(var);
    out.evals = per_batch * batches;
    return out;
}

// Two-point Richardson extrapolation of a geometric (halving) parameter
// schedule. Returns the last extrapolant and the spread of the final two as
// the error estimate.
struct Richardson {
    static std::pair<cplx, double> extrapolate(std::span<const cplx> vals) {
        if (vals.empty()) throw convergence_error("Richardson: no values");
        if (vals.size() == 1) return {vals[0], 0.0};
        std::vector<cplx> e(vals.size() - 1);
        for (size_t i = 0; i + 1 < vals.size(); ++i) e[i] = 2.0 * vals[i + 1] - vals[i];
        double err = (e.size() >= 2) ? std::abs(e.back() - e[e.size() - 2])
                                     : std::abs(e.back() - vals.back());
        return {e.back(), err};
    }
};

}  // namespace sgff
