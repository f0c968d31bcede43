#pragma once

// Minkowski R^{1,1} geometry, the Poincare and permutation actions, Gaussian
// wave packets with closed-form Fourier data, and the momentum transforms.
// Restricting test functions to Gaussians keeps every space-time integral in
// closed form; quadrature error lives only in the rapidity integrals.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "sgff/rapidity.hpp"
#include "sgff/special_functions.hpp"

namespace sgff {

struct TwoVector {
    double x0 = 0.0;  // time
    double x1 = 0.0;  // space

    TwoVector operator+(TwoVector o) const { return {x0 + o.x0, x1 + o.x1}; }
    TwoVector operator-(TwoVector o) const { return {x0 - o.x0, x1 - o.x1}; }
    TwoVector operator*(double s) const { return {x0 * s, x1 * s}; }
};

struct CTwoVector {
    cplx x0{0.0};
    cplx x1{0.0};

    CTwoVector() = default;
    CTwoVector(cplx t, cplx x) : x0(t), x1(x) {}
    CTwoVector(TwoVector v) : x0(v.x0), x1(v.x1) {}
    CTwoVector operator+(const CTwoVector& o) const { return {x0 + o.x0, x1 + o.x1}; }
    CTwoVector operator-(const CTwoVector& o) const { return {x0 - o.x0, x1 - o.x1}; }
    CTwoVector operator-() const { return {-x0, -x1}; }
};

inline double minkowski_dot(TwoVector a, TwoVector b) { return a.x0 * b.x0 - a.x1 * b.x1; }
inline cplx minkowski_dot(const CTwoVector& a, const CTwoVector& b) {
    return a.x0 * b.x0 - a.x1 * b.x1;
}
inline double minkowski_norm2(TwoVector x) { return minkowski_dot(x, x); }

// Lambda_theta = [[cosh, -sinh], [-sinh, cosh]]; symmetric, inverse is
// Lambda_{-theta}.
struct Boost {
    double ch, sh;
    explicit Boost(double theta) : ch(std::cosh(theta)), sh(std::sinh(theta)) {}
    TwoVector operator()(TwoVector v) const { return {ch * v.x0 - sh * v.x1, -sh * v.x0 + ch * v.x1}; }
};

// p(beta) = m (cosh beta, sinh beta).
inline CTwoVector two_momentum(cplx beta, double mass) {
    return {mass * std::cosh(beta), mass * std::sinh(beta)};
}

inline CTwoVector pbar(std::span<const cplx> betas, double mass) {
    CTwoVector sum;
    for (const cplx& b : betas) {
        const CTwoVector p = two_momentum(b, mass);
        sum = sum + p;
    }
    return sum;
}

// A Gaussian packet amp * exp(-1/2 (x-c)^T M (x-c)) * exp(i k*x) with real
// SPD precision M. The family is closed under the Poincare action and has a
// closed-form Minkowski Fourier transform, analytic in complex momenta.
struct GaussianPacket {
    cplx amplitude{1.0};
    TwoVector center{};
    Eigen::Matrix2d precision = Eigen::Matrix2d::Identity();
    TwoVector wavevector{};

    static GaussianPacket isotropic(TwoVector c, double sigma, TwoVector k = {},
                                    cplx amp = cplx(1.0)) {
        GaussianPacket g;
        g.amplitude = amp;
        g.center = c;
        g.precision = Eigen::Matrix2d::Identity() / (sigma * sigma);
        g.wavevector = k;
        return g;
    }

    cplx operator()(TwoVector x) const {
        const Eigen::Vector2d u(x.x0 - center.x0, x.x1 - center.x1);
        const double quad = u.dot(precision * u);
        const double phase = minkowski_dot(wavevector, x);
        return amplitude * std::exp(cplx(-0.5 * quad, phase));
    }

    // fourier(q) = int g(x) exp(i q*x) d^2x, q complex. With w the Euclidean
    // image of q + k this is amp * e^{i (q+k)*c} * 2 pi / sqrt(det M) *
    // exp(-1/2 w^T M^{-1} w).
    cplx fourier(const CTwoVector& q) const {
        const CTwoVector qk{q.x0 + wavevector.x0, q.x1 + wavevector.x1};
        const cplx w0 = qk.x0;
        const cplx w1 = -qk.x1;
        const Eigen::Matrix2d cov = precision.inverse();
        const cplx quad = cov(0, 0) * w0 * w0 + 2.0 * cov(0, 1) * w0 * w1 + cov(1, 1) * w1 * w1;
        const cplx phase = qk.x0 * center.x0 - qk.x1 * center.x1;
        const double det = precision.determinant();
        return amplitude * (2.0 * pi / std::sqrt(det)) * std::exp(cplx(0.0, 1.0) * phase - 0.5 * quad);
    }

    // x -> g(Lambda_theta^{-1}(x + v)).
    GaussianPacket poincare(double theta, TwoVector v) const {
        const Boost fwd(theta), inv(-theta);
        GaussianPacket g;
        g.center = fwd(center) - v;
        Eigen::Matrix2d L;
        L << inv.ch, -inv.sh, -inv.sh, inv.ch;
        g.precision = L * precision * L;
        g.wavevector = fwd(wavevector);
        g.amplitude = amplitude * std::exp(cplx(0.0, minkowski_dot(g.wavevector, v)));
        return g;
    }

    GaussianPacket conjugated() const {
        GaussianPacket g = *this;
        g.amplitude = std::conj(g.amplitude);
        g.wavevector = {-wavevector.x0, -wavevector.x1};
        return g;
    }

    double min_sigma() const {
        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(precision);
        return 1.0 / std::sqrt(es.eigenvalues().maxCoeff());
    }
};

// G(X_k) = prod_s g_s(x_s).
struct ProductTestFunction {
    std::vector<GaussianPacket> factors;

    int k() const { return static_cast<int>(factors.size()); }

    cplx operator()(std::span<const TwoVector> x) const {
        cplx r(1.0);
        for (size_t s = 0; s < factors.size(); ++s) r *= factors[s](x[s]);
        return r;
    }

    ProductTestFunction poincare(double theta, TwoVector v) const {
        ProductTestFunction g;
        g.factors.reserve(factors.size());
        for (const auto& f : factors) g.factors.push_back(f.poincare(theta, v));
        return g;
    }

    // (sigma . G)(X) = G(sigma^{-1} X): factor s of the new function is
    // factor sigma^{-1}(s) of the old one, i.e. a reordering of the list.
    ProductTestFunction permuted(std::span<const int> sigma_inverse) const {
        ProductTestFunction g;
        g.factors.reserve(factors.size());
        for (int idx : sigma_inverse) g.factors.push_back(factors[idx]);
        return g;
    }

    ProductTestFunction transposed(int s) const {  // adjacent transposition tau_s, 1-based
        if (s < 1 || s + 1 > k()) throw config_error("transposed: index out of range");
        ProductTestFunction g = *this;
        std::swap(g.factors[s - 1], g.factors[s]);
        return g;
    }

    ProductTestFunction inverted() const {  // iota: (x_k, ..., x_1)
        ProductTestFunction g = *this;
        std::reverse(g.factors.begin(), g.factors.end());
        return g;
    }

    ProductTestFunction conjugated() const {
        ProductTestFunction g;
        g.factors.reserve(factors.size());
        for (const auto& f : factors) g.factors.push_back(f.conjugated());
        return g;
    }
};

// Momentum transform R[G](gamma) = int d^k X G(X) prod_{b>a}
// e^{i pbar(gamma^(ba)) * (x_b - x_a)}. For product Gaussians the phases
// regroup per coordinate: the coefficient of x_s is
// q_s = sum_{a<s} pbar(gamma^(sa)) - sum_{b>s} pbar(gamma^(bs)),
// giving R[G] = prod_s fourier_s(q_s).
inline cplx momentum_transform(const ProductTestFunction& g, const RapidityLayout& gamma,
                               double mass) {
    const int k = gamma.k();
    if (g.k() != k) throw config_error("momentum_transform: k mismatch");
    cplx r(1.0);
    for (int s = 1; s <= k; ++s) {
        CTwoVector q;
        for (int a = 1; a < s; ++a) q = q + pbar(gamma.block(s, a), mass);
        for (int b = s + 1; b <= k; ++b) q = q - pbar(gamma.block(b, s), mass);
        r *= g.factors[s - 1].fourier(q);
    }
    return r;
}

// Reduced momenta P_l(gamma) = sum over blocks crossing the cut l.
inline CTwoVector reduced_momentum(const RapidityLayout& gamma, int l, double mass) {
    CTwoVector p;
    for (int b = l + 1; b <= gamma.k(); ++b)
        for (int a = 1; a <= l; ++a) p = p + pbar(gamma.block(b, a), mass);
    return p;
}

inline std::vector<CTwoVector> reduced_momenta(const RapidityLayout& gamma, double mass) {
    std::vector<CTwoVector> out;
    out.reserve(gamma.k() - 1);
    for (int l = 1; l < gamma.k(); ++l) out.push_back(reduced_momentum(gamma, l, mass));
    return out;
}

// P_l^2 for real layouts through the pairwise identity p(a)*p(b) =
// m^2 cosh(a-b): a sum of terms each >= m^2, so the mass-gap inequality
// survives floating point exactly (the (P^0)^2 - (P^1)^2 route cancels).
inline double reduced_momentum_sq(const RapidityLayout& gamma, int l, double mass) {
    std::vector<double> rap;
    for (int b = l + 1; b <= gamma.k(); ++b)
        for (int a = 1; a <= l; ++a)
            for (const cplx& v : gamma.block(b, a)) rap.push_back(v.real());
    double sum = 0.0;
    for (double x : rap)
        for (double y : rap) sum += std::cosh(x - y);
    return mass * mass * sum;
}

// A Gaussian on (R^2)^n: exp(log_amp - 1/2 Y^T M Y + b^T Y) with real SPD M
// and complex linear part. Closed under marginalisation, which is all the
// L-map needs.
struct GaussianOnRd {
    Eigen::MatrixXd m;       // 2n x 2n, SPD
    Eigen::VectorXcd b;      // 2n
    cplx log_amp{0.0};

    int points() const { return static_cast<int>(m.rows()) / 2; }

    cplx operator()(std::span<const TwoVector> y) const {
        Eigen::VectorXd yy(m.rows());
        for (size_t s = 0; s < y.size(); ++s) {
            yy(2 * s) = y[s].x0;
            yy(2 * s + 1) = y[s].x1;
        }
        const cplx quad = -0.5 * yy.dot(m * yy);
        cplx lin(0.0);
        for (int i = 0; i < m.rows(); ++i) lin += b(i) * yy(i);
        return std::exp(log_amp + quad + lin);
    }

    // int over all of (R^2)^n.
    cplx integral() const {
        const Eigen::MatrixXd inv = m.inverse();
        const Eigen::VectorXcd half = inv.cast<cplx>() * b;
        cplx quad(0.0);
        for (int i = 0; i < m.rows(); ++i) quad += b(i) * half(i);
        const double n = static_cast<double>(m.rows());
        return std::exp(log_amp + 0.5 * quad + 0.5 * n * std::log(2.0 * pi) -
                        0.5 * std::log(m.determinant()));
    }

    // Integrates out the last R^2 coordinate pair.
    GaussianOnRd marginalized_last() const {
        const int n = static_cast<int>(m.rows());
        const auto p = m.topLeftCorner(n - 2, n - 2);
        const auto q = m.topRightCorner(n - 2, 2);
        const Eigen::Matrix2d r = m.bottomRightCorner(2, 2);
        const Eigen::Matrix2d rinv = r.inverse();
        GaussianOnRd out;
        out.m = p - q * rinv * q.transpose();
        const Eigen::Vector2cd b2 = b.tail(2);
        out.b = b.head(n - 2) - (q * rinv).cast<cplx>() * b2;
        cplx quad(0.0);
        const Eigen::Vector2cd half = rinv.cast<cplx>() * b2;
        for (int i = 0; i < 2; ++i) quad += b2(i) * half(i);
        out.log_amp = log_amp + 0.5 * quad + std::log(2.0 * pi) - 0.5 * std::log(r.determinant());
        return out;
    }
};

// L[G](Y_{k-1}) = int dy_k G(x_1, ..., x_k) with x_s = sum_{p>=s} y_p,
// computed in closed form. The result is a Gaussian in the k-1 difference
// variables.
inline GaussianOnRd l_map(const ProductTestFunction& g) {
    const int k = g.k();
    const int n = 2 * k;
    // exponent in x: sum_s [ -1/2 (x_s - c_s)^T M_s (x_s - c_s) + i k_s * x_s ]
    // then substitute x_s = sum_{p >= s} y_p via the block-triangular T.
    Eigen::MatrixXd mx = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXcd bx = Eigen::VectorXcd::Zero(n);
    cplx log_amp(0.0);
    for (int s = 0; s < k; ++s) {
        const auto& f = g.factors[s];
        mx.block<2, 2>(2 * s, 2 * s) = f.precision;
        const Eigen::Vector2d c(f.center.x0, f.center.x1);
        const Eigen::Vector2d eta_k(f.wavevector.x0, -f.wavevector.x1);
        const Eigen::Vector2d mc = f.precision * c;
        bx.segment<2>(2 * s) = mc.cast<cplx>() + cplx(0.0, 1.0) * eta_k.cast<cplx>();
        log_amp += std::log(f.amplitude) - 0.5 * c.dot(mc);
    }
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
    for (int s = 0; s < k; ++s)
        for (int p = s; p < k; ++p) t.block<2, 2>(2 * s, 2 * p) = Eigen::Matrix2d::Identity();
    GaussianOnRd full;
    full.m = t.transpose() * mx * t;
    full.b = t.transpose().cast<cplx>() * bx;
    full.log_amp = log_amp;
    return full.marginalized_last();
}

// Reduced transform R_hat[H](gamma) = int d^{k-1}Y H(Y) prod_l
// e^{-i y_l * P_l(gamma)}: a linear phase added to the Gaussian, then a full
// integral. Accepts complex-shifted layouts.
inline cplx reduced_transform(const GaussianOnRd& h, const RapidityLayout& gamma, double mass) {
    if (h.points() != gamma.k() - 1) throw config_error("reduced_transform: size mismatch");
    GaussianOnRd shifted = h;
    for (int l = 1; l < gamma.k(); ++l) {
        const CTwoVector p = reduced_momentum(gamma, l, mass);
        // -i y_l * P_l = -i (P_l^0 y_l^0 - P_l^1 y_l^1)
        shifted.b(2 * (l - 1)) += cplx(0.0, -1.0) * p.x0;
        shifted.b(2 * (l - 1) + 1) += cplx(0.0, 1.0) * p.x1;
    }
    return shifted.integral();
}

// R_hat applied to an explicit product of packets in the difference
// variables: prod_l fourier_l(-P_l).
inline cplx reduced_transform(std::span<const GaussianPacket> h, const RapidityLayout& gamma,
                              double mass) {
    cplx r(1.0);
    for (int l = 1; l < gamma.k(); ++l) {
        const CTwoVector p = reduced_momentum(gamma, l, mass);
        r *= h[l - 1].fourier(-p);
    }
    return r;
}

}  // namespace sgff
