#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "sgff/axioms.hpp"

using namespace sgff;

namespace {

const CouplingParams params = CouplingParams::from_b(0.25);

QuadConfig fast_quad() {
    QuadConfig q;
    q.tol_rel = 1e-7;
    return q;
}

ProductTestFunction two_point_packets(double sep = 2.0, double sigma = 0.4) {
    ProductTestFunction g;
    g.factors.push_back(GaussianPacket::isotropic({0.0, 0.0}, sigma));
    g.factors.push_back(GaussianPacket::isotropic({0.0, sep}, sigma));
    return g;
}

template <class F>
cplx simpson(const F& f, double a, double b, int intervals) {
    cplx acc = f(a) + f(b);
    const double h = (b - a) / intervals;
    for (int i = 1; i < intervals; ++i) acc += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
    return acc * (h / 3.0);
}

}  // namespace

TEST_CASE("covariance: field two-point under translations and boosts") {
    const auto field = make_field_operator(params);
    const std::vector<OperatorSpec> pair{field, field};
    const auto rep =
        check_covariance(pair, two_point_packets(), 0.3, {0.1, -0.2}, 2, params, fast_quad());
    CHECK(rep.pass);
    REQUIRE(rep.cases.size() == 3);
    for (const auto& c : rep.cases) CHECK(c.pass);
}

TEST_CASE("covariance: spin-1 synthetic scales each shell by e^{-theta s n}") {
    // single-rapidity shell, spin-1 pair: ratio e^{-2 theta}
    const auto spin1 = make_synthetic_spin(1.0);
    const std::vector<OperatorSpec> pair{spin1, adjoint_of(spin1)};
    const auto g = two_point_packets(1.5, 0.45);
    const double theta = 0.2;
    MultiIndex n(2);
    n.at(2, 1) = 1;
    const auto quad = fast_quad();
    const auto base = eval_I_n(pair, g, n, params, quad);
    const auto moved = eval_I_n(pair, g.poincare(theta, {0.0, 0.0}), n, params, quad);
    const cplx want = std::exp(-2.0 * theta) * base.value;
    CHECK(std::abs(moved.value - want) <
          3.0 * (moved.combined_err() + base.combined_err()) + 1e-8 * std::abs(base.value));
}

TEST_CASE("spectral: cone inequalities and support localisation") {
    const auto rep = check_spectral(3, 500, 123, params, fast_quad());
    CHECK(rep.pass);
    REQUIRE(rep.cases.size() == 3);
    CHECK(rep.cases[0].pass);  // inequalities, zero violations
    CHECK(rep.cases[1].pass);  // outside the cone: vanishes
    CHECK(rep.cases[2].pass);  // inside: resolvably non-zero
}

TEST_CASE("hermiticity: field two-point with real and complex packets") {
    const auto field = make_field_operator(params);
    const std::vector<OperatorSpec> pair{field, field};
    const std::vector<int> r{1};
    const auto quad = fast_quad();

    auto rep = check_hermiticity(pair, two_point_packets(), r, params, quad);
    CHECK(rep.pass);
    // the smeared two-point of a self-adjoint operator against real packets
    // is real up to quadrature error
    const auto w = eval_W_r(pair, two_point_packets(), r, params, quad);
    CHECK(std::abs(w.value.imag()) < 3.0 * w.combined_err() + 1e-9 * std::abs(w.value));

    ProductTestFunction g = two_point_packets();
    g.factors[0].wavevector = {0.4, -0.3};
    g.factors[1].wavevector = {-0.2, 0.5};
    g.factors[1].amplitude = cplx(0.7, 0.4);
    rep = check_hermiticity(pair, g, r, params, quad);
    CHECK(rep.pass);
}

TEST_CASE("hermiticity: k = 3 mixed operators, r = (1,1)") {
    const auto field = make_field_operator(params);
    const auto even = make_even_operator();
    const std::vector<OperatorSpec> triple{field, even, field};
    ProductTestFunction g;
    g.factors.push_back(GaussianPacket::isotropic({0.1, -1.5}, 0.4, {0.2, 0.0}));
    g.factors.push_back(GaussianPacket::isotropic({0.0, 0.0}, 0.45));
    g.factors.push_back(GaussianPacket::isotropic({-0.1, 1.5}, 0.4, {0.0, -0.1}));
    const std::vector<int> r{1, 1};
    const auto rep = check_hermiticity(triple, g, r, params, fast_quad());
    CHECK(rep.pass);
}

TEST_CASE("locality: spacelike separation passes, timelike control fails loudly") {
    const auto field = make_field_operator(params);
    const std::vector<OperatorSpec> pair{field, field};
    const auto quad = fast_quad();

    const auto spacelike = check_locality(pair, two_point_packets(3.0, 0.3), 1, 2, params, quad);
    CHECK(spacelike.support_ok);
    CHECK(spacelike.report.pass);
    CHECK(spacelike.commutator <= spacelike.bound);

    ProductTestFunction timelike;
    timelike.factors.push_back(GaussianPacket::isotropic({3.0, 0.0}, 0.3));
    timelike.factors.push_back(GaussianPacket::isotropic({0.0, 0.0}, 0.3));
    const auto control = check_locality(pair, timelike, 1, 2, params, quad);
    CHECK_FALSE(control.support_ok);
    CHECK(control.commutator > 10.0 * spacelike.bound);
}

TEST_CASE("matrix_element: empty-set conventions") {
    const auto even = make_even_operator();
    const auto terms0 = matrix_element(even, {}, {}, 0.05, params);
    REQUIRE(terms0.size() == 1);
    CHECK(terms0[0].pins.empty());
    CHECK(std::abs(terms0[0].coefficient - even.p0()) < 1e-14);

    // n = 0, m = 1: single term, the one-argument form factor
    const std::vector<cplx> beta{cplx(0.7)};
    const auto terms01 = matrix_element(even, {}, beta, 0.05, params);
    REQUIRE(terms01.size() == 1);
    CHECK(std::abs(terms01[0].coefficient - form_factor(even, beta, params)) < 1e-13);

    // n = 1, m = 1: pin-free term plus one pinned term carrying 2 pi
    const std::vector<cplx> lam{cplx(0.2)};
    const auto terms11 = matrix_element(even, lam, beta, 0.05, params);
    REQUIRE(terms11.size() == 2);
}

TEST_CASE("matrix_element: adjoint relation per pinning pattern") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    const double eps = 0.04;
    for (const auto& spec : {make_even_operator(), make_synthetic_spin(1.0)}) {
        const auto adj = adjoint_of(spec);
        for (auto [n, m] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{1, 2}, std::pair{2, 2}}) {
            std::vector<cplx> lam(n), beta(m);
            for (auto& x : lam) x = u(rng);
            for (auto& x : beta) x = u(rng);
            // enumerate the pin patterns of the left side on fresh inputs with
            // the pinned coordinates identified
            const auto patterns = matrix_element(adj, lam, beta, eps, params);
            for (const auto& pattern : patterns) {
                auto lam2 = lam;
                auto beta2 = beta;
                for (auto [kl, ib] : pattern.pins) beta2[ib] = lam2[kl];
                const auto lhs_terms = matrix_element(adj, lam2, beta2, eps, params);
                const auto rhs_terms = matrix_element(spec, beta2, lam2, eps, params);
                auto find = [&](const std::vector<MatrixElementTerm>& terms, bool flip) {
                    for (const auto& t : terms) {
                        if (t.pins.size() != pattern.pins.size()) continue;
                        bool same = true;
                        for (const auto& p : pattern.pins) {
                            const auto want =
                                flip ? std::pair{p.second, p.first} : std::pair{p.first, p.second};
                            bool found = false;
                            for (const auto& q : t.pins)
                                found = found || (q.first == want.first && q.second == want.second);
                            same = same && found;
                        }
                        if (same) return t.coefficient;
                    }
                    throw std::runtime_error("pattern not found");
                };
                const cplx lhs = find(lhs_terms, false);
                const cplx rhs = std::conj(find(rhs_terms, true)) *
                                 std::exp(cplx(0.0, -eps * spec.spin));
                CHECK(std::abs(lhs - rhs) < 1e-9 * std::max(1.0, std::abs(lhs)));
            }
        }
    }
}

TEST_CASE("positivity: single test function gives a non-negative 1x1 form") {
    const auto field = make_field_operator(params);
    std::vector<GaussianPacket> family{GaussianPacket::isotropic({0.0, 0.3}, 0.5)};
    std::vector<cplx> vac{cplx(0.0)};
    const auto rep = check_positivity(field, family, vac, 2, params, fast_quad());
    CHECK(rep.report.pass);
    CHECK(rep.min_eigenvalue >= 0.0);
    CHECK(rep.trace > 0.0);
}

TEST_CASE("positivity: 2x2 gram is positive semidefinite; zero function vanishes") {
    const auto field = make_field_operator(params);
    std::vector<GaussianPacket> family{
        GaussianPacket::isotropic({0.0, -0.6}, 0.45),
        GaussianPacket::isotropic({0.0, 0.7}, 0.5, {0.3, 0.1})};
    std::vector<cplx> vac{cplx(0.2), cplx(0.1, -0.05)};
    const auto rep = check_positivity(field, family, vac, 2, params, fast_quad());
    CHECK(rep.report.pass);
    CHECK(rep.min_eigenvalue >= -1e-8 * rep.trace);

    std::vector<GaussianPacket> zero{GaussianPacket::isotropic({0.0, 0.0}, 0.5, {}, cplx(0.0))};
    std::vector<cplx> vz{cplx(0.0)};
    const auto zr = check_positivity(field, zero, vz, 2, params, fast_quad());
    CHECK(std::abs(zr.trace) < 1e-12);
}

TEST_CASE("positivity sector matches the direct correlator route") {
    // 1/(2 pi) int conj(G_1[f_i]) G_1[f_j] equals W^(r=1) of (conj f_i, f_j)
    const auto field = make_field_operator(params);
    const std::vector<OperatorSpec> pair{field, field};
    const auto f_i = GaussianPacket::isotropic({0.0, 0.0}, 0.5);
    const auto f_j = GaussianPacket::isotropic({0.0, 1.0}, 0.45, {0.2, 0.0});
    const double eps = 1e-6;

    auto g_sector = [&](const GaussianPacket& f, double theta) {
        const std::vector<cplx> lam{cplx(theta)};
        const cplx mel = matrix_element_value(field, lam, {}, eps, params);
        return f.fourier(pbar(lam, params.mass)) * mel;
    };
    const cplx sector = simpson(
                            [&](double th) {
                                return std::conj(g_sector(f_i, th)) * g_sector(f_j, th);
                            },
                            -6.0, 6.0, 1200) /
                        (2.0 * pi);

    ProductTestFunction g;
    g.factors.push_back(f_i.conjugated());
    g.factors.push_back(f_j);
    const std::vector<int> r{1};
    const auto w = eval_W_r(pair, g, r, params, fast_quad());
    CHECK(std::abs(sector - w.value) < 3.0 * w.combined_err() + 1e-6 * std::abs(w.value));
}

TEST_CASE("cluster: swap map flips the split-cut momentum") {
    std::mt19937_64 rng(17);
    const int p = 2, q = 2;
    for (int rep = 0; rep < 30; ++rep) {
        const auto g = detail::random_real_layout(p + q, 2, rng);
        const auto swapped = cluster_swap_map(g, p, q);
        const auto lhs = reduced_momentum(swapped, p, params.mass);
        const auto rhs = reduced_momentum(g, q, params.mass);
        CHECK(std::abs(lhs.x0 + rhs.x0) < 1e-12);
        CHECK(std::abs(lhs.x1 + rhs.x1) < 1e-12);
    }
}

TEST_CASE("cluster: factorisation, K0 decay ratio, shrinking difference") {
    const auto field = make_field_operator(params);
    ProductTestFunction f1, h1;
    f1.factors.push_back(GaussianPacket::isotropic({0.0, 0.0}, 0.25));
    h1.factors.push_back(GaussianPacket::isotropic({0.0, 0.0}, 0.25));
    const std::vector<OperatorSpec> fs{field}, gs{field};
    const std::vector<double> lambdas{2.0, 4.0, 6.0};
    const auto rep =
        check_cluster(fs, gs, f1, h1, {0.0, 1.0}, lambdas, params, fast_quad());
    CHECK(rep.report.pass);
    CHECK(std::abs(rep.fitted_exponent - params.mass) <= 0.1 * params.mass);
    REQUIRE(rep.cross_magnitudes.size() == 3);
    // ratio against the independent standard Bessel routine
    const double k0_ratio = std::cyl_bessel_k(0.0, 4.0) / std::cyl_bessel_k(0.0, 2.0);
    const double seen = rep.cross_magnitudes[1] / rep.cross_magnitudes[0];
    CHECK(std::abs(seen - k0_ratio) < 0.08 * k0_ratio);
    for (size_t i = 1; i < rep.differences.size(); ++i)
        CHECK(rep.differences[i] < rep.differences[i - 1]);
}

TEST_CASE("cluster: series difference is carried by crossing terms only") {
    // W[G^{lambda v}] - W[f] W[g] at matched caps equals the sum of I^(n)
    // with at least one crossing rapidity; at k = 2 that is the statement
    // that the non-crossing term factorises into the one-point functions.
    const auto even = make_even_operator();
    const std::vector<OperatorSpec> pair{even, even};
    const std::vector<OperatorSpec> one{even};
    ProductTestFunction f1, h1, combined;
    f1.factors.push_back(GaussianPacket::isotropic({0.1, 0.0}, 0.35));
    h1.factors.push_back(GaussianPacket::isotropic({0.0, 3.0}, 0.35));
    combined.factors = {f1.factors[0], h1.factors[0]};
    const auto quad = fast_quad();

    const auto whole = eval_W_partial(pair, combined, 2, params, quad);
    const auto wf = eval_W_partial(one, f1, 2, params, quad);
    const auto wg = eval_W_partial(one, h1, 2, params, quad);
    cplx crossing(0.0);
    double err = 0.0;
    for (const auto& n : enumerate_up_to(2, 2)) {
        if (n.total() == 0) continue;  // the single non-crossing index at k = 2
        const auto term = eval_I_n(pair, combined, n, params, quad);
        crossing += term.value;
        err += term.combined_err();
    }
    const cplx lhs = whole.value - wf.value * wg.value;
    CHECK(std::abs(lhs - crossing) <
          3.0 * (whole.combined_err() + err) + 1e-9 * std::abs(whole.value));
    // and the non-crossing term itself is the product of one-point functions
    MultiIndex zero(2);
    const auto base = eval_I_n(pair, combined, zero, params, quad);
    CHECK(std::abs(base.value - wf.value * wg.value) < 1e-12 * std::abs(base.value) + 1e-14);
}

TEST_CASE("cluster: non-crossing terms factorise at k = 4") {
    const auto field = make_field_operator(params);
    const std::vector<OperatorSpec> fs{field, field}, gs{field, field};
    ProductTestFunction f2, g2;
    f2.factors.push_back(GaussianPacket::isotropic({0.0, -0.9}, 0.35));
    f2.factors.push_back(GaussianPacket::isotropic({0.0, 0.0}, 0.35));
    g2.factors.push_back(GaussianPacket::isotropic({0.0, 0.0}, 0.35));
    g2.factors.push_back(GaussianPacket::isotropic({0.0, 0.9}, 0.35));
    const std::vector<double> lambdas{3.0};
    const auto rep = check_cluster(fs, gs, f2, g2, {0.0, 1.0}, lambdas, params, fast_quad());
    REQUIRE(!rep.report.cases.empty());
    CHECK(rep.report.cases[0].pass);  // zero-cross factorisation
}
