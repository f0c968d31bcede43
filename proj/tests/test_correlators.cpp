#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "reference_values.hpp"
#include "sgff/correlators.hpp"

using namespace sgff;

namespace {

const CouplingParams params = CouplingParams::from_b(0.25);

QuadConfig fast_quad() {
    QuadConfig q;
    q.tol_rel = 1e-7;
    q.tol_abs = 1e-13;
    return q;
}

ProductTestFunction two_point_packets(double sep = 2.0, double sigma = 0.4) {
    ProductTestFunction g;
    g.factors.push_back(GaussianPacket::isotropic({0.0, 0.0}, sigma));
    g.factors.push_back(GaussianPacket::isotropic({0.0, sep}, sigma));
    return g;
}

// independent 1-D Simpson, separate from the library quadrature
template <class F>
cplx simpson(const F& f, double a, double b, int intervals) {
    cplx acc = f(a) + f(b);
    const double h = (b - a) / intervals;
    for (int i = 1; i < intervals; ++i) acc += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
    return acc * (h / 3.0);
}

}  // namespace

TEST_CASE("enumeration of truncation sets") {
    // k = 2: single block, N_r = { n21 = r1 }
    const std::vector<int> r2{3};
    const auto e2 = enumerate_truncation(2, r2);
    REQUIRE(e2.size() == 1);
    CHECK(e2[0].at(2, 1) == 3);

    // k = 3, r = (1,1): exactly {n21=1,n31=0,n32=1} and {n21=0,n31=1,n32=0}
    const std::vector<int> r3{1, 1};
    const auto e3 = enumerate_truncation(3, r3);
    REQUIRE(e3.size() == 2);
    bool saw_a = false, saw_b = false;
    for (const auto& n : e3) {
        if (n.at(2, 1) == 1 && n.at(3, 1) == 0 && n.at(3, 2) == 1) saw_a = true;
        if (n.at(2, 1) == 0 && n.at(3, 1) == 1 && n.at(3, 2) == 0) saw_b = true;
    }
    CHECK(saw_a);
    CHECK(saw_b);

    // k = 3, r = (0,0): only the zero multi-index
    const std::vector<int> r0{0, 0};
    const auto e0 = enumerate_truncation(3, r0);
    REQUIRE(e0.size() == 1);
    CHECK(e0[0].total() == 0);

    // brute-force cross-check over the <=1 cube via the membership test
    const TruncationVector tv{{1, 1}};
    for (const auto& n : enumerate_up_to(3, 3)) {
        const bool listed = std::find(e3.begin(), e3.end(), n) != e3.end();
        CHECK(tv.contains(n) == listed);
    }
}

TEST_CASE("eval_I_n: empty multi-index is exact") {
    const auto even = make_even_operator();
    const std::vector<OperatorSpec> specs{even, even};
    const auto g = two_point_packets();
    MultiIndex n(2);
    const auto r = eval_I_n(specs, g, n, params, fast_quad());
    const cplx want = g.factors[0].fourier({cplx(0.0), cplx(0.0)}) *
                      g.factors[1].fourier({cplx(0.0), cplx(0.0)});
    CHECK(std::abs(r.value - want) < 1e-14 * std::abs(want));
    CHECK(r.quad_err == 0.0);
    CHECK(r.eps_err == 0.0);

    const auto field = make_field_operator(params);
    const std::vector<OperatorSpec> fspecs{field, field};
    const auto rf = eval_I_n(fspecs, g, n, params, fast_quad());
    CHECK(rf.value == cplx(0.0));  // field p_0 vanishes
}

TEST_CASE("eval_I_n: k = 2 single-shell value against the semi-analytic oracle") {
    const auto field = make_field_operator(params);
    const std::vector<OperatorSpec> specs{field, field};
    const auto g = two_point_packets(2.0, 0.4);
    MultiIndex n(2);
    n.at(2, 1) = 1;
    const auto r = eval_I_n(specs, g, n, params, fast_quad());

    // oracle: |F1|^2 / (2 pi) * int R[G](gamma) d gamma by plain Simpson
    auto rg = [&](double gamma) {
        MultiIndex m(2);
        m.at(2, 1) = 1;
        RapidityLayout gl(m);
        gl.block(2, 1)[0] = cplx(gamma);
        return momentum_transform(g, gl, params.mass);
    };
    const cplx oracle = ref::field_ff1_sq_b0p25 / (2.0 * pi) * simpson(rg, -6.0, 6.0, 2000);
    CHECK(std::abs(r.value - oracle) < 1e-6 * std::abs(oracle));
    CHECK(std::abs(r.value - oracle) < 3.0 * (r.combined_err() + 1e-9 * std::abs(oracle)));
}

TEST_CASE("eval_I_n: symmetrized integrand within a block") {
    const auto field = make_field_operator(params);
    const std::vector<OperatorSpec> specs{field, field};
    const auto g = two_point_packets();
    MultiIndex n(2);
    n.at(2, 1) = 3;
    RapidityLayout gl(n);
    gl.block(2, 1)[0] = cplx(0.3);
    gl.block(2, 1)[1] = cplx(-0.8);
    gl.block(2, 1)[2] = cplx(1.1);
    const std::vector<double> eps{0.05, 0.05};
    auto integrand = [&](const RapidityLayout& layout) {
        return s_global(layout, params) * momentum_transform(g, layout, params.mass) *
               ff_product_eps(specs, layout, eps, params);
    };
    const cplx base = integrand(gl);
    RapidityLayout swapped = gl;
    std::swap(swapped.block(2, 1)[0], swapped.block(2, 1)[2]);
    CHECK(std::abs(integrand(swapped) - base) < 1e-10 * std::abs(base));
}

TEST_CASE("eval_I_n_t coincides with eval_I_n (k = 2)") {
    const auto field = make_field_operator(params);
    const std::vector<OperatorSpec> specs{field, field};
    const auto g = two_point_packets();
    MultiIndex n(2);
    n.at(2, 1) = 1;
    const auto quad = fast_quad();
    const auto base = eval_I_n(specs, g, n, params, quad);
    for (int t : {1, 2}) {
        const auto alt = eval_I_n_t(specs, g, n, t, DeformationParams::zeros(2), params, quad);
        const double tol = 3.0 * (base.combined_err() + alt.combined_err()) +
                           1e-9 * std::abs(base.value);
        CHECK(std::abs(alt.value - base.value) < tol);
    }
}

TEST_CASE("eval_I_n_t with contour deformations still agrees") {
    // even operators keep the two-rapidity shell away from zero
    const auto even = make_even_operator();
    const std::vector<OperatorSpec> specs{even, even};
    const auto g = two_point_packets();
    MultiIndex n(2);
    n.at(2, 1) = 2;
    const auto quad = fast_quad();
    const auto base = eval_I_n(specs, g, n, params, quad);
    REQUIRE(std::abs(base.value) > 1e-8);
    DeformationParams d = DeformationParams::zeros(2);
    d.eta2[block_index(2, 1)] = 0.03;
    d.delta_r[block_index(2, 1)] = -0.02;
    d.delta_s[block_index(2, 1)] = 0.01;
    const auto alt = eval_I_n_t(specs, g, n, 2, d, params, quad);
    const double tol =
        3.0 * (base.combined_err() + alt.combined_err()) + 1e-8 * std::abs(base.value);
    CHECK(std::abs(alt.value - base.value) < tol);
}

TEST_CASE("eval_I_n_t: spin-1 pair differs at finite eps, limits coincide") {
    // for spin-s operators the flipped arrangement carries e^{-+ 2 i eps s},
    // so the two representations only meet in the extrapolated limit
    const auto spin1 = make_synthetic_spin(1.0);
    const std::vector<OperatorSpec> specs{spin1, adjoint_of(spin1)};
    const auto g = two_point_packets();
    MultiIndex n(2);
    n.at(2, 1) = 1;
    auto quad = fast_quad();
    const auto base = eval_I_n(specs, g, n, params, quad);
    const auto alt = eval_I_n_t(specs, g, n, 2, DeformationParams::zeros(2), params, quad);
    REQUIRE(std::abs(base.value) > 1e-8);
    CHECK(std::abs(alt.value - base.value) <
          3.0 * (base.combined_err() + alt.combined_err()) + 1e-8 * std::abs(base.value));

    // single-epsilon evaluations must disagree at order eps
    auto single = fast_quad();
    single.eps_schedule = {0.2};
    const auto b1 = eval_I_n(specs, g, n, params, single);
    const auto a1 = eval_I_n_t(specs, g, n, 2, DeformationParams::zeros(2), params, single);
    CHECK(std::abs(b1.value - a1.value) > 0.01 * std::abs(b1.value));
}

TEST_CASE("epsilon stability: halved schedule moves the value within eps_err") {
    const auto field = make_field_operator(params);
    const auto even = make_even_operator();
    const std::vector<OperatorSpec> specs{field, even, field};
    ProductTestFunction g;
    g.factors.push_back(GaussianPacket::isotropic({0.0, -1.5}, 0.45));
    g.factors.push_back(GaussianPacket::isotropic({0.0, 0.0}, 0.45));
    g.factors.push_back(GaussianPacket::isotropic({0.0, 1.5}, 0.45));
    MultiIndex n(3);
    n.at(2, 1) = 1;
    n.at(3, 2) = 1;
    auto quad = fast_quad();
    const auto a = eval_I_n(specs, g, n, params, quad);
    for (double& e : quad.eps_schedule) e *= 0.5;
    const auto b = eval_I_n(specs, g, n, params, quad);
    CHECK(std::abs(a.value - b.value) <
          2.0 * (a.eps_err + b.eps_err) + 3.0 * (a.quad_err + b.quad_err) +
              1e-9 * std::abs(a.value));

    // joint vs separate epsilon limits
    auto quad_sep = fast_quad();
    quad_sep.eps_weights = {1.0, 1.3, 0.7};
    const auto c = eval_I_n(specs, g, n, params, quad_sep);
    CHECK(std::abs(a.value - c.value) <
          2.0 * (a.eps_err + c.eps_err) + 3.0 * (a.quad_err + c.quad_err) +
              1e-9 * std::abs(a.value));
}

TEST_CASE("J-form equivalence: I^(n)[G] = J^(n)[L[G]]") {
    const auto field = make_field_operator(params);
    const auto even = make_even_operator();
    const std::vector<OperatorSpec> specs{field, even, field};
    ProductTestFunction g;
    g.factors.push_back(GaussianPacket::isotropic({0.1, -1.2}, 0.5, {0.1, 0.0}));
    g.factors.push_back(GaussianPacket::isotropic({-0.1, 0.2}, 0.55));
    g.factors.push_back(GaussianPacket::isotropic({0.0, 1.4}, 0.5));
    const auto h = l_map(g);
    const auto quad = fast_quad();
    for (auto [b, a] : {std::pair{2, 1}, std::pair{3, 1}, std::pair{3, 2}}) {
        MultiIndex n(3);
        n.at(b, a) = 1;
        const auto lhs = eval_I_n(specs, g, n, params, quad);
        const double gamma_box = 6.0;
        const auto rhs = eval_J_n(specs, h, n, params, quad, gamma_box);
        const double tol = 3.0 * (lhs.combined_err() + rhs.combined_err()) +
                           1e-7 * std::abs(lhs.value) + 1e-12;
        CHECK(std::abs(lhs.value - rhs.value) < tol);
    }
}

TEST_CASE("eval_W_r and eval_W_partial bookkeeping") {
    const auto field = make_field_operator(params);
    const std::vector<OperatorSpec> specs{field, field};
    const auto g = two_point_packets();
    const auto quad = fast_quad();

    // field two-point, N = 0: p_0 = 0 kills the sum
    const auto w0 = eval_W_partial(specs, g, 0, params, quad);
    CHECK(std::abs(w0.value) == 0.0);

    const auto w2 = eval_W_partial(specs, g, 2, params, quad);
    REQUIRE(w2.shells.size() == 3);
    CHECK(std::abs(w2.shells[2].value) < 1e-13);  // even shell vanishes for the field
    CHECK(std::abs(w2.shells[1].value) > 1e-8);

    const std::vector<int> r1{1};
    const auto wr = eval_W_r(specs, g, r1, params, quad);
    CHECK(std::abs(wr.value - w2.shells[1].value) <
          1e-9 * std::abs(wr.value) + 3.0 * (wr.combined_err() + w2.combined_err()));

    // k = 3, r = (0,0) gives the product of p_0 (zero for fields)
    const auto even = make_even_operator();
    const std::vector<OperatorSpec> specs3{even, even, even};
    ProductTestFunction g3;
    for (int s = 0; s < 3; ++s)
        g3.factors.push_back(GaussianPacket::isotropic({0.0, 1.4 * s}, 0.5));
    const std::vector<int> r00{0, 0};
    const auto w00 = eval_W_r(specs3, g3, r00, params, quad);
    cplx want(1.0);
    for (const auto& f : g3.factors) want *= f.fourier({cplx(0.0), cplx(0.0)});
    CHECK(std::abs(w00.value - want) < 1e-12 * std::abs(want));
}

TEST_CASE("eval_W_partial: spectral damping orders the shells at mr = 2") {
    // even operators populate every shell; the field parity kills even ones
    const auto even = make_even_operator();
    const std::vector<OperatorSpec> especs{even, even};
    const auto g = two_point_packets(2.0, 0.35);
    auto quad = fast_quad();
    const auto we = eval_W_partial(especs, g, 2, params, quad);
    REQUIRE(we.shells.size() == 3);
    CHECK(std::abs(we.shells[2].value) < std::abs(we.shells[1].value));

    const auto field = make_field_operator(params);
    const std::vector<OperatorSpec> specs{field, field};
    auto coarse = fast_quad();
    coarse.tol_rel = 1e-4;  // the 3-rapidity shell only needs its magnitude
    const auto w = eval_W_partial(specs, g, 3, params, coarse);
    REQUIRE(w.shells.size() == 4);
    const double shell1 = std::abs(w.shells[1].value);
    const double shell3 = std::abs(w.shells[3].value);
    CHECK(shell3 < shell1);
    CHECK(w.last_shell_mag == shell3);
}

TEST_CASE("two_point_kernel: shell 1 reproduces the Bessel oracle") {
    const auto field = make_field_operator(params);
    auto quad = fast_quad();
    quad.tol_rel = 1e-9;
    struct Case {
        double mr, k0;
    };
    for (const auto& c : {Case{1.0, ref::bessel_k0_1}, Case{2.0, ref::bessel_k0_2},
                          Case{4.0, ref::bessel_k0_4}}) {
        const auto r = two_point_kernel(field, field, {0.0, c.mr}, 1, params, quad);
        const cplx shell1 = r.shells[1].value;
        const double want = ref::field_ff1_sq_b0p25 * c.k0 / pi;
        CHECK(std::abs(shell1 - want) < 1e-6 * want);
        // std::cyl_bessel_k as an independent oracle for the same number
        CHECK(std::abs(want - ref::field_ff1_sq_b0p25 * std::cyl_bessel_k(0.0, c.mr) / pi) <
              1e-12 * want);
    }
    CHECK_THROWS_AS(two_point_kernel(field, field, {2.0, 0.0}, 1, params, quad), domain_fault);
}

TEST_CASE("two_point_kernel: spacelike decay follows K0 ratios") {
    const auto field = make_field_operator(params);
    auto quad = fast_quad();
    quad.tol_rel = 1e-8;
    const auto r2 = two_point_kernel(field, field, {0.0, 2.0}, 1, params, quad);
    const auto r4 = two_point_kernel(field, field, {0.0, 4.0}, 1, params, quad);
    const double ratio = std::abs(r4.shells[1].value) / std::abs(r2.shells[1].value);
    const double want = ref::bessel_k0_4 / ref::bessel_k0_2;
    CHECK(std::abs(ratio - want) < 1e-4 * want);
}

TEST_CASE("QMC path: |n| = 4 shell is consistent with its own error estimate") {
    const auto field = make_field_operator(params);
    const std::vector<OperatorSpec> specs{field, field};
    const auto g = two_point_packets(1.5, 0.5);
    MultiIndex n(2);
    n.at(2, 1) = 4;  // even shell: exact value 0
    auto quad = fast_quad();
    quad.qmc_budget = 1 << 12;
    const auto r = eval_I_n(specs, g, n, params, quad);
    CHECK(std::abs(r.value) < 10.0 * r.combined_err() + 1e-10);
}
