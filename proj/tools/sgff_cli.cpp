// Command-line front end: S-matrix and form-factor tables, two-point kernel
// shells, configured correlator runs, and the axiom check suite.
//
// Exit codes: 0 success, 1 at least one check failed, 2 configuration error.

#include <CLI11.hpp>
#include <cmath>
#include <complex>
#include <fstream>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sgff/sgff.hpp"

namespace {

using namespace sgff;

std::vector<double> parse_points(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    if (out.empty()) throw config_error("--points produced an empty list");
    return out;
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open output file: " + path);
    out << text;
}

std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_row(std::span<const double> values) {
    std::string row;
    for (size_t i = 0; i < values.size(); ++i) {
        row += num17(values[i]);
        row += (i + 1 < values.size()) ? "," : "\n";
    }
    return row;
}

struct CommonOpts {
    double b = 0.25;
    double g = -1.0;
    double mass = 1.0;
    std::string out;
    std::string format = "csv";
    std::string config_path;

    CouplingParams params() const {
        return g > 0.0 ? CouplingParams::from_g(g, mass) : CouplingParams::from_b(b, mass);
    }
    RunConfig config() const {
        if (!config_path.empty()) return RunConfig::from_file(config_path);
        RunConfig cfg;
        cfg.params = params();
        return cfg;
    }
};

int cmd_smatrix(const CommonOpts& opt, const std::string& points_csv) {
    const auto params = opt.params();
    const auto points = parse_points(points_csv);
    std::string text;
    json rows = json::array();
    if (opt.format == "csv") text += "beta,s_re,s_im,unitarity_residual,crossing_residual\n";
    for (double beta : points) {
        const cplx s = s_matrix(cplx(beta), params);
        const double uni = std::abs(s * s_matrix(cplx(-beta), params) - 1.0);
        const double cross = std::abs(s_matrix(cplx(0.0, pi) - beta, params) - s);
        if (opt.format == "csv")
            text += csv_row(std::array{beta, s.real(), s.imag(), uni, cross});
        else
            rows.push_back({{"beta", beta},
                            {"s_re", s.real()},
                            {"s_im", s.imag()},
                            {"unitarity_residual", uni},
                            {"crossing_residual", cross}});
    }
    if (opt.format != "csv") text = rows.dump(2) + "\n";
    write_output(text, opt.out);
    return 0;
}

int cmd_ff(const CommonOpts& opt, const std::string& points_csv, const std::string& op_name,
           int n) {
    const auto params = opt.params();
    const auto spec = make_operator(op_name, json::object(), params);
    const auto points = parse_points(points_csv);
    const double offset = 0.4;
    std::string text;
    json rows = json::array();
    if (opt.format == "csv") text += "beta,ff_re,ff_im,exchange_residual\n";
    for (double beta : points) {
        std::vector<cplx> args{cplx(beta)};
        for (int j = 1; j < n; ++j) args.push_back(cplx(offset - 0.8 * j));
        const cplx ff = form_factor(spec, args, params);
        double resid = 0.0;
        if (n >= 2) {
            std::vector<cplx> swapped = args;
            std::swap(swapped[0], swapped[1]);
            const cplx rhs =
                s_matrix(args[0] - args[1], params) * form_factor(spec, swapped, params);
            resid = std::abs(ff - rhs);
        }
        if (opt.format == "csv")
            text += csv_row(std::array{beta, ff.real(), ff.imag(), resid});
        else
            rows.push_back({{"beta", beta},
                            {"ff_re", ff.real()},
                            {"ff_im", ff.imag()},
                            {"exchange_residual", resid}});
    }
    if (opt.format != "csv") text = rows.dump(2) + "\n";
    write_output(text, opt.out);
    return 0;
}

int cmd_twopoint(const CommonOpts& opt, const std::string& points_csv, int shells) {
    const auto params = opt.params();
    const auto field = make_field_operator(params);
    const auto points = parse_points(points_csv);
    QuadConfig quad;
    quad.tol_rel = 1e-8;
    const double ff1_sq = std::norm(form_factor(field, std::vector<cplx>{cplx(0.0)}, params));
    std::string text;
    json rows = json::array();
    if (opt.format == "csv") {
        text += "mr";
        for (int s = 1; s <= shells; ++s) text += ",shell" + std::to_string(s) + "_re,shell" + std::to_string(s) + "_im";
        text += ",bessel_oracle,total_re,total_im\n";
    }
    for (double mr : points) {
        const auto r =
            two_point_kernel(field, field, {0.0, mr / params.mass}, shells, params, quad);
        const double oracle = ff1_sq * std::cyl_bessel_k(0.0, mr) / pi;
        if (opt.format == "csv") {
            std::vector<double> row{mr};
            for (int s = 1; s <= shells; ++s) {
                row.push_back(r.shells[s].value.real());
                row.push_back(r.shells[s].value.imag());
            }
            row.push_back(oracle);
            row.push_back(r.value.real());
            row.push_back(r.value.imag());
            text += csv_row(row);
        } else {
            json jr = {{"mr", mr},
                       {"bessel_oracle", oracle},
                       {"total_re", r.value.real()},
                       {"total_im", r.value.imag()}};
            jr["shells"] = to_json(r)["shells"];
            rows.push_back(jr);
        }
    }
    if (opt.format != "csv") text = rows.dump(2) + "\n";
    write_output(text, opt.out);
    return 0;
}

int cmd_corr(const CommonOpts& opt) {
    const RunConfig cfg = opt.config();
    if (cfg.operators.empty() || cfg.test_function.factors.empty())
        throw config_error("corr: config must declare operators and test_functions");
    const auto result =
        eval_W_partial(cfg.operators, cfg.test_function, cfg.n_total_cap, cfg.params, cfg.quad);
    json out = to_json(result);
    out["k"] = cfg.test_function.k();
    out["operators"] = cfg.operator_names;
    out["seed"] = cfg.quad.seed;
    write_output(out.dump(2) + "\n", opt.out);
    return 0;
}

ProductTestFunction default_two_point(double sep = 2.0, double sigma = 0.3) {
    ProductTestFunction g;
    g.factors.push_back(GaussianPacket::isotropic({0.0, 0.0}, sigma));
    g.factors.push_back(GaussianPacket::isotropic({0.0, sep}, sigma));
    return g;
}

int cmd_axioms(const CommonOpts& opt, const std::string& which) {
    const RunConfig cfg = opt.config();
    const auto& params = cfg.params;
    QuadConfig quad = cfg.quad;
    quad.tol_rel = std::max(quad.tol_rel, 1e-6);

    const auto field = make_field_operator(params);
    const auto even = make_even_operator();
    const std::vector<OperatorSpec> pair{field, field};
    const std::vector<OperatorSpec> triple{field, even, field};
    const auto g2 = cfg.test_function.k() == 2 ? cfg.test_function : default_two_point();
    ProductTestFunction g3;
    g3.factors.push_back(GaussianPacket::isotropic({0.0, -1.6}, 0.4));
    g3.factors.push_back(GaussianPacket::isotropic({0.0, 0.0}, 0.4));
    g3.factors.push_back(GaussianPacket::isotropic({0.0, 1.6}, 0.4));

    std::vector<json> reports;
    bool all_pass = true;
    auto run = [&](const std::string& name, auto&& fn) {
        if (which != "all" && which != name) return;
        CheckReport rep = fn();
        all_pass = all_pass && rep.pass;
        reports.push_back(to_json(rep));
    };

    run("covariance", [&] {
        auto rep = check_covariance(pair, g2, 0.3, {0.1, -0.2}, 2, params, quad);
        auto rep3 = check_covariance(triple, g3, 0.3, {0.1, -0.2}, 2, params, quad);
        for (auto& c : rep3.cases) {
            c.name = "k=3 " + c.name;
            rep.add(std::move(c));
        }
        return rep;
    });
    run("spectral", [&] { return check_spectral(3, 3000, quad.seed, params, quad); });
    run("hermiticity", [&] {
        const std::vector<int> r2{1};
        auto rep = check_hermiticity(pair, g2, r2, params, quad);
        const std::vector<int> r3{1, 1};
        auto rep3 = check_hermiticity(triple, g3, r3, params, quad);
        for (auto& c : rep3.cases) {
            c.name = "k=3 " + c.name;
            rep.add(std::move(c));
        }
        return rep;
    });
    run("locality", [&] { return check_locality(pair, g2, 1, 2, params, quad).report; });
    run("s_add", [&] {
        CheckReport rep;
        rep.check = "s_add";
        std::mt19937_64 rng(quad.seed);
        double worst = 0.0;
        for (int k : {3, 4, 5})
            for (int repi = 0; repi < 20; ++repi) {
                const auto layout = detail::random_real_layout(k, 2, rng);
                for (int t = 1; t <= k - 1; ++t)
                    worst = std::max(worst, std::abs(s_add(layout, t, params) - 1.0));
            }
        rep.add("max |s_add - 1| over randomized layouts", cplx(worst), cplx(0.0), 1e-9);
        return rep;
    });
    run("representation", [&] {
        CheckReport rep;
        rep.check = "representation";
        MultiIndex n(2);
        n.at(2, 1) = 1;
        const auto base = eval_I_n(pair, g2, n, params, quad);
        for (int t : {1, 2}) {
            const auto alt = eval_I_n_t(pair, g2, n, t, DeformationParams::zeros(2), params, quad);
            rep.add("k=2 t=" + std::to_string(t), alt.value, base.value,
                    3.0 * (base.combined_err() + alt.combined_err()) +
                        1e-9 * std::abs(base.value));
        }
        return rep;
    });
    run("positivity", [&] {
        std::vector<GaussianPacket> family{GaussianPacket::isotropic({0.0, -0.6}, 0.45),
                                           GaussianPacket::isotropic({0.0, 0.7}, 0.5, {0.3, 0.1})};
        std::vector<cplx> vac{cplx(0.2), cplx(0.1, -0.05)};
        return check_positivity(field, family, vac, 2, params, quad).report;
    });
    run("cluster", [&] {
        ProductTestFunction f1, h1;
        f1.factors.push_back(GaussianPacket::isotropic({0.0, 0.0}, 0.25));
        h1.factors.push_back(GaussianPacket::isotropic({0.0, 0.0}, 0.25));
        const std::vector<OperatorSpec> fs{field}, gs{field};
        const std::vector<double> lambdas{2.0 / params.mass, 4.0 / params.mass,
                                          6.0 / params.mass};
        return check_cluster(fs, gs, f1, h1, {0.0, 1.0}, lambdas, params, quad).report;
    });

    if (reports.empty()) throw config_error("axioms: unknown check name: " + which);
    json out = json::array();
    for (auto& r : reports) out.push_back(std::move(r));
    write_output(out.dump(2) + "\n", opt.out);
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sinh-Gordon form-factor bootstrap numerics"};
    app.require_subcommand(1);

    CommonOpts opt;
    std::string points = "0,0.5,1,2";
    std::string op_name = "field";
    std::string check_name = "all";
    int n_args = 3;
    int shells = 2;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--b", opt.b, "coupling parameter b in (0, 1/2)");
        sub->add_option("--g", opt.g, "coupling g (overrides --b)");
        sub->add_option("--mass", opt.mass, "particle mass");
        sub->add_option("--out", opt.out, "output path (default stdout)");
        sub->add_option("--format", opt.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--config", opt.config_path, "JSON run configuration");
    };

    auto* smatrix = app.add_subcommand("smatrix", "tabulate the S-matrix with residuals");
    add_common(smatrix);
    smatrix->add_option("--points", points, "comma-separated rapidities");

    auto* ff = app.add_subcommand("ff", "tabulate form factors with exchange residuals");
    add_common(ff);
    ff->add_option("--points", points, "comma-separated rapidities");
    ff->add_option("--operator", op_name, "operator name");
    ff->add_option("--n", n_args, "number of rapidity arguments")->check(CLI::Range(1, 6));

    auto* twopoint = app.add_subcommand("twopoint", "two-point kernel shells over an mr grid");
    add_common(twopoint);
    twopoint->add_option("--points", points, "comma-separated mr values");
    twopoint->add_option("--shells", shells, "number of shells")->check(CLI::Range(1, 4));

    auto* corr = app.add_subcommand("corr", "configured k-point correlator partial sum");
    add_common(corr);

    auto* axioms = app.add_subcommand("axioms", "run axiom verification checks");
    add_common(axioms);
    axioms->add_option("--check", check_name,
                       "covariance|spectral|hermiticity|locality|s_add|representation|"
                       "positivity|cluster|all");

    CLI11_PARSE(app, argc, argv);

    try {
        if (smatrix->parsed()) return cmd_smatrix(opt, points);
        if (ff->parsed()) return cmd_ff(opt, points, op_name, n_args);
        if (twopoint->parsed()) return cmd_twopoint(opt, points, shells);
        if (corr->parsed()) return cmd_corr(opt);
        if (axioms->parsed()) return cmd_axioms(opt, check_name);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const domain_fault& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
