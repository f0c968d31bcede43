#pragma once

// Run configuration (JSON), the operator registry, and serialization of
// results and reports. CSV and JSON writers keep full double precision so
// identical configurations reproduce byte-identical outputs.

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgff/axioms.hpp"
#include "sgff/correlators.hpp"

namespace sgff {

using json = nlohmann::json;

// Named operator constructors. Built-ins: "field", "synthetic-spin-s"
// (parameter "spin"), "synthetic-even", "synthetic-ell-exp".
inline OperatorSpec make_operator(const std::string& name, const json& opts,
                                  const CouplingParams& params) {
    if (name == "field") return make_field_operator(params);
    if (name == "synthetic-spin-s") {
        if (!opts.contains("spin")) throw config_error("operator synthetic-spin-s needs a spin");
        return make_synthetic_spin(opts.at("spin").get<double>());
    }
    if (name == "synthetic-even") return make_even_operator();
    if (name == "synthetic-ell-exp") return make_ell_coupled_operator();
    throw config_error("unknown operator name: " + name);
}

struct RunConfig {
    CouplingParams params = CouplingParams::from_b(0.25);
    std::vector<OperatorSpec> operators;
    ProductTestFunction test_function;
    int n_total_cap = 2;
    int r_max = 2;
    QuadConfig quad;
    std::vector<std::string> operator_names;

    static RunConfig from_json(const json& j) {
        RunConfig cfg;
        double mass = 1.0;
        if (j.contains("params")) {
            const auto& p = j.at("params");
            mass = p.value("mass", 1.0);
            if (p.contains("b") && p.contains("g")) {
                cfg.params = CouplingParams::from_b(p.at("b").get<double>(), mass);
                const double g = p.at("g").get<double>();
                if (std::abs(g - cfg.params.g) > 1e-10 * cfg.params.g)
                    throw config_error("params: b and g are inconsistent");
            } else if (p.contains("b")) {
                cfg.params = CouplingParams::from_b(p.at("b").get<double>(), mass);
            } else if (p.contains("g")) {
                cfg.params = CouplingParams::from_g(p.at("g").get<double>(), mass);
            }
        }
        if (j.contains("operators")) {
            for (const auto& op : j.at("operators")) {
                const std::string name = op.at("name").get<std::string>();
                cfg.operator_names.push_back(name);
                cfg.operators.push_back(make_operator(name, op, cfg.params));
            }
        }
        if (j.contains("test_functions")) {
            for (const auto& tf : j.at("test_functions")) {
                TwoVector c{0.0, 0.0}, k{0.0, 0.0};
                if (tf.contains("center")) {
                    c.x0 = tf.at("center").at(0).get<double>();
                    c.x1 = tf.at("center").at(1).get<double>();
                }
                if (tf.contains("wavevector")) {
                    k.x0 = tf.at("wavevector").at(0).get<double>();
                    k.x1 = tf.at("wavevector").at(1).get<double>();
                }
                const double sigma = tf.value("sigma", 0.4);
                if (!(sigma > 0.0)) throw config_error("test function sigma must be positive");
                cfg.test_function.factors.push_back(GaussianPacket::isotropic(c, sigma, k));
            }
        }
        if (j.contains("caps")) {
            const auto& caps = j.at("caps");
            cfg.n_total_cap = caps.value("N_total", 2);
            cfg.r_max = caps.value("r_max", 2);
            cfg.quad.dim_cap = caps.value("dim_cap", 6);
            if (cfg.n_total_cap < 0 || cfg.r_max < 0 || cfg.quad.dim_cap <= 0)
                throw config_error("caps must be positive");
        }
        if (j.contains("quadrature")) {
            const auto& q = j.at("quadrature");
            cfg.quad.tol_rel = q.value("tolerance", 1e-6);
            cfg.quad.qmc_budget = q.value("qmc_budget", static_cast<long>(1 << 20));
            cfg.quad.gamma_margin = q.value("gamma_margin", 1.0);
        }
        if (j.contains("eps_schedule")) {
            cfg.quad.eps_schedule.clear();
            for (const auto& e : j.at("eps_schedule"))
                cfg.quad.eps_schedule.push_back(e.get<double>());
            if (cfg.quad.eps_schedule.empty())
                throw config_error("eps_schedule must not be empty");
            for (size_t i = 0; i + 1 < cfg.quad.eps_schedule.size(); ++i)
                if (cfg.quad.eps_schedule[i + 1] >= cfg.quad.eps_schedule[i])
                    throw config_error("eps_schedule must decrease strictly");
        }
        cfg.quad.seed = j.value("seed", static_cast<uint64_t>(0x5eed));
        if (cfg.operators.size() != cfg.test_function.factors.size() && !cfg.operators.empty() &&
            !cfg.test_function.factors.empty())
            throw config_error("operators and test_functions must have matching length");
        return cfg;
    }

    static RunConfig from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw config_error("cannot open config file: " + path);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw config_error(std::string("config parse error: ") + e.what());
        }
        return from_json(j);
    }
};

// --- serialization -----------------------------------------------------------

inline json to_json(const CorrelatorResult& r) {
    json shells = json::array();
    for (const auto& s : r.shells)
        shells.push_back({{"level", s.level},
                          {"value_re", s.value.real()},
                          {"value_im", s.value.imag()},
                          {"quad_err", s.quad_err},
                          {"eps_err", s.eps_err}});
    json terms = json::array();
    for (const auto& n : r.terms_used) {
        json blocks = json::array();
        for (int v : n.raw()) blocks.push_back(v);
        terms.push_back(blocks);
    }
    return json{{"value_re", r.value.real()},
                {"value_im", r.value.imag()},
                {"quad_err", r.quad_err},
                {"eps_err", r.eps_err},
                {"truncation", r.truncation_tag},
                {"last_shell_mag", r.last_shell_mag},
                {"terms", terms},
                {"shells", shells}};
}

inline json to_json(const CheckReport& r) {
    json cases = json::array();
    for (const auto& c : r.cases)
        cases.push_back({{"case", c.name},
                         {"lhs_re", c.lhs.real()},
                         {"lhs_im", c.lhs.imag()},
                         {"rhs_re", c.rhs.real()},
                         {"rhs_im", c.rhs.imag()},
                         {"tolerance", c.tolerance},
                         {"verdict", c.pass ? "PASS" : "FAIL"},
                         {"note", c.note}});
    return json{{"check", r.check}, {"verdict", r.pass ? "PASS" : "FAIL"}, {"cases", cases}};
}

}  // namespace sgff
