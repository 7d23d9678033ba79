#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "almlab/complexity.hpp"
#include "almlab/harness.hpp"
#include "almlab/learners.hpp"
#include "almlab/noise.hpp"
#include "almlab/threads.hpp"

using namespace almlab;
using nlohmann::ordered_json;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

FinDiscreteMarginal load_marginal(const std::string& path, const HypothesisClass& C) {
    if (path.empty()) {
        std::vector<int> all(C.num_points());
        for (int i = 0; i < C.num_points(); ++i) all[i] = i;
        return FinDiscreteMarginal::uniform(all);
    }
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open marginal '" + path + "'");
    auto d = read_dist(in);
    d.marginal.validate(C.num_points());
    return d.marginal;
}

// file | realizable:<target>[:K] | rr:<k>:<zeta>:<beta>:<t>
JointDistribution load_dist(const std::string& spec, const HypothesisClass& C) {
    const auto parts = split(spec, ':');
    if (parts[0] == "realizable" && (parts.size() == 2 || parts.size() == 3)) {
        const int K = parts.size() == 3 ? std::stoi(parts[2]) : C.num_points();
        std::vector<int> pts;
        for (int i = 0; i < std::min(K, C.num_points()); ++i) pts.push_back(i);
        return make_realizable(C, std::stoi(parts[1]), FinDiscreteMarginal::uniform(pts));
    }
    if (parts[0] == "rr" && parts.size() == 5) {
        const auto star = star_number(C);
        const auto fam = rr_family(C, star.witness, std::stoi(parts[1]), std::stod(parts[2]), std::stod(parts[3]));
        return fam.at(std::stoi(parts[4]));
    }
    std::ifstream in(spec);
    if (!in) throw DomainError("cannot open distribution '" + spec + "'");
    auto d = read_dist(in);
    d.validate(C.num_points());
    return d;
}

ordered_json labeling_json(const std::vector<Label>& h) {
    std::string s;
    for (auto v : h) s += v > 0 ? '+' : '-';
    return s;
}

void emit(const ordered_json& j, bool as_json) {
    if (as_json) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    for (auto it = j.begin(); it != j.end(); ++it) std::cout << it.key() << ": " << it.value().dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_cap();
    CLI::App app{"almlab: active learning under noise, star number toolkit"};
    app.require_subcommand(1);

    // complexity
    auto* cx = app.add_subcommand("complexity", "combinatorial complexity measures of a class");
    std::string cx_class, cx_measure, cx_marginal;
    int cx_m = 2, cx_h = 0;
    double cx_eps = 0.1, cx_delta = 0.0;
    bool cx_json = false;
    cx->add_option("--class", cx_class, "class file or builtin:<spec>")->required();
    cx->add_option("--measure", cx_measure, "star|vc|td|xtd|xptd|theta|rho|doubling")
        ->required()
        ->check(CLI::IsMember({"star", "vc", "td", "xtd", "xptd", "theta", "rho", "doubling"}));
    cx->add_option("--m", cx_m, "sample size for td, xtd, xptd");
    cx->add_option("--eps", cx_eps, "radius floor for theta and doubling");
    cx->add_option("--delta", cx_delta, "partial fraction for xptd");
    cx->add_option("--hyp", cx_h, "row of the reference hypothesis");
    cx->add_option("--marginal", cx_marginal, "distribution file; uniform on the domain when omitted");
    cx->add_flag("--json", cx_json);

    // noise classify
    auto* nz = app.add_subcommand("noise", "noise models");
    nz->require_subcommand(1);
    auto* ncl = nz->add_subcommand("classify", "membership in each noise model");
    std::string nz_dist, nz_class;
    bool nz_json = false;
    NoiseParams nz_params;
    ncl->add_option("--dist", nz_dist)->required();
    ncl->add_option("--class", nz_class)->required();
    ncl->add_option("--beta", nz_params.beta);
    ncl->add_option("--nu", nz_params.nu);
    ncl->add_option("--a", nz_params.a);
    ncl->add_option("--alpha", nz_params.alpha);
    ncl->add_flag("--json", nz_json);

    // learn
    auto* ln = app.add_subcommand("learn", "run one learner once");
    std::string ln_algo, ln_class, ln_dist;
    double ln_eps = 0.1, ln_delta = 0.1, ln_scale = 1.0;
    std::optional<double> ln_gamma;
    std::optional<int> ln_s;
    std::int64_t ln_budget = 0, ln_pool = 100, ln_unlabeled = 10'000'000;
    std::uint64_t ln_seed = 1;
    bool ln_json = false, ln_trace = false;
    ln->add_option("--algo", ln_algo)->required()->check(CLI::IsMember({"erm", "cal", "halving", "alg0", "alg1"}));
    ln->add_option("--class", ln_class)->required();
    ln->add_option("--dist", ln_dist, "file | realizable:<row>[:K] | rr:<k>:<zeta>:<beta>:<t>")->required();
    ln->add_option("--eps", ln_eps);
    ln->add_option("--delta", ln_delta);
    ln->add_option("--budget", ln_budget)->required();
    ln->add_option("--seed", ln_seed);
    ln->add_option("--scale", ln_scale);
    ln->add_option("--gamma-hat", ln_gamma);
    ln->add_option("--s-value", ln_s);
    ln->add_option("--pool", ln_pool, "stream prefix used as U by halving");
    ln->add_option("--max-unlabeled", ln_unlabeled);
    ln->add_flag("--json", ln_json);
    ln->add_flag("--trace", ln_trace);

    // simulate
    auto* sim = app.add_subcommand("simulate", "run a config file");
    std::string sim_config, sim_svg;
    sim->add_option("--config", sim_config)->required();
    sim->add_option("--svg", sim_svg, "write the n-hat curve here");

    // verify
    auto* vf = app.add_subcommand("verify", "equivalence checks on a class and random subclasses");
    std::string vf_class;
    std::uint64_t vf_seed = 1;
    VerifyLimits vf_lim;
    bool vf_json = false;
    vf->add_option("--class", vf_class)->required();
    vf->add_option("--seed", vf_seed);
    vf->add_option("--instances", vf_lim.random_instances);
    vf->add_option("--max-m", vf_lim.max_m);
    vf->add_flag("--json", vf_json);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cx) {
            const auto C = load_class(cx_class);
            ordered_json j{{"measure", cx_measure}};
            if (cx_measure == "star") {
                const auto r = star_number(C);
                j["value"] = r.value;
                j["exactness"] = to_string(r.exactness);
                j["witness"] = {{"center", r.witness.center},
                                {"points", r.witness.points},
                                {"witnesses", r.witness.witnesses}};
            } else if (cx_measure == "vc") {
                const auto r = vc_dimension(C);
                j["value"] = r.d;
                j["witness"] = r.witness;
            } else if (cx_measure == "td" || cx_measure == "xtd" || cx_measure == "xptd") {
                const auto r = cx_measure == "td"    ? td_report(C, cx_m)
                               : cx_measure == "xtd" ? xtd_report(C, cx_m)
                                                     : xptd_report(C, cx_m, cx_delta);
                j["m"] = cx_m;
                if (cx_measure == "xptd") j["delta"] = cx_delta;
                j["value"] = r.value;
                j["U"] = r.U;
                j["h"] = labeling_json(r.h);
            } else {
                const auto P = load_marginal(cx_marginal, C);
                if (cx_measure == "theta") {
                    j["h"] = cx_h;
                    j["r0"] = cx_eps;
                    j["value"] = disagreement_coefficient(C, cx_h, P, cx_eps);
                } else if (cx_measure == "rho") {
                    const auto r = ring_rho(C, P);
                    j["value"] = r.value();
                    j["num"] = r.num;
                    j["den"] = r.den;
                } else {
                    const auto r = doubling_dimension(C, cx_h, P, cx_eps);
                    j["h"] = cx_h;
                    j["eps"] = cx_eps;
                    j["value"] = r.value;
                    j["radius"] = r.radius;
                    j["cover"] = r.cover;
                    j["exactness"] = to_string(r.exactness);
                }
            }
            emit(j, cx_json);
        } else if (*nz) {
            const auto C = load_class(nz_class);
            const auto D = load_dist(nz_dist, C);
            const auto r = classify_noise(D, C, nz_params);
            ordered_json j{{"RE", r.re},
                           {"BN", r.bn},
                           {"TN", r.tn},
                           {"BC", r.bc},
                           {"BE", r.be},
                           {"AG", r.ag},
                           {"bayes_in_class", r.bayes_in_class},
                           {"beta_star", r.beta_star},
                           {"nu_be", r.nu_be},
                           {"nu_ag", r.nu_ag},
                           {"bayes_error", r.bayes.error}};
            for (const auto& g : r.grid) j["grid"].push_back({{"a", g.a}, {"alpha", g.alpha}, {"TN", g.tn}, {"BC", g.bc}});
            emit(j, nz_json);
        } else if (*ln) {
            ExperimentConfig cfg;
            cfg.class_spec = ln_class;
            cfg.algo = ln_algo;
            cfg.scale = ln_scale;
            cfg.gamma_hat = ln_gamma;
            cfg.s_value = ln_s;
            cfg.pool = ln_pool;
            cfg.max_unlabeled = ln_unlabeled;
            cfg.delta = ln_delta;
            cfg.eps = {ln_eps};
            cfg.trials = 1;
            cfg.seed = ln_seed;
            const auto C = load_class(ln_class);
            const auto D = load_dist(ln_dist, C);
            if (ln_algo == "alg1" && !ln_gamma) cfg.gamma_hat = std::max(gamma_profile(D, ln_eps).gamma_eps, ln_eps / 2);
            const Experiment ex(cfg);
            QueryOracle oracle(D, ln_seed, ln_budget);
            const auto r = ex.run_learner(oracle, ln_eps, ln_trace);
            ordered_json j{{"algo", ln_algo},
                           {"hypothesis", r.hypothesis},
                           {"name", C.names().empty() ? "" : C.names()[r.hypothesis]},
                           {"queries", r.queries},
                           {"unlabeled", r.unlabeled},
                           {"excess", excess_error(C, r.hypothesis, D)},
                           {"flagged", r.flagged},
                           {"flag", r.flag}};
            if (!r.dis_mass.empty()) j["dis_mass"] = r.dis_mass;
            if (ln_trace) {
                j["trace"] = ordered_json::array();
                for (const auto& s : r.trace)
                    j["trace"].push_back({{"index", s.index}, {"point", s.point}, {"label", s.label}, {"vsize", s.vsize}});
            }
            emit(j, ln_json);
        } else if (*sim) {
            return run_config(sim_config, std::cerr, sim_svg);
        } else if (*vf) {
            const auto C = load_class(vf_class);
            const auto res = verify_equivalences(C, vf_lim, vf_seed);
            bool all = true;
            ordered_json j{{"class", vf_class}, {"seed", vf_seed}};
            for (const auto& r : res) {
                all = all && r.passed;
                j["checks"].push_back({{"name", r.name}, {"passed", r.passed}, {"partial", r.partial}, {"detail", r.detail}});
            }
            if (vf_json) {
                std::cout << j.dump(2) << '\n';
            } else {
                for (const auto& r : res)
                    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << (r.partial ? " (partial)" : "")
                              << (r.detail.empty() ? "" : "  " + r.detail) << '\n';
            }
            return all ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
