#include "almlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "almlab/rng.hpp"

namespace almlab {

Wilson wilson(std::int64_t successes, std::int64_t trials, double z) {
    if (trials <= 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double center = (p + z2 / (2 * n)) / (1 + z2 / n);
    const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

HypothesisClass load_class(const std::string& spec) {
    if (spec.rfind("builtin:", 0) == 0) return builtin_class(spec.substr(8));
    if (std::filesystem::is_regular_file(spec)) {
        std::ifstream in(spec);
        if (!in) throw DomainError("cannot open class file '" + spec + "'");
        return read_class(in);
    }
    return builtin_class(spec);
}

// ---------------------------------------------------------------------------
// config

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct LineParser {
    std::string origin;
    int line;
    std::string key;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError(origin + ":" + std::to_string(line) + ": " + key + ": " + msg);
    }
    double real(const std::string& v) const {
        try {
            std::size_t used = 0;
            const double x = std::stod(v, &used);
            if (used == v.size() && std::isfinite(x)) return x;
        } catch (const std::exception&) {
        }
        fail("expected a number, got '" + v + "'");
    }
    long long integer(const std::string& v) const {
        try {
            std::size_t used = 0;
            const long long x = std::stoll(v, &used);
            if (used == v.size()) return x;
        } catch (const std::exception&) {
        }
        fail("expected an integer, got '" + v + "'");
    }
};

}  // namespace

ExperimentConfig parse_config(std::istream& is, const std::string& origin) {
    ExperimentConfig cfg;
    std::set<std::string> seen;
    std::string section, raw;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        std::string line = trim(raw.substr(0, raw.find_first_of("#;")));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "class" && section != "dist" && section != "learner" && section != "run")
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        if (section.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": key outside of a section");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const std::string full = section + "." + key;
        const LineParser p{origin, lineno, full};
        if (!seen.insert(full).second) p.fail("duplicate key");

        if (full == "class.spec" || full == "class.file") {
            cfg.class_spec = full == "class.file" && val.rfind("builtin:", 0) == 0 ? val.substr(8) : val;
        } else if (full == "dist.kind") {
            if (val != "realizable" && val != "rr" && val != "file") p.fail("expected realizable, rr or file");
            cfg.dist_kind = val;
        } else if (full == "dist.support") {
            if (val != "all" && val != "eps_star" && val.rfind("first:", 0) != 0) p.fail("expected all, first:K or eps_star");
            if (val.rfind("first:", 0) == 0 && p.integer(val.substr(6)) < 1) p.fail("K must be positive");
            cfg.support = val;
        } else if (full == "dist.targets") {
            if (val != "all")
                for (const auto& t : split_list(val)) p.integer(t);
            cfg.targets = val;
        } else if (full == "dist.k") {
            cfg.rr_k = static_cast<int>(p.integer(val));
        } else if (full == "dist.zeta") {
            cfg.rr_zeta = p.real(val);
        } else if (full == "dist.beta") {
            cfg.rr_beta = p.real(val);
        } else if (full == "dist.path") {
            cfg.dist_path = val;
        } else if (full == "learner.algo") {
            if (val != "erm" && val != "cal" && val != "halving" && val != "alg0" && val != "alg1")
                p.fail("expected erm, cal, halving, alg0 or alg1");
            cfg.algo = val;
        } else if (full == "learner.scale") {
            cfg.scale = p.real(val);
            if (!(cfg.scale > 0.0)) p.fail("must be positive");
        } else if (full == "learner.gamma_hat") {
            cfg.gamma_hat = p.real(val);
        } else if (full == "learner.s_value") {
            cfg.s_value = static_cast<int>(p.integer(val));
        } else if (full == "learner.max_unlabeled") {
            cfg.max_unlabeled = p.integer(val);
        } else if (full == "learner.pool") {
            cfg.pool = p.integer(val);
            if (cfg.pool < 1) p.fail("must be positive");
        } else if (full == "run.eps") {
            for (const auto& e : split_list(val)) {
                const double x = p.real(e);
                if (!(x > 0.0 && x < 1.0)) p.fail("eps values must lie in (0,1)");
                cfg.eps.push_back(x);
            }
            if (cfg.eps.empty()) p.fail("empty list");
        } else if (full == "run.delta") {
            cfg.delta = p.real(val);
            if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) p.fail("must lie in (0,1)");
        } else if (full == "run.trials") {
            const long long t = p.integer(val);
            if (t < 1 || t > 10'000'000) p.fail("must be a positive count");
            cfg.trials = static_cast<int>(t);
        } else if (full == "run.seed") {
            cfg.seed = static_cast<std::uint64_t>(p.integer(val));
        } else if (full == "run.n_cap") {
            cfg.n_cap = p.integer(val);
            if (cfg.n_cap < 1) p.fail("must be positive");
        } else if (full == "run.budgets") {
            for (const auto& b : split_list(val)) {
                const long long n = p.integer(b);
                if (n < 0) p.fail("budgets must be nonnegative");
                cfg.budgets.push_back(n);
            }
        } else if (full == "run.csv") {
            cfg.csv = val;
        } else if (full == "run.json") {
            cfg.json = val;
        } else if (full == "run.svg") {
            cfg.svg = val;
        } else {
            p.fail("unknown key");
        }
    }
    for (const char* req : {"class.spec", "learner.algo", "run.eps", "run.delta", "run.trials"}) {
        const std::string r = req;
        if (seen.count(r) || (r == "class.spec" && seen.count("class.file"))) continue;
        throw ConfigError(origin + ": missing required key '" + r + "'");
    }
    if (cfg.dist_kind == "rr")
        for (const char* req : {"dist.k", "dist.zeta", "dist.beta"})
            if (!seen.count(req)) throw ConfigError(origin + ": missing required key '" + std::string(req) + "'");
    if (cfg.dist_kind == "file" && !seen.count("dist.path"))
        throw ConfigError(origin + ": missing required key 'dist.path'");
    const int recommended = static_cast<int>(std::ceil(10.0 / cfg.delta - 1e-9));
    if (cfg.trials < recommended)
        cfg.warnings.push_back("trials = " + std::to_string(cfg.trials) + " is below the recommended " +
                               std::to_string(recommended));
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    return parse_config(in, path);
}

// ---------------------------------------------------------------------------
// experiment

Experiment::Experiment(ExperimentConfig cfg) : cfg_(std::move(cfg)), C_(load_class(cfg_.class_spec)) {
    if (cfg_.algo == "alg1") d_ = std::max(1, vc_dimension(C_).d);
    if (cfg_.dist_kind == "rr" || (cfg_.algo == "alg0" && !cfg_.s_value)) {
        const auto rep = star_number(C_);
        s_ = std::max(1, rep.value);
        witness_ = rep.witness;
    }
    if (cfg_.algo == "alg1" && cfg_.dist_kind == "file" && !cfg_.gamma_hat)
        throw ConfigError("learner.gamma_hat is required for alg1 on a distribution file");
}

std::vector<Member> Experiment::with_best(std::vector<Member>& fam) const {
    for (auto& m : fam) m.best = best_error(C_, m.dist);
    return std::move(fam);
}

std::vector<Member> Experiment::family(double eps) const {
    std::vector<Member> out;
    if (cfg_.dist_kind == "file") {
        std::ifstream in(cfg_.dist_path);
        if (!in) throw ConfigError("cannot open distribution '" + cfg_.dist_path + "'");
        auto d = read_dist(in);
        d.validate(C_.num_points());
        out.push_back({"DIST#0", std::move(d)});
        return with_best(out);
    }
    if (cfg_.dist_kind == "rr") {
        const auto fam = rr_family(C_, witness_, cfg_.rr_k, cfg_.rr_zeta, cfg_.rr_beta);
        const std::string tag = cfg_.rr_beta > 0.0 ? "BN#" : "RE#";
        for (std::size_t t = 0; t < fam.size(); ++t) out.push_back({tag + std::to_string(t), fam[t]});
        return with_best(out);
    }
    int count = C_.num_points();
    if (cfg_.support.rfind("first:", 0) == 0)
        count = std::min(count, std::stoi(cfg_.support.substr(6)));
    else if (cfg_.support == "eps_star")
        count = std::min(count, static_cast<int>(std::ceil((1.0 - eps) / eps - 1e-9)));
    std::vector<int> pts(std::max(count, 1));
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) pts[i] = i;
    const auto P = FinDiscreteMarginal::uniform(pts);
    std::vector<int> targets;
    if (cfg_.targets == "all") {
        targets = induced_labelings(C_, pts);
    } else {
        for (const auto& t : split_list(cfg_.targets)) targets.push_back(std::stoi(t));
    }
    for (std::size_t i = 0; i < targets.size(); ++i)
        out.push_back({"RE#" + std::to_string(i), make_realizable(C_, targets[i], P)});
    return with_best(out);
}

LearnerResult Experiment::run_learner(QueryOracle& oracle, double eps, bool trace) const {
    const auto& a = cfg_.algo;
    if (a == "erm") {
        LabeledSample S;
        for (std::int64_t i = 0; i < oracle.budget(); ++i) S.pairs.emplace_back(oracle.point(i), *oracle.request(i));
        auto r = erm_passive(S, C_);
        r.queries = oracle.queries();
        r.unlabeled = oracle.budget();
        return r;
    }
    if (a == "cal") return cal(oracle, C_, cfg_.max_unlabeled, trace);
    if (a == "halving") {
        std::vector<std::int64_t> U(cfg_.pool);
        for (std::int64_t i = 0; i < cfg_.pool; ++i) U[i] = i;
        return memb_halving2(C_, U, oracle, oracle.budget(), trace);
    }
    if (a == "alg0") return algorithm0(oracle, C_, cfg_.s_value.value_or(s_), eps, cfg_.delta, cfg_.scale, trace);
    GammaHatArgs g;
    g.eps = eps;
    g.beta = cfg_.dist_kind == "rr" ? cfg_.rr_beta : 0.0;
    const double gamma = cfg_.gamma_hat.value_or(gamma_hat_default(NoiseModel::BN, g));
    const auto params = Alg1Params::derive(eps, cfg_.delta, gamma, d_, cfg_.scale);
    SplitOracle so(oracle);
    auto out = algorithm1(so, C_, oracle.budget(), params);
    if (trace)
        for (const auto& c : out.calls)
            out.result.trace.push_back({SplitOracle::x2_index(c.m), c.point, c.result.y, c.result.q});
    return out.result;
}

TrialRecord Experiment::run_trial(const Member& m, int member, double eps, std::int64_t budget, int trial) const {
    QueryOracle oracle(m.dist, derive_seed(cfg_.seed, static_cast<std::uint64_t>(member), static_cast<std::uint64_t>(trial)),
                       budget);
    const auto r = run_learner(oracle, eps);
    TrialRecord rec;
    rec.noise = m.label;
    rec.member = member;
    rec.eps = eps;
    rec.trial = trial;
    rec.budget = budget;
    rec.queries = r.queries;
    rec.excess = error_rate(C_, r.hypothesis, m.dist) - m.best;
    rec.success = rec.excess <= eps;
    return rec;
}

std::vector<TrialRecord> Experiment::run_trials(const Member& m, int member, double eps, std::int64_t budget) const {
    std::vector<TrialRecord> out(cfg_.trials);
    std::string error;
#pragma omp parallel for schedule(dynamic, 1)
    for (int t = 0; t < cfg_.trials; ++t) {
        try {
            out[t] = run_trial(m, member, eps, budget, t);
        } catch (const std::exception& e) {
#pragma omp critical(almlab_trial_error)
            if (error.empty()) error = e.what();
        }
    }
    if (!error.empty()) throw std::runtime_error(error);
    return out;
}

EmpiricalLC measure_label_complexity(const Experiment& ex, double eps, std::vector<TrialRecord>* records) {
    const auto& cfg = ex.config();
    EmpiricalLC lc;
    lc.eps = eps;
    const auto fam = ex.family(eps);
    for (int mi = 0; mi < static_cast<int>(fam.size()); ++mi) {
        MemberLC mlc;
        mlc.label = fam[mi].label;
        std::map<std::int64_t, SearchStep> cache;
        auto eval = [&](std::int64_t n) -> const SearchStep& {
            auto it = cache.find(n);
            if (it != cache.end()) return it->second;
            const auto recs = ex.run_trials(fam[mi], mi, eps, n);
            SearchStep st;
            st.n = n;
            for (const auto& r : recs) st.successes += r.success;
            st.ci = wilson(st.successes, cfg.trials);
            st.ok = st.ci.lo >= 1.0 - cfg.delta;
            mlc.search.push_back(st);
            if (records) records->insert(records->end(), recs.begin(), recs.end());
            return cache.emplace(n, st).first->second;
        };
        auto settle = [&](std::int64_t n) {
            const auto& st = cache.at(n);
            mlc.n_hat = n;
            mlc.ci = st.ci;
            mlc.successes = st.successes;
        };
        if (!cfg.budgets.empty()) {
            auto bs = cfg.budgets;
            std::sort(bs.begin(), bs.end());
            bool found = false;
            for (auto n : bs)
                if (eval(n).ok && !found) {
                    found = true;
                    settle(n);
                }
            if (!found) {
                mlc.capped = true;
                settle(bs.back());
            }
        } else {
            std::int64_t hi = 1, lo = 0;
            while (!eval(hi).ok) {
                if (hi >= cfg.n_cap) {
                    mlc.capped = true;
                    break;
                }
                lo = hi;
                hi = std::min(hi * 2, cfg.n_cap);
            }
            if (!mlc.capped)
                while (hi - lo > 1) {
                    const std::int64_t mid = lo + (hi - lo) / 2;
                    if (eval(mid).ok)
                        hi = mid;
                    else
                        lo = mid;
                }
            settle(hi);
        }
        lc.n_hat = std::max(lc.n_hat, mlc.n_hat);
        lc.capped = lc.capped || mlc.capped;
        lc.members.push_back(std::move(mlc));
    }
    return lc;
}

// ---------------------------------------------------------------------------
// verification suite

namespace {

HypothesisClass random_subclass(const HypothesisClass& C, std::mt19937_64& rng) {
    std::vector<int> rows(C.size());
    for (int i = 0; i < C.size(); ++i) rows[i] = i;
    std::shuffle(rows.begin(), rows.end(), rng);
    const int hi = std::min(C.size(), 12);
    const int k = std::uniform_int_distribution<int>(std::min(2, hi), hi)(rng);
    rows.resize(k);
    std::sort(rows.begin(), rows.end());
    std::vector<std::vector<Label>> data;
    for (int r : rows) data.push_back(C.row_vector(r));
    return HypothesisClass(C.domain(), std::move(data), {}, true);
}

FinDiscreteMarginal random_marginal(int n, int max_support, std::mt19937_64& rng) {
    std::vector<int> pts(n);
    for (int i = 0; i < n; ++i) pts[i] = i;
    std::shuffle(pts.begin(), pts.end(), rng);
    const int k = std::uniform_int_distribution<int>(1, std::min(n, max_support))(rng);
    pts.resize(k);
    std::sort(pts.begin(), pts.end());
    std::vector<double> w(k);
    double sum = 0.0;
    for (auto& x : w) sum += x = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
    for (auto& x : w) x /= sum;
    double fix = 1.0;
    for (int i = 0; i + 1 < k; ++i) fix -= w[i];
    w.back() = fix;
    return {pts, w};
}

std::string show(const std::vector<int>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "}";
}

struct Checker {
    std::vector<CheckResult> results;
    CheckResult& get(const std::string& name) {
        for (auto& r : results)
            if (r.name == name) return r;
        results.push_back({name, true, false, ""});
        return results.back();
    }
    void fail(const std::string& name, const std::string& detail) {
        auto& r = get(name);
        if (r.passed) r.detail = detail;
        r.passed = false;
    }
    void partial(const std::string& name, const std::string& detail) {
        auto& r = get(name);
        if (!r.partial && r.passed) r.detail = detail;
        r.partial = true;
    }
};

void verify_one(const HypothesisClass& C, const std::string& tag, const VerifyLimits& lim, std::mt19937_64& rng,
                Checker& ck) {
    const auto star = star_number(C);
    const int s = star.value;
    const int n = C.num_points();
    ck.get("xtd-td-star");
    ck.get("specifying-sets-are-stars");
    ck.get("compression-equals-td");
    ck.get("theta-bound");
    ck.get("rho-bound");
    ck.get("xptd-bracket");
    ck.get("doubling-bound");
    if (star.exactness != Exactness::exact) {
        ck.partial("xtd-td-star", tag + ": star number not exact");
        return;
    }
    // Teaching dimensions and the specifying sets they return.
    for (int m = 1; m <= std::min(lim.max_m, n); ++m) {
        try {
            const auto x = xtd_report(C, m);
            const auto t = td_report(C, m);
            if (x.value != std::min(s, m) || t.value != std::min(s, m))
                ck.fail("xtd-td-star", tag + ": m=" + std::to_string(m) + " xtd=" + std::to_string(x.value) +
                                    " td=" + std::to_string(t.value) + " s=" + std::to_string(s));
            for (const auto* rep : {&x, &t}) {
                if (rep->U.empty()) continue;
                const auto spec = teaching_dim(rep->h, C, rep->U);
                std::vector<Label> full(n, -1);
                for (int x2 = 0; x2 < n; ++x2) full[x2] = C.at(0, x2);
                for (std::size_t i = 0; i < rep->U.size(); ++i) full[rep->U[i]] = rep->h[i];
                // off U the center copies row 0; the star property only involves U
                auto [Ch, hc] = C.with_row(full);
                if (!is_star_set(Ch, spec.points, hc))
                    ck.fail("specifying-sets-are-stars", tag + ": U=" + show(rep->U) + " S=" + show(spec.points));
            }
        } catch (const SizeError& e) {
            ck.partial("xtd-td-star", tag + ": " + e.what());
        }
    }
    // n-hat identity on random U.
    for (int rep = 0; rep < 4; ++rep) {
        std::vector<int> U(n);
        for (int i = 0; i < n; ++i) U[i] = i;
        std::shuffle(U.begin(), U.end(), rng);
        U.resize(std::uniform_int_distribution<int>(1, std::min(n, 8))(rng));
        for (int h = 0; h < C.size(); ++h) {
            std::vector<Label> hu;
            for (int x : U) hu.push_back(C.at(h, x));
            const auto a = vs_compression_size(C, h, U).size;
            const auto b = teaching_dim(hu, C, U);
            if (a != b.size)
                ck.fail("compression-equals-td", tag + ": h=" + std::to_string(h) + " U=" + show(U) + " nhat=" + std::to_string(a) +
                                    " td=" + std::to_string(b.size));
            auto [Ch, hc] = C.with_row(C.row_vector(h));
            if (!is_star_set(Ch, b.points, hc)) ck.fail("specifying-sets-are-stars", tag + ": h=" + std::to_string(h) + " S=" + show(b.points));
        }
    }
    // Star construction.
    if (s >= 1) {
        const auto& w = star.witness;
        const auto P = FinDiscreteMarginal::uniform(w.points);
        for (double eps : {1.0 / 3.0, 1.0 / 10.0}) {
            const double th = disagreement_coefficient(C, w.center, P, eps);
            const double want = std::min(static_cast<double>(s), 1.0 / eps);
            if (std::abs(th - want) > 1e-9)
                ck.fail("theta-bound", tag + ": star theta=" + std::to_string(th) + " want " + std::to_string(want));
        }
        if (s <= 6) {
            try {
                const auto rho = ring_rho(C, P);
                if (!(rho == Rational{1, s}))
                    ck.fail("rho-bound", tag + ": star rho=" + std::to_string(rho.num) + "/" + std::to_string(rho.den));
            } catch (const SizeError& e) {
                ck.partial("rho-bound", tag + ": " + e.what());
            }
        }
        try {
            const auto D = doubling_dimension(C, w.center, P, 1.0 / s);
            if (D.value < std::log2(s + 1.0) - 1e-9)
                ck.fail("doubling-bound", tag + ": star D=" + std::to_string(D.value));
        } catch (const SizeError& e) {
            ck.partial("doubling-bound", tag + ": " + e.what());
        }
        std::vector<std::vector<Label>> g{C.row_vector(w.center)};
        for (int h : w.witnesses) g.push_back(C.row_vector(h));
        const HypothesisClass G(C.domain(), g, {}, true);
        std::vector<Label> hu;
        for (int x : w.points) hu.push_back(C.at(w.center, x));
        for (double dl : {0.0, 0.1, 0.25, 0.5}) {
            const int v = xptd(hu, G, w.points, dl).size;
            const int lo = static_cast<int>(std::ceil((1 - 2 * dl) * s - 1e-9));
            const int hi = static_cast<int>(std::ceil((1 - dl / (1 + dl)) * s - 1e-9));
            if (v < lo || v > hi)
                ck.fail("xptd-bracket", tag + ": delta=" + std::to_string(dl) + " xptd=" + std::to_string(v));
        }
    }
    // Sampled marginals.
    const int d = vc_dimension(C).d;
    for (int k = 0; k < lim.marginals; ++k) {
        const auto P = random_marginal(n, 4, rng);
        const int h = std::uniform_int_distribution<int>(0, C.size() - 1)(rng);
        for (double eps : {1.0 / 3.0, 1.0 / 10.0}) {
            const double th = disagreement_coefficient(C, h, P, eps);
            if (th > std::min(static_cast<double>(s), 1.0 / eps) + 1e-9)
                ck.fail("theta-bound", tag + ": theta=" + std::to_string(th) + " supp=" + show(P.support));
            try {
                const auto D = doubling_dimension(C, h, P, eps);
                if (D.exactness == Exactness::exact &&
                    D.value > 2.0 * d * std::log2(22.0 * std::exp(2.0) * th) + 1e-9)
                    ck.fail("doubling-bound", tag + ": D=" + std::to_string(D.value) + " theta=" + std::to_string(th));
            } catch (const SizeError& e) {
                ck.partial("doubling-bound", tag + ": " + e.what());
            }
        }
        try {
            const auto rho = ring_rho(C, P);
            if (rho.num > 0 && rho < Rational{1, std::max(s, 1)})
                ck.fail("rho-bound", tag + ": rho=" + std::to_string(rho.num) + "/" + std::to_string(rho.den));
        } catch (const SizeError& e) {
            ck.partial("rho-bound", tag + ": " + e.what());
        }
    }
}

}  // namespace

std::vector<CheckResult> verify_equivalences(const HypothesisClass& C, const VerifyLimits& limits,
                                             std::uint64_t seed) {
    Checker ck;
    std::mt19937_64 rng(derive_seed(seed, 0x7665));
    verify_one(C, "C", limits, rng, ck);
    for (int i = 0; i < limits.random_instances; ++i) {
        const auto sub = random_subclass(C, rng);
        if (sub.size() < 2) continue;
        verify_one(sub, "sub#" + std::to_string(i), limits, rng, ck);
    }
    return ck.results;
}

// ---------------------------------------------------------------------------
// output

std::string csv_header() { return "algo,class,noise,eps,delta,trial,budget,queries,excess,success"; }

void write_csv(std::ostream& os, const Experiment& ex, const std::vector<TrialRecord>& records) {
    const auto& cfg = ex.config();
    os << csv_header() << '\n';
    char buf[128];
    for (const auto& r : records) {
        os << cfg.algo << ',' << cfg.class_spec << ',' << r.noise << ',';
        std::snprintf(buf, sizeof buf, "%.10g,%.10g,%d,%lld,%lld,%.12g,%d", r.eps, cfg.delta, r.trial,
                      static_cast<long long>(r.budget), static_cast<long long>(r.queries), r.excess,
                      r.success ? 1 : 0);
        os << buf << '\n';
    }
}

void write_svg(std::ostream& os, const std::vector<EmpiricalLC>& curve) {
    const double W = 480, H = 320, pad = 48;
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const auto& c : curve) {
        const double x = std::log10(1.0 / c.eps), y = std::log10(std::max<std::int64_t>(c.n_hat, 1));
        x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
    if (curve.empty()) x0 = y0 = 0, x1 = y1 = 1;
    if (x1 - x0 < 1e-9) x0 -= 0.5, x1 += 0.5;
    if (y1 - y0 < 1e-9) y0 -= 0.5, y1 += 0.5;
    auto px = [&](double x) { return pad + (x - x0) / (x1 - x0) * (W - 2 * pad); };
    auto py = [&](double y) { return H - pad - (y - y0) / (y1 - y0) * (H - 2 * pad); };
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << H - pad << "\" x2=\"" << W - pad << "\" y2=\"" << H - pad
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << H - pad
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">1/eps (log)</text>\n";
    os << "<text x=\"14\" y=\"" << H / 2 << "\" transform=\"rotate(-90 14 " << H / 2
       << ")\" text-anchor=\"middle\">n-hat (log)</text>\n";
    os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (const auto& c : curve)
        os << px(std::log10(1.0 / c.eps)) << ',' << py(std::log10(std::max<std::int64_t>(c.n_hat, 1))) << ' ';
    os << "\"/>\n";
    for (const auto& c : curve) {
        const double x = px(std::log10(1.0 / c.eps)), y = py(std::log10(std::max<std::int64_t>(c.n_hat, 1)));
        os << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"3\" fill=\"steelblue\"/>\n";
        os << "<text x=\"" << x + 5 << "\" y=\"" << y - 5 << "\" font-size=\"10\">" << c.n_hat << "</text>\n";
    }
    os << "</svg>\n";
}

int run_config(const std::string& path, std::ostream& err, const std::string& svg_override) {
    try {
        auto cfg = load_config(path);
        if (!svg_override.empty()) cfg.svg = svg_override;
        for (const auto& w : cfg.warnings) err << "warning: " << w << '\n';
        const Experiment ex(cfg);
        std::vector<TrialRecord> records;
        std::vector<EmpiricalLC> curve;
        for (double eps : cfg.eps) curve.push_back(measure_label_complexity(ex, eps, &records));

        auto open = [&](const std::string& p) {
            std::ofstream f(p, std::ios::binary);
            if (!f) throw ConfigError("cannot write '" + p + "'");
            return f;
        };
        if (!cfg.csv.empty()) {
            auto f = open(cfg.csv);
            write_csv(f, ex, records);
        }
        if (!cfg.json.empty()) {
            nlohmann::ordered_json j;
            j["schema"] = "almlab-report-1";
            j["quantity"] = "empirical worst-case over family";
            j["config"] = {{"class", cfg.class_spec}, {"dist", cfg.dist_kind}, {"algo", cfg.algo},
                           {"scale", cfg.scale},      {"delta", cfg.delta},    {"trials", cfg.trials},
                           {"seed", cfg.seed},        {"n_cap", cfg.n_cap}};
            for (const auto& c : curve) {
                nlohmann::ordered_json e{{"eps", c.eps}, {"n_hat", c.n_hat}, {"capped", c.capped}};
                for (const auto& m : c.members) {
                    nlohmann::ordered_json mj{{"noise", m.label},        {"n_hat", m.n_hat},
                                              {"capped", m.capped},      {"successes", m.successes},
                                              {"wilson_lo", m.ci.lo},    {"wilson_hi", m.ci.hi}};
                    for (const auto& st : m.search)
                        mj["search"].push_back(
                            {{"n", st.n}, {"successes", st.successes}, {"wilson_lo", st.ci.lo}, {"ok", st.ok}});
                    e["members"].push_back(mj);
                }
                j["results"].push_back(e);
            }
            if (!cfg.warnings.empty()) j["warnings"] = cfg.warnings;
            auto f = open(cfg.json);
            f << j.dump(2) << '\n';
        }
        if (!cfg.svg.empty()) {
            auto f = open(cfg.svg);
            write_svg(f, curve);
        }
        return 0;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace almlab
