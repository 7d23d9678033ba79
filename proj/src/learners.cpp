#include "almlab/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "almlab/complexity.hpp"
#include "almlab/rng.hpp"

namespace almlab {

double Log(double x) { return std::max(std::log(x), 1.0); }

std::int64_t scaled_size(double raw, double scale) {
    if (!(scale > 0.0)) throw DomainError("constant_scale must be positive");
    const double v = std::ceil(scale * raw);
    if (!(v < 9.0e18)) throw SizeError("scaled size overflows", std::numeric_limits<long long>::max());
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(v));
}

QueryOracle::QueryOracle(JointDistribution dist, std::uint64_t seed, std::int64_t budget)
    : dist_(std::move(dist)), sampler_(dist_, seed), budget_(budget) {
    if (budget < 0) throw DomainError("budget must be nonnegative");
}

std::optional<Label> QueryOracle::request(std::int64_t i) {
    if (queries_ >= budget_) return std::nullopt;
    ++queries_;
    return sampler_.label(static_cast<std::uint64_t>(i));
}

std::int64_t SplitOracle::pair_index(std::int64_t m, std::int64_t l) {
    if (m < 1 || l < 1) throw DomainError("pairing is defined on positive integers");
    const std::int64_t s = m + l;
    return (s - 2) * (s - 1) / 2 + l;
}

VersionTracker::VersionTracker(const HypothesisClass& C) : C_(C), alive_(C.size(), 1), pos_(C.num_points(), 0) {
    size_ = C.size();
    for (int h = 0; h < C.size(); ++h)
        for (int x = 0; x < C.num_points(); ++x)
            if (C.at(h, x) > 0) ++pos_[x];
}

VersionTracker::VersionTracker(const HypothesisClass& C, const std::vector<int>& members)
    : C_(C), alive_(C.size(), 0), pos_(C.num_points(), 0) {
    for (int h : members) {
        if (alive_[h]) continue;
        alive_[h] = 1;
        ++size_;
        for (int x = 0; x < C.num_points(); ++x)
            if (C.at(h, x) > 0) ++pos_[x];
    }
}

int VersionTracker::first() const {
    for (int h = 0; h < C_.size(); ++h)
        if (alive_[h]) return h;
    return -1;
}

std::vector<int> VersionTracker::members() const {
    std::vector<int> out;
    for (int h = 0; h < C_.size(); ++h)
        if (alive_[h]) out.push_back(h);
    return out;
}

void VersionTracker::restrict(int x, Label y) {
    for (int h = 0; h < C_.size(); ++h) {
        if (!alive_[h] || C_.at(h, x) == y) continue;
        alive_[h] = 0;
        --size_;
        const Label* r = C_.row(h);
        for (int z = 0; z < C_.num_points(); ++z)
            if (r[z] > 0) --pos_[z];
    }
}

double VersionTracker::dis_mass(const FinDiscreteMarginal& P) const {
    double m = 0.0;
    for (std::size_t i = 0; i < P.support.size(); ++i)
        if (in_dis(P.support[i])) m += P.weights[i];
    return m;
}

bool VersionTracker::dis_hits_support(const FinDiscreteMarginal& P) const {
    for (std::size_t i = 0; i < P.support.size(); ++i)
        if (P.weights[i] > 0.0 && in_dis(P.support[i])) return true;
    return false;
}

LearnerResult erm_passive(const LabeledSample& sample, const HypothesisClass& C) {
    LearnerResult res;
    long long best = std::numeric_limits<long long>::max();
    for (int h = 0; h < C.size(); ++h) {
        long long err = 0;
        for (auto [x, y] : sample.pairs)
            if (C.at(h, x) != y) ++err;
        if (err < best) {
            best = err;
            res.hypothesis = h;
        }
    }
    return res;
}

LearnerResult cal(QueryOracle& oracle, const HypothesisClass& C, std::int64_t max_unlabeled, bool trace) {
    LearnerResult res;
    VersionTracker V(C);
    LabeledSample seen;
    const auto& P = oracle.dist().marginal;
    std::int64_t i = 0;
    bool live = V.size() > 1 && V.dis_hits_support(P);
    while (live && i < max_unlabeled && !oracle.exhausted()) {
        const int x = oracle.point(i);
        ++i;
        if (!V.in_dis(x)) continue;
        const Label y = *oracle.request(i - 1);
        seen.pairs.emplace_back(x, y);
        if (V.agreeing(x, y) == 0) {
            res.flagged = true;
            res.flag = "inconsistent";
            res.hypothesis = erm_passive(seen, C).hypothesis;
            res.queries = oracle.queries();
            res.unlabeled = i;
            return res;
        }
        V.restrict(x, y);
        live = V.size() > 1 && V.dis_hits_support(P);
        if (trace) res.trace.push_back({i - 1, x, y, V.size()});
    }
    res.hypothesis = V.first();
    res.queries = oracle.queries();
    res.unlabeled = i;
    return res;
}

LearnerResult memb_halving2(const HypothesisClass& C, const std::vector<std::int64_t>& U, QueryOracle& oracle,
                            std::int64_t budget, bool trace) {
    LearnerResult res;
    if (U.empty()) throw DomainError("U must be nonempty");
    // distinct points of U, each tied to the first stream index showing it
    std::vector<int> pts;
    std::vector<std::int64_t> idx;
    std::unordered_map<int, int> pos_of;
    for (std::int64_t j : U) {
        const int x = oracle.point(j);
        if (pos_of.emplace(x, static_cast<int>(pts.size())).second) {
            pts.push_back(x);
            idx.push_back(j);
        }
    }
    const auto R = restrict_to(C, pts);
    const int k = static_cast<int>(pts.size());
    std::vector<int> V(R.cls.size());
    for (int r = 0; r < R.cls.size(); ++r) V[r] = r;
    const std::int64_t n = std::min(budget, oracle.budget() - oracle.queries());
    std::int64_t t = 0;

    while (V.size() >= 2 && t < n) {
        std::vector<Label> hhat(k);
        for (int i = 0; i < k; ++i) {
            std::size_t pos = 0;
            for (int g : V)
                if (R.cls.at(g, i) > 0) ++pos;
            hhat[i] = 2 * pos >= V.size() ? 1 : -1;
        }
        const auto spec = teaching_dim(hhat, C, pts);
        std::vector<int> J;
        for (int x : spec.points) J.push_back(pos_of.at(x));
        while (true) {
            int jhat = -1;
            std::size_t fewest = std::numeric_limits<std::size_t>::max();
            for (int j : J) {
                std::size_t agree = 0;
                for (int g : V)
                    if (R.cls.at(g, j) == hhat[j]) ++agree;
                if (agree < fewest) {
                    fewest = agree;
                    jhat = j;
                }
            }
            const Label y = *oracle.request(idx[jhat]);
            ++t;
            std::vector<int> kept;
            for (int g : V)
                if (R.cls.at(g, jhat) == y) kept.push_back(g);
            V = std::move(kept);
            if (trace) res.trace.push_back({idx[jhat], pts[jhat], y, static_cast<std::int64_t>(V.size())});
            if (hhat[jhat] != y || V.size() <= 1 || t == n) break;
        }
    }
    res.queries = t;
    res.unlabeled = static_cast<std::int64_t>(U.size());
    if (V.empty()) {
        res.flagged = true;
        res.flag = "empty-version-space";
        res.hypothesis = 0;
    } else {
        res.hypothesis = R.reps[V.front()];
        if (V.size() >= 2) {
            res.flagged = true;
            res.flag = "budget-exhausted";
        }
    }
    return res;
}

EpsNetPlan eps_net_plan(int d, double eps, double delta, double scale) {
    if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0)) throw DomainError("eps, delta must lie in (0,1)");
    EpsNetPlan p;
    p.m = scaled_size(constants::c_prime * d / eps * Log(1.0 / eps), scale);
    p.ell = scaled_size(constants::c_prime / eps * (d * Log(1.0 / eps) + Log(1.0 / delta)), scale);
    p.blocks = static_cast<std::int64_t>(std::ceil(std::log2(2.0 / delta)));
    return p;
}

namespace {

// Group rows of C by their labels on the given points.
std::vector<std::vector<int>> group_by_labels(const HypothesisClass& C, const std::vector<int>& points) {
    std::unordered_map<std::string, int> index;
    std::vector<std::vector<int>> groups;
    std::string key(points.size(), '\0');
    for (int h = 0; h < C.size(); ++h) {
        for (std::size_t i = 0; i < points.size(); ++i) key[i] = static_cast<char>(C.at(h, points[i]));
        auto [it, fresh] = index.emplace(key, static_cast<int>(groups.size()));
        if (fresh) groups.emplace_back();
        groups[it->second].push_back(h);
    }
    return groups;
}

std::vector<int> distinct_of(const std::vector<int>& pts) {
    std::vector<int> out;
    std::unordered_set<int> seen;
    for (int x : pts)
        if (seen.insert(x).second) out.push_back(x);
    return out;
}

std::vector<std::pair<int, std::int64_t>> counted(const std::vector<int>& pts) {
    std::unordered_map<int, std::int64_t> cnt;
    std::vector<int> order;
    for (int x : pts)
        if (cnt[x]++ == 0) order.push_back(x);
    std::vector<std::pair<int, std::int64_t>> out;
    for (int x : order) out.emplace_back(x, cnt[x]);
    return out;
}

}  // namespace

EpsNetSelection epsilon_net_select_sized(const std::vector<int>& stream, const HypothesisClass& C, std::int64_t m,
                                         std::int64_t ell, std::int64_t blocks) {
    if (m < 1 || ell < 0 || blocks < 1) throw DomainError("bad block sizes");
    const std::int64_t need = m * blocks + ell;
    if (static_cast<std::int64_t>(stream.size()) < need)
        throw SizeError("stream holds " + std::to_string(stream.size()) + " points, need " + std::to_string(need),
                        need);
    const auto valid = counted(std::vector<int>(stream.begin() + m * blocks, stream.begin() + need));
    EpsNetSelection sel;
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (std::int64_t i = 0; i < blocks; ++i) {
        const std::vector<int> block(stream.begin() + i * m, stream.begin() + (i + 1) * m);
        std::int64_t score = 0;
        for (const auto& g : group_by_labels(C, distinct_of(block)))
            for (std::size_t a = 0; a < g.size(); ++a)
                for (std::size_t b = a + 1; b < g.size(); ++b) {
                    std::int64_t hits = 0;
                    for (auto [x, c] : valid)
                        if (C.at(g[a], x) != C.at(g[b], x)) hits += c;
                    score = std::max(score, hits);
                }
        sel.scores.push_back(score);
        if (score < best) {
            best = score;
            sel.block = static_cast<int>(i);
            sel.points = block;
        }
    }
    return sel;
}

EpsNetSelection epsilon_net_select(const std::vector<int>& stream, const HypothesisClass& C, double eps,
                                   double delta, double scale) {
    const auto plan = eps_net_plan(vc_dimension(C).d, eps, delta, scale);
    return epsilon_net_select_sized(stream, C, plan.m, plan.ell, plan.blocks);
}

Partition partition_J(const std::vector<int>& sample, const HypothesisClass& C) {
    Partition P;
    const auto reps = sample.empty() ? std::vector<int>{0} : induced_labelings(C, distinct_of(sample));
    std::unordered_map<std::string, int> index;
    std::string key(reps.size(), '\0');
    P.cell_of.resize(C.num_points());
    for (int x = 0; x < C.num_points(); ++x) {
        for (std::size_t r = 0; r < reps.size(); ++r) key[r] = static_cast<char>(C.at(reps[r], x));
        auto [it, fresh] = index.emplace(key, P.cells);
        if (fresh) ++P.cells;
        P.cell_of[x] = it->second;
    }
    return P;
}

std::int64_t partition_sample_size(int d, double tau, double delta, double scale) {
    if (!(tau > 0.0 && tau < 1.0) || !(delta > 0.0 && delta < 1.0)) throw DomainError("tau, delta must lie in (0,1)");
    return scaled_size(constants::c / tau * (d * Log(1.0 / tau) + Log(1.0 / delta)), scale);
}

std::vector<int> distinct_x1_prefix(const SplitOracle& so, std::int64_t N, std::int64_t literal_limit) {
    std::vector<int> out;
    std::unordered_set<int> seen;
    if (N <= literal_limit) {
        for (std::int64_t m = 1; m <= N; ++m) {
            const int x = so.x1(m);
            if (seen.insert(x).second) out.push_back(x);
        }
        return out;
    }
    const auto& P = so.base().dist().marginal;
    const std::uint64_t seed = derive_seed(so.base().seed(), 0x43434343);
    std::vector<char> taken(P.support.size(), 0);
    std::int64_t draws = 0;
    for (std::uint64_t k = 0;; ++k) {
        double q = 0.0;
        for (std::size_t i = 0; i < P.support.size(); ++i)
            if (!taken[i]) q += P.weights[i];
        if (q <= 1e-15) break;
        // waiting time for the next unseen point is Geometric(q)
        std::int64_t wait = 1;
        if (q < 1.0) {
            const double u = 1.0 - counter_uniform(seed, 2, k);
            const double g = std::floor(std::log(u) / std::log1p(-q));
            if (!(g < 9.0e18)) break;
            wait += static_cast<std::int64_t>(g);
        }
        if (wait > N - draws) break;
        draws += wait;
        double target = counter_uniform(seed, 3, k) * q;
        std::size_t pick = 0;
        bool found = false;
        for (std::size_t i = 0; i < P.support.size(); ++i) {
            if (taken[i] || P.weights[i] <= 0.0) continue;
            pick = i;
            found = true;
            if (target < P.weights[i]) break;
            target -= P.weights[i];
        }
        if (!found) break;
        taken[pick] = 1;
        out.push_back(P.support[pick]);
    }
    return out;
}

Alg0Plan alg0_plan(int s_value, double eps, double delta, double scale) {
    if (s_value < 1) throw DomainError("s_value must be at least 1");
    if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0)) throw DomainError("eps, delta must lie in (0,1)");
    Alg0Plan p;
    const double ctp = constants::c_tilde_prime;
    p.delta_prime = delta / (2.0 * std::ceil(std::log2(1.0 / eps)));
    p.ell = scaled_size(2.0 * ctp * (s_value * Log(3.0 * ctp) + Log(1.0 / p.delta_prime)), scale);
    p.m = scaled_size(2.0 * ctp * s_value, scale);
    p.blocks = static_cast<std::int64_t>(std::ceil(std::log2(2.0 / p.delta_prime)));
    p.jtilde = static_cast<std::int64_t>(std::ceil((2.0 * p.m * p.blocks + 2.0 * p.ell) / eps));
    return p;
}

LearnerResult algorithm0(QueryOracle& oracle, const HypothesisClass& C, int s_value, double eps, double delta,
                         double scale, bool trace) {
    const auto plan = alg0_plan(s_value, eps, delta, scale);
    const auto& P = oracle.dist().marginal;
    LearnerResult res;
    VersionTracker V(C);
    const std::int64_t rounds = oracle.budget() / plan.m;
    const std::int64_t need = plan.m * plan.blocks + plan.ell;
    std::int64_t jbar = 0;
    auto finish = [&] {
        res.hypothesis = std::max(V.first(), 0);
        res.queries = oracle.queries();
        res.unlabeled = jbar;
        return res;
    };
    for (std::int64_t k = 1; k <= rounds; ++k) {
        res.dis_mass.push_back(V.dis_mass(P));
        std::vector<std::int64_t> chosen;
        for (std::int64_t j = jbar; j < jbar + plan.jtilde && static_cast<std::int64_t>(chosen.size()) < need; ++j)
            if (V.in_dis(oracle.point(j))) chosen.push_back(j);
        if (static_cast<std::int64_t>(chosen.size()) < need) {
            jbar += plan.jtilde;
            return finish();
        }
        jbar = chosen.back() + 1;

        std::vector<int> valid_pts;
        for (std::int64_t t = plan.m * plan.blocks; t < need; ++t) valid_pts.push_back(oracle.point(chosen[t]));
        const auto valid = counted(valid_pts);

        std::int64_t best = std::numeric_limits<std::int64_t>::max();
        std::int64_t ihat = 0;
        for (std::int64_t i = 0; i < plan.blocks; ++i) {
            std::vector<int> block;
            for (std::int64_t t = i * plan.m; t < (i + 1) * plan.m; ++t) block.push_back(oracle.point(chosen[t]));
            const auto bpts = distinct_of(block);
            // A labeled s-tuple from the block whose DIS misses the block pins the
            // version space to V_{block,f} for the labeling f it induces, so the
            // tuples reduce to realized labelings with compression size <= s.
            std::int64_t score = 0;
            for (const auto& g : group_by_labels(C, bpts)) {
                if (s_value < static_cast<int>(bpts.size()) && vs_compression_size(C, g.front(), bpts).size > s_value)
                    continue;
                std::int64_t hits = 0;
                for (auto [x, c] : valid) {
                    for (int h : g)
                        if (C.at(h, x) != C.at(g.front(), x)) {
                            hits += c;
                            break;
                        }
                }
                score = std::max(score, hits);
            }
            if (score < best) {
                best = score;
                ihat = i;
            }
        }
        for (std::int64_t t = ihat * plan.m; t < (ihat + 1) * plan.m; ++t) {
            const int x = oracle.point(chosen[t]);
            const auto y = oracle.request(chosen[t]);
            if (!y) {
                res.flagged = true;
                res.flag = "budget-exhausted";
                return finish();
            }
            if (V.agreeing(x, *y) == 0) {
                res.flagged = true;
                res.flag = "inconsistent";
                return finish();
            }
            V.restrict(x, *y);
            if (trace) res.trace.push_back({chosen[t], x, *y, V.size()});
        }
    }
    res.dis_mass.push_back(V.dis_mass(P));
    return finish();
}

Alg1Params Alg1Params::derive(double eps, double delta, double gamma_hat, int d, double scale) {
    if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0)) throw DomainError("eps, delta must lie in (0,1)");
    if (!(gamma_hat >= eps / 2.0 && gamma_hat <= 1.0)) throw DomainError("gamma_hat must lie in [eps/2, 1]");
    if (d < 1) throw DomainError("d must be at least 1");
    Alg1Params p;
    p.eps = eps;
    p.delta = delta;
    p.gamma_hat = gamma_hat;
    p.scale = scale;
    p.d = d;
    p.k_eps = static_cast<int>(std::ceil(std::log2(8.0 / gamma_hat)));
    p.m_tilde_k.assign(p.k_eps + 2, 0);
    const double ke = p.k_eps;
    for (int k = 2; k <= p.k_eps; ++k) {
        const double raw = 16.0 * std::max(constants::c, 8.0) * ke / (std::ldexp(1.0, k) * eps) *
                           (d * Log(2.0 * ke / eps) + Log(64.0 * ke / delta));
        p.m_tilde_k[k] = scaled_size(raw, scale);
    }
    p.m_tilde = p.m_tilde_k[2];
    const double mt = static_cast<double>(p.m_tilde);
    p.q_eps_delta = 2 + static_cast<std::int64_t>(
                            std::ceil(std::ldexp(1.0, 2 * p.k_eps + 4) *
                                      std::log(32.0 * mt * std::ldexp(1.0, 2 * p.k_eps + 3) / delta)));
    p.log_term = std::log(32.0 * mt * static_cast<double>(p.q_eps_delta) / delta);
    p.tau = delta * eps / (512.0 * mt);
    p.partition_n = partition_sample_size(d, p.tau, delta / 2.0, scale);
    return p;
}

int Alg1Params::k_tilde(std::int64_t m) const {
    int best = 2;
    for (int k = 2; k <= k_eps; ++k)
        if (m <= m_tilde_k[k]) best = k;
    return best;
}

double Alg1Params::q_tilde(std::int64_t m) const { return std::ldexp(1.0, 3 + 2 * k_tilde(m)) * log_term; }

double Alg1Params::threshold(std::int64_t q) const { return 3.0 * std::sqrt(2.0 * static_cast<double>(q) * log_term); }

Sub1Result subroutine1(SplitOracle& so, std::int64_t m, std::int64_t budget, const Alg1Params& params,
                       const Partition& J, std::int64_t scan_cap) {
    Sub1Result r;
    const int cell = J.cell_of.at(so.x2(m));
    const double cap_q = std::min(static_cast<double>(budget), params.q_tilde(m));
    std::int64_t l = 0;
    while (true) {
        std::int64_t scanned = 0;
        do {
            ++l;
            if (++scanned > scan_cap) {
                r.starved = true;
                r.y = 0;
                return r;
            }
        } while (J.cell_of[so.x3(m, l)] != cell);
        const auto y = so.request_x3(m, l);
        if (!y) return r;
        r.sigma += *y;
        ++r.q;
        if (static_cast<double>(std::llabs(r.sigma)) >= params.threshold(r.q)) {
            r.y = r.sigma >= 0 ? 1 : -1;
            return r;
        }
        if (static_cast<double>(r.q) >= cap_q) {
            r.y = 0;
            return r;
        }
    }
}

Alg1Result algorithm1(SplitOracle& so, const HypothesisClass& C, std::int64_t budget, const Alg1Params& params) {
    Alg1Result out;
    const auto sample = distinct_x1_prefix(so, params.partition_n);
    const Partition J = partition_J(sample, C);
    out.cells = J.cells;
    VersionTracker V(C);
    std::int64_t t = 0, m = 0;
    while (t < budget && m < params.m_tilde) {
        ++m;
        const int x = so.x2(m);
        if (!V.in_dis(x)) continue;
        Alg1Call call{m, x, subroutine1(so, m, budget - t, params, J), false};
        t += call.result.q;
        if (call.result.starved) {
            out.result.flagged = true;
            out.result.flag = "starved";
        }
        if (call.result.y != 0 && V.agreeing(x, static_cast<Label>(call.result.y)) > 0) {
            V.restrict(x, static_cast<Label>(call.result.y));
            call.applied = true;
        }
        out.calls.push_back(call);
    }
    out.result.hypothesis = V.first();
    out.result.queries = t;
    out.result.unlabeled = m;
    return out;
}

const char* to_string(NoiseModel m) {
    switch (m) {
        case NoiseModel::RE: return "RE";
        case NoiseModel::BN: return "BN";
        case NoiseModel::TN: return "TN";
        case NoiseModel::BC: return "BC";
        case NoiseModel::BE: return "BE";
        case NoiseModel::AG: return "AG";
    }
    return "?";
}

NoiseModel parse_noise_model(const std::string& s) {
    for (auto m : {NoiseModel::RE, NoiseModel::BN, NoiseModel::TN, NoiseModel::BC, NoiseModel::BE, NoiseModel::AG})
        if (s == to_string(m)) return m;
    throw DomainError("unknown noise model '" + s + "'");
}

double gamma_hat_default(NoiseModel model, const GammaHatArgs& a) {
    switch (model) {
        case NoiseModel::BN: return std::max(0.5 - a.beta, a.eps / 2.0);
        case NoiseModel::TN:
            return std::max(std::pow(a.eps / (2.0 * tsybakov_a_prime(a.a, a.alpha)), 1.0 - a.alpha), a.eps / 2.0);
        case NoiseModel::BE: return std::max(a.eps / (4.0 * a.nu + 2.0 * a.eps), a.eps / 2.0);
        default: throw DomainError(std::string("no default gamma_hat for model ") + to_string(model));
    }
}

}  // namespace almlab
