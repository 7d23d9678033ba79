#include "almlab/noise.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "almlab/rng.hpp"

namespace almlab {

void JointDistribution::validate(int n) const {
    marginal.validate(n);
    if (eta.size() != marginal.support.size()) throw DomainError("eta must match the support");
    for (double e : eta)
        if (!(e >= 0.0 && e <= 1.0)) throw DomainError("eta entries must lie in [0,1]");
}

std::vector<Label> BayesResult::labeling(int n, const FinDiscreteMarginal& P) const {
    std::vector<Label> out(n, 1);
    for (std::size_t i = 0; i < P.support.size(); ++i) out[P.support[i]] = labels[i];
    return out;
}

BayesResult bayes(const JointDistribution& dist) {
    BayesResult b;
    for (std::size_t i = 0; i < dist.eta.size(); ++i) {
        const double e = dist.eta[i];
        b.labels.push_back(2.0 * e - 1.0 >= 0.0 ? 1 : -1);
        b.error += dist.marginal.weights[i] * std::min(e, 1.0 - e);
    }
    return b;
}

double error_rate(const std::vector<Label>& h, const JointDistribution& dist) {
    double er = 0.0;
    for (std::size_t i = 0; i < dist.eta.size(); ++i) {
        const int x = dist.marginal.support[i];
        er += dist.marginal.weights[i] * (h.at(x) > 0 ? 1.0 - dist.eta[i] : dist.eta[i]);
    }
    return er;
}

double error_rate(const HypothesisClass& C, int row, const JointDistribution& dist) {
    double er = 0.0;
    for (std::size_t i = 0; i < dist.eta.size(); ++i) {
        const int x = dist.marginal.support[i];
        er += dist.marginal.weights[i] * (C.at(row, x) > 0 ? 1.0 - dist.eta[i] : dist.eta[i]);
    }
    return er;
}

double best_error(const HypothesisClass& C, const JointDistribution& dist) {
    double best = std::numeric_limits<double>::infinity();
    for (int g = 0; g < C.size(); ++g) best = std::min(best, error_rate(C, g, dist));
    return best;
}

double excess_error(const std::vector<Label>& h, const JointDistribution& dist, const HypothesisClass& C) {
    return error_rate(h, dist) - best_error(C, dist);
}

double excess_error(const HypothesisClass& C, int row, const JointDistribution& dist) {
    return error_rate(C, row, dist) - best_error(C, dist);
}

GammaProfile gamma_profile(const JointDistribution& dist, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0,1)");
    GammaProfile gp;
    std::map<double, double> level_mass;
    for (std::size_t i = 0; i < dist.eta.size(); ++i) {
        const double g = std::abs(dist.eta[i] - 0.5);
        gp.gamma_x.push_back(g);
        if (dist.marginal.weights[i] > 0.0) level_mass[g] += dist.marginal.weights[i];
    }
    // g(gamma) = gamma * F(gamma) is nondecreasing, with F a right-continuous step
    // function; walk the steps and stop at the first one that crosses eps/2.
    std::vector<double> L, F;
    double acc = 0.0;
    for (auto [g, w] : level_mass) {
        acc += w;
        L.push_back(g);
        F.push_back(acc);
    }
    const double half = eps / 2.0;
    double lo = 0.0, cur_f = 0.0;
    std::size_t j = 0;
    if (!L.empty() && L[0] == 0.0) {
        cur_f = F[0];
        j = 1;
    }
    while (true) {
        const bool last = j >= L.size();
        const double hi = last ? 0.5 : L[j];
        if (cur_f > 0.0) {
            const double bound = half / cur_f;
            if (bound < lo) {
                gp.gamma_eps = lo;
                break;
            }
            if (last ? bound < 0.5 : bound < hi) {
                gp.gamma_eps = bound;
                break;
            }
        }
        if (last) {
            gp.gamma_eps = 0.5;
            break;
        }
        lo = L[j];
        cur_f = F[j];
        ++j;
    }
    gp.gamma_eps = std::clamp(gp.gamma_eps, half, 0.5);
    return gp;
}

double tsybakov_a_prime(double a, double alpha) {
    return (1.0 - alpha) * std::pow(2.0 * alpha, alpha / (1.0 - alpha)) * std::pow(a, 1.0 / (1.0 - alpha));
}

namespace {

bool bayes_realized(const JointDistribution& dist, const HypothesisClass& C, const BayesResult& b) {
    for (int g = 0; g < C.size(); ++g) {
        bool ok = true;
        for (std::size_t i = 0; i < dist.eta.size() && ok; ++i)
            if (dist.marginal.weights[i] > 0.0 && C.at(g, dist.marginal.support[i]) != b.labels[i]) ok = false;
        if (ok) return true;
    }
    return false;
}

bool leq(double lhs, double rhs) { return lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs)); }

}  // namespace

bool in_tsybakov(const JointDistribution& dist, const HypothesisClass& C, double a, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(a >= 1.0)) throw DomainError("TN needs a >= 1 and alpha in (0,1)");
    if (!bayes_realized(dist, C, bayes(dist))) return false;
    const double ap = tsybakov_a_prime(a, alpha);
    const double expo = alpha / (1.0 - alpha);
    std::map<double, double> level_mass;
    for (std::size_t i = 0; i < dist.eta.size(); ++i)
        if (dist.marginal.weights[i] > 0.0) level_mass[std::abs(dist.eta[i] - 0.5)] += dist.marginal.weights[i];
    double F = 0.0;
    for (auto [g, w] : level_mass) {
        F += w;
        if (g == 0.0) return false;  // mass at the decision boundary violates the bound as gamma -> 0
        if (!leq(F, ap * std::pow(g, expo))) return false;
    }
    // gamma >= 1/2: F = 1
    return leq(1.0, ap * std::pow(0.5, expo));
}

bool in_bernstein(const JointDistribution& dist, const HypothesisClass& C, double a, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0) || !(a >= 1.0)) throw DomainError("BC needs a >= 1 and alpha in [0,1]");
    std::vector<double> er(C.size());
    for (int g = 0; g < C.size(); ++g) er[g] = error_rate(C, g, dist);
    for (int hp = 0; hp < C.size(); ++hp) {
        bool ok = true;
        for (int h = 0; h < C.size() && ok; ++h) {
            const double dis = distance(C, h, hp, dist.marginal);
            if (dis == 0.0) continue;
            const double ex = er[h] - er[hp];
            if (ex < -1e-15) {
                ok = false;
                break;
            }
            const double rhs = alpha == 0.0 ? a : a * std::pow(std::max(ex, 0.0), alpha);
            ok = leq(dis, rhs);
        }
        if (ok) return true;
    }
    return false;
}

NoiseReport classify_noise(const JointDistribution& dist, const HypothesisClass& C, const NoiseParams& params) {
    dist.validate(C.num_points());
    NoiseReport rep;
    rep.params = params;
    rep.bayes = bayes(dist);
    rep.bayes_in_class = bayes_realized(dist, C, rep.bayes);

    double min_gamma = 0.5;
    bool deterministic = true;
    for (std::size_t i = 0; i < dist.eta.size(); ++i) {
        if (dist.marginal.weights[i] <= 0.0) continue;
        min_gamma = std::min(min_gamma, std::abs(dist.eta[i] - 0.5));
        if (dist.eta[i] != 0.0 && dist.eta[i] != 1.0) deterministic = false;
    }
    rep.beta_star = 0.5 - min_gamma;
    rep.nu_ag = best_error(C, dist);
    rep.nu_be = rep.bayes_in_class ? rep.bayes.error : 1.0;

    rep.re = rep.bayes_in_class && deterministic;
    rep.bn = rep.bayes_in_class && params.beta < 0.5 && min_gamma >= 0.5 - params.beta - 1e-12;
    rep.be = rep.bayes_in_class && leq(rep.bayes.error, params.nu);
    rep.ag = leq(rep.nu_ag, params.nu);
    rep.tn = in_tsybakov(dist, C, params.a, params.alpha);
    rep.bc = in_bernstein(dist, C, params.a, params.alpha);
    for (double al : params.grid_alpha)
        for (double a : params.grid_a)
            rep.grid.push_back({a, al, in_tsybakov(dist, C, a, al), in_bernstein(dist, C, a, al)});
    return rep;
}

JointDistribution make_realizable(const HypothesisClass& C, int target, const FinDiscreteMarginal& marginal) {
    if (target < 0 || target >= C.size()) throw DomainError("target must be a row of C");
    marginal.validate(C.num_points());
    JointDistribution d{marginal, {}};
    for (int x : marginal.support) d.eta.push_back(C.at(target, x) > 0 ? 1.0 : 0.0);
    return d;
}

std::vector<JointDistribution> rr_family(const HypothesisClass& C, const StarWitness& w, int k, double zeta,
                                         double beta) {
    if (k < 1 || k > static_cast<int>(w.points.size())) throw DomainError("k must lie in [1, |witness|]");
    if (!(zeta > 0.0 && zeta <= 1.0)) throw DomainError("zeta must lie in (0,1]");
    if (k > static_cast<int>(std::floor(1.0 / zeta + 1e-12))) throw DomainError("k must not exceed 1/zeta");
    if (!(beta >= 0.0 && beta < 0.5)) throw DomainError("beta must lie in [0,1/2)");
    if (w.witnesses.size() != w.points.size()) throw DomainError("witness lists differ in length");
    const double rest = std::max(0.0, 1.0 - zeta * k);
    int extra = -1;
    if (k < static_cast<int>(w.points.size())) {
        extra = w.points[k];
    } else {
        for (int x = 0; x < C.num_points() && extra < 0; ++x) {
            if (std::find(w.points.begin(), w.points.begin() + k, x) != w.points.begin() + k) continue;
            bool agree = true;
            for (int t = 0; t < k && agree; ++t) agree = C.at(w.witnesses[t], x) == C.at(w.center, x);
            if (agree) extra = x;
        }
    }
    if (extra < 0 && rest > 1e-12) throw DomainError("no point available for the remaining mass");

    FinDiscreteMarginal P;
    for (int i = 0; i < k; ++i) {
        P.support.push_back(w.points[i]);
        P.weights.push_back(zeta);
    }
    if (extra >= 0) {
        P.support.push_back(extra);
        P.weights.push_back(rest);
    }
    std::vector<JointDistribution> out;
    for (int t = 0; t < k; ++t) {
        const int ht = w.witnesses[t];
        JointDistribution d{P, {}};
        for (int i = 0; i < k; ++i) d.eta.push_back(C.at(ht, w.points[i]) > 0 ? 1.0 - beta : beta);
        if (extra >= 0) d.eta.push_back(C.at(ht, extra) > 0 ? 1.0 : 0.0);
        d.validate(C.num_points());
        out.push_back(std::move(d));
    }
    return out;
}

StreamSampler::StreamSampler(const JointDistribution& dist, std::uint64_t seed) : seed_(seed) {
    double acc = 0.0;
    int maxp = 0;
    for (std::size_t i = 0; i < dist.eta.size(); ++i) {
        acc += dist.marginal.weights[i];
        cum_.push_back(acc);
        pts_.push_back(dist.marginal.support[i]);
        maxp = std::max(maxp, dist.marginal.support[i]);
        if (dist.marginal.weights[i] > 0.0) last_positive_ = static_cast<int>(i);
    }
    eta_by_point_.assign(maxp + 1, 0.0);
    for (std::size_t i = 0; i < dist.eta.size(); ++i) eta_by_point_[dist.marginal.support[i]] = dist.eta[i];
}

int StreamSampler::point(std::uint64_t i) const {
    const double u = counter_uniform(seed_, 0, i);
    auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    std::size_t k = static_cast<std::size_t>(it - cum_.begin());
    if (k > static_cast<std::size_t>(last_positive_)) k = last_positive_;
    return pts_[k];
}

Label StreamSampler::label(std::uint64_t i) const {
    return counter_uniform(seed_, 1, i) < eta_by_point_[point(i)] ? 1 : -1;
}

LabeledSample sample_stream(const JointDistribution& dist, std::uint64_t seed, std::int64_t count) {
    if (count < 0) throw DomainError("count must be nonnegative");
    StreamSampler s(dist, seed);
    LabeledSample out;
    out.pairs.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) out.pairs.emplace_back(s.point(i), s.label(i));
    return out;
}

void write_dist(std::ostream& os, const JointDistribution& dist) {
    os << "almdist v1 |supp|=" << dist.eta.size() << "\n";
    char buf[96];
    for (std::size_t i = 0; i < dist.eta.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%d %.17g %.17g\n", dist.marginal.support[i], dist.marginal.weights[i],
                      dist.eta[i]);
        os << buf;
    }
}

JointDistribution read_dist(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw DomainError("line 1: missing header");
    int n = -1;
    if (std::sscanf(line.c_str(), "almdist v1 |supp|=%d", &n) != 1 || n < 0) throw DomainError("line 1: bad header");
    JointDistribution d;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        int x;
        double w, e;
        if (!(ss >> x >> w >> e)) throw DomainError("line " + std::to_string(lineno) + ": expected 'point weight eta'");
        d.marginal.support.push_back(x);
        d.marginal.weights.push_back(w);
        d.eta.push_back(e);
    }
    if (static_cast<int>(d.eta.size()) != n) throw DomainError("support size does not match header");
    return d;
}

}  // namespace almlab
