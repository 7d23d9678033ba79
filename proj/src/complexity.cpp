#include "almlab/complexity.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "almlab/threads.hpp"

namespace almlab {

const char* to_string(Exactness e) {
    switch (e) {
        case Exactness::exact: return "exact";
        case Exactness::lower_bound: return "lower-bound";
        case Exactness::greedy_upper: return "greedy-upper";
    }
    return "?";
}

void FinDiscreteMarginal::validate(int n) const {
    if (support.size() != weights.size()) throw DomainError("support and weights differ in length");
    if (support.empty()) throw DomainError("empty support");
    std::vector<char> seen(n, 0);
    double total = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        const int x = support[i];
        if (x < 0 || x >= n) throw DomainError("support point outside domain");
        if (seen[x]) throw DomainError("support points must be distinct");
        seen[x] = 1;
        if (!(weights[i] >= 0.0)) throw DomainError("weights must be nonnegative");
        total += weights[i];
    }
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("weights must sum to 1");
}

FinDiscreteMarginal FinDiscreteMarginal::uniform(std::vector<int> points) {
    FinDiscreteMarginal P;
    P.weights.assign(points.size(), points.empty() ? 0.0 : 1.0 / static_cast<double>(points.size()));
    P.support = std::move(points);
    return P;
}

double distance(const HypothesisClass& C, int g, int h, const FinDiscreteMarginal& P) {
    double d = 0.0;
    for (std::size_t i = 0; i < P.support.size(); ++i)
        if (C.at(g, P.support[i]) != C.at(h, P.support[i])) d += P.weights[i];
    return d;
}

namespace {

struct Bits {
    std::vector<std::uint64_t> w;
    Bits() = default;
    explicit Bits(int n) : w((n + 63) / 64, 0) {}
    void set(int i) { w[i >> 6] |= 1ull << (i & 63); }
    void reset(int i) { w[i >> 6] &= ~(1ull << (i & 63)); }
    bool test(int i) const { return w[i >> 6] >> (i & 63) & 1; }
    bool intersects(const Bits& o) const {
        for (std::size_t k = 0; k < w.size(); ++k)
            if (w[k] & o.w[k]) return true;
        return false;
    }
    bool none() const {
        for (auto v : w)
            if (v) return false;
        return true;
    }
    int count() const {
        int c = 0;
        for (auto v : w) c += std::popcount(v);
        return c;
    }
};

// ---------------------------------------------------------------------------
// star number

struct CenterResult {
    int value = 0;
    std::vector<int> points;
    std::vector<int> witnesses;
    bool capped = false;
};

class CenterSearch {
public:
    CenterSearch(const HypothesisClass& C, int c, std::uint64_t cap, std::atomic<int>* global)
        : C_(C), c_(c), n_(C.num_points()), cap_(cap), global_(global) {
        D_.assign(C.size(), Bits(n_));
        Hx_.assign(n_, {});
        for (int h = 0; h < C.size(); ++h) {
            if (h == c) continue;
            for (int x = 0; x < n_; ++x)
                if (C.at(h, x) != C.at(c, x)) {
                    D_[h].set(x);
                    Hx_[x].push_back(h);
                }
        }
        A_.assign(n_, Bits(n_));
        for (int x = 0; x < n_; ++x)
            for (int h : Hx_[x])
                for (std::size_t k = 0; k < A_[x].w.size(); ++k) A_[x].w[k] |= ~D_[h].w[k];
    }

    CenterResult run() {
        std::vector<int> cand;
        for (int x = 0; x < n_; ++x)
            if (!Hx_[x].empty()) cand.push_back(x);
        std::vector<int> T;
        Bits Tb(n_);
        std::vector<std::vector<int>> W;
        dfs(T, Tb, W, cand);
        res_.capped = capped_;
        return res_;
    }

private:
    bool compat(int x, int y) const { return A_[x].test(y) && A_[y].test(x); }

    void dfs(std::vector<int>& T, Bits& Tb, const std::vector<std::vector<int>>& W, const std::vector<int>& cand) {
        if (capped_) return;
        if (++nodes_ > cap_) {
            capped_ = true;
            return;
        }
        if (static_cast<int>(T.size()) > res_.value) {
            res_.value = static_cast<int>(T.size());
            res_.points = T;
            res_.witnesses.clear();
            for (const auto& w : W) res_.witnesses.push_back(w.front());
            if (global_) {
                int g = global_->load();
                while (res_.value > g && !global_->compare_exchange_weak(g, res_.value)) {}
            }
        }
        const int len = static_cast<int>(cand.size());
        if (len == 0) return;
        // greedy coloring from the back gives a clique bound for every suffix
        std::vector<int> color(len, 0), bound(len, 0);
        int ncol = 0;
        std::vector<char> used;
        for (int i = len - 1; i >= 0; --i) {
            used.assign(ncol + 1, 0);
            for (int j = i + 1; j < len; ++j)
                if (compat(cand[i], cand[j])) used[color[j]] = 1;
            int col = 0;
            while (used[col]) ++col;
            color[i] = col;
            ncol = std::max(ncol, col + 1);
            bound[i] = ncol;
        }
        const int t = static_cast<int>(T.size());
        for (int i = 0; i < len; ++i) {
            const int b = t + bound[i];
            if (b <= res_.value) return;
            if (global_ && b < global_->load()) return;
            const int y = cand[i];
            std::vector<std::vector<int>> W2(t + 1);
            for (int k = 0; k < t; ++k)
                for (int h : W[k])
                    if (!D_[h].test(y)) W2[k].push_back(h);
            for (int h : Hx_[y])
                if (!D_[h].intersects(Tb)) W2[t].push_back(h);
            T.push_back(y);
            Tb.set(y);
            std::vector<int> next;
            for (int j = i + 1; j < len; ++j) {
                const int z = cand[j];
                if (!compat(y, z)) continue;
                bool ok = true;
                for (int k = 0; k <= t && ok; ++k) {
                    ok = false;
                    for (int h : W2[k])
                        if (!D_[h].test(z)) {
                            ok = true;
                            break;
                        }
                }
                if (!ok) continue;
                ok = false;
                for (int h : Hx_[z])
                    if (!D_[h].intersects(Tb)) {
                        ok = true;
                        break;
                    }
                if (ok) next.push_back(z);
            }
            dfs(T, Tb, W2, next);
            T.pop_back();
            Tb.reset(y);
            if (capped_) return;
        }
    }

    const HypothesisClass& C_;
    int c_;
    int n_;
    std::uint64_t cap_;
    std::atomic<int>* global_;
    std::vector<Bits> D_;
    std::vector<std::vector<int>> Hx_;
    std::vector<Bits> A_;
    std::uint64_t nodes_ = 0;
    bool capped_ = false;
    CenterResult res_;
};

StarReport combine(const std::vector<CenterResult>& per_center) {
    StarReport rep;
    rep.witness.center = 0;
    bool any_capped = false;
    for (std::size_t c = 0; c < per_center.size(); ++c) {
        const auto& r = per_center[c];
        any_capped = any_capped || r.capped;
        if (r.value > rep.value) {
            rep.value = r.value;
            rep.witness = StarWitness{static_cast<int>(c), r.points, r.witnesses};
        }
    }
    rep.exactness = any_capped ? Exactness::lower_bound : Exactness::exact;
    return rep;
}

}  // namespace

StarReport star_number(const HypothesisClass& C, const Limits& lim) {
    const int m = C.size();
    const int ceiling = std::min(C.num_points(), m - 1);
    std::vector<CenterResult> per(m);
    std::atomic<int> global{0};
#pragma omp parallel for schedule(dynamic, 1)
    for (int c = 0; c < m; ++c) {
        if (global.load() >= ceiling) continue;
        per[c] = CenterSearch(C, c, lim.max_states, &global).run();
    }
    return combine(per);
}

StarReport star_number_serial(const HypothesisClass& C, const Limits& lim) {
    const int m = C.size();
    const int ceiling = std::min(C.num_points(), m - 1);
    std::vector<CenterResult> per(m);
    std::atomic<int> global{0};
    for (int c = 0; c < m; ++c) {
        if (global.load() >= ceiling) break;
        per[c] = CenterSearch(C, c, lim.max_states, &global).run();
    }
    return combine(per);
}

std::optional<StarWitness> is_star_set(const HypothesisClass& C, const std::vector<int>& T,
                                       std::optional<int> center) {
    std::vector<int> sorted = T;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw DomainError("star set points must be distinct");
    for (int x : T)
        if (x < 0 || x >= C.num_points()) throw DomainError("point outside domain");
    auto try_center = [&](int c) -> std::optional<StarWitness> {
        StarWitness w{c, T, {}};
        for (int x : T) {
            int found = -1;
            for (int h = 0; h < C.size() && found < 0; ++h) {
                if (h == c) continue;
                bool ok = C.at(h, x) != C.at(c, x);
                for (int z : T)
                    if (ok && z != x && C.at(h, z) != C.at(c, z)) ok = false;
                if (ok) found = h;
            }
            if (found < 0) return std::nullopt;
            w.witnesses.push_back(found);
        }
        return w;
    };
    if (center) {
        if (*center < 0 || *center >= C.size()) throw DomainError("center outside class");
        return try_center(*center);
    }
    for (int c = 0; c < C.size(); ++c)
        if (auto w = try_center(c)) return w;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// teaching dimensions

namespace {

std::uint64_t binom_u(int n, int k) {
    if (k < 0 || k > n) return 0;
    long double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r > 1.8e19L ? UINT64_MAX : static_cast<std::uint64_t>(r + 0.5L);
}

// Visits k-subsets of {0..n-1} as bitmasks in lexicographic order of their index lists.
template <class F>
bool for_each_combination(int n, int k, F&& f) {
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        std::uint64_t mask = 0;
        for (int i : idx) mask |= 1ull << i;
        if (f(mask)) return true;
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return false;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

struct HitProblem {
    std::vector<std::uint64_t> masks;
    int n = 0;
    long long allow = 1;
};

long long survivors(const HitProblem& p, std::uint64_t S) {
    long long c = 0;
    for (auto m : p.masks)
        if (!(m & S)) ++c;
    return c;
}

// Smallest S (lexicographically first among the smallest) leaving at most
// `allow` masks untouched.
std::uint64_t min_hitting(const HitProblem& p, const Limits& lim) {
    std::uint64_t greedy = 0;
    while (survivors(p, greedy) > p.allow) {
        int best = -1;
        long long best_gain = 0;
        for (int x = 0; x < p.n; ++x) {
            if (greedy >> x & 1) continue;
            long long gain = 0;
            for (auto m : p.masks)
                if (!(m & greedy) && (m >> x & 1)) ++gain;
            if (gain > best_gain) {
                best_gain = gain;
                best = x;
            }
        }
        if (best < 0) throw DomainError("specifying set does not exist");
        greedy |= 1ull << best;
    }
    const int ub = std::popcount(greedy);
    std::uint64_t states = 0;
    for (int k = 0; k <= ub; ++k) {
        states += binom_u(p.n, k);
        if (states > lim.max_states) throw SizeError("specifying set search cap exceeded", ub);
    }
    for (int k = 0; k < ub; ++k) {
        std::uint64_t hit = 0;
        if (for_each_combination(p.n, k, [&](std::uint64_t S) {
                if (survivors(p, S) <= p.allow) {
                    hit = S;
                    return true;
                }
                return false;
            }))
            return hit;
    }
    std::uint64_t first = greedy;
    for_each_combination(p.n, ub, [&](std::uint64_t S) {
        if (survivors(p, S) <= p.allow) {
            first = S;
            return true;
        }
        return false;
    });
    return first;
}

void check_u(const HypothesisClass& C, const std::vector<int>& U) {
    if (U.empty()) throw DomainError("U must be nonempty");
    if (U.size() > 64) throw SizeError("U larger than 64 points", 0);
    std::vector<int> s = U;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw DomainError("U points must be distinct");
    for (int x : U)
        if (x < 0 || x >= C.num_points()) throw DomainError("point outside domain");
}

SpecifyingSet to_set(std::uint64_t S, const std::vector<int>& U) {
    SpecifyingSet out;
    for (std::size_t i = 0; i < U.size(); ++i)
        if (S >> i & 1) out.points.push_back(U[i]);
    out.size = static_cast<int>(out.points.size());
    return out;
}

HitProblem hit_problem(const HypothesisClass& R, const std::vector<Label>& h, long long allow) {
    HitProblem p;
    p.n = R.num_points();
    p.allow = allow;
    for (int g = 0; g < R.size(); ++g) {
        std::uint64_t m = 0;
        for (int i = 0; i < p.n; ++i)
            if (R.at(g, i) != h[i]) m |= 1ull << i;
        p.masks.push_back(m);
    }
    return p;
}

}  // namespace

SpecifyingSet teaching_dim(const std::vector<Label>& h, const HypothesisClass& C, const std::vector<int>& U,
                           const Limits& lim) {
    check_u(C, U);
    if (h.size() != U.size()) throw DomainError("labeling length must match U");
    auto R = restrict_to(C, U);
    return to_set(min_hitting(hit_problem(R.cls, h, 1), lim), U);
}

SpecifyingSet xptd(const std::vector<Label>& h, const HypothesisClass& H, const std::vector<int>& U, double delta,
                   const Limits& lim) {
    check_u(H, U);
    if (h.size() != U.size()) throw DomainError("labeling length must match U");
    if (!(delta >= 0.0 && delta <= 1.0)) throw DomainError("delta must lie in [0,1]");
    auto R = restrict_to(H, U);
    const long long allow = static_cast<long long>(std::floor(delta * R.cls.size() + 1.0 + 1e-9));
    return to_set(min_hitting(hit_problem(R.cls, h, allow), lim), U);
}

SpecifyingSet vs_compression_size(const HypothesisClass& C, int h, const std::vector<int>& U, const Limits& lim) {
    check_u(C, U);
    if (h < 0 || h >= C.size()) throw DomainError("h must be a row of C");
    // rows outside V_{U,h} must each be cut by S
    std::vector<std::uint64_t> cut;
    for (int g = 0; g < C.size(); ++g) {
        std::uint64_t m = 0;
        for (std::size_t i = 0; i < U.size(); ++i)
            if (C.at(g, U[i]) != C.at(h, U[i])) m |= 1ull << i;
        if (m) cut.push_back(m);
    }
    const int n = static_cast<int>(U.size());
    std::uint64_t states = 0;
    for (int k = 0; k <= n; ++k) {
        states += binom_u(n, k);
        if (states > lim.max_states) throw SizeError("compression search cap exceeded", n);
        std::uint64_t found = 0;
        if (for_each_combination(n, k, [&](std::uint64_t S) {
                for (auto m : cut)
                    if (!(m & S)) return false;
                found = S;
                return true;
            }))
            return to_set(found, U);
    }
    return to_set((n == 64) ? ~0ull : ((1ull << n) - 1), U);
}

namespace {

std::vector<std::vector<int>> subsets_up_to(int n, int m, const Limits& lim) {
    std::vector<std::vector<int>> out;
    std::uint64_t total = 0;
    for (int k = 1; k <= std::min(m, n); ++k) total += binom_u(n, k);
    if (total > lim.max_states) throw SizeError("too many point subsets", 0);
    for (int k = 1; k <= std::min(m, n); ++k) {
        std::vector<int> idx(k);
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            out.push_back(idx);
            int i = k - 1;
            while (i >= 0 && idx[i] == n - k + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return out;
}

TdMax best_over_u(const HypothesisClass& C, const std::vector<int>& U, bool extended, const Limits& lim) {
    auto R = restrict_to(C, U);
    const int k = static_cast<int>(U.size());
    TdMax best{-1, U, {}};
    auto consider = [&](const std::vector<Label>& h) {
        const int v = std::popcount(min_hitting(hit_problem(R.cls, h, 1), lim));
        if (v > best.value) {
            best.value = v;
            best.h = h;
        }
    };
    if (extended) {
        if (k > 20) throw SizeError("too many labelings of U", 0);
        std::vector<Label> h(k);
        for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
            for (int i = 0; i < k; ++i) h[i] = (mask >> i & 1) ? 1 : -1;
            consider(h);
        }
    } else {
        for (int g = 0; g < R.cls.size(); ++g) consider(R.cls.row_vector(g));
    }
    return best;
}

TdMax reduce_first_max(std::vector<TdMax>& per) {
    TdMax best;
    for (auto& r : per)
        if (r.value > best.value) best = std::move(r);
    return best;
}

TdMax td_max(const HypothesisClass& C, int m, bool extended, bool parallel, const Limits& lim) {
    if (m < 1) throw DomainError("m must be at least 1");
    const auto subsets = subsets_up_to(C.num_points(), m, lim);
    std::vector<TdMax> per(subsets.size());
    const long long count = static_cast<long long>(subsets.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (long long i = 0; i < count; ++i) per[i] = best_over_u(C, subsets[i], extended, lim);
    } else {
        for (long long i = 0; i < count; ++i) per[i] = best_over_u(C, subsets[i], extended, lim);
    }
    return reduce_first_max(per);
}

}  // namespace

TdMax xtd_report(const HypothesisClass& C, int m, const Limits& lim) { return td_max(C, m, true, true, lim); }
TdMax td_report(const HypothesisClass& C, int m, const Limits& lim) { return td_max(C, m, false, true, lim); }
TdMax xtd_report_serial(const HypothesisClass& C, int m, const Limits& lim) { return td_max(C, m, true, false, lim); }
TdMax td_report_serial(const HypothesisClass& C, int m, const Limits& lim) { return td_max(C, m, false, false, lim); }

TdMax xtd_on(const HypothesisClass& C, const std::vector<int>& U, const Limits& lim) {
    check_u(C, U);
    return best_over_u(C, U, true, lim);
}

TdMax xptd_report(const HypothesisClass& H, int m, double delta, const Limits& lim) {
    if (m < 1) throw DomainError("m must be at least 1");
    TdMax best;
    for (const auto& U : subsets_up_to(H.num_points(), m, lim)) {
        const int k = static_cast<int>(U.size());
        if (k > 20) throw SizeError("too many labelings of U", 0);
        std::vector<Label> h(k);
        for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
            for (int i = 0; i < k; ++i) h[i] = (mask >> i & 1) ? 1 : -1;
            const int v = xptd(h, H, U, delta, lim).size;
            if (v > best.value) best = {v, U, h};
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// disagreement coefficient

double disagreement_coefficient(const HypothesisClass& C, int h, const FinDiscreteMarginal& P, double r0) {
    if (!(r0 >= 0.0)) throw DomainError("r0 must be nonnegative");
    if (h < 0 || h >= C.size()) throw DomainError("h must be a row of C");
    P.validate(C.num_points());
    const std::size_t ns = P.support.size();
    std::vector<double> d(C.size());
    for (int g = 0; g < C.size(); ++g) d[g] = distance(C, g, h, P);
    std::vector<int> order(C.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });

    std::vector<char> covered(ns, 0);
    auto mass = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < ns; ++i)
            if (covered[i]) s += P.weights[i];
        return s;
    };
    auto absorb = [&](int g) {
        for (std::size_t i = 0; i < ns; ++i)
            if (C.at(g, P.support[i]) != C.at(h, P.support[i])) covered[i] = 1;
    };

    double best = 1.0;
    std::size_t k = 0;
    while (k < order.size() && d[order[k]] <= r0) absorb(order[k++]);
    if (r0 > 0.0) best = std::max(best, mass() / r0);
    while (k < order.size()) {
        const double r = d[order[k]];
        while (k < order.size() && d[order[k]] == r) absorb(order[k++]);
        best = std::max(best, mass() / r);
    }
    return best;
}

// ---------------------------------------------------------------------------
// splitting

int split_count(const HypothesisClass& C, const std::vector<std::pair<int, int>>& Q, int x) {
    int pos = 0, neg = 0;
    for (auto [f, g] : Q) {
        if (C.at(f, x) != C.at(g, x)) continue;
        (C.at(f, x) > 0 ? pos : neg)++;
    }
    return static_cast<int>(Q.size()) - std::max(pos, neg);
}

namespace {

// Pairs grouped by their pattern on the support: 0 both negative, 1 both positive, 2 disagree.
struct Patterns {
    std::vector<std::vector<std::int8_t>> pat;
    std::vector<int> cnt;
};

Patterns group_pairs(const HypothesisClass& C, const std::vector<std::pair<int, int>>& pairs,
                     const FinDiscreteMarginal& P) {
    Patterns out;
    std::unordered_map<std::string, int> index;
    for (auto [f, g] : pairs) {
        std::string key(P.support.size(), '\0');
        for (std::size_t i = 0; i < P.support.size(); ++i) {
            const int x = P.support[i];
            key[i] = C.at(f, x) != C.at(g, x) ? 2 : (C.at(f, x) > 0 ? 1 : 0);
        }
        auto [it, fresh] = index.emplace(key, static_cast<int>(out.pat.size()));
        if (fresh) {
            out.pat.emplace_back(key.begin(), key.end());
            out.cnt.push_back(0);
        }
        ++out.cnt[it->second];
    }
    return out;
}

std::uint64_t state_count(const Patterns& p) {
    long double total = 1;
    for (int c : p.cnt) total *= (c + 1);
    return total > 1.8e19L ? UINT64_MAX : static_cast<std::uint64_t>(total);
}

// Visits every nonzero multiplicity vector; f receives |Q| and per-point split counts.
template <class F>
void for_each_multiset(const Patterns& p, std::size_t ns, F&& f) {
    const std::size_t np = p.pat.size();
    std::vector<int> q(np, 0);
    std::vector<long long> pos(ns, 0), neg(ns, 0), split(ns, 0);
    long long size = 0;
    while (true) {
        std::size_t i = 0;
        while (i < np && q[i] == p.cnt[i]) {
            for (std::size_t x = 0; x < ns; ++x) {
                if (p.pat[i][x] == 1) pos[x] -= q[i];
                else if (p.pat[i][x] == 0) neg[x] -= q[i];
            }
            size -= q[i];
            q[i] = 0;
            ++i;
        }
        if (i == np) return;
        ++q[i];
        ++size;
        for (std::size_t x = 0; x < ns; ++x) {
            if (p.pat[i][x] == 1) ++pos[x];
            else if (p.pat[i][x] == 0) ++neg[x];
        }
        for (std::size_t x = 0; x < ns; ++x) split[x] = size - std::max(pos[x], neg[x]);
        if (f(size, split)) return;
    }
}

}  // namespace

bool is_splittable(const HypothesisClass& C, const std::vector<int>& H, double rho, double Delta, double tau,
                   const FinDiscreteMarginal& P, const Limits& lim) {
    P.validate(C.num_points());
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t a = 0; a < H.size(); ++a)
        for (std::size_t b = a + 1; b < H.size(); ++b)
            if (distance(C, H[a], H[b], P) >= Delta - 1e-12) pairs.emplace_back(H[a], H[b]);
    if (pairs.empty()) return true;
    const auto groups = group_pairs(C, pairs, P);
    if (state_count(groups) > lim.max_states) throw SizeError("pair-set enumeration cap exceeded", 0);
    bool ok = true;
    for_each_multiset(groups, P.support.size(), [&](long long size, const std::vector<long long>& split) {
        double m = 0.0;
        const double need = rho * static_cast<double>(size);
        for (std::size_t x = 0; x < split.size(); ++x)
            if (static_cast<double>(split[x]) >= need - 1e-12 * static_cast<double>(size)) m += P.weights[x];
        if (m < tau - 1e-12) {
            ok = false;
            return true;
        }
        return false;
    });
    return ok;
}

Rational ring_rho(const HypothesisClass& C, const FinDiscreteMarginal& P, const Limits& lim) {
    P.validate(C.num_points());
    std::vector<std::pair<int, int>> pairs;
    for (int f = 0; f < C.size(); ++f)
        for (int g = f + 1; g < C.size(); ++g)
            for (int x : P.support)
                if (C.at(f, x) != C.at(g, x)) {
                    pairs.emplace_back(f, g);
                    break;
                }
    if (pairs.empty()) throw SizeError("no pair disagrees on the support", 0);
    const auto groups = group_pairs(C, pairs, P);
    if (state_count(groups) > lim.max_states) throw SizeError("pair-set enumeration cap exceeded", 0);
    Rational best{1, 1};
    for_each_multiset(groups, P.support.size(), [&](long long size, const std::vector<long long>& split) {
        const long long top = *std::max_element(split.begin(), split.end());
        Rational r{top, size};
        if (r < best) best = r;
        return false;
    });
    const long long g = std::gcd(best.num, best.den);
    if (g > 1) best = Rational{best.num / g, best.den / g};
    return best;
}

// ---------------------------------------------------------------------------
// covering and doubling

namespace {

constexpr double kCoverTol = 1e-12;

class CoverSearch {
public:
    CoverSearch(const std::vector<Bits>& cov, int k, std::uint64_t cap) : cov_(cov), k_(k), cap_(cap) {
        coverers_.assign(k, {});
        for (int c = 0; c < k; ++c)
            for (int e = 0; e < k; ++e)
                if (cov[c].test(e)) coverers_[e].push_back(c);
        for (const auto& b : cov) max_cov_ = std::max(max_cov_, b.count());
    }

    // Smallest cover found by iterative deepening below `ub`; empty when none or capped.
    std::vector<int> solve(int ub) {
        for (int t = 1; t < ub; ++t) {
            Bits unc(k_);
            for (int e = 0; e < k_; ++e) unc.set(e);
            chosen_.clear();
            if (dfs(unc, t)) return chosen_;
            if (capped_) return {};
        }
        return {};
    }
    bool capped() const { return capped_; }

private:
    bool dfs(const Bits& unc, int left) {
        if (++nodes_ > cap_) {
            capped_ = true;
            return false;
        }
        const int remaining = unc.count();
        if (remaining == 0) return true;
        if (left == 0 || remaining > left * max_cov_) return false;
        int pick = -1;
        std::size_t fewest = SIZE_MAX;
        for (int e = 0; e < k_; ++e)
            if (unc.test(e) && coverers_[e].size() < fewest) {
                fewest = coverers_[e].size();
                pick = e;
            }
        for (int c : coverers_[pick]) {
            Bits next = unc;
            for (std::size_t w = 0; w < next.w.size(); ++w) next.w[w] &= ~cov_[c].w[w];
            chosen_.push_back(c);
            if (dfs(next, left - 1)) return true;
            chosen_.pop_back();
            if (capped_) return false;
        }
        return false;
    }

    const std::vector<Bits>& cov_;
    int k_;
    std::uint64_t cap_;
    std::vector<std::vector<int>> coverers_;
    int max_cov_ = 1;
    std::uint64_t nodes_ = 0;
    bool capped_ = false;
    std::vector<int> chosen_;
};

}  // namespace

CoverReport covering_number(const HypothesisClass& C, const std::vector<int>& H, double r,
                            const FinDiscreteMarginal& P, const Limits& lim, bool force_greedy) {
    P.validate(C.num_points());
    CoverReport rep;
    const int k = static_cast<int>(H.size());
    if (k == 0) return rep;
    std::vector<std::vector<double>> d(k, std::vector<double>(k, 0.0));
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) d[a][b] = d[b][a] = distance(C, H[a], H[b], P);

    // farthest-point cover, used as the starting bound and as the greedy answer
    std::vector<int> fp{0};
    std::vector<double> near(k);
    for (int e = 0; e < k; ++e) near[e] = d[0][e];
    while (true) {
        int far = -1;
        for (int e = 0; e < k; ++e)
            if (near[e] > r + kCoverTol && (far < 0 || near[e] > near[far])) far = e;
        if (far < 0) break;
        fp.push_back(far);
        for (int e = 0; e < k; ++e) near[e] = std::min(near[e], d[far][e]);
    }
    auto finish = [&](const std::vector<int>& idx, Exactness ex) {
        rep.value = static_cast<int>(idx.size());
        rep.centers.clear();
        for (int i : idx) rep.centers.push_back(H[i]);
        std::sort(rep.centers.begin(), rep.centers.end());
        rep.exactness = ex;
        return rep;
    };
    if (force_greedy || static_cast<std::size_t>(k) > lim.max_class) return finish(fp, Exactness::greedy_upper);

    std::vector<Bits> cov(k, Bits(k));
    for (int c = 0; c < k; ++c)
        for (int e = 0; e < k; ++e)
            if (d[c][e] <= r + kCoverTol) cov[c].set(e);
    CoverSearch search(cov, k, lim.max_states);
    auto better = search.solve(static_cast<int>(fp.size()));
    if (search.capped()) return finish(fp, Exactness::greedy_upper);
    return finish(better.empty() ? fp : better, Exactness::exact);
}

DoublingReport doubling_dimension(const HypothesisClass& C, int h, const FinDiscreteMarginal& P, double eps,
                                  const Limits& lim, bool force_greedy) {
    if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("eps must lie in (0,1]");
    if (h < 0 || h >= C.size()) throw DomainError("h must be a row of C");
    P.validate(C.num_points());
    std::vector<double> d(C.size());
    for (int g = 0; g < C.size(); ++g) d[g] = distance(C, g, h, P);
    // N(r/2, B(h,r)) only grows where the ball does, so the left ends of the
    // ball's constancy intervals are enough.
    std::vector<double> radii{eps};
    for (double v : d)
        if (v >= eps) radii.push_back(v);
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

    DoublingReport rep;
    rep.radius = eps;
    for (double r : radii) {
        std::vector<int> ball;
        for (int g = 0; g < C.size(); ++g)
            if (d[g] <= r) ball.push_back(g);
        auto cover = covering_number(C, ball, r / 2.0, P, lim, force_greedy);
        if (cover.exactness != Exactness::exact) rep.exactness = cover.exactness;
        if (cover.value > rep.cover) {
            rep.cover = cover.value;
            rep.radius = r;
        }
    }
    rep.value = std::log2(static_cast<double>(rep.cover));
    return rep;
}

}  // namespace almlab
