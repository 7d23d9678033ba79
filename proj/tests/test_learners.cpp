#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "almlab/learners.hpp"
#include "oracles.hpp"

using namespace almlab;

namespace {

FinDiscreteMarginal uniform_prefix(int k) {
    std::vector<int> pts(k);
    for (int i = 0; i < k; ++i) pts[i] = i;
    return FinDiscreteMarginal::uniform(pts);
}

}  // namespace

TEST_CASE("Log and scaled sizes") {
    CHECK(Log(1.0) == 1.0);
    CHECK(Log(std::exp(3.0)) == doctest::Approx(3.0));
    CHECK(scaled_size(10.0, 0.01) == 1);
    CHECK(scaled_size(1000.0, 0.5) == 500);
    CHECK(scaled_size(1000.1, 0.5) == 501);
    CHECK_THROWS_AS(scaled_size(1.0, 0.0), DomainError);
}

TEST_CASE("split oracle sub-streams partition the stream") {
    std::set<std::int64_t> seen;
    const int M = 40;
    for (int m = 1; m <= M; ++m) {
        CHECK(seen.insert(SplitOracle::x1_index(m)).second);
        CHECK(seen.insert(SplitOracle::x2_index(m)).second);
    }
    std::set<std::int64_t> pairs;
    for (int m = 1; m <= M; ++m)
        for (int l = 1; l <= M; ++l) {
            CHECK(pairs.insert(SplitOracle::pair_index(m, l)).second);
            CHECK(seen.insert(SplitOracle::x3_index(m, l)).second);
        }
    // the pairing is onto an initial segment on every antidiagonal
    for (std::int64_t j = 1; j <= M * (M + 1) / 2; ++j) CHECK(pairs.count(j));
    for (std::int64_t i = 0; i < 3 * M; ++i) CHECK(seen.count(i));
}

TEST_CASE("query oracle respects the budget and repeats labels") {
    JointDistribution d{uniform_prefix(4), {0.5, 0.5, 0.5, 0.5}};
    QueryOracle o(d, 3, 5);
    const auto a = o.request(7);
    CHECK(o.request(7) == a);
    for (int i = 0; i < 3; ++i) CHECK(o.request(i).has_value());
    CHECK(o.exhausted());
    CHECK_FALSE(o.request(9).has_value());
    CHECK(o.queries() == 5);
}

TEST_CASE("passive erm minimizes empirical error") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 40; ++t) {
        const auto C = oracle::random_class(rng, 6, 10);
        LabeledSample S;
        for (int i = 0; i < 12; ++i)
            S.pairs.emplace_back(static_cast<int>(rng() % C.num_points()), (rng() & 1) ? 1 : -1);
        auto err = [&](int h) {
            int e = 0;
            for (auto [x, y] : S.pairs) e += C.at(h, x) != y;
            return e;
        };
        int best = 1 << 30, arg = -1;
        for (int h = 0; h < C.size(); ++h)
            if (err(h) < best) best = err(h), arg = h;
        CHECK(erm_passive(S, C).hypothesis == arg);
    }
}

TEST_CASE("cal queries exactly the points left uncertain by the labels so far") {
    const int n = 64;
    const auto C = builtin_class("thresholds:64");
    for (int target : {0, 5, 31, 63, 64}) {
        const auto D = make_realizable(C, target, uniform_prefix(n));
        QueryOracle o(D, 17 + target, 1000);
        const auto r = cal(o, C, 100000, true);
        CHECK(r.hypothesis == target);
        CHECK_FALSE(r.flagged);
        // a threshold version space is the interval of cut positions (lo, hi]
        const StreamSampler s(D, 17 + target);
        int lo = 0, hi = n;  // cut in [lo, hi]
        std::int64_t queries = 0;
        for (std::int64_t i = 0; i < r.unlabeled; ++i) {
            const int x = s.point(i);
            if (x >= lo && x < hi) {
                ++queries;
                if (s.label(i) > 0)
                    hi = x;
                else
                    lo = x + 1;
            }
        }
        CHECK(queries == r.queries);
        // version-space size along the trace never grows
        for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].vsize <= r.trace[i - 1].vsize);
    }
}

TEST_CASE("cal under pure noise only queries disagreement points") {
    // both labels stay consistent on DIS(V), so the version space never empties
    const auto C = builtin_class("thresholds:4");
    JointDistribution noisy{uniform_prefix(4), {0.5, 0.5, 0.5, 0.5}};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        QueryOracle o(noisy, seed, 50);
        const auto r = cal(o, C, 1000, true);
        CHECK(r.queries <= 4);
        CHECK_FALSE(r.flagged);
        for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].vsize < r.trace[i - 1].vsize);
    }
}

TEST_CASE("memb-halving-2 shrinks the version space and stays in budget") {
    const auto C = builtin_class("gap_lower:8:2");
    std::mt19937_64 rng(42);
    for (int t = 0; t < 40; ++t) {
        const int target = static_cast<int>(rng() % C.size());
        const auto D = make_realizable(C, target, uniform_prefix(8));
        QueryOracle o(D, rng(), 1000);
        std::vector<std::int64_t> U(20);
        for (int i = 0; i < 20; ++i) U[i] = i;
        const auto r = memb_halving2(C, U, o, 1000, true);
        for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].vsize < r.trace[i - 1].vsize);
        CHECK(r.queries == o.queries());
        for (std::int64_t j : U) CHECK(C.at(r.hypothesis, o.point(j)) == C.at(target, o.point(j)));
        QueryOracle tight(D, 5, 2);
        CHECK(memb_halving2(C, U, tight, 1000).queries <= 2);
    }
}

TEST_CASE("epsilon-net selection picks the block with the smallest score") {
    const auto C = builtin_class("thresholds:16");
    std::mt19937_64 rng(43);
    std::vector<int> stream(5 * 6 + 40);
    for (auto& x : stream) x = static_cast<int>(rng() % 16);
    const auto sel = epsilon_net_select_sized(stream, C, 6, 40, 5);
    REQUIRE(sel.scores.size() == 5);
    for (int i = 0; i < 5; ++i) {
        // largest validation disagreement among pairs of rows agreeing on block i
        std::int64_t want = 0;
        for (int a = 0; a < C.size(); ++a)
            for (int b = a + 1; b < C.size(); ++b) {
                bool same = true;
                for (int t = i * 6; t < (i + 1) * 6 && same; ++t) same = C.at(a, stream[t]) == C.at(b, stream[t]);
                if (!same) continue;
                std::int64_t hits = 0;
                for (int t = 30; t < 70; ++t) hits += C.at(a, stream[t]) != C.at(b, stream[t]);
                want = std::max(want, hits);
            }
        CHECK(sel.scores[i] == want);
        CHECK(sel.scores[sel.block] <= sel.scores[i]);
    }
    CHECK_THROWS_AS(epsilon_net_select_sized(std::vector<int>(10, 0), C, 6, 40, 5), SizeError);
}

TEST_CASE("epsilon-net selection yields a net with the stated frequency") {
    // Monte Carlo: the selected block leaves no consistent pair far apart under P.
    const auto C = builtin_class("thresholds:32");
    const auto P = uniform_prefix(32);
    const double eps = 0.25, delta = 0.2;
    const auto plan = eps_net_plan(1, eps, delta, 2e-6);
    int good = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng(1000 + t);
        std::vector<int> stream(plan.total());
        for (auto& x : stream) x = static_cast<int>(rng() % 32);
        const auto sel = epsilon_net_select_sized(stream, C, plan.m, plan.ell, plan.blocks);
        double worst = 0.0;
        for (int a = 0; a < C.size(); ++a)
            for (int b = a + 1; b < C.size(); ++b) {
                bool same = true;
                for (int x : sel.points) same = same && C.at(a, x) == C.at(b, x);
                if (same) worst = std::max(worst, oracle::dist(C, a, b, P));
            }
        good += worst <= eps;
    }
    CHECK(good >= (1.0 - delta) * trials);
}

TEST_CASE("partition cells follow the induced labelings") {
    const auto C = builtin_class("thresholds:8");
    const auto J = partition_J({2, 5}, C);
    CHECK(J.cells == 3);
    CHECK(J.cell_of[0] == J.cell_of[2]);
    CHECK(J.cell_of[3] == J.cell_of[5]);
    CHECK(J.cell_of[6] == J.cell_of[7]);
    CHECK(J.cell_of[2] != J.cell_of[3]);
    CHECK(partition_J({}, C).cells == 1);
}

TEST_CASE("coupon-collector prefix has the law of the literal prefix") {
    JointDistribution d{{{0, 1, 2, 3, 4}, {0.6, 0.3, 0.07, 0.02, 0.01}}, {1, 1, 1, 1, 1}};
    const std::int64_t N = 60;
    std::vector<double> lit(6, 0.0), sim(6, 0.0);
    const int R = 20000;
    for (int r = 0; r < R; ++r) {
        QueryOracle o(d, 7000 + r, 0);
        SplitOracle so(o);
        lit[distinct_x1_prefix(so, N).size()] += 1.0 / R;
        sim[distinct_x1_prefix(so, N, 0).size()] += 1.0 / R;
    }
    for (int k = 0; k <= 5; ++k) CHECK(std::abs(sim[k] - lit[k]) < 0.02);
}

TEST_CASE("algorithm 0 learns singletons in the realizable case") {
    const int n = 32;
    const auto C = build_singletons_plus_allneg(n);
    const double scale = 128.0 / (2 * constants::c_tilde_prime * n);
    const auto plan = alg0_plan(n, 0.1, 0.1, scale);
    CHECK(plan.m >= 100);
    std::mt19937_64 rng(44);
    int ok = 0;
    for (int t = 0; t < 10; ++t) {
        const int target = static_cast<int>(rng() % C.size());
        const auto D = make_realizable(C, target, uniform_prefix(n));
        QueryOracle o(D, rng(), scaled_size(9 * constants::c_tilde_prime * n * Log(10.0), scale));
        const auto r = algorithm0(o, C, n, 0.1, 0.1, scale);
        CHECK(r.queries <= o.budget());
        CHECK_FALSE(r.flagged);
        for (std::size_t i = 1; i < r.dis_mass.size(); ++i) CHECK(r.dis_mass[i] <= r.dis_mass[i - 1] + 1e-12);
        ok += excess_error(C, r.hypothesis, D) <= 0.1;
    }
    CHECK(ok >= 9);
}

TEST_CASE("algorithm 1 derived constants") {
    const auto p = Alg1Params::derive(0.1, 0.1, 0.25, 1, 1e-5);
    CHECK(p.k_eps == 5);
    CHECK(p.m_tilde == p.m_tilde_k[2]);
    for (int k = 3; k <= p.k_eps; ++k) CHECK(p.m_tilde_k[k] <= p.m_tilde_k[k - 1]);
    CHECK(p.k_tilde(1) == p.k_eps);
    CHECK(p.k_tilde(p.m_tilde) == 2);
    const double L = std::log(32.0 * p.m_tilde * p.q_eps_delta / 0.1);
    CHECK(p.log_term == doctest::Approx(L));
    CHECK(p.threshold(50) == doctest::Approx(3 * std::sqrt(100 * L)));
    CHECK(p.q_tilde(1) == doctest::Approx(std::pow(2.0, 3 + 2 * p.k_eps) * L));
    CHECK(p.tau == doctest::Approx(0.01 / (512.0 * p.m_tilde)));
}

TEST_CASE("subroutine 1 on a noiseless cell stops at the closed-form count") {
    const auto C = build_singletons_plus_allneg(4);
    const auto D = make_realizable(C, 1, uniform_prefix(4));
    QueryOracle o(D, 9, 1 << 20);
    SplitOracle so(o);
    const auto p = Alg1Params::derive(0.1, 0.1, 0.25, 1, 1e-5);
    const auto J = partition_J({0, 1, 2, 3}, C);
    for (std::int64_t m = 1; m <= 20; ++m) {
        const auto r = subroutine1(so, m, 1 << 20, p, J);
        // sigma grows by one per label, so it stops at the first q with q >= 18 L
        const auto q = static_cast<std::int64_t>(std::ceil(18.0 * p.log_term));
        CHECK(r.q == q);
        CHECK(r.y == C.at(1, so.x2(m)));
        CHECK(std::abs(r.sigma) >= p.threshold(r.q));
        const auto capped = subroutine1(so, m, 10, p, J);
        CHECK(capped.q == 10);
        CHECK(capped.y == 0);
    }
}

TEST_CASE("algorithm 1 keeps the target in a realizable run") {
    const auto C = build_singletons_plus_allneg(8);
    for (int target = 0; target < C.size(); ++target) {
        const auto D = make_realizable(C, target, uniform_prefix(8));
        QueryOracle o(D, 100 + target, 1 << 16);
        SplitOracle so(o);
        const auto p = Alg1Params::derive(0.1, 0.1, 0.5, 1, 2e-6);
        const auto r = algorithm1(so, C, 1 << 16, p);
        CHECK(r.result.queries <= 1 << 16);
        for (const auto& c : r.calls)
            if (c.applied) CHECK(c.result.y == C.at(target, c.point));
        CHECK(excess_error(C, r.result.hypothesis, D) <= 0.1);
    }
}
