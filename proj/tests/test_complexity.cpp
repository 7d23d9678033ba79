#include <doctest.h>

#include <cmath>
#include <random>

#include "almlab/complexity.hpp"
#include "oracles.hpp"

using namespace almlab;

namespace {

std::vector<Label> labels_on(const HypothesisClass& C, int h, const std::vector<int>& U) {
    std::vector<Label> out;
    for (int x : U) out.push_back(C.at(h, x));
    return out;
}

std::vector<int> all_rows(const HypothesisClass& C) {
    std::vector<int> v(C.size());
    for (int i = 0; i < C.size(); ++i) v[i] = i;
    return v;
}

}  // namespace

TEST_CASE("star number worked examples") {
    CHECK(star_number(builtin_class("thresholds:2")).value == 2);
    CHECK(star_number(builtin_class("thresholds:9")).value == 2);
    CHECK(star_number(builtin_class("gap_lower:6:2")).value == 6);
    CHECK(star_number(builtin_class("intervals:6")).value == 6);
    const HypothesisClass two(InstanceDomain(4), {{1, 1, -1, -1}, {-1, 1, 1, -1}});
    CHECK(star_number(two).value == 1);
}

TEST_CASE("star number matches the all-subsets oracle, serial and parallel alike") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 80; ++t) {
        const auto C = oracle::random_class(rng, 7, 12);
        const auto a = star_number(C);
        const auto b = star_number_serial(C);
        CHECK(a.value == oracle::star_number(C));
        CHECK(a.value == b.value);
        CHECK(a.witness.center == b.witness.center);
        CHECK(a.witness.points == b.witness.points);
        if (a.value > 0) CHECK(is_star_set(C, a.witness.points, a.witness.center).has_value());
    }
}

TEST_CASE("is_star_set examples") {
    const auto T = builtin_class("thresholds:6");
    CHECK(is_star_set(T, {}).has_value());
    CHECK_FALSE(is_star_set(T, {1, 2, 3}).has_value());
    CHECK(is_star_set(T, {2, 3}).has_value());
    const auto I = builtin_class("intervals:6");
    CHECK(is_star_set(I, {1, 4}).has_value());  // shattered
}

TEST_CASE("teaching dimension matches subset search") {
    std::mt19937_64 rng(22);
    for (int t = 0; t < 60; ++t) {
        const auto C = oracle::random_class(rng, 6, 10);
        std::vector<int> U;
        for (int x = 0; x < C.num_points(); ++x)
            if (rng() % 3) U.push_back(x);
        if (U.empty()) U.push_back(0);
        std::vector<Label> h(U.size());
        for (auto& v : h) v = (rng() & 1) ? 1 : -1;
        const auto s = teaching_dim(h, C, U);
        CHECK(s.size == oracle::teaching_dim(h, C, U));
        CHECK(static_cast<int>(s.points.size()) == s.size);
        const int g = static_cast<int>(rng() % C.size());
        CHECK(vs_compression_size(C, g, U).size == oracle::vs_compression(C, g, U));
    }
}

TEST_CASE("teaching dimension examples") {
    const auto C = builtin_class("gap_lower:6:2");
    const auto star = star_number(C);
    CHECK(teaching_dim(labels_on(C, star.witness.center, star.witness.points), C, star.witness.points).size == 6);
    const HypothesisClass one(InstanceDomain(3), {{1, -1, 1}}, {}, true);
    CHECK(teaching_dim({1, -1, 1}, one, {0, 1, 2}).size == 0);
    CHECK(xtd(builtin_class("thresholds:8"), 5) == 2);
    CHECK(td(builtin_class("thresholds:8"), 5) == 2);
    CHECK(xtd(C, 4) == 4);
    CHECK(td(C, 4) == 4);
    CHECK(xtd_on(C, {0, 1, 2}).value == 3);
}

TEST_CASE("partial teaching dimension") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 40; ++t) {
        const auto C = oracle::random_class(rng, 5, 10);
        std::vector<int> U(C.num_points());
        for (int i = 0; i < C.num_points(); ++i) U[i] = i;
        std::vector<Label> h(U.size());
        for (auto& v : h) v = (rng() & 1) ? 1 : -1;
        CHECK(xptd(h, C, U, 1.0).size == 0);
        CHECK(xptd(h, C, U, 0.0).size == teaching_dim(h, C, U).size);
        const double dl = 0.3;
        const double allow = std::floor(dl * oracle::restrictions(C, U).size() + 1 + 1e-9);
        CHECK(xptd(h, C, U, dl).size == oracle::partial_td(h, C, U, allow));
    }
}

TEST_CASE("disagreement coefficient matches a dense radius sweep") {
    std::mt19937_64 rng(24);
    for (int t = 0; t < 60; ++t) {
        const auto C = oracle::random_class(rng, 6, 8);
        const auto P = oracle::random_marginal(rng, C.num_points(), 5);
        const int h = static_cast<int>(rng() % C.size());
        for (double r0 : {0.0, 0.1, 1.0 / 3.0}) {
            const double got = disagreement_coefficient(C, h, P, r0);
            CHECK(got == doctest::Approx(oracle::theta_sweep(C, h, P, r0)).epsilon(1e-9));
        }
    }
    CHECK_THROWS_AS(disagreement_coefficient(builtin_class("thresholds:4"), 0, FinDiscreteMarginal::uniform({0}), -1.0),
                    DomainError);
}

TEST_CASE("disagreement coefficient on the star construction") {
    for (int m : {2, 4, 8}) {
        const auto C = build_singletons_plus_allneg(m);
        std::vector<int> pts(m);
        for (int i = 0; i < m; ++i) pts[i] = i;
        const auto P = FinDiscreteMarginal::uniform(pts);
        for (double eps : {1.0 / 3.0, 0.1})
            CHECK(disagreement_coefficient(C, m, P, eps) == doctest::Approx(std::min<double>(m, 1.0 / eps)));
        CHECK(disagreement_coefficient(C, m, P, 0.0) == doctest::Approx(m));
    }
    // a ball that is a single hypothesis floors at 1
    const HypothesisClass two(InstanceDomain(2), {{1, 1}, {-1, -1}});
    CHECK(disagreement_coefficient(two, 0, FinDiscreteMarginal::uniform({0, 1}), 0.5) == 1.0);
}

TEST_CASE("split count examples") {
    const auto C = build_singletons_plus_allneg(4);
    CHECK(split_count(C, {}, 0) == 0);
    CHECK(split_count(C, {{0, 4}}, 0) == 1);
    std::vector<std::pair<int, int>> star{{4, 0}, {4, 1}, {4, 2}, {4, 3}};
    for (int x = 0; x < 4; ++x) CHECK(split_count(C, star, x) == 1);
}

TEST_CASE("splittability and ring rho match pair-set enumeration") {
    std::mt19937_64 rng(25);
    int checked = 0;
    for (int t = 0; t < 60; ++t) {
        const auto C = oracle::random_class(rng, 5, 6);
        const auto P = oracle::random_marginal(rng, C.num_points(), 4);
        const auto H = all_rows(C);
        for (double rho : {0.25, 0.5}) {
            CHECK(is_splittable(C, H, rho, 0.2, 0.3, P) == oracle::splittable(C, H, rho, 0.2, 0.3, P));
        }
        if (oracle::pairs_where(C, H, P, 0.0).empty()) {
            CHECK_THROWS_AS(ring_rho(C, P), SizeError);
            continue;
        }
        const auto r = ring_rho(C, P);
        const auto o = oracle::ring_rho(C, P);
        CHECK(r.num == o.first);
        CHECK(r.den == o.second);
        ++checked;
    }
    CHECK(checked > 20);
}

TEST_CASE("ring rho and splittability on the star construction") {
    for (int m : {2, 3, 5}) {
        const auto C = build_singletons_plus_allneg(m);
        std::vector<int> pts(m);
        for (int i = 0; i < m; ++i) pts[i] = i;
        const auto P = FinDiscreteMarginal::uniform(pts);
        CHECK(ring_rho(C, P) == Rational{1, m});
        CHECK_FALSE(is_splittable(C, all_rows(C), 1.0 / m + 0.01, 1.0 / m, 1e-6, P));
    }
    const HypothesisClass two(InstanceDomain(2), {{1, 1}, {-1, 1}});
    CHECK(ring_rho(two, FinDiscreteMarginal::uniform({0, 1})) == Rational{1, 1});
    CHECK(is_splittable(two, {0, 1}, 0.5, 0.9, 0.5, FinDiscreteMarginal::uniform({0, 1})));
}

TEST_CASE("covering number matches exhaustive set cover") {
    std::mt19937_64 rng(26);
    for (int t = 0; t < 40; ++t) {
        const auto C = oracle::random_class(rng, 6, 10);
        const auto P = oracle::random_marginal(rng, C.num_points(), 6);
        const auto H = all_rows(C);
        for (double r : {0.0, 0.1, 0.25, 0.5}) {
            const auto rep = covering_number(C, H, r, P);
            CHECK(rep.exactness == Exactness::exact);
            CHECK(rep.value == oracle::cover(C, H, r, P));
            const auto greedy = covering_number(C, H, r, P, {}, true);
            CHECK(greedy.value >= rep.value);
        }
        CHECK(covering_number(C, H, 1.0, P).value == 1);
    }
    const int m = 5;
    const auto S = build_singletons_plus_allneg(m);
    const auto Pm = FinDiscreteMarginal::uniform({0, 1, 2, 3, 4});
    CHECK(covering_number(S, all_rows(S), 1.0 / (2 * m), Pm).value >= m + 1);
}

TEST_CASE("doubling dimension matches a dense radius sweep") {
    std::mt19937_64 rng(27);
    for (int t = 0; t < 30; ++t) {
        const auto C = oracle::random_class(rng, 5, 8);
        const auto P = oracle::random_marginal(rng, C.num_points(), 5);
        const int h = static_cast<int>(rng() % C.size());
        for (double eps : {0.05, 0.2}) {
            const auto D = doubling_dimension(C, h, P, eps);
            CHECK(D.value == doctest::Approx(oracle::doubling_sweep(C, h, P, eps)));
        }
    }
    for (int m : {2, 4, 7}) {
        const auto C = build_singletons_plus_allneg(m);
        std::vector<int> pts(m);
        for (int i = 0; i < m; ++i) pts[i] = i;
        CHECK(doubling_dimension(C, m, FinDiscreteMarginal::uniform(pts), 1.0 / m).value >= std::log2(m + 1.0) - 1e-12);
    }
    // the radius-1 ball holds both rows, which no half-radius ball covers together
    const HypothesisClass two(InstanceDomain(2), {{1, 1}, {-1, -1}});
    CHECK(doubling_dimension(two, 0, FinDiscreteMarginal::uniform({0, 1}), 0.5).value == 1.0);
}

TEST_CASE("marginal validation") {
    FinDiscreteMarginal P{{0, 1}, {0.5, 0.6}};
    CHECK_THROWS_AS(P.validate(2), DomainError);
    FinDiscreteMarginal Q{{0, 0}, {0.5, 0.5}};
    CHECK_THROWS_AS(Q.validate(2), DomainError);
    CHECK_NOTHROW(FinDiscreteMarginal::uniform({0, 1, 2}).validate(3));
}
