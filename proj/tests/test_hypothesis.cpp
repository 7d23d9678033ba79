#include <doctest.h>

#include <random>
#include <sstream>

#include "almlab/hypothesis.hpp"
#include "oracles.hpp"

using namespace almlab;

TEST_CASE("builders produce the expected row counts") {
    CHECK(build_thresholds(InstanceDomain::uniform_grid(8)).size() == 9);
    CHECK(build_intervals(InstanceDomain::uniform_grid(4)).size() == 4 * 5 / 2 + 1);
    CHECK(build_singletons_plus_allneg(5).size() == 6);
    CHECK(build_gap_lower(6, 2).size() == 4 + 4);
    CHECK(build_gap_upper(5, 2).size() == 1 + 5 + 10);
    CHECK(builtin_class("thresholds:8") == build_thresholds(InstanceDomain::uniform_grid(8)));
    CHECK_THROWS_AS(builtin_class("zigzag:3"), DomainError);
    CHECK_THROWS_AS(build_gap_upper(20, 10), SizeError);
}

TEST_CASE("duplicate rows are rejected at construction") {
    std::vector<std::vector<Label>> rows{{1, -1}, {1, -1}, {-1, -1}};
    CHECK_THROWS_AS(HypothesisClass(InstanceDomain(2), rows), DomainError);
    CHECK(HypothesisClass::merged(InstanceDomain(2), rows).size() == 2);
    CHECK_THROWS_AS(HypothesisClass(InstanceDomain(2), {{1, 1}}), DomainError);
}

TEST_CASE("min-width intervals respect the width") {
    const auto grid = InstanceDomain::uniform_grid(16);
    const auto C = build_min_width_intervals(grid, 0.5);
    // any positive run of a row spans at least half the grid's coordinate range minus one gap
    for (int h = 0; h < C.size(); ++h) {
        int first = -1, last = -1;
        for (int x = 0; x < C.num_points(); ++x)
            if (C.at(h, x) > 0) {
                if (first < 0) first = x;
                last = x;
            }
        if (first < 0) continue;
        for (int x = first; x <= last; ++x) CHECK(C.at(h, x) > 0);
        if (first > 0 && last < C.num_points() - 1) CHECK(grid.coord(last + 1) - grid.coord(first - 1) > 0.5);
    }
}

TEST_CASE("vc dimension matches subset enumeration") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 60; ++t) {
        const auto C = oracle::random_class(rng, 6, 14);
        CHECK(vc_dimension(C).d == oracle::vc_dimension(C));
    }
    CHECK(vc_dimension(builtin_class("thresholds:10")).d == 1);
    CHECK(vc_dimension(builtin_class("intervals:10")).d == 2);
    CHECK(vc_dimension(builtin_class("gap_lower:6:2")).d == 2);
}

TEST_CASE("induced labelings and restriction agree with grouping by value") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 40; ++t) {
        const auto C = oracle::random_class(rng, 7, 12);
        std::vector<int> U;
        for (int x = 0; x < C.num_points(); ++x)
            if (rng() & 1) U.push_back(x);
        const auto reps = induced_labelings(C, U);
        CHECK(reps.size() == oracle::restrictions(C, U).size());
        CHECK(std::is_sorted(reps.begin(), reps.end()));
        const auto R = restrict_to(C, U);
        CHECK(R.cls.size() == static_cast<int>(reps.size()));
        CHECK(R.cls.num_points() == static_cast<int>(U.size()));
    }
}

TEST_CASE("version space filters rows and yields the disagreement region") {
    const auto C = builtin_class("thresholds:8");
    LabeledSample S;
    S.pairs = {{2, -1}, {5, 1}};
    const auto V = version_space(C, S);
    for (int h = 0; h < C.size(); ++h) {
        const bool keep = C.at(h, 2) < 0 && C.at(h, 5) > 0;
        CHECK(keep == (std::find(V.members.begin(), V.members.end(), h) != V.members.end()));
    }
    const auto dis = disagreement_region(V);
    REQUIRE(dis.has_value());
    CHECK(*dis == std::vector<int>{3, 4});
    S.pairs.push_back({6, -1});
    CHECK_FALSE(disagreement_region(version_space(C, S)).has_value());
}

TEST_CASE("class files round trip") {
    const auto C = builtin_class("intervals:5");
    std::stringstream ss;
    write_class(ss, C);
    const auto D = read_class(ss);
    CHECK(D == C);
    CHECK(D.names() == C.names());
    std::stringstream bad("almclass v1 |X|=2 |C|=2\n+-\n+-\n");
    CHECK_THROWS(read_class(bad));
}
