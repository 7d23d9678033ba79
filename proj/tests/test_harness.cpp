#include <doctest.h>

#include <cmath>
#include <sstream>

#include "almlab/complexity.hpp"
#include "almlab/harness.hpp"
#include "almlab/threads.hpp"

using namespace almlab;

namespace {

const char* kBase = R"([class]
spec = thresholds:64

[dist]
kind = realizable
targets = 0,20,64

[learner]
algo = cal

[run]
eps = 0.1, 0.05
delta = 0.1
trials = 100
seed = 3
)";

ExperimentConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "t.cfg");
}

std::string error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("wilson interval") {
    const auto w = wilson(50, 100);
    CHECK(w.lo == doctest::Approx(0.4038).epsilon(1e-3));
    CHECK(w.hi == doctest::Approx(0.5962).epsilon(1e-3));
    const auto all = wilson(20, 20);
    CHECK(all.hi == doctest::Approx(1.0));
    CHECK(all.lo == doctest::Approx(20.0 / (20.0 + 1.959964 * 1.959964)));
    CHECK(wilson(0, 0).lo == 0.0);
}

TEST_CASE("config parsing") {
    const auto cfg = parse(kBase);
    CHECK(cfg.class_spec == "thresholds:64");
    CHECK(cfg.algo == "cal");
    CHECK(cfg.eps == std::vector<double>{0.1, 0.05});
    CHECK(cfg.trials == 100);
    CHECK(cfg.warnings.empty());

    std::string unknown = kBase;
    unknown.insert(unknown.find("[run]") + 6, "colour = red\n");
    CHECK(error_of(unknown) == "t.cfg:12: run.colour: unknown key");

    std::string missing = kBase;
    missing.erase(missing.find("trials = 100"), 13);
    CHECK(error_of(missing).find("missing required key 'run.trials'") != std::string::npos);

    std::string zero = kBase;
    zero.replace(zero.find("trials = 100"), 12, "trials = 0");
    CHECK(error_of(zero).find("run.trials") != std::string::npos);

    std::string dup = kBase;
    dup += "seed = 4\n";
    CHECK(error_of(dup).find("duplicate key") != std::string::npos);

    CHECK(error_of("[nope]\n").find("unknown section") != std::string::npos);

    std::string few = kBase;
    few.replace(few.find("trials = 100"), 12, "trials = 10");
    CHECK(parse(few).warnings.size() == 1);
}

TEST_CASE("csv rows are identical across thread counts") {
    std::string text = kBase;
    text.replace(text.find("trials = 100"), 12, "trials = 40");
    const Experiment ex(parse(text));
    auto run = [&](int threads) {
        set_threads(threads);
        std::vector<TrialRecord> recs;
        measure_label_complexity(ex, 0.1, &recs);
        std::ostringstream os;
        write_csv(os, ex, recs);
        return os.str();
    };
    const auto a = run(1);
    const auto b = run(4);
    apply_thread_cap();
    CHECK(a == b);
    CHECK(a.rfind(csv_header() + "\n", 0) == 0);
    CHECK(csv_header() == "algo,class,noise,eps,delta,trial,budget,queries,excess,success");
}

TEST_CASE("family value is the worst member") {
    const Experiment ex(parse(kBase));
    const auto lc = measure_label_complexity(ex, 0.05);
    REQUIRE(lc.members.size() == 3);
    std::int64_t worst = 0;
    for (const auto& m : lc.members) {
        CHECK(lc.n_hat >= m.n_hat);
        worst = std::max(worst, m.n_hat);
        CHECK_FALSE(m.capped);
        // n_hat passes and n_hat - 1 does not
        bool at = false, below = m.n_hat <= 1;
        for (const auto& s : m.search) {
            if (s.n == m.n_hat) at = s.ok;
            if (s.n == m.n_hat - 1) below = !s.ok;
        }
        CHECK(at);
        CHECK(below);
    }
    CHECK(lc.n_hat == worst);
}

TEST_CASE("equivalence checks on small classes") {
    for (const auto& r : verify_equivalences(builtin_class("gap_lower:6:2"), {}, 5)) {
        INFO(r.name << " " << r.detail);
        CHECK(r.passed);
    }
    const auto T = builtin_class("thresholds:8");
    for (int m = 1; m <= 5; ++m) CHECK(xtd(T, m) == std::min(2, m));
}
