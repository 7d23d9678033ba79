#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "almlab/complexity.hpp"
#include "almlab/hypothesis.hpp"
#include "almlab/learners.hpp"
#include "almlab/noise.hpp"

namespace almlab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Wilson {
    double lo = 0.0;
    double hi = 1.0;
};
Wilson wilson(std::int64_t successes, std::int64_t trials, double z = 1.959964);

// Accepts "builtin:<spec>", a bare builtin spec, or a path to a class file.
HypothesisClass load_class(const std::string& spec);

struct ExperimentConfig {
    // [class]
    std::string class_spec;
    // [dist]
    std::string dist_kind = "realizable";  // realizable | rr | file
    std::string support = "all";           // all | first:K | eps_star
    std::string targets = "all";           // all | comma list of rows
    int rr_k = 0;
    double rr_zeta = 0.0;
    double rr_beta = 0.0;
    std::string dist_path;
    // [learner]
    std::string algo;
    double scale = 1.0;
    std::optional<double> gamma_hat;
    std::optional<int> s_value;
    std::int64_t max_unlabeled = 10'000'000;
    std::int64_t pool = 100;
    // [run]
    std::vector<double> eps;
    double delta = 0.0;
    int trials = 0;
    std::uint64_t seed = 1;
    std::int64_t n_cap = 1 << 20;
    std::vector<std::int64_t> budgets;  // fixed budgets; empty means search
    std::string csv;
    std::string json;
    std::string svg;

    std::vector<std::string> warnings;
};

ExperimentConfig parse_config(std::istream& is, const std::string& origin = "<config>");
ExperimentConfig load_config(const std::string& path);

struct Member {
    std::string label;
    JointDistribution dist;
    double best = 0.0;  // inf over C of the error rate
};

struct TrialRecord {
    std::string noise;
    int member = 0;
    double eps = 0.0;
    int trial = 0;
    std::int64_t budget = 0;
    std::int64_t queries = 0;
    double excess = 0.0;
    bool success = false;
};

struct SearchStep {
    std::int64_t n = 0;
    std::int64_t successes = 0;
    Wilson ci;
    bool ok = false;
};

struct MemberLC {
    std::string label;
    std::int64_t n_hat = 0;
    bool capped = false;
    Wilson ci;
    std::int64_t successes = 0;
    std::vector<SearchStep> search;
};

struct EmpiricalLC {
    double eps = 0.0;
    std::int64_t n_hat = 0;  // empirical worst case over the family
    bool capped = false;
    std::vector<MemberLC> members;
};

// A configured experiment with everything derived from the config resolved once.
class Experiment {
public:
    explicit Experiment(ExperimentConfig cfg);

    const ExperimentConfig& config() const { return cfg_; }
    const HypothesisClass& cls() const { return C_; }
    std::vector<Member> family(double eps) const;
    TrialRecord run_trial(const Member& m, int member, double eps, std::int64_t budget, int trial) const;
    // All trials at one budget, in trial order; trials run in parallel.
    std::vector<TrialRecord> run_trials(const Member& m, int member, double eps, std::int64_t budget) const;
    // For alg1 each trace step is one Subroutine 1 call: stream index of X2_m, the point,
    // the returned label (0 for none) and the labels it used in vsize.
    LearnerResult run_learner(QueryOracle& oracle, double eps, bool trace = false) const;

private:
    std::vector<Member> with_best(std::vector<Member>& fam) const;

    ExperimentConfig cfg_;
    HypothesisClass C_;
    int d_ = 1;
    int s_ = 1;
    StarWitness witness_;
};

// Doubling then bisection per member; family value is the max over members.
// Every evaluated trial is appended to records when given.
EmpiricalLC measure_label_complexity(const Experiment& ex, double eps, std::vector<TrialRecord>* records = nullptr);

struct CheckResult {
    std::string name;
    bool passed = true;
    bool partial = false;
    std::string detail;
};

struct VerifyLimits {
    int random_instances = 8;
    int max_m = 4;
    int marginals = 8;
};

std::vector<CheckResult> verify_equivalences(const HypothesisClass& C, const VerifyLimits& limits,
                                             std::uint64_t seed);

std::string csv_header();
void write_csv(std::ostream& os, const Experiment& ex, const std::vector<TrialRecord>& records);
void write_svg(std::ostream& os, const std::vector<EmpiricalLC>& curve);

// Runs every configured eps and writes the outputs named in the config.
// Returns 0 on success; diagnostics go to err.
int run_config(const std::string& path, std::ostream& err, const std::string& svg_override = "");

}  // namespace almlab
