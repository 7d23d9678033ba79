#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "almlab/hypothesis.hpp"
#include "almlab/noise.hpp"

namespace almlab {

namespace constants {
inline constexpr double c0 = 16384.0;
inline constexpr double c = 10.0 * c0;
inline constexpr double c_prime = (10.0 * c0 > 6.0 * c) ? 10.0 * c0 : 6.0 * c;
inline constexpr double c_tilde = c0;
inline constexpr double c_tilde_prime = (8.0 * c_tilde > 128.0) ? 8.0 * c_tilde : 128.0;
}  // namespace constants

// max{ln x, 1}
double Log(double x);
// max(1, ceil(scale * raw)); the single place where constant_scale enters.
std::int64_t scaled_size(double raw, double scale);

// Label source over a lazily sampled stream. Labels are pure functions of the
// stream index, so repeated requests see the same value; every request counts.
class QueryOracle {
public:
    QueryOracle(JointDistribution dist, std::uint64_t seed, std::int64_t budget);

    int point(std::int64_t i) const { return sampler_.point(static_cast<std::uint64_t>(i)); }
    std::optional<Label> request(std::int64_t i);
    std::int64_t queries() const { return queries_; }
    std::int64_t budget() const { return budget_; }
    bool exhausted() const { return queries_ >= budget_; }
    const JointDistribution& dist() const { return dist_; }
    std::uint64_t seed() const { return sampler_.seed(); }

private:
    JointDistribution dist_;
    StreamSampler sampler_;
    std::int64_t budget_;
    std::int64_t queries_ = 0;
};

// Three interleaved sub-streams of one oracle: X1_m = X_{3(m-1)+1}, X2_m = X_{3(m-1)+2},
// X3_j = X_{3j} (1-based), with X3_{m,l} = X3_{phi(m,l)} for the Cantor pairing phi.
class SplitOracle {
public:
    explicit SplitOracle(QueryOracle& base) : base_(base) {}

    static std::int64_t pair_index(std::int64_t m, std::int64_t l);
    static std::int64_t x1_index(std::int64_t m) { return 3 * (m - 1); }
    static std::int64_t x2_index(std::int64_t m) { return 3 * (m - 1) + 1; }
    static std::int64_t x3_index(std::int64_t m, std::int64_t l) { return 3 * pair_index(m, l) - 1; }

    int x1(std::int64_t m) const { return base_.point(x1_index(m)); }
    int x2(std::int64_t m) const { return base_.point(x2_index(m)); }
    int x3(std::int64_t m, std::int64_t l) const { return base_.point(x3_index(m, l)); }
    std::optional<Label> request_x3(std::int64_t m, std::int64_t l) { return base_.request(x3_index(m, l)); }

    QueryOracle& base() { return base_; }
    const QueryOracle& base() const { return base_; }

private:
    QueryOracle& base_;
};

struct TraceStep {
    std::int64_t index = 0;
    int point = 0;
    int label = 0;
    std::int64_t vsize = 0;
};

struct LearnerResult {
    int hypothesis = 0;
    std::int64_t queries = 0;
    std::int64_t unlabeled = 0;
    bool flagged = false;
    std::string flag;
    std::vector<TraceStep> trace;
    std::vector<double> dis_mass;  // per-round P(DIS(V)) where the learner reports it
};

// Version space over the rows of C with O(1) disagreement tests.
class VersionTracker {
public:
    explicit VersionTracker(const HypothesisClass& C);
    VersionTracker(const HypothesisClass& C, const std::vector<int>& members);

    bool in_dis(int x) const { return pos_[x] > 0 && pos_[x] < size_; }
    int size() const { return size_; }
    bool alive(int h) const { return alive_[h] != 0; }
    int first() const;
    std::vector<int> members() const;
    // Number of members labeling x with y.
    int agreeing(int x, Label y) const { return y > 0 ? pos_[x] : size_ - pos_[x]; }
    void restrict(int x, Label y);
    double dis_mass(const FinDiscreteMarginal& P) const;
    bool dis_hits_support(const FinDiscreteMarginal& P) const;

private:
    const HypothesisClass& C_;
    std::vector<char> alive_;
    std::vector<int> pos_;
    int size_ = 0;
};

LearnerResult erm_passive(const LabeledSample& sample, const HypothesisClass& C);

LearnerResult cal(QueryOracle& oracle, const HypothesisClass& C, std::int64_t max_unlabeled, bool trace = false);

// U is given as stream indices of the oracle; labels are requested at those indices.
LearnerResult memb_halving2(const HypothesisClass& C, const std::vector<std::int64_t>& U, QueryOracle& oracle,
                            std::int64_t budget, bool trace = false);

struct EpsNetPlan {
    std::int64_t m = 0;
    std::int64_t ell = 0;
    std::int64_t blocks = 0;
    std::int64_t total() const { return m * blocks + ell; }
};
EpsNetPlan eps_net_plan(int d, double eps, double delta, double scale);

struct EpsNetSelection {
    int block = 0;  // 0-based
    std::vector<int> points;
    std::vector<std::int64_t> scores;
};
EpsNetSelection epsilon_net_select(const std::vector<int>& stream, const HypothesisClass& C, double eps,
                                   double delta, double scale);
EpsNetSelection epsilon_net_select_sized(const std::vector<int>& stream, const HypothesisClass& C, std::int64_t m,
                                         std::int64_t ell, std::int64_t blocks);

struct Partition {
    std::vector<int> cell_of;  // per domain point
    int cells = 0;
};
Partition partition_J(const std::vector<int>& sample, const HypothesisClass& C);
std::int64_t partition_sample_size(int d, double tau, double delta, double scale);

// Distinct points among X1_1..X1_N of the split stream. Long prefixes are
// replaced by an exact coupon-collector simulation with the same law.
std::vector<int> distinct_x1_prefix(const SplitOracle& so, std::int64_t N, std::int64_t literal_limit = 1 << 22);

struct Alg0Plan {
    double delta_prime = 0.0;
    std::int64_t ell = 0;
    std::int64_t m = 0;
    std::int64_t blocks = 0;
    std::int64_t jtilde = 0;
};
Alg0Plan alg0_plan(int s_value, double eps, double delta, double scale);

LearnerResult algorithm0(QueryOracle& oracle, const HypothesisClass& C, int s_value, double eps, double delta,
                         double scale, bool trace = false);

struct Alg1Params {
    double eps = 0.1;
    double delta = 0.1;
    double gamma_hat = 0.5;
    double scale = 1.0;
    int d = 1;
    int k_eps = 0;
    std::vector<std::int64_t> m_tilde_k;  // index k, entries 2..k_eps+1 used
    std::int64_t m_tilde = 0;
    std::int64_t q_eps_delta = 0;
    double tau = 0.0;
    std::int64_t partition_n = 0;
    double log_term = 0.0;  // ln(32 m~ q_{eps,delta} / delta)

    static Alg1Params derive(double eps, double delta, double gamma_hat, int d, double scale);
    int k_tilde(std::int64_t m) const;
    double q_tilde(std::int64_t m) const;
    double threshold(std::int64_t q) const;
};

struct Sub1Result {
    std::int64_t q = 0;
    int y = 0;
    long long sigma = 0;
    bool starved = false;
};
Sub1Result subroutine1(SplitOracle& so, std::int64_t m, std::int64_t budget, const Alg1Params& params,
                       const Partition& J, std::int64_t scan_cap = 10'000'000);

struct Alg1Call {
    std::int64_t m = 0;
    int point = 0;
    Sub1Result result;
    bool applied = false;
};
struct Alg1Result {
    LearnerResult result;
    std::vector<Alg1Call> calls;
    int cells = 0;
};
Alg1Result algorithm1(SplitOracle& so, const HypothesisClass& C, std::int64_t budget, const Alg1Params& params);

enum class NoiseModel { RE, BN, TN, BC, BE, AG };
const char* to_string(NoiseModel m);
NoiseModel parse_noise_model(const std::string& s);

struct GammaHatArgs {
    double eps = 0.1;
    double beta = 0.25;
    double a = 1.0;
    double alpha = 0.5;
    double nu = 0.0;
};
double gamma_hat_default(NoiseModel model, const GammaHatArgs& args);

}  // namespace almlab
