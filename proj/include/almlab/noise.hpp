#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "almlab/complexity.hpp"
#include "almlab/hypothesis.hpp"

namespace almlab {

struct JointDistribution {
    FinDiscreteMarginal marginal;
    std::vector<double> eta;  // P(Y=+1 | X=x) per support point

    void validate(int n) const;
};

struct BayesResult {
    std::vector<Label> labels;  // aligned with the support; sign(0) = +1
    double error = 0.0;
    // full-domain labeling, +1 off the support
    std::vector<Label> labeling(int n, const FinDiscreteMarginal& P) const;
};

BayesResult bayes(const JointDistribution& dist);

// h is a full-domain labeling
double error_rate(const std::vector<Label>& h, const JointDistribution& dist);
double error_rate(const HypothesisClass& C, int row, const JointDistribution& dist);
double best_error(const HypothesisClass& C, const JointDistribution& dist);
double excess_error(const std::vector<Label>& h, const JointDistribution& dist, const HypothesisClass& C);
double excess_error(const HypothesisClass& C, int row, const JointDistribution& dist);

struct GammaProfile {
    std::vector<double> gamma_x;
    double gamma_eps = 0.5;
};
GammaProfile gamma_profile(const JointDistribution& dist, double eps);

// Tsybakov constant a' = (1-alpha)(2 alpha)^{alpha/(1-alpha)} a^{1/(1-alpha)}
double tsybakov_a_prime(double a, double alpha);

struct NoiseParams {
    double beta = 0.25;
    double nu = 0.1;
    double a = 1.0;
    double alpha = 0.5;
    std::vector<double> grid_a{1, 2, 4, 8, 16};
    std::vector<double> grid_alpha{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
};

struct GridCell {
    double a = 0.0;
    double alpha = 0.0;
    bool tn = false;
    bool bc = false;
};

struct NoiseReport {
    bool re = false, bn = false, tn = false, bc = false, be = false, ag = false;
    bool bayes_in_class = false;
    double beta_star = 0.5;  // smallest beta with the margin condition (0.5 when none)
    double nu_be = 1.0;      // bayes error when the bayes labeling is realized, else 1
    double nu_ag = 1.0;      // best error in the class
    std::vector<GridCell> grid;
    BayesResult bayes;
    NoiseParams params;
};

bool in_tsybakov(const JointDistribution& dist, const HypothesisClass& C, double a, double alpha);
bool in_bernstein(const JointDistribution& dist, const HypothesisClass& C, double a, double alpha);
NoiseReport classify_noise(const JointDistribution& dist, const HypothesisClass& C, const NoiseParams& params = {});

JointDistribution make_realizable(const HypothesisClass& C, int target, const FinDiscreteMarginal& marginal);

// k distributions; member t (1-based) makes witness h_t the bayes classifier.
std::vector<JointDistribution> rr_family(const HypothesisClass& C, const StarWitness& witness, int k, double zeta,
                                         double beta);

// Draws X_i and Y_i as pure functions of (seed, i).
class StreamSampler {
public:
    StreamSampler(const JointDistribution& dist, std::uint64_t seed);
    int point(std::uint64_t i) const;
    Label label(std::uint64_t i) const;
    double eta_at(int x) const { return eta_by_point_.at(x); }
    std::uint64_t seed() const { return seed_; }

private:
    std::vector<double> cum_;
    std::vector<int> pts_;
    std::vector<double> eta_by_point_;
    std::uint64_t seed_;
    int last_positive_ = 0;
};

LabeledSample sample_stream(const JointDistribution& dist, std::uint64_t seed, std::int64_t count);

void write_dist(std::ostream& os, const JointDistribution& dist);
JointDistribution read_dist(std::istream& is);

}  // namespace almlab
