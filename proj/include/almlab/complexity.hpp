#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "almlab/hypothesis.hpp"

namespace almlab {

enum class Exactness { exact, lower_bound, greedy_upper };
const char* to_string(Exactness e);

struct FinDiscreteMarginal {
    std::vector<int> support;
    std::vector<double> weights;

    // Throws DomainError unless weights are nonnegative, sum to 1 within 1e-12,
    // and support points are distinct members of [0, n).
    void validate(int n) const;
    static FinDiscreteMarginal uniform(std::vector<int> points);
};

// P(g != h) summed over the support in support order.
double distance(const HypothesisClass& C, int g, int h, const FinDiscreteMarginal& P);

struct StarWitness {
    int center = -1;
    std::vector<int> points;
    std::vector<int> witnesses;
};

struct StarReport {
    int value = 0;
    StarWitness witness;
    Exactness exactness = Exactness::exact;
};

// Branch and bound over star sets, one search per center, centers searched in parallel.
StarReport star_number(const HypothesisClass& C, const Limits& lim = {});
// Same search, centers visited in order on the calling thread.
StarReport star_number_serial(const HypothesisClass& C, const Limits& lim = {});

std::optional<StarWitness> is_star_set(const HypothesisClass& C, const std::vector<int>& T,
                                       std::optional<int> center = std::nullopt);

struct SpecifyingSet {
    int size = 0;
    std::vector<int> points;  // subset of U, in U order
};

// h is a labeling of U (h[i] labels U[i]). U holds at most 64 distinct points.
SpecifyingSet teaching_dim(const std::vector<Label>& h, const HypothesisClass& C,
                           const std::vector<int>& U, const Limits& lim = {});

struct TdMax {
    int value = 0;
    std::vector<int> U;
    std::vector<Label> h;
};
TdMax xtd_report(const HypothesisClass& C, int m, const Limits& lim = {});
TdMax td_report(const HypothesisClass& C, int m, const Limits& lim = {});
TdMax xtd_report_serial(const HypothesisClass& C, int m, const Limits& lim = {});
TdMax td_report_serial(const HypothesisClass& C, int m, const Limits& lim = {});
inline int xtd(const HypothesisClass& C, int m, const Limits& lim = {}) { return xtd_report(C, m, lim).value; }
inline int td(const HypothesisClass& C, int m, const Limits& lim = {}) { return td_report(C, m, lim).value; }
// max over all labelings of the fixed U
TdMax xtd_on(const HypothesisClass& C, const std::vector<int>& U, const Limits& lim = {});

SpecifyingSet xptd(const std::vector<Label>& h, const HypothesisClass& H, const std::vector<int>& U,
                   double delta, const Limits& lim = {});

// Smallest S within U with V_{S,h} = V_{U,h}, h a row of C.
// max over U of size at most m and over all labelings of U
TdMax xptd_report(const HypothesisClass& H, int m, double delta, const Limits& lim = {});

SpecifyingSet vs_compression_size(const HypothesisClass& C, int h, const std::vector<int>& U,
                                  const Limits& lim = {});

double disagreement_coefficient(const HypothesisClass& C, int h, const FinDiscreteMarginal& P, double r0);

int split_count(const HypothesisClass& C, const std::vector<std::pair<int, int>>& Q, int x);

bool is_splittable(const HypothesisClass& C, const std::vector<int>& H, double rho, double Delta,
                   double tau, const FinDiscreteMarginal& P, const Limits& lim = {});

struct Rational {
    long long num = 0;
    long long den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational& o) const { return num * o.den == o.num * den; }
    bool operator<(const Rational& o) const { return num * o.den < o.num * den; }
};

// Minimum over nonempty pair sets Q of max over the support of Split(Q,x)/|Q|.
// Throws SizeError when there is no pair disagreeing on the support.
Rational ring_rho(const HypothesisClass& C, const FinDiscreteMarginal& P, const Limits& lim = {});

struct CoverReport {
    int value = 0;
    std::vector<int> centers;
    Exactness exactness = Exactness::exact;
};

// Proper cover: centers are drawn from H, and g is covered by c when P(g != c) <= r.
CoverReport covering_number(const HypothesisClass& C, const std::vector<int>& H, double r,
                            const FinDiscreteMarginal& P, const Limits& lim = {}, bool force_greedy = false);

struct DoublingReport {
    double value = 0.0;
    double radius = 0.0;
    int cover = 1;
    Exactness exactness = Exactness::exact;
};
DoublingReport doubling_dimension(const HypothesisClass& C, int h, const FinDiscreteMarginal& P, double eps,
                                  const Limits& lim = {}, bool force_greedy = false);

}  // namespace almlab
