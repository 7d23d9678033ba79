#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace almlab {

using Label = std::int8_t;

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raised when an exact search would exceed its configured cap. `bound` carries
// the best value found so far (lower or upper, depending on the routine).
struct SizeError : std::runtime_error {
    SizeError(const std::string& what, long long bound_)
        : std::runtime_error(what), bound(bound_) {}
    long long bound;
};

struct Limits {
    std::size_t max_class = 4096;
    std::uint64_t max_states = 1ull << 24;
};

class InstanceDomain {
public:
    InstanceDomain() = default;
    explicit InstanceDomain(int n);
    explicit InstanceDomain(std::vector<double> coords);

    int size() const { return n_; }
    bool has_coords() const { return !coords_.empty(); }
    const std::vector<double>& coords() const { return coords_; }
    double coord(int x) const { return coords_.at(x); }

    // n points evenly spaced on [0,1]
    static InstanceDomain uniform_grid(int n);

private:
    int n_ = 0;
    std::vector<double> coords_;
};

class HypothesisClass {
public:
    HypothesisClass() = default;
    // Rows must be distinct and of length |X|. Fewer than two rows is rejected
    // unless allow_single is set (restrictions C[U] may collapse to one row).
    HypothesisClass(InstanceDomain domain, std::vector<std::vector<Label>> rows,
                    std::vector<std::string> names = {}, bool allow_single = false);

    // Keeps the first occurrence of each distinct row.
    static HypothesisClass merged(InstanceDomain domain, std::vector<std::vector<Label>> rows,
                                  std::vector<std::string> names = {});

    int size() const { return m_; }
    int num_points() const { return domain_.size(); }
    const InstanceDomain& domain() const { return domain_; }
    Label at(int h, int x) const { return data_[static_cast<std::size_t>(h) * n_ + x]; }
    const Label* row(int h) const { return data_.data() + static_cast<std::size_t>(h) * n_; }
    std::vector<Label> row_vector(int h) const { return {row(h), row(h) + n_}; }
    const std::vector<std::string>& names() const { return names_; }

    // Index of the row equal to `labels`, if any.
    std::optional<int> find(const std::vector<Label>& labels) const;

    // Class with `labels` appended unless already present; returns the index of that row.
    std::pair<HypothesisClass, int> with_row(const std::vector<Label>& labels) const;

    bool operator==(const HypothesisClass& o) const {
        return n_ == o.n_ && m_ == o.m_ && data_ == o.data_;
    }

private:
    InstanceDomain domain_;
    int n_ = 0;
    int m_ = 0;
    std::vector<Label> data_;
    std::vector<std::string> names_;
};

struct LabeledSample {
    std::vector<std::pair<int, Label>> pairs;
};

struct VersionSpace {
    const HypothesisClass* cls = nullptr;
    std::vector<int> members;
    LabeledSample constraints;
};

HypothesisClass build_thresholds(const InstanceDomain& grid);
HypothesisClass build_intervals(const InstanceDomain& grid);
// Endpoint lattice is the grid plus `subdiv` evenly spaced points inside every
// gap, plus one point beyond each end of the grid.
HypothesisClass build_min_width_intervals(const InstanceDomain& grid, double w, int subdiv = 1);
HypothesisClass build_gap_upper(int s, int d, std::size_t cap = 4096);
HypothesisClass build_gap_lower(int s, int d, std::size_t cap = 4096);
HypothesisClass build_singletons_plus_allneg(int n);

// nullopt when V has no members.
std::optional<std::vector<int>> disagreement_region(const VersionSpace& V);

struct VcResult {
    int d = 0;
    std::vector<int> witness;
};
VcResult vc_dimension(const HypothesisClass& C, const Limits& lim = {});

// One representative row per distinct restriction to U, lowest row index first.
std::vector<int> induced_labelings(const HypothesisClass& C, const std::vector<int>& U);

// C[U] as a class over the points of U (position i stands for U[i]).
struct Restriction {
    HypothesisClass cls;
    std::vector<int> reps;
};
Restriction restrict_to(const HypothesisClass& C, const std::vector<int>& U);

VersionSpace version_space(const HypothesisClass& C, const LabeledSample& S);

void write_class(std::ostream& os, const HypothesisClass& C);
HypothesisClass read_class(std::istream& is);

// "thresholds:N", "intervals:N", "minwidth:N:W", "gap_upper:S:D", "gap_lower:S:D",
// "singletons:N"
HypothesisClass builtin_class(const std::string& spec);

}  // namespace almlab
