#include "almlab/hypothesis.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace almlab {

namespace {

std::string row_key(const Label* r, int n) {
    return std::string(reinterpret_cast<const char*>(r), static_cast<std::size_t>(n));
}

std::uint64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
    return r;
}

}  // namespace

InstanceDomain::InstanceDomain(int n) : n_(n) {
    if (n < 0) throw DomainError("domain size must be nonnegative");
}

InstanceDomain::InstanceDomain(std::vector<double> coords)
    : n_(static_cast<int>(coords.size())), coords_(std::move(coords)) {
    for (std::size_t i = 1; i < coords_.size(); ++i)
        if (!(coords_[i] > coords_[i - 1]))
            throw DomainError("coordinates must be strictly increasing");
}

InstanceDomain InstanceDomain::uniform_grid(int n) {
    if (n < 1) throw DomainError("grid needs at least one point");
    std::vector<double> c(n);
    for (int i = 0; i < n; ++i) c[i] = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    return InstanceDomain(std::move(c));
}

HypothesisClass::HypothesisClass(InstanceDomain domain, std::vector<std::vector<Label>> rows,
                                 std::vector<std::string> names, bool allow_single)
    : domain_(std::move(domain)), n_(domain_.size()), m_(static_cast<int>(rows.size())),
      names_(std::move(names)) {
    if (m_ < (allow_single ? 1 : 2))
        throw DomainError("hypothesis class needs at least two rows");
    if (!names_.empty() && names_.size() != rows.size())
        throw DomainError("names must match row count");
    data_.reserve(static_cast<std::size_t>(m_) * n_);
    std::unordered_set<std::string> seen;
    for (int h = 0; h < m_; ++h) {
        const auto& r = rows[h];
        if (static_cast<int>(r.size()) != n_)
            throw DomainError("row " + std::to_string(h) + " has wrong length");
        for (Label v : r)
            if (v != 1 && v != -1) throw DomainError("labels must be -1 or +1");
        if (!seen.insert(row_key(r.data(), n_)).second)
            throw DomainError("duplicate row " + std::to_string(h));
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

HypothesisClass HypothesisClass::merged(InstanceDomain domain, std::vector<std::vector<Label>> rows,
                                        std::vector<std::string> names) {
    std::unordered_set<std::string> seen;
    std::vector<std::vector<Label>> kept;
    std::vector<std::string> kept_names;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!seen.insert(row_key(rows[i].data(), static_cast<int>(rows[i].size()))).second) continue;
        kept.push_back(std::move(rows[i]));
        if (!names.empty()) kept_names.push_back(names[i]);
    }
    return HypothesisClass(std::move(domain), std::move(kept), std::move(kept_names));
}

std::optional<int> HypothesisClass::find(const std::vector<Label>& labels) const {
    if (static_cast<int>(labels.size()) != n_) return std::nullopt;
    for (int h = 0; h < m_; ++h)
        if (std::equal(labels.begin(), labels.end(), row(h))) return h;
    return std::nullopt;
}

std::pair<HypothesisClass, int> HypothesisClass::with_row(const std::vector<Label>& labels) const {
    if (auto h = find(labels)) return {*this, *h};
    std::vector<std::vector<Label>> rows;
    for (int h = 0; h < m_; ++h) rows.push_back(row_vector(h));
    rows.push_back(labels);
    std::vector<std::string> nm = names_;
    if (!nm.empty()) nm.push_back("extra");
    return {HypothesisClass(domain_, std::move(rows), std::move(nm), true), m_};
}

HypothesisClass build_thresholds(const InstanceDomain& grid) {
    if (grid.size() < 1) throw DomainError("empty grid");
    if (!grid.has_coords()) throw DomainError("thresholds need coordinates");
    const int n = grid.size();
    std::vector<std::vector<Label>> rows;
    std::vector<std::string> names;
    for (int t = 0; t <= n; ++t) {
        std::vector<Label> r(n);
        for (int x = 0; x < n; ++x) r[x] = (t < n && grid.coord(x) >= grid.coord(t)) ? 1 : -1;
        rows.push_back(std::move(r));
        names.push_back(t < n ? "t>=" + std::to_string(t) : "allneg");
    }
    return HypothesisClass::merged(grid, std::move(rows), std::move(names));
}

HypothesisClass build_intervals(const InstanceDomain& grid) {
    if (grid.size() < 1) throw DomainError("empty grid");
    if (!grid.has_coords()) throw DomainError("intervals need coordinates");
    const int n = grid.size();
    std::vector<std::vector<Label>> rows;
    std::vector<std::string> names;
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            std::vector<Label> r(n, -1);
            for (int x = a; x <= b; ++x) r[x] = 1;
            rows.push_back(std::move(r));
            names.push_back("[" + std::to_string(a) + "," + std::to_string(b) + "]");
        }
    rows.emplace_back(n, -1);
    names.emplace_back("allneg");
    return HypothesisClass::merged(grid, std::move(rows), std::move(names));
}

HypothesisClass build_min_width_intervals(const InstanceDomain& grid, double w, int subdiv) {
    if (!(w > 0.0 && w < 1.0)) throw DomainError("width must lie in (0,1)");
    if (grid.size() < 1) throw DomainError("empty grid");
    if (!grid.has_coords()) throw DomainError("intervals need coordinates");
    if (subdiv < 0) throw DomainError("subdiv must be nonnegative");
    const auto& c = grid.coords();
    const int n = grid.size();
    std::vector<double> lat;
    lat.push_back(c.front() - 1.0);
    for (int i = 0; i < n; ++i) {
        lat.push_back(c[i]);
        if (i + 1 < n)
            for (int j = 1; j <= subdiv; ++j)
                lat.push_back(c[i] + (c[i + 1] - c[i]) * j / (subdiv + 1));
    }
    lat.push_back(c.back() + 1.0);
    std::vector<std::vector<Label>> rows;
    for (std::size_t i = 0; i < lat.size(); ++i)
        for (std::size_t j = i; j < lat.size(); ++j) {
            if (lat[j] - lat[i] < w - 1e-12) continue;
            std::vector<Label> r(n, -1);
            for (int x = 0; x < n; ++x)
                if (c[x] >= lat[i] && c[x] <= lat[j]) r[x] = 1;
            rows.push_back(std::move(r));
        }
    rows.emplace_back(n, -1);
    return HypothesisClass::merged(grid, std::move(rows));
}

namespace {

InstanceDomain one_based(int s) {
    std::vector<double> c(s);
    for (int i = 0; i < s; ++i) c[i] = i + 1;
    return InstanceDomain(std::move(c));
}

std::vector<Label> indicator(int s, std::uint64_t mask) {
    std::vector<Label> r(s, -1);
    for (int i = 0; i < s; ++i)
        if (mask >> i & 1) r[i] = 1;
    return r;
}

}  // namespace

HypothesisClass build_gap_upper(int s, int d, std::size_t cap) {
    if (d < 1 || d > s) throw DomainError("need 1 <= d <= s");
    if (s > 62) throw SizeError("gap_upper domain too large", 0);
    std::uint64_t total = 0;
    for (int k = 0; k <= d; ++k) total += binom(s, k);
    if (total > cap)
        throw SizeError("gap_upper would have " + std::to_string(total) + " rows", static_cast<long long>(total));
    std::vector<std::vector<Label>> rows;
    for (int k = 0; k <= d; ++k)
        for (std::uint64_t mask = 0; mask < (1ull << s); ++mask)
            if (std::popcount(mask) == k) rows.push_back(indicator(s, mask));
    return HypothesisClass(one_based(s), std::move(rows));
}

HypothesisClass build_gap_lower(int s, int d, std::size_t cap) {
    if (d < 1 || d > s) throw DomainError("need 1 <= d <= s");
    if (d > 62 || (1ull << d) + (s - d) > cap)
        throw SizeError("gap_lower exceeds class cap", d > 62 ? -1 : static_cast<long long>((1ull << d) + (s - d)));
    std::vector<std::vector<Label>> rows;
    for (std::uint64_t mask = 0; mask < (1ull << d); ++mask) rows.push_back(indicator(s, mask));
    for (int i = d; i < s; ++i) {
        std::vector<Label> r(s, -1);
        r[i] = 1;
        rows.push_back(std::move(r));
    }
    return HypothesisClass(one_based(s), std::move(rows));
}

HypothesisClass build_singletons_plus_allneg(int n) {
    if (n < 1) throw DomainError("need n >= 1");
    std::vector<std::vector<Label>> rows;
    std::vector<std::string> names;
    for (int t = 0; t < n; ++t) {
        std::vector<Label> r(n, -1);
        r[t] = 1;
        rows.push_back(std::move(r));
        names.push_back("{" + std::to_string(t) + "}");
    }
    rows.emplace_back(n, -1);
    names.emplace_back("allneg");
    return HypothesisClass(one_based(n), std::move(rows), std::move(names));
}

std::optional<std::vector<int>> disagreement_region(const VersionSpace& V) {
    if (V.members.empty() || !V.cls) return std::nullopt;
    const auto& C = *V.cls;
    std::vector<int> out;
    const int h0 = V.members.front();
    for (int x = 0; x < C.num_points(); ++x)
        for (int h : V.members)
            if (C.at(h, x) != C.at(h0, x)) {
                out.push_back(x);
                break;
            }
    return out;
}

namespace {

bool shatters(const HypothesisClass& C, const std::vector<int>& S) {
    const std::size_t need = std::size_t{1} << S.size();
    if (static_cast<std::size_t>(C.size()) < need) return false;
    std::vector<char> seen(need, 0);
    std::size_t hit = 0;
    for (int h = 0; h < C.size(); ++h) {
        std::size_t key = 0;
        for (std::size_t i = 0; i < S.size(); ++i)
            if (C.at(h, S[i]) > 0) key |= std::size_t{1} << i;
        if (!seen[key]) {
            seen[key] = 1;
            if (++hit == need) return true;
        }
    }
    return false;
}

}  // namespace

VcResult vc_dimension(const HypothesisClass& C, const Limits& lim) {
    VcResult best;
    std::vector<std::vector<int>> level{{}};
    std::set<std::vector<int>> shattered{{}};
    std::uint64_t states = 0;
    const int n = C.num_points();
    while (!level.empty()) {
        std::vector<std::vector<int>> next;
        std::set<std::vector<int>> next_set;
        for (const auto& S : level) {
            const int start = S.empty() ? 0 : S.back() + 1;
            for (int x = start; x < n; ++x) {
                std::vector<int> T = S;
                T.push_back(x);
                bool subsets_ok = true;
                for (std::size_t drop = 0; drop + 1 < T.size() && subsets_ok; ++drop) {
                    std::vector<int> sub;
                    for (std::size_t i = 0; i < T.size(); ++i)
                        if (i != drop) sub.push_back(T[i]);
                    subsets_ok = shattered.count(sub) > 0;
                }
                if (!subsets_ok) continue;
                if (++states > lim.max_states)
                    throw SizeError("vc_dimension search cap exceeded", best.d);
                if (T.size() < 63 && shatters(C, T)) {
                    next.push_back(T);
                    next_set.insert(T);
                }
            }
        }
        if (!next.empty()) {
            best.d = static_cast<int>(next.front().size());
            best.witness = next.front();
        }
        level = std::move(next);
        shattered = std::move(next_set);
    }
    return best;
}

std::vector<int> induced_labelings(const HypothesisClass& C, const std::vector<int>& U) {
    std::unordered_set<std::string> seen;
    std::vector<int> reps;
    std::string key(U.size(), '\0');
    for (int h = 0; h < C.size(); ++h) {
        for (std::size_t i = 0; i < U.size(); ++i) key[i] = static_cast<char>(C.at(h, U.at(i)));
        if (seen.insert(key).second) reps.push_back(h);
    }
    return reps;
}

Restriction restrict_to(const HypothesisClass& C, const std::vector<int>& U) {
    for (int x : U)
        if (x < 0 || x >= C.num_points()) throw DomainError("point outside domain");
    Restriction out;
    out.reps = induced_labelings(C, U);
    std::vector<std::vector<Label>> rows;
    for (int h : out.reps) {
        std::vector<Label> r(U.size());
        for (std::size_t i = 0; i < U.size(); ++i) r[i] = C.at(h, U[i]);
        rows.push_back(std::move(r));
    }
    out.cls = HypothesisClass(InstanceDomain(static_cast<int>(U.size())), std::move(rows), {}, true);
    return out;
}

VersionSpace version_space(const HypothesisClass& C, const LabeledSample& S) {
    for (auto [x, y] : S.pairs) {
        if (x < 0 || x >= C.num_points()) throw DomainError("point outside domain");
        if (y != 1 && y != -1) throw DomainError("labels must be -1 or +1");
    }
    VersionSpace V{&C, {}, S};
    for (int h = 0; h < C.size(); ++h) {
        bool ok = true;
        for (auto [x, y] : S.pairs)
            if (C.at(h, x) != y) {
                ok = false;
                break;
            }
        if (ok) V.members.push_back(h);
    }
    return V;
}

void write_class(std::ostream& os, const HypothesisClass& C) {
    os << "almclass v1 |X|=" << C.num_points() << " |C|=" << C.size() << "\n";
    if (C.domain().has_coords()) {
        os << "coords:";
        char buf[40];
        for (double v : C.domain().coords()) {
            std::snprintf(buf, sizeof buf, " %.17g", v);
            os << buf;
        }
        os << "\n";
    }
    for (int h = 0; h < C.size(); ++h) {
        for (int x = 0; x < C.num_points(); ++x) os << (C.at(h, x) > 0 ? '+' : '-');
        if (!C.names().empty()) os << ' ' << C.names()[h];
        os << "\n";
    }
}

HypothesisClass read_class(std::istream& is) {
    std::string line;
    int lineno = 1;
    if (!std::getline(is, line)) throw DomainError("line 1: missing header");
    int n = -1, m = -1;
    if (std::sscanf(line.c_str(), "almclass v1 |X|=%d |C|=%d", &n, &m) != 2 || n < 0 || m < 0)
        throw DomainError("line 1: bad header");
    std::vector<double> coords;
    std::vector<std::vector<Label>> rows;
    std::vector<std::string> names;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(lineno) + ": ";
        if (line.rfind("coords:", 0) == 0) {
            std::istringstream ss(line.substr(7));
            double v;
            while (ss >> v) coords.push_back(v);
            if (static_cast<int>(coords.size()) != n) throw DomainError(where + "coords count mismatch");
            continue;
        }
        std::string cells = line.substr(0, line.find(' '));
        if (static_cast<int>(cells.size()) != n) throw DomainError(where + "row length mismatch");
        std::vector<Label> r(n);
        for (int x = 0; x < n; ++x) {
            if (cells[x] == '+') r[x] = 1;
            else if (cells[x] == '-') r[x] = -1;
            else throw DomainError(where + "row entries must be + or -");
        }
        rows.push_back(std::move(r));
        if (line.size() > cells.size()) names.push_back(line.substr(cells.size() + 1));
    }
    if (static_cast<int>(rows.size()) != m) throw DomainError("row count does not match header");
    if (!names.empty() && names.size() != rows.size()) throw DomainError("names present on some rows only");
    InstanceDomain dom = coords.empty() ? InstanceDomain(n) : InstanceDomain(std::move(coords));
    return HypothesisClass(std::move(dom), std::move(rows), std::move(names));
}

HypothesisClass builtin_class(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    auto num = [&](std::size_t i) {
        if (i >= parts.size()) throw DomainError("builtin '" + spec + "' is missing an argument");
        return std::stod(parts[i]);
    };
    const std::string& kind = parts.empty() ? spec : parts[0];
    if (kind == "thresholds") return build_thresholds(InstanceDomain::uniform_grid(static_cast<int>(num(1))));
    if (kind == "intervals") return build_intervals(InstanceDomain::uniform_grid(static_cast<int>(num(1))));
    if (kind == "minwidth")
        return build_min_width_intervals(InstanceDomain::uniform_grid(static_cast<int>(num(1))), num(2));
    if (kind == "gap_upper") return build_gap_upper(static_cast<int>(num(1)), static_cast<int>(num(2)));
    if (kind == "gap_lower") return build_gap_lower(static_cast<int>(num(1)), static_cast<int>(num(2)));
    if (kind == "singletons") return build_singletons_plus_allneg(static_cast<int>(num(1)));
    throw DomainError("unknown builtin class '" + spec + "'");
}

}  // namespace almlab
