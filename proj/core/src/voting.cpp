#include "pwband/voting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pwband/errors.hpp"

namespace pwband {

namespace {
constexpr double kVoteTolerance = 1e-12;
// Largest usable threshold below 1, so that t = 1 still keeps the unanimity set.
constexpr double kMaxThreshold = 1.0 - 1e-9;
}  // namespace

WeightVector::WeightVector(std::vector<double> w) : w_(std::move(w)) {
    if (w_.empty()) { throw InputError("WeightVector: no weights"); }
    double sum = 0.0;
    for (double v : w_) {
        if (!(v >= 0.0) || !std::isfinite(v)) { throw InputError("WeightVector: weights must be nonnegative"); }
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) { throw InputError("WeightVector: weights must sum to one"); }
}

WeightVector WeightVector::uniform(std::size_t k) {
    if (k == 0) { throw InputError("WeightVector: no weights"); }
    return WeightVector(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

UnionOfIntervals::UnionOfIntervals(std::vector<Interval> parts) {
    for (const auto &p : parts) {
        if (!(p.lo <= p.hi)) { throw InputError("UnionOfIntervals: interval with lo > hi"); }
    }
    std::sort(parts.begin(), parts.end(), [](const Interval &a, const Interval &b) { return a.lo < b.lo; });
    for (const auto &p : parts) {
        if (!parts_.empty() && p.lo <= parts_.back().hi) {
            parts_.back().hi = std::max(parts_.back().hi, p.hi);
        } else {
            parts_.push_back(p);
        }
    }
}

bool UnionOfIntervals::contains(double y, double tol) const {
    return std::any_of(parts_.begin(), parts_.end(),
                       [&](const Interval &p) { return p.lo - tol <= y && y <= p.hi + tol; });
}

Interval UnionOfIntervals::hull() const {
    if (parts_.empty()) { throw InputError("UnionOfIntervals: hull of an empty set"); }
    return {parts_.front().lo, parts_.back().hi};
}

std::string UnionOfIntervals::segments() const {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) { os << ';'; }
        os << parts_[i].lo << ':' << parts_[i].hi;
    }
    return os.str();
}

UnionOfIntervals vote_set(const IntervalCollection &c, const WeightVector &w, double t) {
    if (c.size() != w.size()) { throw InputError("vote_set: weights and intervals differ in count"); }
    if (!(t >= 0.0 && t < 1.0)) { throw InputError("vote_set: threshold must lie in [0, 1)"); }
    std::vector<double> coords;
    coords.reserve(2 * c.size());
    for (const auto &iv : c) {
        if (!iv) { continue; }
        if (!(iv->lo <= iv->hi)) { throw InputError("vote_set: interval with lo > hi"); }
        coords.push_back(iv->lo);
        coords.push_back(iv->hi);
    }
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    const std::size_t m = coords.size();
    if (m == 0) { return {}; }

    // Difference arrays: point i collects intervals with lo <= p_i <= hi, gap i (between
    // p_i and p_{i+1}) those with lo <= p_i and hi >= p_{i+1}.
    std::vector<double> point_votes(m + 1, 0.0);
    std::vector<double> gap_votes(m + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (!c[k] || w[k] == 0.0) { continue; }
        const auto a = static_cast<std::size_t>(std::lower_bound(coords.begin(), coords.end(), c[k]->lo) - coords.begin());
        const auto b = static_cast<std::size_t>(std::lower_bound(coords.begin(), coords.end(), c[k]->hi) - coords.begin());
        point_votes[a] += w[k];
        point_votes[b + 1] -= w[k];
        gap_votes[a] += w[k];
        gap_votes[b] -= w[k];
    }
    std::vector<Interval> parts;
    double pv = 0.0;
    double gv = 0.0;
    bool open = false;
    double start = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        pv += point_votes[i];
        gv += gap_votes[i];
        const bool point_in = pv > t + kVoteTolerance;
        const bool gap_in = i + 1 < m && gv > t + kVoteTolerance;
        if (point_in && !open) {
            open = true;
            start = coords[i];
        }
        if (open && !gap_in) {
            parts.push_back({start, coords[i]});
            open = false;
        }
    }
    return UnionOfIntervals(std::move(parts));
}

UnionOfIntervals majority(const IntervalCollection &c) {
    if (c.size() < 2) { throw InputError("majority: at least two intervals required"); }
    return vote_set(c, WeightVector::uniform(c.size()), 0.5);
}

UnionOfIntervals random_ordering(const IntervalCollection &c, std::span<const std::size_t> perm) {
    const std::size_t k = c.size();
    if (k < 2) { throw InputError("random_ordering: at least two intervals required"); }
    if (perm.size() != k) { throw InputError("random_ordering: permutation has the wrong length"); }
    std::vector<bool> seen(k, false);
    for (std::size_t p : perm) {
        if (p >= k || seen[p]) { throw InputError("random_ordering: not a permutation"); }
        seen[p] = true;
    }
    IntervalCollection prefix;
    prefix.reserve(k);
    UnionOfIntervals result;
    for (std::size_t i = 0; i < k; ++i) {
        prefix.push_back(c[perm[i]]);
        UnionOfIntervals maj = vote_set(prefix, WeightVector::uniform(prefix.size()), 0.5);
        result = i == 0 ? std::move(maj) : intersect(result, maj);
        if (result.empty()) { break; }
    }
    return result;
}

UnionOfIntervals randomized_threshold_half(const IntervalCollection &c, double u) {
    return weighted_randomized(c, WeightVector::uniform(c.size()), u);
}

UnionOfIntervals randomized_threshold_full(const IntervalCollection &c, double u) {
    if (!(u >= 0.0 && u < 1.0)) { throw InputError("randomized_threshold_full: u must lie in [0, 1)"); }
    if (c.empty()) { throw InputError("randomized_threshold_full: no intervals"); }
    return vote_set(c, WeightVector::uniform(c.size()), u);
}

UnionOfIntervals weighted_randomized(const IntervalCollection &c, const WeightVector &w, double u) {
    if (!(u >= 0.0 && u <= 1.0)) { throw InputError("randomized threshold: u must lie in [0, 1]"); }
    return vote_set(c, w, std::min(0.5 * (1.0 + u), kMaxThreshold));
}

double total_length(const UnionOfIntervals &s) {
    double total = 0.0;
    for (const auto &p : s.parts()) { total += p.length(); }
    return total;
}

UnionOfIntervals intersect(const UnionOfIntervals &a, const UnionOfIntervals &b) {
    std::vector<Interval> out;
    const auto &pa = a.parts();
    const auto &pb = b.parts();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < pa.size() && j < pb.size()) {
        const double lo = std::max(pa[i].lo, pb[j].lo);
        const double hi = std::min(pa[i].hi, pb[j].hi);
        if (lo <= hi) { out.push_back({lo, hi}); }
        if (pa[i].hi < pb[j].hi) { ++i; } else { ++j; }
    }
    return UnionOfIntervals(std::move(out));
}

bool contains(const UnionOfIntervals &s, double y, double tol) { return s.contains(y, tol); }

}  // namespace pwband
