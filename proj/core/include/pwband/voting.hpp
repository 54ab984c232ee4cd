#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pwband {

/// Closed interval [lo, hi] with lo <= hi.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] double length() const { return hi - lo; }
    friend bool operator==(const Interval &, const Interval &) = default;
};

/// The K confidence intervals of one query point; std::nullopt marks an empty interval.
using IntervalCollection = std::vector<std::optional<Interval>>;

/// Nonnegative weights summing to one (within 1e-12).
class WeightVector {
public:
    explicit WeightVector(std::vector<double> w);
    static WeightVector uniform(std::size_t k);

    [[nodiscard]] std::size_t size() const { return w_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return w_[i]; }
    [[nodiscard]] const std::vector<double> &values() const { return w_; }

private:
    std::vector<double> w_;
};

/// Sorted, pairwise disjoint closed intervals. Zero-length parts are allowed.
class UnionOfIntervals {
public:
    UnionOfIntervals() = default;
    /// Sorts and merges overlapping or touching parts.
    explicit UnionOfIntervals(std::vector<Interval> parts);

    [[nodiscard]] const std::vector<Interval> &parts() const { return parts_; }
    [[nodiscard]] bool empty() const { return parts_.empty(); }
    [[nodiscard]] bool contains(double y, double tol = 0.0) const;
    /// Smallest and largest point; requires a nonempty union.
    [[nodiscard]] Interval hull() const;
    /// "lo:hi" pairs separated by ';'.
    [[nodiscard]] std::string segments() const;

    friend bool operator==(const UnionOfIntervals &, const UnionOfIntervals &) = default;

private:
    std::vector<Interval> parts_;
};

/// {y : sum_k w_k 1[y in C_k] > t}, by an endpoint sweep. t must lie in [0, 1).
UnionOfIntervals vote_set(const IntervalCollection &c, const WeightVector &w, double t);

/// Equal weights, t = 1/2.
UnionOfIntervals majority(const IntervalCollection &c);

/// Intersection of the majority sets of the prefixes perm[0..k), k = 1..K.
/// perm is a zero-based permutation of 0..K-1.
UnionOfIntervals random_ordering(const IntervalCollection &c, std::span<const std::size_t> perm);

/// Equal weights, t = (1 + u)/2 with u in [0, 1]. At u = 1 the unanimity set is returned.
UnionOfIntervals randomized_threshold_half(const IntervalCollection &c, double u);

/// Equal weights, t = u with u in [0, 1).
UnionOfIntervals randomized_threshold_full(const IntervalCollection &c, double u);

/// Weights w, t = (1 + u)/2 with u in [0, 1].
UnionOfIntervals weighted_randomized(const IntervalCollection &c, const WeightVector &w, double u);

double total_length(const UnionOfIntervals &s);
UnionOfIntervals intersect(const UnionOfIntervals &a, const UnionOfIntervals &b);
bool contains(const UnionOfIntervals &s, double y, double tol = 0.0);

}  // namespace pwband
