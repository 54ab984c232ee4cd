#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "pwband/ellipsoid.hpp"
#include "pwband/kernel.hpp"
#include "pwband/normbound.hpp"

namespace pwband {

struct BandConfig {
    double alpha = 0.05;
    double beta = 0.05;
    Eigen::Index n0 = 1;
    KernelConfig kernel;
    BoundMethod bound_method = BoundMethod::randomized_hoeffding;

    /// alpha, beta in [0, 1) with alpha + beta < 1, n0 >= 0, valid kernel.
    void validate() const;
};

enum class IntervalStatus { ok, empty, error };

/// Confidence interval for f*(query); lo/hi are NaN unless status is ok.
struct IntervalEstimate {
    Eigen::VectorXd query;
    IntervalStatus status = IntervalStatus::error;
    double lo = 0.0;
    double hi = 0.0;
    std::string error;

    [[nodiscard]] bool ok() const { return status == IntervalStatus::ok; }
    [[nodiscard]] bool empty() const { return status == IntervalStatus::empty; }
    [[nodiscard]] double length() const { return ok() ? hi - lo : 0.0; }
    [[nodiscard]] bool covers(double value, double tol = 0.0) const {
        return ok() && lo - tol <= value && value <= hi + tol;
    }
};

/// Gram matrices with a condition number above this are handled by the inverse-free route.
inline constexpr double kBandInverseCap = 1e8;

/// {f(x0) : ||f||^2 <= tau, (f(x_1), ..., f(x_n0)) in e}.
///
/// Well-conditioned augmented Gram matrices use endpoint_program on its inverse. Otherwise
/// the augmented Gram is factored as F F^T and the endpoints are the extreme values of
/// (F u)_0 over ||u||^2 <= tau with the node rows of F u in e. A query within 1e-9 of node j
/// is answered without augmentation from the range of z_j. Throws ConditioningError only
/// for a degenerate ellipsoid with an ill-conditioned Gram matrix.
IntervalEstimate interval_at(const Eigen::Ref<const Eigen::VectorXd> &x0, const SampleSet &subsample,
                             const Ellipsoid &e, const NormBound &bound, const BandConfig &cfg);

/// interval_at over every column of grid; per-point failures are recorded with status error.
std::vector<IntervalEstimate> band_over_grid(const Points &grid, const SampleSet &subsample, const Ellipsoid &e,
                                             const NormBound &bound, const BandConfig &cfg);

/// Uniform grid of `count` points on [lo, hi] in one dimension.
Points uniform_grid(double lo, double hi, Eigen::Index count);

}  // namespace pwband
