#include "pwband/band.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "pwband/errors.hpp"
#include "pwband/quadopt.hpp"

namespace pwband {

void BandConfig::validate() const {
    kernel.validate();
    if (!(alpha >= 0.0 && alpha < 1.0) || !(beta >= 0.0 && beta < 1.0) || !(alpha + beta < 1.0)) {
        throw InputError("BandConfig: need alpha, beta in [0, 1) with alpha + beta < 1");
    }
    if (n0 < 0) { throw InputError("BandConfig: n0 must be nonnegative"); }
}

namespace {

// Factor a symmetric PSD matrix as F F^T with F = V sqrt(max(Lambda, 0)).
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd &k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
    if (es.info() != Eigen::Success) { throw NumericError("band: eigendecomposition of the Gram matrix failed"); }
    return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

IntervalEstimate make_interval(const Eigen::Ref<const Eigen::VectorXd> &x0, std::optional<double> lo,
                               std::optional<double> hi, double envelope) {
    IntervalEstimate out;
    out.query = x0;
    if (!lo || !hi) {
        out.status = IntervalStatus::empty;
        out.lo = out.hi = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    out.status = IntervalStatus::ok;
    out.lo = std::max(*lo, -envelope);
    out.hi = std::min(*hi, envelope);
    if (out.lo > out.hi) {
        // Only possible through rounding at a single feasible point.
        const double mid = 0.5 * (out.lo + out.hi);
        out.lo = out.hi = mid;
    }
    return out;
}

std::optional<double> negate(std::optional<double> v) {
    if (v) { return -*v; }
    return std::nullopt;
}

}  // namespace

IntervalEstimate interval_at(const Eigen::Ref<const Eigen::VectorXd> &x0, const SampleSet &subsample,
                             const Ellipsoid &e, const NormBound &bound, const BandConfig &cfg) {
    cfg.validate();
    const double tau = bound.tau;
    if (!std::isfinite(tau)) { throw InputError("interval_at: tau must be finite"); }
    if (x0.size() != cfg.kernel.dim) { throw InputError("interval_at: query has the wrong dimension"); }
    const Eigen::Index n0 = subsample.size();
    if (subsample.inputs.rows() != cfg.kernel.dim && n0 > 0) {
        throw InputError("interval_at: subsample inputs have the wrong dimension");
    }
    if (e.dimension() != n0) { throw InputError("interval_at: ellipsoid dimension does not match the subsample"); }

    if (tau <= 0.0) {
        // Only the zero function (tau == 0) or nothing (tau < 0) satisfies the norm bound.
        const bool zero_ok = tau == 0.0 && (n0 == 0 || contains(e, Eigen::VectorXd::Zero(n0)));
        if (zero_ok) { return make_interval(x0, 0.0, 0.0, 0.0); }
        return make_interval(x0, std::nullopt, std::nullopt, 0.0);
    }
    const double k00 = cfg.kernel.diagonal();
    const double envelope = std::sqrt(tau * k00);
    if (n0 == 0) { return make_interval(x0, -envelope, envelope, envelope); }

    // Query on top of an observed input.
    for (Eigen::Index j = 0; j < n0; ++j) {
        if ((subsample.inputs.col(j) - x0).cwiseAbs().maxCoeff() >= kDuplicateTolerance) { continue; }
        const Eigen::MatrixXd k = gram(subsample.inputs, cfg.kernel);
        if (e.degenerate()) {
            const double cond = condition_number(k);
            if (!(cond <= kConditionCap)) { throw ConditioningError("interval_at: Gram matrix is ill-conditioned", cond); }
            const Eigen::LLT<Eigen::MatrixXd> llt(k);
            const double norm_sq = e.center().dot(llt.solve(e.center()));
            if (norm_sq > tau) { return make_interval(x0, std::nullopt, std::nullopt, envelope); }
            return make_interval(x0, e.center()(j), e.center()(j), envelope);
        }
        const Eigen::MatrixXd f = psd_factor(k);
        const Eigen::VectorXd c = f.row(j).transpose();
        const BallEllipsoidLinearMaximizer solver(f, e, tau);
        if (!solver.feasible()) { return make_interval(x0, std::nullopt, std::nullopt, envelope); }
        return make_interval(x0, negate(solver.maximize(-c)), solver.maximize(c), envelope);
    }

    Points nodes(cfg.kernel.dim, n0 + 1);
    nodes.leftCols(n0) = subsample.inputs;
    nodes.col(n0) = x0;
    const Eigen::MatrixXd k_aug = gram(nodes, cfg.kernel);
    const double cond = condition_number(k_aug);

    if (cond <= kBandInverseCap || (e.degenerate() && cond <= kConditionCap)) {
        const Eigen::LLT<Eigen::MatrixXd> llt(k_aug);
        if (llt.info() != Eigen::Success) { throw ConditioningError("interval_at: Cholesky factorization failed", cond); }
        Eigen::MatrixXd g = llt.solve(Eigen::MatrixXd::Identity(n0 + 1, n0 + 1));
        g = 0.5 * (g + g.transpose());
        const auto hi = endpoint_program(g, e, tau, Sense::max);
        if (!hi) { return make_interval(x0, std::nullopt, std::nullopt, envelope); }
        return make_interval(x0, endpoint_program(g, e, tau, Sense::min), hi, envelope);
    }
    if (e.degenerate()) { throw ConditioningError("interval_at: augmented Gram matrix is ill-conditioned", cond); }

    const Eigen::MatrixXd f = psd_factor(k_aug);
    const Eigen::VectorXd c = f.row(n0).transpose();
    const Eigen::MatrixXd b = f.topRows(n0);
    const BallEllipsoidLinearMaximizer solver(b, e, tau);
    if (!solver.feasible()) { return make_interval(x0, std::nullopt, std::nullopt, envelope); }
    return make_interval(x0, negate(solver.maximize(-c)), solver.maximize(c), envelope);
}

std::vector<IntervalEstimate> band_over_grid(const Points &grid, const SampleSet &subsample, const Ellipsoid &e,
                                             const NormBound &bound, const BandConfig &cfg) {
    cfg.validate();
    std::vector<IntervalEstimate> out;
    out.reserve(static_cast<std::size_t>(grid.cols()));
    for (Eigen::Index i = 0; i < grid.cols(); ++i) {
        try {
            out.push_back(interval_at(grid.col(i), subsample, e, bound, cfg));
        } catch (const std::exception &ex) {
            IntervalEstimate bad;
            bad.query = grid.col(i);
            bad.status = IntervalStatus::error;
            bad.lo = bad.hi = std::numeric_limits<double>::quiet_NaN();
            bad.error = ex.what();
            out.push_back(std::move(bad));
        }
    }
    return out;
}

Points uniform_grid(double lo, double hi, Eigen::Index count) {
    if (count < 1) { throw InputError("uniform_grid: count must be positive"); }
    if (!(lo <= hi)) { throw InputError("uniform_grid: lo must not exceed hi"); }
    Points g(1, count);
    for (Eigen::Index i = 0; i < count; ++i) {
        g(0, i) = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return g;
}

}  // namespace pwband
