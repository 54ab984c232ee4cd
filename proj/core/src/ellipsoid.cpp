#include "pwband/ellipsoid.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pwband/errors.hpp"

namespace pwband {

Ellipsoid Ellipsoid::from_shape(Eigen::VectorXd center, Eigen::MatrixXd shape) {
    const Eigen::Index n = center.size();
    if (shape.rows() != n || shape.cols() != n) { throw InputError("Ellipsoid: shape must be n x n"); }
    const double scale = std::max(1.0, shape.cwiseAbs().maxCoeff());
    if ((shape - shape.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw InputError("Ellipsoid: shape matrix is not symmetric");
    }
    Eigen::MatrixXd sym = 0.5 * (shape + shape.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success) { throw NumericError("Ellipsoid: eigendecomposition failed"); }
    const Eigen::VectorXd lambda = es.eigenvalues();
    if (n > 0 && !(lambda(0) > 0.0)) { throw InputError("Ellipsoid: shape matrix must be positive definite"); }

    Ellipsoid e;
    e.center_ = std::move(center);
    e.shape_ = std::move(sym);
    const Eigen::MatrixXd &v = es.eigenvectors();
    e.sqrt_inv_ = v * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
    e.inv_ = v * lambda.cwiseInverse().asDiagonal() * v.transpose();
    e.degenerate_ = false;
    return e;
}

Ellipsoid Ellipsoid::ball(Eigen::VectorXd center, double radius) {
    if (!(radius >= 0.0) || !std::isfinite(radius)) { throw InputError("Ellipsoid::ball: radius must be finite and >= 0"); }
    if (radius == 0.0) { return point(std::move(center)); }
    const Eigen::Index n = center.size();
    Ellipsoid e;
    e.center_ = std::move(center);
    e.shape_ = Eigen::MatrixXd::Identity(n, n) / (radius * radius);
    e.sqrt_inv_ = Eigen::MatrixXd::Identity(n, n) * radius;
    e.inv_ = Eigen::MatrixXd::Identity(n, n) * (radius * radius);
    e.degenerate_ = false;
    return e;
}

Ellipsoid Ellipsoid::point(Eigen::VectorXd center) {
    const Eigen::Index n = center.size();
    Ellipsoid e;
    e.center_ = std::move(center);
    e.shape_ = Eigen::MatrixXd::Zero(n, n);
    e.sqrt_inv_ = Eigen::MatrixXd::Zero(n, n);
    e.inv_ = Eigen::MatrixXd::Zero(n, n);
    e.degenerate_ = true;
    return e;
}

bool contains(const Ellipsoid &e, const Eigen::Ref<const Eigen::VectorXd> &z) {
    if (z.size() != e.dimension()) { throw InputError("contains: vector length does not match the ellipsoid"); }
    const Eigen::VectorXd d = z - e.center();
    if (e.degenerate()) { return d.size() == 0 || d.cwiseAbs().maxCoeff() <= 1e-12; }
    return d.dot(e.shape() * d) <= 1.0 + 1e-10;
}

double axis_halfwidth(const Ellipsoid &e, Eigen::Index k) {
    if (k < 0 || k >= e.dimension()) { throw InputError("axis_halfwidth: index out of range"); }
    if (e.degenerate()) { return 0.0; }
    return std::sqrt(std::max(0.0, e.shape_inverse()(k, k)));
}

Eigen::VectorXd coordinate_extremal_point(const Ellipsoid &e, Eigen::Index k) {
    const double hw = axis_halfwidth(e, k);
    if (hw == 0.0) { return e.center(); }
    return e.center() + e.shape_inverse().col(k) / hw;
}

Ellipsoid noise_free_provider(const Eigen::Ref<const Eigen::VectorXd> &values) {
    return Ellipsoid::point(values);
}

Ellipsoid known_noise_ball_provider(const SampleSet &subsample, double beta, const NoiseRadiusQuantile &quantile) {
    if (!subsample.has_outputs()) { throw InputError("known_noise_ball_provider: outputs required"); }
    if (!(beta >= 0.0 && beta < 1.0)) { throw InputError("known_noise_ball_provider: beta must lie in [0, 1)"); }
    const double r = quantile(beta, subsample.size());
    if (!std::isfinite(r)) {
        throw InputError("known_noise_ball_provider: no finite radius covers the noise at this beta");
    }
    return Ellipsoid::ball(subsample.outputs, r);
}

Ellipsoid NoiseFreeProvider::build(const SampleSet &subsample, double /*beta*/, Rng & /*rng*/) const {
    if (!subsample.has_outputs()) { throw InputError("NoiseFreeProvider: outputs required"); }
    return noise_free_provider(subsample.outputs);
}

Ellipsoid KnownNoiseBallProvider::build(const SampleSet &subsample, double beta, Rng & /*rng*/) const {
    return known_noise_ball_provider(subsample, beta, quantile_);
}

ShiftedExponentialNormQuantile::ShiftedExponentialNormQuantile(double lambda0, std::int64_t draws, std::uint64_t seed)
    : lambda0_(lambda0), draws_(draws), seed_(seed) {
    if (!(lambda0 >= 0.0)) { throw InputError("ShiftedExponentialNormQuantile: lambda0 must be >= 0"); }
    if (draws < 1) { throw InputError("ShiftedExponentialNormQuantile: draws must be >= 1"); }
}

double ShiftedExponentialNormQuantile::operator()(double beta, std::int64_t n0) const {
    if (!(beta >= 0.0 && beta < 1.0)) { throw InputError("noise quantile: beta must lie in [0, 1)"); }
    if (n0 < 0) { throw InputError("noise quantile: n0 must be >= 0"); }
    if (lambda0_ == 0.0 || n0 == 0) { return 0.0; }
    if (beta == 0.0) { return std::numeric_limits<double>::infinity(); }

    const std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_pair(beta, n0);
    if (const auto it = cache_.find(key); it != cache_.end()) { return it->second; }

    Rng rng(derive_seed(seed_, static_cast<std::uint64_t>(n0), Stream::provider));
    std::vector<double> norms(static_cast<std::size_t>(draws_));
    for (auto &v : norms) {
        double ss = 0.0;
        for (std::int64_t i = 0; i < n0; ++i) {
            const double eps = rng.exponential_mean(lambda0_) - lambda0_;
            ss += eps * eps;
        }
        v = std::sqrt(ss);
    }
    // Smallest order statistic with empirical CDF >= 1 - beta.
    const auto rank = static_cast<std::size_t>(std::ceil((1.0 - beta) * static_cast<double>(draws_)));
    const std::size_t idx = std::min(norms.size() - 1, rank == 0 ? 0 : rank - 1);
    std::nth_element(norms.begin(), norms.begin() + static_cast<std::ptrdiff_t>(idx), norms.end());
    const double r = norms[idx];
    cache_.emplace(key, r);
    return r;
}

NoiseRadiusQuantile as_quantile_function(std::shared_ptr<const ShiftedExponentialNormQuantile> q) {
    return [q = std::move(q)](double beta, std::int64_t n0) { return (*q)(beta, n0); };
}

}  // namespace pwband
