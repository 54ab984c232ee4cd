#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "pwband/kernel.hpp"
#include "pwband/rng.hpp"

namespace pwband {

/// The set {z : (z - center)^T P (z - center) <= 1}, or the single point {center}
/// when degenerate. Immutable; the whitening factor P^{-1/2} is computed once.
class Ellipsoid {
public:
    Ellipsoid() = default;

    /// Nondegenerate ellipsoid. P must be symmetric positive definite.
    static Ellipsoid from_shape(Eigen::VectorXd center, Eigen::MatrixXd shape);
    /// Euclidean ball; radius 0 gives the degenerate point ellipsoid.
    static Ellipsoid ball(Eigen::VectorXd center, double radius);
    /// The single point {center}.
    static Ellipsoid point(Eigen::VectorXd center);

    [[nodiscard]] Eigen::Index dimension() const { return center_.size(); }
    [[nodiscard]] const Eigen::VectorXd &center() const { return center_; }
    /// Shape matrix P (zero matrix for a degenerate ellipsoid).
    [[nodiscard]] const Eigen::MatrixXd &shape() const { return shape_; }
    [[nodiscard]] bool degenerate() const { return degenerate_; }

    /// Symmetric L = P^{-1/2}: z = center + L w maps the unit ball onto the ellipsoid.
    [[nodiscard]] const Eigen::MatrixXd &whitening_inverse() const { return sqrt_inv_; }
    /// P^{-1}.
    [[nodiscard]] const Eigen::MatrixXd &shape_inverse() const { return inv_; }

private:
    Eigen::VectorXd center_;
    Eigen::MatrixXd shape_;
    Eigen::MatrixXd sqrt_inv_;
    Eigen::MatrixXd inv_;
    bool degenerate_ = true;
};

/// Membership with tolerance 1e-10 on the quadratic form (1e-12 on coordinates if degenerate).
bool contains(const Ellipsoid &e, const Eigen::Ref<const Eigen::VectorXd> &z);

/// max over the ellipsoid of |z_k - center_k| = sqrt((P^{-1})_kk); 0 when degenerate.
/// k is zero-based.
double axis_halfwidth(const Ellipsoid &e, Eigen::Index k);

/// Point of the ellipsoid maximizing z_k: center + P^{-1} e_k / sqrt((P^{-1})_kk).
Eigen::VectorXd coordinate_extremal_point(const Ellipsoid &e, Eigen::Index k);

/// Radius r(beta, n0) with P(||eps||_2 <= r) >= 1 - beta under a known noise law.
using NoiseRadiusQuantile = std::function<double(double beta, std::int64_t n0)>;

/// Builds a confidence ellipsoid for the noiseless outputs at the subsample inputs,
/// with coverage probability at least 1 - beta.
class EllipsoidProvider {
public:
    virtual ~EllipsoidProvider() = default;
    [[nodiscard]] virtual Ellipsoid build(const SampleSet &subsample, double beta, Rng &rng) const = 0;
    [[nodiscard]] virtual const char *name() const = 0;
};

/// Degenerate ellipsoid at the observed values (noise-free data, beta = 0).
Ellipsoid noise_free_provider(const Eigen::Ref<const Eigen::VectorXd> &values);

/// Ball around the observed outputs whose radius is the (1 - beta) quantile of the
/// noise norm. Throws InputError if that radius is not finite (e.g. beta = 0 with real noise).
Ellipsoid known_noise_ball_provider(const SampleSet &subsample, double beta, const NoiseRadiusQuantile &quantile);

class NoiseFreeProvider final : public EllipsoidProvider {
public:
    [[nodiscard]] Ellipsoid build(const SampleSet &subsample, double beta, Rng &rng) const override;
    [[nodiscard]] const char *name() const override { return "noise_free"; }
};

class KnownNoiseBallProvider final : public EllipsoidProvider {
public:
    explicit KnownNoiseBallProvider(NoiseRadiusQuantile quantile) : quantile_(std::move(quantile)) {}
    [[nodiscard]] Ellipsoid build(const SampleSet &subsample, double beta, Rng &rng) const override;
    [[nodiscard]] const char *name() const override { return "known_noise_ball"; }

private:
    NoiseRadiusQuantile quantile_;
};

/// Monte Carlo quantile of ||eps||_2 for eps_i = Exp(mean lambda0) - lambda0, i.i.d.
/// Results are cached per (beta, n0); the estimate for a given key depends only on the seed.
/// Thread safe.
class ShiftedExponentialNormQuantile {
public:
    ShiftedExponentialNormQuantile(double lambda0, std::int64_t draws, std::uint64_t seed);

    double operator()(double beta, std::int64_t n0) const;

    [[nodiscard]] double lambda0() const { return lambda0_; }
    [[nodiscard]] std::int64_t draws() const { return draws_; }
    [[nodiscard]] std::uint64_t seed() const { return seed_; }

private:
    double lambda0_;
    std::int64_t draws_;
    std::uint64_t seed_;
    mutable std::mutex mutex_;
    mutable std::map<std::pair<double, std::int64_t>, double> cache_;
};

/// Wraps a shared quantile estimator as a NoiseRadiusQuantile.
NoiseRadiusQuantile as_quantile_function(std::shared_ptr<const ShiftedExponentialNormQuantile> q);

}  // namespace pwband
