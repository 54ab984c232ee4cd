#include <gtest/gtest.h>

#include <Eigen/Cholesky>
#include <cmath>
#include <memory>

#include "pwband/ellipsoid.hpp"
#include "pwband/errors.hpp"

using namespace pwband;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double d : v) { x(i++) = d; }
    return x;
}

Eigen::MatrixXd random_spd(int n, Rng &rng) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) { m(i, j) = rng.normal(); }
    }
    return m * m.transpose() + 0.2 * Eigen::MatrixXd::Identity(n, n);
}

// Quantile of |E - lambda| for E exponential with mean lambda, by bisection on the exact CDF.
double one_dim_quantile(double lambda, double beta) {
    auto cdf = [lambda](double r) {
        const double hi = 1.0 - std::exp(-(lambda + r) / lambda);
        const double lo = r >= lambda ? 0.0 : 1.0 - std::exp(-(lambda - r) / lambda);
        return hi - lo;
    };
    double a = 0.0, b = 50.0 * lambda;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        (cdf(m) < 1.0 - beta ? a : b) = m;
    }
    return 0.5 * (a + b);
}

}  // namespace

TEST(Ellipsoid, Membership) {
    const Ellipsoid e = Ellipsoid::from_shape(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2));
    EXPECT_TRUE(contains(e, vec({1.0, 0.0})));
    EXPECT_TRUE(contains(e, vec({0.6, 0.8})));
    EXPECT_FALSE(contains(e, vec({1.0, 0.1})));

    const Ellipsoid p = Ellipsoid::point(vec({1.0, 2.0}));
    EXPECT_TRUE(p.degenerate());
    EXPECT_TRUE(contains(p, vec({1.0, 2.0})));
    EXPECT_FALSE(contains(p, vec({1.0, 2.0 + 1e-6})));
}

TEST(Ellipsoid, RejectsBadShape) {
    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 0.0, 0.0, -1.0;
    EXPECT_THROW((void)Ellipsoid::from_shape(Eigen::VectorXd::Zero(2), bad), InputError);
    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 0.5, 0.0, 1.0;
    EXPECT_THROW((void)Ellipsoid::from_shape(Eigen::VectorXd::Zero(2), asym), InputError);
    EXPECT_THROW((void)Ellipsoid::from_shape(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(2, 2)), InputError);
    EXPECT_THROW((void)Ellipsoid::ball(Eigen::VectorXd::Zero(2), -1.0), InputError);
}

TEST(Ellipsoid, WhiteningMapsUnitBall) {
    Rng rng(4);
    const Eigen::MatrixXd shape = random_spd(4, rng);
    const Ellipsoid e = Ellipsoid::from_shape(vec({1.0, -2.0, 0.5, 3.0}), shape);
    const Eigen::MatrixXd &l = e.whitening_inverse();
    EXPECT_LT((l * shape * l - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((e.shape_inverse() * shape - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Ellipsoid, AxisHalfwidthAgainstSampling) {
    Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::MatrixXd shape = random_spd(3, rng);
        const Ellipsoid e = Ellipsoid::from_shape(Eigen::VectorXd::Zero(3), shape);
        Eigen::Vector3d best = Eigen::Vector3d::Zero();
        for (int s = 0; s < 100000; ++s) {
            Eigen::VectorXd w(3);
            for (auto &v : w) { v = rng.normal(); }
            const Eigen::VectorXd z = e.whitening_inverse() * (w / w.norm());
            best = best.cwiseMax(z.cwiseAbs());
        }
        for (Eigen::Index k = 0; k < 3; ++k) {
            const double h = axis_halfwidth(e, k);
            EXPECT_LE(best(k), h * (1.0 + 1e-12));
            EXPECT_GE(best(k), h * 0.99);
            EXPECT_NEAR(std::sqrt(e.shape_inverse()(k, k)), h, 1e-12);
        }
    }
}

TEST(Ellipsoid, CoordinateExtremalPoint) {
    Rng rng(13);
    const Eigen::MatrixXd shape = random_spd(3, rng);
    const Ellipsoid e = Ellipsoid::from_shape(vec({0.5, 1.0, -1.0}), shape);
    for (Eigen::Index k = 0; k < 3; ++k) {
        const Eigen::VectorXd z = coordinate_extremal_point(e, k);
        const Eigen::VectorXd d = z - e.center();
        EXPECT_NEAR(d.dot(shape * d), 1.0, 1e-10);
        EXPECT_NEAR(z(k) - e.center()(k), axis_halfwidth(e, k), 1e-10);
    }
    const Ellipsoid p = Ellipsoid::point(vec({1.0, 2.0}));
    EXPECT_EQ(axis_halfwidth(p, 1), 0.0);
    EXPECT_EQ(coordinate_extremal_point(p, 0), vec({1.0, 2.0}));
}

TEST(Ellipsoid, BallHelpers) {
    const Ellipsoid b = Ellipsoid::ball(vec({1.0, 1.0}), 2.0);
    EXPECT_NEAR(axis_halfwidth(b, 0), 2.0, 1e-14);
    EXPECT_TRUE(contains(b, vec({3.0, 1.0})));
    EXPECT_FALSE(contains(b, vec({3.0, 1.1})));
    EXPECT_TRUE(Ellipsoid::ball(vec({1.0}), 0.0).degenerate());
}

TEST(Provider, NoiseFree) {
    const Ellipsoid e = noise_free_provider(vec({0.3, -0.1}));
    EXPECT_TRUE(e.degenerate());
    EXPECT_EQ(e.center(), vec({0.3, -0.1}));
    NoiseFreeProvider p;
    Rng rng(1);
    SampleSet s{Eigen::MatrixXd::Zero(1, 1), vec({2.0})};
    EXPECT_TRUE(contains(p.build(s, 0.0, rng), vec({2.0})));
}

TEST(Provider, QuantileOneDimensionalExact) {
    ShiftedExponentialNormQuantile q(0.3, 200000, 77);
    for (double beta : {0.05, 0.1, 0.25}) {
        EXPECT_NEAR(q(beta, 1), one_dim_quantile(0.3, beta), 0.01 * one_dim_quantile(0.3, beta)) << beta;
    }
}

TEST(Provider, QuantileDeterministicAndMonotone) {
    ShiftedExponentialNormQuantile a(0.1, 20000, 5), b(0.1, 20000, 5);
    EXPECT_EQ(a(0.1, 7), b(0.1, 7));
    EXPECT_GT(a(0.05, 7), a(0.2, 7));
    EXPECT_GT(a(0.1, 20), a(0.1, 7));
    ShiftedExponentialNormQuantile z(0.0, 1000, 5);
    EXPECT_EQ(z(0.1, 5), 0.0);
}

TEST(Provider, BallCoverage) {
    // Empirical coverage of the true noiseless outputs over independent noise draws.
    const double lambda0 = 0.2, beta = 0.1;
    const int n0 = 8, trials = 2000;
    auto q = std::make_shared<const ShiftedExponentialNormQuantile>(lambda0, 50000, 99);
    KnownNoiseBallProvider provider(as_quantile_function(q));
    Rng rng(2024);
    Eigen::VectorXd truth(n0);
    for (auto &v : truth) { v = rng.normal(); }
    int covered = 0;
    for (int t = 0; t < trials; ++t) {
        SampleSet s{Eigen::MatrixXd::Zero(1, n0), truth};
        for (int k = 0; k < n0; ++k) {
            s.inputs(0, k) = k;
            s.outputs(k) += rng.exponential_mean(lambda0) - lambda0;
        }
        const Ellipsoid e = provider.build(s, beta, rng);
        covered += contains(e, truth) ? 1 : 0;
    }
    const double freq = static_cast<double>(covered) / trials;
    EXPECT_GE(freq, 1.0 - beta - 0.02);
    EXPECT_LE(freq, 1.0 - beta + 0.03);
}

TEST(Provider, ZeroBetaWithNoiseIsRejected) {
    auto q = std::make_shared<const ShiftedExponentialNormQuantile>(0.2, 1000, 1);
    SampleSet s{Eigen::MatrixXd::Zero(1, 1), vec({1.0})};
    EXPECT_THROW((void)known_noise_ball_provider(s, 0.0, as_quantile_function(q)), InputError);
}
