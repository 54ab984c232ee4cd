#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "pwband/concentration.hpp"
#include "pwband/errors.hpp"
#include "pwband/normbound.hpp"

using namespace pwband;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double d : v) { x(i++) = d; }
    return x;
}

DensityModel flat(double rho, double height = 1.0) {
    return DensityModel{[height](const Eigen::Ref<const Eigen::VectorXd> &) { return height; }, rho};
}

// h(x) = 0.5 exp(-|x|), the standard Laplace density.
DensityModel laplace(double rho) {
    return DensityModel{[](const Eigen::Ref<const Eigen::VectorXd> &x) { return 0.5 * std::exp(-std::abs(x(0))); },
                        rho};
}

SampleSet inputs_only(std::initializer_list<double> xs) {
    SampleSet s;
    s.inputs.resize(1, static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) { s.inputs(0, i++) = x; }
    return s;
}

double variance_of(const Eigen::VectorXd &t) {
    const std::vector<double> v(t.data(), t.data() + t.size());
    return empirical_variance(v);
}

Eigen::VectorXd transform(const Eigen::VectorXd &z, const Eigen::VectorXd &inv_h) {
    return z.array().square() * inv_h.array();
}

Eigen::VectorXd random_unit(int n, Rng &rng) {
    Eigen::VectorXd w(n);
    for (auto &v : w) { v = rng.normal(); }
    return w / w.norm();
}

}  // namespace

TEST(XiStar, DegenerateIsPointEvaluation) {
    const SampleSet s = inputs_only({0.0, 1.0, -2.0});
    const DensityModel d = laplace(1.0);
    const Eigen::VectorXd y = vec({0.3, -0.2, 0.1});
    const Eigen::VectorXd inv = d.inverse_density(s.inputs);
    EXPECT_NEAR(xi_star(s, d, Ellipsoid::point(y)), transform(y, inv).mean(), 1e-14);
}

TEST(XiStar, OneDimensionalClosedForm) {
    const SampleSet s = inputs_only({0.7});
    const DensityModel d = laplace(1.0);
    const double h = 0.5 * std::exp(-0.7);
    for (double c : {-0.4, 0.0, 0.25}) {
        const double r = 0.3;
        EXPECT_NEAR(xi_star(s, d, Ellipsoid::ball(vec({c}), r)), (std::abs(c) + r) * (std::abs(c) + r) / h, 1e-10);
    }
}

TEST(XiStar, SamplingOracle) {
    Rng rng(17);
    const SampleSet s = inputs_only({-0.5, 0.2, 1.4});
    const DensityModel d = laplace(1.0);
    const Eigen::VectorXd inv = d.inverse_density(s.inputs);
    for (int t = 0; t < 5; ++t) {
        Eigen::MatrixXd m(3, 3);
        for (int i = 0; i < 9; ++i) { m(i / 3, i % 3) = rng.normal(); }
        const Ellipsoid e = Ellipsoid::from_shape(vec({rng.normal(), rng.normal(), rng.normal()}),
                                                  m * m.transpose() + Eigen::MatrixXd::Identity(3, 3));
        const double xi = xi_star(s, d, e);
        double best = 0.0;
        for (int k = 0; k < 400000; ++k) {
            const Eigen::VectorXd z = e.center() + e.whitening_inverse() * random_unit(3, rng);
            best = std::max(best, transform(z, inv).mean());
        }
        EXPECT_GE(xi, best * (1.0 - 1e-12));
        EXPECT_LE(xi, best * (1.0 + 1e-3));
    }
}

TEST(Hoeffding, TauZeroValue) {
    const NormBound b = tau_hoeffding(0.0, flat(1.0), {0.1, 50});
    EXPECT_NEAR(b.tau, 0.15175, 1e-5);
    EXPECT_EQ(b.method, BoundMethod::hoeffding);
    EXPECT_NEAR(b.tau, hoeffding_term(0.5, {0.1, 50}), 1e-15);
    EXPECT_LT(tau_hoeffding(0.2, flat(1.0), {0.999, 50}).tau - 0.2, 1e-2);
}

TEST(Hoeffding, RandomizedValue) {
    const NormBound b = tau_randomized(0.0, flat(1.0), {0.1, 50}, 0.5);
    const double shift = 0.5 * std::log(2.0) / std::sqrt(100.0 * std::log(10.0));
    EXPECT_NEAR(shift, 0.02283, 1e-5);
    EXPECT_NEAR(b.tau, 0.15175 - shift, 1e-5);
    ASSERT_TRUE(b.u_draw.has_value());
    EXPECT_EQ(*b.u_draw, 0.5);
    EXPECT_THROW((void)tau_randomized(0.0, flat(1.0), {0.1, 50}, 1.0), InputError);
    EXPECT_THROW((void)tau_randomized(0.0, flat(1.0), {0.1, 50}, 0.0), InputError);
}

TEST(Hoeffding, RandomizedDominates) {
    Rng rng(101);
    const DensityModel d = flat(2.5);
    for (int t = 0; t < 1000; ++t) {
        const double u = rng.uniform_open();
        EXPECT_LT(tau_randomized(0.3, d, {0.1, 40}, u).tau, tau_hoeffding(0.3, d, {0.1, 40}).tau);
    }
    EXPECT_NEAR(tau_randomized(0.0, d, {0.1, 40}, 1.0 - 1e-12).tau, tau_hoeffding(0.0, d, {0.1, 40}).tau, 1e-6);
}

TEST(Bernstein, ConstantTransform) {
    SampleSet s = inputs_only({0.0, 1.0, 2.0, 3.0});
    s.outputs = vec({0.5, -0.5, 0.5, 0.5});
    const NormBound b = tau_bernstein_noisefree(s, flat(1.3), {0.1, 4});
    EXPECT_NEAR(b.tau, 0.25 + 1.3 * 7.0 * std::log(20.0) / 9.0, 1e-12);
}

TEST(Bernstein, ThreePointValue) {
    // T = (0, 1, 2), rho = 2; the variance enters as V(T / rho) = 1/4.
    SampleSet s = inputs_only({0.0, 1.0, 2.0});
    s.outputs = vec({0.0, 1.0, std::sqrt(2.0)});
    const double ln20 = std::log(20.0);
    const double expected = 1.0 + 2.0 * (std::sqrt(2.0 * 0.25 * ln20 / 3.0) + 7.0 * ln20 / 6.0);
    EXPECT_NEAR(tau_bernstein_noisefree(s, flat(2.0), {0.1, 3}).tau, expected, 1e-12);
}

TEST(Bernstein, NeedsTwoPoints) {
    SampleSet s = inputs_only({0.0});
    s.outputs = vec({0.3});
    EXPECT_THROW((void)tau_bernstein_noisefree(s, flat(1.0), {0.1, 1}), InputError);
    EXPECT_THROW((void)tau_bernstein_noisy(0.1, 0.0, flat(1.0), {0.1, 1}, 0.05), InputError);
}

TEST(Bernstein, NoisyWithZeroVariance) {
    EXPECT_NEAR(tau_bernstein_noisy(0.4, 0.0, flat(1.5), {0.1, 10}, 0.05).tau,
                0.4 + 1.5 * 7.0 * std::log(20.0) / 27.0, 1e-12);
}

TEST(Bernstein, NoisyReducesToNoiseFreeOnPointSet) {
    Rng rng(3);
    SampleSet s = inputs_only({-0.3, 0.4, 1.0, 2.0});
    s.outputs = vec({0.2, -0.4, 0.1, 0.05});
    const DensityModel d = laplace(3.0);
    const Ellipsoid p = noise_free_provider(s.outputs);
    const VarianceBound vb = max_empirical_variance(d, s, p, rng);
    const double xi = xi_star(s, d, p);
    EXPECT_NEAR(tau_bernstein_noisy(xi, vb.v_star, d, {0.1, 4}, 0.0).tau,
                tau_bernstein_noisefree(s, d, {0.1, 4}).tau, 1e-12);
}

TEST(BoxVariance, ExactForSmallBoxes) {
    Rng rng(4);
    for (int t = 0; t < 20; ++t) {
        const int n = 2 + t % 6;
        std::vector<double> lo(n), hi(n);
        for (int k = 0; k < n; ++k) {
            lo[k] = rng.uniform(0.0, 1.0);
            hi[k] = lo[k] + rng.uniform(0.0, 2.0);
        }
        double best = 0.0;
        for (int mask = 0; mask < (1 << n); ++mask) {
            Eigen::VectorXd v(n);
            for (int k = 0; k < n; ++k) { v(k) = (mask >> k) & 1 ? hi[k] : lo[k]; }
            best = std::max(best, variance_of(v));
        }
        EXPECT_NEAR(max_variance_over_box(lo, hi), best, 1e-12);
    }
}

TEST(BoxVariance, LargeBoxBoundDominatesExact) {
    Rng rng(5);
    for (int t = 0; t < 5; ++t) {
        const int n = 13;
        std::vector<double> lo(n), hi(n);
        for (int k = 0; k < n; ++k) {
            lo[k] = rng.uniform(0.0, 1.0);
            hi[k] = lo[k] + rng.uniform(0.0, 2.0);
        }
        double best = 0.0;
        for (int mask = 0; mask < (1 << n); ++mask) {
            Eigen::VectorXd v(n);
            for (int k = 0; k < n; ++k) { v(k) = (mask >> k) & 1 ? hi[k] : lo[k]; }
            best = std::max(best, variance_of(v));
        }
        const double bound = max_variance_over_box(lo, hi);
        EXPECT_GE(bound, best - 1e-12);
        EXPECT_LE(bound, 2.0 * best);
    }
}

TEST(MaxVariance, DegenerateIsExact) {
    Rng rng(6);
    SampleSet s = inputs_only({0.0, 0.5, 1.5});
    const DensityModel d = laplace(1.0);
    const Eigen::VectorXd y = vec({0.3, -0.6, 0.2});
    const VarianceBound vb = max_empirical_variance(d, s, Ellipsoid::point(y), rng);
    EXPECT_NEAR(vb.v_star, variance_of(transform(y, d.inverse_density(s.inputs))), 1e-14);
}

TEST(MaxVariance, ProductOfIntervalsGridOracle) {
    Rng rng(7);
    SampleSet s = inputs_only({0.1, 0.9});
    const DensityModel d = laplace(1.0);
    const Eigen::VectorXd inv = d.inverse_density(s.inputs);
    Eigen::MatrixXd shape = Eigen::MatrixXd::Zero(2, 2);
    shape(0, 0) = 1.0 / (0.4 * 0.4);
    shape(1, 1) = 1.0 / (0.25 * 0.25);
    const Ellipsoid e = Ellipsoid::from_shape(vec({0.5, -0.2}), shape);
    const VarianceBound vb = max_empirical_variance(d, s, e, rng);
    double best = 0.0;
    const int g = 1000;
    for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
            const Eigen::VectorXd w = vec({-1.0 + 2.0 * i / (g - 1), -1.0 + 2.0 * j / (g - 1)});
            if (w.squaredNorm() > 1.0) { continue; }
            const Eigen::VectorXd z = e.center() + e.whitening_inverse() * w;
            best = std::max(best, variance_of(transform(z, inv)));
        }
    }
    EXPECT_GE(vb.v_star, best);
    EXPECT_LE(vb.v_star, 1.02 * best);
    EXPECT_LE(vb.v_star, vb.box_bound);
}

TEST(MaxVariance, SphericalEqualDensityGridOracle) {
    Rng rng(8);
    SampleSet s = inputs_only({0.0, 1.0, 2.0});
    const DensityModel d = flat(1.0, 0.5);
    const Eigen::VectorXd inv = d.inverse_density(s.inputs);
    const Ellipsoid e = Ellipsoid::ball(vec({0.2, 0.1, -0.1}), 0.5);
    const VarianceBound vb = max_empirical_variance(d, s, e, rng);
    double best = 0.0;
    const int g = 120;
    for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
            for (int k = 0; k < g; ++k) {
                const Eigen::VectorXd w = vec({-1.0 + 2.0 * i / (g - 1), -1.0 + 2.0 * j / (g - 1),
                                               -1.0 + 2.0 * k / (g - 1)});
                if (w.squaredNorm() > 1.0) { continue; }
                best = std::max(best, variance_of(transform(e.center() + 0.5 * w, inv)));
            }
        }
    }
    EXPECT_GE(vb.v_star, best);
    // The extremal point spreads coordinates apart: the smallest and largest T differ.
    const Eigen::VectorXd t = transform(vb.z_star, inv);
    EXPECT_GT(t.maxCoeff() - t.minCoeff(), 0.1);
}

TEST(MaxVariance, SeparateMaximizationSound) {
    Rng rng(9);
    const DensityModel d = laplace(4.0);
    const TailBudget budget{0.1, 3};
    for (int t = 0; t < 5; ++t) {
        SampleSet s = inputs_only({-0.4 + 0.1 * t, 0.3, 1.1});
        const Ellipsoid e = Ellipsoid::ball(vec({rng.normal() * 0.3, rng.normal() * 0.3, rng.normal() * 0.3}), 0.2);
        const Eigen::VectorXd inv = d.inverse_density(s.inputs);
        const VarianceBound vb = max_empirical_variance(d, s, e, rng);
        const double tau = tau_bernstein_noisy(xi_star(s, d, e), vb.v_star, d, budget, 0.05).tau;
        double joint = 0.0;
        for (int k = 0; k < 100000; ++k) {
            Eigen::VectorXd w = random_unit(3, rng);
            if (k % 2) { w *= std::cbrt(rng.uniform()); }
            const Eigen::VectorXd tz = transform(e.center() + 0.2 * w, inv);
            const double v = variance_of(tz);
            joint = std::max(joint, tz.mean() + empirical_bernstein_term(d.rho, budget, v / (d.rho * d.rho)));
        }
        EXPECT_GE(tau, joint - 1e-12);
    }
}

TEST(MaxVariance, NoisyBoundCoversTrueValues) {
    Rng rng(10);
    const DensityModel d = laplace(3.0);
    const TailBudget budget{0.1, 3};
    SampleSet s = inputs_only({-0.2, 0.5, 1.3});
    const Eigen::VectorXd truth = vec({0.3, -0.1, 0.2});
    s.outputs = truth;
    for (int t = 0; t < 20; ++t) {
        const Eigen::VectorXd noisy = truth + 0.05 * vec({rng.normal(), rng.normal(), rng.normal()});
        const Ellipsoid e = Ellipsoid::ball(noisy, 0.15);
        if (!contains(e, truth)) { continue; }
        const VarianceBound vb = max_empirical_variance(d, s, e, rng);
        const double te = tau_bernstein_noisy(xi_star(s, d, e), vb.v_star, d, budget, 0.05).tau;
        EXPECT_GE(te, tau_bernstein_noisefree(s, d, budget).tau);
    }
}

TEST(Selection, Examples) {
    EXPECT_EQ(select_bound({0.1, 50}, flat(1.0)), BoundFamily::randomized_hoeffding);
    const auto n = conservative_threshold(0.1, 0.5);
    ASSERT_TRUE(n);
    EXPECT_EQ(select_bound({0.1, *n}, flat(0.5)), BoundFamily::bernstein);
    EXPECT_EQ(select_bound({0.1, *n - 1}, flat(0.5)), BoundFamily::randomized_hoeffding);
}

TEST(Selection, MethodNames) {
    for (BoundMethod m : {BoundMethod::hoeffding, BoundMethod::randomized_hoeffding, BoundMethod::bernstein_noisefree,
                          BoundMethod::bernstein_noisy}) {
        EXPECT_EQ(bound_method_from_string(to_string(m)), m);
    }
    EXPECT_THROW((void)bound_method_from_string("nope"), InputError);
}

TEST(Density, RejectsNonPositive) {
    const DensityModel d{[](const Eigen::Ref<const Eigen::VectorXd> &x) { return x(0) > 0 ? 1.0 : 0.0; }, 1.0};
    EXPECT_THROW((void)d.inverse_density(inputs_only({-1.0}).inputs), InputError);
    EXPECT_THROW((DensityModel{nullptr, 1.0}.validate()), InputError);
    EXPECT_THROW(flat(0.0).validate(), InputError);
}
