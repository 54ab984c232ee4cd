#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "pwband/concentration.hpp"
#include "pwband/errors.hpp"

using namespace pwband;

namespace {

// Smallest n with psi(1, alpha, n, sigma^2) <= phi(1/2, alpha, n, 1), by direct search.
std::optional<std::int64_t> crossover_search(double alpha, double sigma, std::int64_t limit = 5'000'000) {
    for (std::int64_t n = 2; n <= limit; ++n) {
        const TailBudget b{alpha, n};
        if (empirical_bernstein_term(1.0, b, sigma * sigma) <= hoeffding_term(0.5, b)) { return n; }
    }
    return std::nullopt;
}

}  // namespace

TEST(Hoeffding, Values) {
    EXPECT_EQ(hoeffding_term(0.0, {0.1, 50}), 0.0);
    EXPECT_NEAR(hoeffding_term(1.0, {0.1, 50}), 0.30351, 1e-4);
    EXPECT_NEAR(hoeffding_term(1.0, {0.1, 50}), std::sqrt(2.0 * std::log(10.0) / 50.0), 1e-15);
}

TEST(Hoeffding, RandomizedAtOneIsPlain) {
    for (double sigma : {0.1, 1.0, 3.0}) {
        for (double alpha : {0.01, 0.1, 0.5}) {
            for (std::int64_t n : {1, 10, 1000}) {
                EXPECT_EQ(randomized_hoeffding_term(sigma, {alpha, n}, 1.0), hoeffding_term(sigma, {alpha, n}));
            }
        }
    }
}

TEST(Hoeffding, RandomizedValue) {
    const double expected = 0.30351 - 1.0 / std::sqrt(100.0 * std::log(10.0));
    EXPECT_NEAR(randomized_hoeffding_term(1.0, {0.1, 50}, std::exp(-1.0)), expected, 1e-4);
    EXPECT_NEAR(randomized_hoeffding_term(1.0, {0.1, 50}, std::exp(-1.0)), 0.23763, 1e-4);
}

TEST(Hoeffding, RandomizedStrictlySmaller) {
    for (double u : {1e-6, 0.1, 0.5, 0.999}) {
        for (double alpha : {0.01, 0.2}) {
            for (std::int64_t n : {2, 100}) {
                EXPECT_LT(randomized_hoeffding_term(1.0, {alpha, n}, u), hoeffding_term(1.0, {alpha, n}));
            }
        }
    }
}

TEST(Hoeffding, RejectsBadArguments) {
    EXPECT_THROW((void)randomized_hoeffding_term(1.0, {0.1, 5}, 0.0), InputError);
    EXPECT_THROW((void)randomized_hoeffding_term(1.0, {0.1, 5}, 1.5), InputError);
    EXPECT_THROW((void)hoeffding_term(1.0, {1.0, 5}), InputError);
    EXPECT_THROW((void)hoeffding_term(1.0, {0.1, 0}), InputError);
}

TEST(Variance, Examples) {
    EXPECT_EQ(empirical_variance(std::vector<double>{2.5, 2.5, 2.5}), 0.0);
    EXPECT_DOUBLE_EQ(empirical_variance(std::vector<double>{0.0, 1.0}), 0.5);
    EXPECT_DOUBLE_EQ(empirical_variance(std::vector<double>{0.0, 1.0, 2.0}), 1.0);
    EXPECT_THROW((void)empirical_variance(std::vector<double>{1.0}), InputError);
}

TEST(Variance, MatchesPairwiseDefinition) {
    const std::vector<double> x{0.3, -1.2, 4.4, 2.0, 0.0, 7.5};
    double pairs = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) { pairs += (x[i] - x[j]) * (x[i] - x[j]); }
    }
    const double n = static_cast<double>(x.size());
    EXPECT_NEAR(empirical_variance(x), pairs / (n * (n - 1.0)), 1e-12);
}

TEST(Variance, TranslationAndScale) {
    const std::vector<double> x{0.3, -1.2, 4.4, 2.0};
    std::vector<double> shifted, scaled;
    for (double v : x) {
        shifted.push_back(v + 17.0);
        scaled.push_back(-3.0 * v);
    }
    EXPECT_NEAR(empirical_variance(shifted), empirical_variance(x), 1e-12);
    EXPECT_NEAR(empirical_variance(scaled), 9.0 * empirical_variance(x), 1e-12);
}

TEST(Bernstein, Values) {
    EXPECT_EQ(empirical_bernstein_term(0.0, {0.1, 11}, 0.3), 0.0);
    EXPECT_NEAR(empirical_bernstein_term(1.0, {0.1, 11}, 0.0), 7.0 * std::log(20.0) / 30.0, 1e-15);
    EXPECT_NEAR(empirical_bernstein_term(1.0, {0.1, 11}, 0.0), 0.69900, 1e-5);
    EXPECT_NEAR(empirical_bernstein_term(1.0, {0.1, 500}, 0.0625), 0.04136, 1e-4);
    EXPECT_THROW((void)empirical_bernstein_term(1.0, {0.1, 1}, 0.0), InputError);
}

TEST(Terms, Monotone) {
    for (std::int64_t n : {5, 50, 500}) {
        const TailBudget b{0.1, n}, b2{0.1, n + 1};
        EXPECT_LE(hoeffding_term(0.5, b), hoeffding_term(0.6, b));
        EXPECT_GE(hoeffding_term(0.5, b), hoeffding_term(0.5, b2));
        EXPECT_LE(randomized_hoeffding_term(0.5, b, 0.3), randomized_hoeffding_term(0.6, b, 0.3));
        EXPECT_LE(empirical_bernstein_term(1.0, b, 0.1), empirical_bernstein_term(1.0, b, 0.2));
        EXPECT_LE(empirical_bernstein_term(1.0, b, 0.1), empirical_bernstein_term(1.5, b, 0.1));
        EXPECT_GE(empirical_bernstein_term(1.0, b, 0.1), empirical_bernstein_term(1.0, b2, 0.1));
    }
}

TEST(Threshold, NeverAboveSigmaBound) {
    EXPECT_NEAR(switch_sigma_bound(0.1), 0.4384, 1e-4);
    EXPECT_FALSE(switch_threshold(0.1, 0.5).has_value());
    EXPECT_FALSE(switch_threshold(0.1, switch_sigma_bound(0.1)).has_value());
    EXPECT_TRUE(switch_threshold(0.1, std::nextafter(switch_sigma_bound(0.1), 0.0)).has_value());
}

TEST(Threshold, KnownValue) {
    const auto n = switch_threshold(0.1, 0.25);
    ASSERT_TRUE(n);
    EXPECT_EQ(*n, 232);
    EXPECT_EQ(*n, *crossover_search(0.1, 0.25));
}

TEST(Threshold, SigmaZeroSpecialization) {
    const double alpha = 0.05;
    const double vs = 7.0 * std::sqrt(2.0) * std::log(2.0 / alpha) / (3.0 * std::sqrt(std::log(1.0 / alpha)));
    const double r = vs + std::sqrt(vs * vs + 4.0);
    EXPECT_EQ(*switch_threshold(alpha, 0.0), static_cast<std::int64_t>(std::ceil(r * r / 4.0)));
}

TEST(Threshold, ConservativeUsesHalfRho) {
    EXPECT_EQ(conservative_threshold(0.1, 0.5), switch_threshold(0.1, 0.25));
    EXPECT_FALSE(conservative_threshold(0.1, 2.0 * switch_sigma_bound(0.1)).has_value());
    const auto n = conservative_threshold(0.05, 0.2);
    ASSERT_TRUE(n);
    const auto oracle = crossover_search(0.05, 0.1);
    ASSERT_TRUE(oracle);
    EXPECT_LE(std::llabs(*n - *oracle), 1);
    EXPECT_THROW((void)conservative_threshold(0.1, 0.0), InputError);
}

TEST(Threshold, CrossoverHoldsAtAndBeyond) {
    for (double alpha : {0.01, 0.05, 0.1, 0.2}) {
        for (double sigma : {0.05, 0.1, 0.2, 0.3}) {
            const auto n = switch_threshold(alpha, sigma);
            if (!n) { continue; }
            for (double kappa : {1.0, 3.0}) {
                for (std::int64_t m : {*n, 4 * *n}) {
                    const TailBudget b{alpha, m};
                    EXPECT_LE(empirical_bernstein_term(kappa, b, sigma * sigma), hoeffding_term(kappa / 2.0, b))
                        << alpha << ' ' << sigma << ' ' << m;
                }
                if (*n > 10) {
                    const TailBudget b{alpha, *n - 10};
                    EXPECT_GT(empirical_bernstein_term(kappa, b, sigma * sigma), hoeffding_term(kappa / 2.0, b));
                }
            }
        }
    }
}
