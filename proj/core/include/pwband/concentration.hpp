#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace pwband {

/// Risk level and sample size for a tail bound.
struct TailBudget {
    double alpha = 0.1;
    std::int64_t n = 1;

    /// 0 < alpha < 1 and n >= 1.
    void validate() const;
    /// As validate(), additionally n >= 2 (the Bernstein term divides by n - 1).
    void validate_bernstein() const;
};

/// sigma * sqrt(2 ln(1/alpha) / n): the Hoeffding deviation for sigma-sub-Gaussian means.
double hoeffding_term(double sigma, const TailBudget &budget);

/// phi(sigma, alpha, n, u) = sigma sqrt(2 ln(1/alpha)/n) + sigma ln(u) / sqrt(2 n ln(1/alpha)),
/// the uniformly-randomized Hoeffding deviation. u must lie in (0, 1].
double randomized_hoeffding_term(double sigma, const TailBudget &budget, double u);

/// Pairwise-difference variance (1/(n(n-1))) sum_{i<j} (x_i - x_j)^2, n >= 2.
double empirical_variance(std::span<const double> x);

/// psi(kappa, alpha, n, v) = kappa (sqrt(2 v ln(2/alpha) / n) + 7 ln(2/alpha) / (3 (n - 1))).
/// v is the empirical variance of the sample rescaled to [0, 1].
double empirical_bernstein_term(double kappa, const TailBudget &budget, double v);

/// Largest sigma for which the Bernstein deviation eventually beats Hoeffding:
/// sqrt(ln(1/alpha) / (4 ln(2/alpha))).
double switch_sigma_bound(double alpha);

/// Smallest n from which psi(1, alpha, n, sigma^2) <= phi(1/2, alpha, n, 1), in closed form.
/// std::nullopt ("never") when sigma >= switch_sigma_bound(alpha).
std::optional<std::int64_t> switch_threshold(double alpha, double sigma);

/// switch_threshold(alpha, rho / 2).
std::optional<std::int64_t> conservative_threshold(double alpha, double rho);

}  // namespace pwband
