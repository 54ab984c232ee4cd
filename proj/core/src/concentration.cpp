#include "pwband/concentration.hpp"

#include <cmath>

#include "pwband/errors.hpp"

namespace pwband {

void TailBudget::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) { throw InputError("TailBudget: alpha must lie in (0, 1)"); }
    if (n < 1) { throw InputError("TailBudget: n must be >= 1"); }
}

void TailBudget::validate_bernstein() const {
    validate();
    if (n < 2) { throw InputError("TailBudget: Bernstein-type terms need n >= 2"); }
}

double hoeffding_term(double sigma, const TailBudget &budget) {
    budget.validate();
    if (sigma < 0.0) { throw InputError("hoeffding_term: sigma must be nonnegative"); }
    return sigma * std::sqrt(2.0 * std::log(1.0 / budget.alpha) / static_cast<double>(budget.n));
}

double randomized_hoeffding_term(double sigma, const TailBudget &budget, double u) {
    budget.validate();
    if (sigma < 0.0) { throw InputError("randomized_hoeffding_term: sigma must be nonnegative"); }
    if (!(u > 0.0 && u <= 1.0)) { throw InputError("randomized_hoeffding_term: u must lie in (0, 1]"); }
    const double n = static_cast<double>(budget.n);
    const double log_inv_alpha = std::log(1.0 / budget.alpha);
    return sigma * std::sqrt(2.0 * log_inv_alpha / n) + sigma * std::log(u) / std::sqrt(2.0 * n * log_inv_alpha);
}

double empirical_variance(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 2) { throw InputError("empirical_variance: at least two values required"); }
    // sum_{i<j} (x_i - x_j)^2 = n * sum (x_i - mean)^2, evaluated in the centered form.
    double mean = 0.0;
    for (double v : x) { mean += v; }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : x) { ss += (v - mean) * (v - mean); }
    return ss / static_cast<double>(n - 1);
}

double empirical_bernstein_term(double kappa, const TailBudget &budget, double v) {
    budget.validate_bernstein();
    if (kappa < 0.0) { throw InputError("empirical_bernstein_term: kappa must be nonnegative"); }
    if (v < 0.0) { throw InputError("empirical_bernstein_term: variance must be nonnegative"); }
    const double n = static_cast<double>(budget.n);
    const double log_term = std::log(2.0 / budget.alpha);
    return kappa * (std::sqrt(2.0 * v * log_term / n) + 7.0 * log_term / (3.0 * (n - 1.0)));
}

double switch_sigma_bound(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) { throw InputError("switch_sigma_bound: alpha must lie in (0, 1)"); }
    return std::sqrt(std::log(1.0 / alpha) / (4.0 * std::log(2.0 / alpha)));
}

std::optional<std::int64_t> switch_threshold(double alpha, double sigma) {
    if (sigma < 0.0) { throw InputError("switch_threshold: sigma must be nonnegative"); }
    if (sigma >= switch_sigma_bound(alpha)) { return std::nullopt; }
    const double l1 = std::log(1.0 / alpha);
    const double l2 = std::log(2.0 / alpha);
    const double varsigma = 7.0 * std::sqrt(2.0) * l2 / (3.0 * (std::sqrt(l1) - 2.0 * sigma * std::sqrt(l2)));
    const double root = varsigma + std::sqrt(varsigma * varsigma + 4.0);
    return static_cast<std::int64_t>(std::ceil(root * root / 4.0));
}

std::optional<std::int64_t> conservative_threshold(double alpha, double rho) {
    if (!(rho > 0.0)) { throw InputError("conservative_threshold: rho must be positive"); }
    return switch_threshold(alpha, rho / 2.0);
}

}  // namespace pwband
