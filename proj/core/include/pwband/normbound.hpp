#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <span>
#include <string_view>

#include "pwband/concentration.hpp"
#include "pwband/ellipsoid.hpp"
#include "pwband/kernel.hpp"
#include "pwband/rng.hpp"

namespace pwband {

/// Known input density h* and the constant rho with f*^2 <= rho h*.
struct DensityModel {
    std::function<double(const Eigen::Ref<const Eigen::VectorXd> &)> pdf;
    double rho = 1.0;

    void validate() const;
    /// 1 / h*(x_k) for every input, throwing InputError unless h*(x_k) > 0.
    [[nodiscard]] Eigen::VectorXd inverse_density(const Points &inputs) const;
};

enum class BoundMethod { hoeffding, randomized_hoeffding, bernstein_noisefree, bernstein_noisy };

const char *to_string(BoundMethod m);
BoundMethod bound_method_from_string(std::string_view s);

/// A stochastic upper bound on the squared kernel norm of the regression function.
struct NormBound {
    double tau = 0.0;
    BoundMethod method = BoundMethod::hoeffding;
    double alpha = 0.0;
    double beta = 0.0;
    double xi_star = 0.0;
    std::optional<double> u_draw;
};

/// max over z in e of (1/n0) sum_k z_k^2 / h*(x_k).
double xi_star(const SampleSet &subsample, const DensityModel &density, const Ellipsoid &e);

/// tau_0 = xi + rho sqrt(ln(1/alpha) / (2 n0)).
NormBound tau_hoeffding(double xi, const DensityModel &density, const TailBudget &budget, double beta = 0.0);

/// tau_u = xi + phi(rho/2, alpha, n0, u) with u in (0, 1).
NormBound tau_randomized(double xi, const DensityModel &density, const TailBudget &budget, double u,
                         double beta = 0.0);

/// Noise-free empirical Bernstein bound computed from the observed outputs.
/// T_k = y_k^2 / h*(x_k) lies in [0, rho]; the variance term uses V_n(T / rho).
NormBound tau_bernstein_noisefree(const SampleSet &subsample, const DensityModel &density, const TailBudget &budget);

struct VarianceBound {
    double v_star = 0.0;      // reported upper bound on max V_n(T(z))
    Eigen::VectorXd z_star;   // best point found by local search
    double local_best = 0.0;  // V_n(T(z_star))
    double box_bound = 0.0;   // certified coordinate-box bound
};

/// Exact maximum of V_n over the box prod_k [lo_k, hi_k] for n <= 12 (vertex enumeration),
/// otherwise the minimax bound min_c sum_k max((lo_k - c)^2, (hi_k - c)^2) / (n - 1),
/// which is never below the exact maximum.
double max_variance_over_box(std::span<const double> lo, std::span<const double> hi);

/// Upper bound on max over z in e of V_n(T(z)), T(z)_k = z_k^2 / h*(x_k).
/// Multi-start projected gradient ascent plus boundary sampling, capped by the box bound:
/// v_star = min(box bound, 1.01 * best local value).
VarianceBound max_empirical_variance(const DensityModel &density, const SampleSet &subsample, const Ellipsoid &e,
                                     Rng &rng);

/// tau_e = xi + psi(rho, alpha, n0, v_star / rho^2).
NormBound tau_bernstein_noisy(double xi, double v_star, const DensityModel &density, const TailBudget &budget,
                              double beta);

enum class BoundFamily { randomized_hoeffding, bernstein };

const char *to_string(BoundFamily f);

/// Bernstein once n0 reaches the conservative threshold N' = N(alpha, rho/2), else
/// randomized Hoeffding.
BoundFamily select_bound(const TailBudget &budget, const DensityModel &density);

}  // namespace pwband
