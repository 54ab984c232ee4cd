#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

namespace pwband {

/// Paley-Wiener space parameters: band limit eta and input dimension.
struct KernelConfig {
    double eta = 1.0;
    int dim = 1;

    /// Throws InputError unless eta > 0 and dim >= 1.
    void validate() const;

    /// k(x, x) = (eta / pi)^dim.
    [[nodiscard]] double diagonal() const;
};

/// Points are stored column-wise: a dim x n matrix.
using Points = Eigen::MatrixXd;

/// Pack scalar inputs as a 1 x n point matrix.
Points points_1d(std::span<const double> xs);

/// Observed inputs with optional outputs.
struct SampleSet {
    Points inputs;
    Eigen::VectorXd outputs;  // empty when only inputs are known

    [[nodiscard]] Eigen::Index size() const { return inputs.cols(); }
    [[nodiscard]] bool has_outputs() const { return outputs.size() > 0; }

    /// Rows selected by index, in the given order.
    [[nodiscard]] SampleSet subset(std::span<const std::size_t> indices) const;

    /// Equal lengths and pairwise-distinct inputs (max-norm separation >= 1e-9).
    void validate() const;
};

/// Minimum max-norm separation between inputs; closer pairs are treated as duplicates.
inline constexpr double kDuplicateTolerance = 1e-9;

/// Condition-number cap for Gram solves.
inline constexpr double kConditionCap = 1e12;

/// The sinc-product reproducing kernel of the Paley-Wiener space.
double kernel_eval(const Eigen::Ref<const Eigen::VectorXd> &u, const Eigen::Ref<const Eigen::VectorXd> &v,
                   const KernelConfig &cfg);

/// Gram matrix K_ij = k(x_i, x_j). Rejects duplicate inputs.
Eigen::MatrixXd gram(const Points &inputs, const KernelConfig &cfg);

/// Cross-kernel vector (k(x, x_1), ..., k(x, x_n)).
Eigen::VectorXd kernel_column(const Points &inputs, const Eigen::Ref<const Eigen::VectorXd> &x,
                              const KernelConfig &cfg);

/// Throws InputError if any pair of columns is closer than kDuplicateTolerance in max-norm.
void check_distinct(const Points &inputs);

/// Spectral condition number lambda_max / lambda_min of a symmetric matrix
/// (infinity when lambda_min <= 0).
double condition_number(const Eigen::MatrixXd &symmetric);

/// A finite kernel expansion f(x) = sum_k coeffs_k k(x, node_k).
class Interpolant {
public:
    Interpolant() = default;

    /// Wraps explicit coefficients. Nodes must be distinct.
    Interpolant(Points nodes, Eigen::VectorXd coeffs, KernelConfig cfg);

    [[nodiscard]] const Points &nodes() const { return nodes_; }
    [[nodiscard]] const Eigen::VectorXd &coeffs() const { return coeffs_; }
    [[nodiscard]] const KernelConfig &config() const { return cfg_; }

    [[nodiscard]] double operator()(const Eigen::Ref<const Eigen::VectorXd> &x) const;
    [[nodiscard]] double operator()(double x) const;

private:
    Points nodes_;
    Eigen::VectorXd coeffs_;
    KernelConfig cfg_;
};

/// Smallest-norm element interpolating (inputs_k, values_k); solves K alpha = z by
/// Cholesky. Throws ConditioningError when cond(K) exceeds kConditionCap.
Interpolant min_norm_interpolant(const Points &inputs, const Eigen::Ref<const Eigen::VectorXd> &values,
                                 const KernelConfig &cfg);

/// sum_k coeffs_k k(x, node_k).
double evaluate(const Interpolant &f, const Eigen::Ref<const Eigen::VectorXd> &x);

/// Squared RKHS norm alpha^T K alpha.
double rkhs_norm_sq(const Interpolant &f);

}  // namespace pwband
