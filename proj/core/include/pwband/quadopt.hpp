#pragma once

#include <Eigen/Core>
#include <optional>

#include "pwband/ellipsoid.hpp"

namespace pwband {

/// z^T A z + b^T z + c with A symmetric.
struct QuadraticObjective {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    double c = 0.0;

    /// Throws InputError on size mismatch or if A is not symmetric within 1e-12 (relative).
    void validate() const;
    [[nodiscard]] double operator()(const Eigen::Ref<const Eigen::VectorXd> &z) const;
};

struct QuadraticOptimum {
    double value = 0.0;
    Eigen::VectorXd argopt;
};

/// Global maximizer of a (possibly indefinite) quadratic over an ellipsoid.
///
/// Whitening z = center + L w (L = P^{-1/2}) turns the problem into a trust-region
/// subproblem over the unit ball, which is solved exactly by the eigendecomposition of
/// L A L and a safeguarded Newton iteration on the secular equation for the dual
/// multiplier mu >= max(lambda_max, 0). The hard case (gradient orthogonal to the top
/// eigenspace) is completed along a top eigenvector to reach the boundary.
///
/// A and the ellipsoid are fixed at construction; the linear and constant terms may vary
/// between calls, which makes repeated solves O(n) after an O(n^3) setup.
class EllipsoidQuadraticMaximizer {
public:
    EllipsoidQuadraticMaximizer(const Eigen::MatrixXd &A, const Ellipsoid &e);

    /// Linear data expressed in whitened eigen-coordinates: objective is
    /// sum_i lambda_i y_i^2 + g_i y_i + constant over ||y|| <= 1.
    struct Linear {
        Eigen::VectorXd g;
        double constant = 0.0;
    };

    [[nodiscard]] Linear linear_terms(const Eigen::Ref<const Eigen::VectorXd> &b, double c) const;

    /// Optimal value, and optionally the maximizer in eigen-coordinates.
    [[nodiscard]] double max_value(const Linear &lin, Eigen::VectorXd *y_out = nullptr) const;

    [[nodiscard]] QuadraticOptimum maximize(const Eigen::Ref<const Eigen::VectorXd> &b, double c) const;

    /// Map eigen-coordinates back to z.
    [[nodiscard]] Eigen::VectorXd to_point(const Eigen::Ref<const Eigen::VectorXd> &y) const;

    [[nodiscard]] const Eigen::VectorXd &eigenvalues() const { return lambda_; }

private:
    Eigen::MatrixXd a_;
    Eigen::VectorXd center_;
    Eigen::MatrixXd sqrt_inv_;  // L
    Eigen::MatrixXd basis_;     // eigenvectors of L A L
    Eigen::VectorXd lambda_;    // ascending
    Eigen::VectorXd a_center_;  // A * center
    double center_quad_ = 0.0;  // center^T A center
};

/// Global maximum of obj over e. A degenerate ellipsoid evaluates obj at its center.
QuadraticOptimum max_quadratic_over_ellipsoid(const QuadraticObjective &obj, const Ellipsoid &e);

/// Global minimum of obj over e (the maximizer applied to -obj).
QuadraticOptimum min_quadratic_over_ellipsoid(const QuadraticObjective &obj, const Ellipsoid &e);

enum class Sense { min, max };

/// Bisection controls for endpoint_program.
struct EndpointOptions {
    double abs_tol = 1e-7;
    int max_iter = 200;
};

/// Extreme z0 such that some z in e satisfies [z; z0]^T G [z; z0] <= tau, where G is the
/// inverse of the augmented Gram matrix with the query in the last position.
/// Bisection on z0 with the feasibility oracle min_{z in e} [z; z0]^T G [z; z0] <= tau;
/// the initial bracket comes from |z0| <= sqrt(tau k(x0, x0)). Returns the feasible side
/// of the final bracket, or std::nullopt when no (z, z0) is feasible.
std::optional<double> endpoint_program(const Eigen::MatrixXd &gram_aug_inverse, const Ellipsoid &e, double tau,
                                       Sense sense, const EndpointOptions &opts = {});

/// Feasibility oracle used by endpoint_program: min over z in e of [z; z0]^T G [z; z0].
double endpoint_feasibility(const Eigen::MatrixXd &gram_aug_inverse, const Ellipsoid &e, double z0);

/// max_linear_over_ball_and_ellipsoid with the constraint data prepared once, for solving
/// several objective vectors against the same B, e and tau.
class BallEllipsoidLinearMaximizer {
public:
    BallEllipsoidLinearMaximizer(const Eigen::MatrixXd &B, const Ellipsoid &e, double tau);

    /// False when the ball and the pulled-back ellipsoid do not intersect.
    [[nodiscard]] bool feasible() const { return feasible_; }
    [[nodiscard]] std::optional<double> maximize(const Eigen::Ref<const Eigen::VectorXd> &c) const;

private:
    [[nodiscard]] double constraint(const Eigen::VectorXd &v) const;

    Eigen::MatrixXd basis_;   // eigenvectors of B^T P B
    Eigen::VectorXd gamma_;   // its eigenvalues, clamped at 0
    Eigen::VectorXd qh_;      // basis^T B^T P center
    double s0_ = 0.0;         // center^T P center
    double tau_ = 0.0;
    bool feasible_ = false;
};

/// max c^T u  subject to  ||u||^2 <= tau  and  (B u - center)^T P (B u - center) <= 1.
///
/// Solved through its two-multiplier Lagrange dual: the ball multiplier is eliminated by a
/// secular equation, and the ellipsoid multiplier by bisection on the sign of the
/// constraint slack. Every dual evaluation is an upper bound on the maximum; the smallest
/// one is returned. Requires a nondegenerate ellipsoid. std::nullopt when infeasible.
std::optional<double> max_linear_over_ball_and_ellipsoid(const Eigen::Ref<const Eigen::VectorXd> &c,
                                                         const Eigen::MatrixXd &B, const Ellipsoid &e, double tau);

}  // namespace pwband
