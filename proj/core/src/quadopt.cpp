#include "pwband/quadopt.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pwband/errors.hpp"

namespace pwband {

void QuadraticObjective::validate() const {
    if (A.rows() != A.cols()) { throw InputError("QuadraticObjective: A must be square"); }
    if (b.size() != A.rows()) { throw InputError("QuadraticObjective: b has the wrong length"); }
    if (A.size() == 0) { return; }
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw InputError("QuadraticObjective: A is not symmetric");
    }
}

double QuadraticObjective::operator()(const Eigen::Ref<const Eigen::VectorXd> &z) const {
    return z.dot(A * z) + b.dot(z) + c;
}

EllipsoidQuadraticMaximizer::EllipsoidQuadraticMaximizer(const Eigen::MatrixXd &A, const Ellipsoid &e)
    : center_(e.center()), sqrt_inv_(e.whitening_inverse()) {
    QuadraticObjective{A, Eigen::VectorXd::Zero(A.rows()), 0.0}.validate();
    if (A.rows() != e.dimension()) { throw InputError("EllipsoidQuadraticMaximizer: dimension mismatch"); }
    a_ = 0.5 * (A + A.transpose());
    a_center_ = a_ * center_;
    center_quad_ = center_.dot(a_center_);
    if (e.degenerate() || e.dimension() == 0) {
        basis_.resize(e.dimension(), 0);
        lambda_.resize(0);
        return;
    }
    Eigen::MatrixXd h = sqrt_inv_ * a_ * sqrt_inv_;
    h = 0.5 * (h + h.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success) { throw NumericError("EllipsoidQuadraticMaximizer: eigendecomposition failed"); }
    basis_ = es.eigenvectors();
    lambda_ = es.eigenvalues();
}

EllipsoidQuadraticMaximizer::Linear EllipsoidQuadraticMaximizer::linear_terms(
    const Eigen::Ref<const Eigen::VectorXd> &b, double c) const {
    if (b.size() != center_.size()) { throw InputError("EllipsoidQuadraticMaximizer: b has the wrong length"); }
    Linear lin;
    lin.constant = center_quad_ + b.dot(center_) + c;
    if (lambda_.size() == 0) {
        lin.g.resize(0);
        return lin;
    }
    lin.g = basis_.transpose() * (sqrt_inv_ * (2.0 * a_center_ + b));
    return lin;
}

namespace {

// ||y(mu)||^2 with y_i = g_i / (2 (mu - lambda_i)).
double secular_norm_sq(const Eigen::VectorXd &g, const Eigen::VectorXd &lambda, double mu) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        if (g(i) == 0.0) { continue; }
        const double d = 2.0 * (mu - lambda(i));
        s += (g(i) / d) * (g(i) / d);
    }
    return s;
}

// Derivative of ||y(mu)||^2 with respect to mu.
double secular_norm_sq_derivative(const Eigen::VectorXd &g, const Eigen::VectorXd &lambda, double mu) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        if (g(i) == 0.0) { continue; }
        const double d = mu - lambda(i);
        s -= g(i) * g(i) / (2.0 * d * d * d);
    }
    return s;
}

// Root of 1/||y(mu)|| - 1 on (lo, hi) where the function is negative at lo and
// nonnegative at hi. Newton steps safeguarded by bisection.
double solve_secular(const Eigen::VectorXd &g, const Eigen::VectorXd &lambda, double lo, double hi) {
    double mu = hi;
    for (int it = 0; it < 500; ++it) {
        const double s = secular_norm_sq(g, lambda, mu);
        const double phi = 1.0 / std::sqrt(s) - 1.0;
        if (std::abs(phi) <= 1e-15) { return mu; }
        if (phi < 0.0) { lo = mu; } else { hi = mu; }
        if (hi - lo <= 1e-16 * std::max(1.0, std::abs(mu))) { return hi; }
        const double dphi = -0.5 * secular_norm_sq_derivative(g, lambda, mu) / (s * std::sqrt(s));
        double next = mu - phi / dphi;
        if (!(next > lo && next < hi) || !std::isfinite(next)) { next = 0.5 * (lo + hi); }
        mu = next;
    }
    return hi;
}

}  // namespace

double EllipsoidQuadraticMaximizer::max_value(const Linear &lin, Eigen::VectorXd *y_out) const {
    const Eigen::Index n = lambda_.size();
    if (n == 0) {
        if (y_out) { y_out->resize(0); }
        return lin.constant;
    }
    if (lin.g.size() != n) { throw InputError("EllipsoidQuadraticMaximizer: linear term has the wrong length"); }
    const Eigen::VectorXd &g = lin.g;
    const double lam_max = lambda_(n - 1);
    const double gnorm = g.norm();
    const double scale = std::max({1.0, lambda_.cwiseAbs().maxCoeff(), gnorm});

    Eigen::VectorXd y(n);
    auto fill = [&](double mu) {
        for (Eigen::Index i = 0; i < n; ++i) { y(i) = g(i) == 0.0 ? 0.0 : g(i) / (2.0 * (mu - lambda_(i))); }
    };

    if (lam_max < 0.0 && secular_norm_sq(g, lambda_, 0.0) <= 1.0) {
        fill(0.0);  // interior maximizer of a strictly concave objective
    } else {
        const double eps = 1e-13 * scale;
        const double mu_lo = std::max(lam_max, 0.0);
        const double probe = lam_max >= 0.0 ? lam_max + eps : 0.0;
        if (lam_max >= 0.0 && secular_norm_sq(g, lambda_, probe) <= 1.0) {
            // Hard case: complete along the top eigenvector.
            fill(probe);
            const double rest = std::max(0.0, 1.0 - (y.squaredNorm() - y(n - 1) * y(n - 1)));
            y(n - 1) = (g(n - 1) < 0.0 ? -1.0 : 1.0) * std::sqrt(rest);
        } else {
            const double hi = mu_lo + 0.5 * gnorm * (1.0 + 1e-12) + eps;
            fill(solve_secular(g, lambda_, probe, hi));
        }
    }
    const double yn = y.norm();
    if (yn > 1.0) { y /= yn; }

    double value = lin.constant;
    for (Eigen::Index i = 0; i < n; ++i) { value += lambda_(i) * y(i) * y(i) + g(i) * y(i); }
    if (y_out) { *y_out = std::move(y); }
    return value;
}

Eigen::VectorXd EllipsoidQuadraticMaximizer::to_point(const Eigen::Ref<const Eigen::VectorXd> &y) const {
    if (lambda_.size() == 0) { return center_; }
    return center_ + sqrt_inv_ * (basis_ * y);
}

QuadraticOptimum EllipsoidQuadraticMaximizer::maximize(const Eigen::Ref<const Eigen::VectorXd> &b, double c) const {
    Eigen::VectorXd y;
    const double v = max_value(linear_terms(b, c), &y);
    return {v, to_point(y)};
}

QuadraticOptimum max_quadratic_over_ellipsoid(const QuadraticObjective &obj, const Ellipsoid &e) {
    obj.validate();
    if (obj.A.rows() != e.dimension()) { throw InputError("max_quadratic_over_ellipsoid: dimension mismatch"); }
    if (e.degenerate()) { return {obj(e.center()), e.center()}; }
    return EllipsoidQuadraticMaximizer(obj.A, e).maximize(obj.b, obj.c);
}

QuadraticOptimum min_quadratic_over_ellipsoid(const QuadraticObjective &obj, const Ellipsoid &e) {
    QuadraticOptimum r = max_quadratic_over_ellipsoid(QuadraticObjective{-obj.A, -obj.b, -obj.c}, e);
    r.value = -r.value;
    return r;
}

namespace {

struct AugmentedBlocks {
    Eigen::MatrixXd a;   // z-z block
    Eigen::VectorXd b;   // z-z0 coupling
    double c = 0.0;      // z0-z0 entry
};

AugmentedBlocks split_augmented(const Eigen::MatrixXd &g, const Ellipsoid &e) {
    const Eigen::Index n0 = e.dimension();
    if (g.rows() != n0 + 1 || g.cols() != n0 + 1) {
        throw InputError("endpoint_program: augmented inverse Gram must be (n0 + 1) x (n0 + 1)");
    }
    AugmentedBlocks blocks{g.topLeftCorner(n0, n0), g.col(n0).head(n0), g(n0, n0)};
    if (!(blocks.c > 0.0)) { throw InputError("endpoint_program: augmented inverse Gram must be positive definite"); }
    return blocks;
}

// Feasibility oracle with the z-dependent part prepared once.
class FeasibilityOracle {
public:
    FeasibilityOracle(const AugmentedBlocks &blocks, const Ellipsoid &e)
        : c_(blocks.c), solver_(-blocks.a, e) {
        const auto lin0 = solver_.linear_terms(Eigen::VectorXd::Zero(e.dimension()), 0.0);
        const auto lin1 = solver_.linear_terms(-2.0 * blocks.b, 0.0);
        g0_ = lin0.g;
        g1_ = lin1.g - lin0.g;
        k0_ = lin0.constant;
        k1_ = lin1.constant - lin0.constant;
    }

    // min over z of [z; z0]^T G [z; z0].
    double operator()(double z0) const {
        EllipsoidQuadraticMaximizer::Linear lin;
        lin.g = g0_ + z0 * g1_;
        lin.constant = k0_ + z0 * k1_ - c_ * z0 * z0;
        return -solver_.max_value(lin);
    }

private:
    double c_;
    EllipsoidQuadraticMaximizer solver_;
    Eigen::VectorXd g0_, g1_;
    double k0_ = 0.0, k1_ = 0.0;
};

}  // namespace

double endpoint_feasibility(const Eigen::MatrixXd &gram_aug_inverse, const Ellipsoid &e, double z0) {
    const AugmentedBlocks blocks = split_augmented(gram_aug_inverse, e);
    if (e.degenerate()) {
        const Eigen::VectorXd &z = e.center();
        return z.dot(blocks.a * z) + 2.0 * z0 * blocks.b.dot(z) + blocks.c * z0 * z0;
    }
    return FeasibilityOracle(blocks, e)(z0);
}

std::optional<double> endpoint_program(const Eigen::MatrixXd &gram_aug_inverse, const Ellipsoid &e, double tau,
                                       Sense sense, const EndpointOptions &opts) {
    if (!(tau > 0.0)) { throw InputError("endpoint_program: tau must be positive"); }
    const AugmentedBlocks blocks = split_augmented(gram_aug_inverse, e);
    const double sign = sense == Sense::max ? 1.0 : -1.0;

    if (e.degenerate()) {
        // c z0^2 + 2 beta z0 + gamma <= tau.
        const Eigen::VectorXd &z = e.center();
        const double beta = blocks.b.dot(z);
        const double gamma = z.dot(blocks.a * z);
        const double disc = beta * beta - blocks.c * (gamma - tau);
        if (disc < 0.0) { return std::nullopt; }
        const double root = std::sqrt(disc);
        // Stable pair of roots of c x^2 + 2 beta x + (gamma - tau).
        const double q = -(beta + std::copysign(root, beta));
        double r1 = q / blocks.c;
        double r2 = q != 0.0 ? (gamma - tau) / q : -r1;
        if (r1 > r2) { std::swap(r1, r2); }
        return sense == Sense::max ? r2 : r1;
    }

    // Unconstrained in z0, the smallest achievable value is min_z z^T (A - b b^T / c) z.
    const Eigen::MatrixXd schur = blocks.a - blocks.b * blocks.b.transpose() / blocks.c;
    const QuadraticOptimum best = min_quadratic_over_ellipsoid(
        QuadraticObjective{0.5 * (schur + schur.transpose()), Eigen::VectorXd::Zero(e.dimension()), 0.0}, e);
    if (best.value > tau) { return std::nullopt; }
    const double z0_feasible = -blocks.b.dot(best.argopt) / blocks.c;

    const FeasibilityOracle oracle(blocks, e);
    auto feasible = [&](double z0) { return oracle(z0) <= tau; };

    // |z0| <= sqrt(tau k(x0, x0)) with k(x0, x0) read off the inverse of G.
    const Eigen::Index last = e.dimension();
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(last + 1);
    unit(last) = 1.0;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram_aug_inverse);
    const double k00 = ldlt.solve(unit)(last);
    double outer = std::sqrt(tau * std::max(k00, 0.0)) * (1.0 + 1e-9) + 1e-12;
    if (!std::isfinite(outer) || sign * outer <= sign * z0_feasible) {
        outer = std::abs(z0_feasible) + 1.0;
    }
    double inner = z0_feasible;
    double far = sign * outer;
    for (int expand = 0; feasible(far); ++expand) {
        if (expand > 60) { throw NumericError("endpoint_program: feasible set appears unbounded"); }
        inner = far;
        far = inner + sign * std::max(1.0, 2.0 * std::abs(inner));
    }
    if (!feasible(inner)) {
        std::ostringstream os;
        os << "endpoint_program: cannot bracket; oracle(" << inner << ") = " << oracle(inner) << " > tau = " << tau;
        throw NumericError(os.str());
    }
    for (int it = 0; it < opts.max_iter && std::abs(far - inner) > opts.abs_tol; ++it) {
        const double mid = 0.5 * (inner + far);
        if (feasible(mid)) { inner = mid; } else { far = mid; }
    }
    return inner;
}

namespace {

// Solves for mu1 >= 0 so that ||v||^2 <= tau with complementary slackness, where
// v_i = a_i / (2 (mu1 + d_i)). Returns mu1 and fills v.
double ball_multiplier(const Eigen::VectorXd &a, const Eigen::VectorXd &d, double tau, Eigen::VectorXd &v) {
    const Eigen::Index n = a.size();
    auto norm_sq = [&](double mu1) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (a(i) == 0.0) { continue; }
            const double den = 2.0 * (mu1 + d(i));
            s += (a(i) / den) * (a(i) / den);
        }
        return s;
    };
    auto fill = [&](double mu1) {
        for (Eigen::Index i = 0; i < n; ++i) { v(i) = a(i) == 0.0 ? 0.0 : a(i) / (2.0 * (mu1 + d(i))); }
    };
    v.resize(n);
    const double n0 = norm_sq(0.0);
    if (std::isfinite(n0) && n0 <= tau) {
        fill(0.0);
        return 0.0;
    }
    const double anorm = a.norm();
    if (anorm == 0.0) {
        v.setZero();
        return 0.0;
    }
    double lo = 0.0;
    double hi = anorm / (2.0 * std::sqrt(tau)) * (1.0 + 1e-12);
    const double inv_sqrt_tau = 1.0 / std::sqrt(tau);
    double mu = hi;
    for (int it = 0; it < 300; ++it) {
        const double s = norm_sq(mu);
        const double phi = 1.0 / std::sqrt(s) - inv_sqrt_tau;
        if (std::abs(phi) <= 1e-15 * inv_sqrt_tau) { break; }
        if (phi < 0.0) { lo = mu; } else { hi = mu; }
        if (hi - lo <= 1e-16 * std::max(hi, 1e-300)) { mu = hi; break; }
        double ds = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (a(i) == 0.0) { continue; }
            const double den = mu + d(i);
            ds -= a(i) * a(i) / (2.0 * den * den * den);
        }
        const double dphi = -0.5 * ds / (s * std::sqrt(s));
        double next = mu - phi / dphi;
        if (!(next > lo && next < hi) || !std::isfinite(next)) { next = lo > 0.0 ? 0.5 * (lo + hi) : 0.5 * hi; }
        mu = next;
    }
    // Converged iterates may overshoot the sphere by rounding; only a real miss falls back.
    if (norm_sq(mu) > tau * (1.0 + 1e-9)) { mu = hi; }
    fill(mu);
    return mu;
}

}  // namespace

BallEllipsoidLinearMaximizer::BallEllipsoidLinearMaximizer(const Eigen::MatrixXd &B, const Ellipsoid &e, double tau)
    : tau_(tau) {
    if (!(tau > 0.0)) { throw InputError("max_linear_over_ball_and_ellipsoid: tau must be positive"); }
    if (e.degenerate()) { throw InputError("max_linear_over_ball_and_ellipsoid: ellipsoid must be nondegenerate"); }
    if (B.rows() != e.dimension()) { throw InputError("max_linear_over_ball_and_ellipsoid: dimension mismatch"); }
    const Eigen::MatrixXd &p = e.shape();
    const Eigen::MatrixXd pb = p * B;
    Eigen::MatrixXd m = B.transpose() * pb;
    m = 0.5 * (m + m.transpose());
    const Eigen::VectorXd q = pb.transpose() * e.center();
    s0_ = e.center().dot(p * e.center());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success) { throw NumericError("max_linear_over_ball_and_ellipsoid: eigendecomposition failed"); }
    basis_ = es.eigenvectors();
    gamma_ = es.eigenvalues().cwiseMax(0.0);
    qh_ = basis_.transpose() * q;

    // The smallest constraint value over the ball decides emptiness.
    Eigen::VectorXd v;
    ball_multiplier(2.0 * qh_, gamma_, tau_, v);
    feasible_ = constraint(v) <= 1.0 + 1e-10 * std::max(1.0, s0_);
}

double BallEllipsoidLinearMaximizer::constraint(const Eigen::VectorXd &v) const {
    return (gamma_.array() * v.array().square()).sum() - 2.0 * qh_.dot(v) + s0_;
}

std::optional<double> BallEllipsoidLinearMaximizer::maximize(const Eigen::Ref<const Eigen::VectorXd> &c) const {
    if (c.size() != basis_.rows()) { throw InputError("max_linear_over_ball_and_ellipsoid: dimension mismatch"); }
    if (!feasible_) { return std::nullopt; }
    const Eigen::VectorXd ch = basis_.transpose() * c;
    const double sqrt_tau = std::sqrt(tau_);
    const double cnorm = ch.norm();
    if (cnorm == 0.0) { return 0.0; }
    if (constraint(sqrt_tau * ch / cnorm) <= 1.0) { return sqrt_tau * cnorm; }

    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXd v;
    // Dual value and constraint slack at ellipsoid multiplier mu2.
    auto dual = [&](double mu2, double &slack) {
        const Eigen::VectorXd a = ch + 2.0 * mu2 * qh_;
        const Eigen::VectorXd d = mu2 * gamma_;
        const double mu1 = ball_multiplier(a, d, tau_, v);
        const double value = mu1 * tau_ + 0.5 * a.dot(v) + mu2 * (1.0 - s0_);
        best = std::min(best, value);
        slack = 1.0 - constraint(v);
    };

    double lo = 0.0;
    double hi = 1.0;
    double slack = 0.0;
    dual(hi, slack);
    for (int it = 0; slack < 0.0 && it < 400; ++it) {
        lo = hi;
        hi *= 2.0;
        dual(hi, slack);
    }
    if (slack < 0.0) { return best; }  // barely feasible; best is still a valid upper bound
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = (lo > 0.0 && hi / lo > 4.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        dual(mid, slack);
        if (slack < 0.0) { lo = mid; } else { hi = mid; }
    }
    return best;
}

std::optional<double> max_linear_over_ball_and_ellipsoid(const Eigen::Ref<const Eigen::VectorXd> &c,
                                                         const Eigen::MatrixXd &B, const Ellipsoid &e, double tau) {
    if (B.cols() != c.size()) { throw InputError("max_linear_over_ball_and_ellipsoid: dimension mismatch"); }
    return BallEllipsoidLinearMaximizer(B, e, tau).maximize(c);
}

}  // namespace pwband
