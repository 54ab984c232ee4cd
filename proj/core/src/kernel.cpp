#include "pwband/kernel.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "pwband/errors.hpp"

namespace pwband {

void KernelConfig::validate() const {
    if (!(eta > 0.0) || !std::isfinite(eta)) { throw InputError("KernelConfig: eta must be positive and finite"); }
    if (dim < 1) { throw InputError("KernelConfig: dim must be >= 1"); }
}

double KernelConfig::diagonal() const { return std::pow(eta / std::numbers::pi, dim); }

Points points_1d(std::span<const double> xs) {
    Points p(1, static_cast<Eigen::Index>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) { p(0, static_cast<Eigen::Index>(i)) = xs[i]; }
    return p;
}

SampleSet SampleSet::subset(std::span<const std::size_t> indices) const {
    SampleSet out;
    out.inputs.resize(inputs.rows(), static_cast<Eigen::Index>(indices.size()));
    if (has_outputs()) { out.outputs.resize(static_cast<Eigen::Index>(indices.size())); }
    for (std::size_t j = 0; j < indices.size(); ++j) {
        const auto src = static_cast<Eigen::Index>(indices[j]);
        if (src < 0 || src >= size()) { throw InputError("SampleSet::subset: index out of range"); }
        const auto dst = static_cast<Eigen::Index>(j);
        out.inputs.col(dst) = inputs.col(src);
        if (has_outputs()) { out.outputs(dst) = outputs(src); }
    }
    return out;
}

void SampleSet::validate() const {
    if (has_outputs() && outputs.size() != inputs.cols()) {
        throw InputError("SampleSet: inputs and outputs differ in length");
    }
    check_distinct(inputs);
}

namespace {

// sin(eta * d) / d with the value eta at d == 0.
double sinc_factor(double d, double eta) { return d == 0.0 ? eta : std::sin(eta * d) / d; }

}  // namespace

double kernel_eval(const Eigen::Ref<const Eigen::VectorXd> &u, const Eigen::Ref<const Eigen::VectorXd> &v,
                   const KernelConfig &cfg) {
    if (u.size() != cfg.dim || v.size() != cfg.dim) {
        throw InputError("kernel_eval: point dimension does not match KernelConfig::dim");
    }
    double prod = 1.0;
    for (Eigen::Index j = 0; j < u.size(); ++j) { prod *= sinc_factor(u(j) - v(j), cfg.eta) / std::numbers::pi; }
    return prod;
}

void check_distinct(const Points &inputs) {
    const Eigen::Index n = inputs.cols();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if ((inputs.col(i) - inputs.col(j)).cwiseAbs().maxCoeff() < kDuplicateTolerance) {
                std::ostringstream os;
                os << "duplicate inputs at positions " << i << " and " << j;
                throw InputError(os.str());
            }
        }
    }
}

Eigen::MatrixXd gram(const Points &inputs, const KernelConfig &cfg) {
    cfg.validate();
    if (inputs.rows() != cfg.dim) { throw InputError("gram: point dimension does not match KernelConfig::dim"); }
    check_distinct(inputs);
    const Eigen::Index n = inputs.cols();
    Eigen::MatrixXd k(n, n);
    const double diag = cfg.diagonal();
    for (Eigen::Index j = 0; j < n; ++j) {
        k(j, j) = diag;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            const double kij = kernel_eval(inputs.col(i), inputs.col(j), cfg);
            k(i, j) = kij;
            k(j, i) = kij;
        }
    }
    return k;
}

Eigen::VectorXd kernel_column(const Points &inputs, const Eigen::Ref<const Eigen::VectorXd> &x,
                              const KernelConfig &cfg) {
    Eigen::VectorXd col(inputs.cols());
    for (Eigen::Index i = 0; i < inputs.cols(); ++i) { col(i) = kernel_eval(inputs.col(i), x, cfg); }
    return col;
}

double condition_number(const Eigen::MatrixXd &symmetric) {
    if (symmetric.size() == 0) { return 1.0; }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()(0);
    const double hi = es.eigenvalues()(es.eigenvalues().size() - 1);
    if (!(lo > 0.0)) { return std::numeric_limits<double>::infinity(); }
    return hi / lo;
}

Interpolant::Interpolant(Points nodes, Eigen::VectorXd coeffs, KernelConfig cfg)
    : nodes_(std::move(nodes)), coeffs_(std::move(coeffs)), cfg_(cfg) {
    cfg_.validate();
    if (nodes_.cols() != coeffs_.size()) { throw InputError("Interpolant: one coefficient per node required"); }
    if (nodes_.cols() > 0 && nodes_.rows() != cfg_.dim) {
        throw InputError("Interpolant: node dimension does not match KernelConfig::dim");
    }
}

double Interpolant::operator()(const Eigen::Ref<const Eigen::VectorXd> &x) const { return evaluate(*this, x); }

double Interpolant::operator()(double x) const {
    Eigen::VectorXd p(1);
    p(0) = x;
    return evaluate(*this, p);
}

Interpolant min_norm_interpolant(const Points &inputs, const Eigen::Ref<const Eigen::VectorXd> &values,
                                 const KernelConfig &cfg) {
    if (values.size() != inputs.cols()) { throw InputError("min_norm_interpolant: one value per input required"); }
    const Eigen::MatrixXd k = gram(inputs, cfg);
    if (values.isZero(0.0)) { return Interpolant(inputs, Eigen::VectorXd::Zero(values.size()), cfg); }

    const double cond = condition_number(k);
    if (!(cond <= kConditionCap)) {
        std::ostringstream os;
        os << "min_norm_interpolant: Gram condition estimate " << cond << " exceeds cap " << kConditionCap;
        throw ConditioningError(os.str(), cond);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success) {
        throw ConditioningError("min_norm_interpolant: Cholesky factorization failed", cond);
    }
    return Interpolant(inputs, llt.solve(values), cfg);
}

double evaluate(const Interpolant &f, const Eigen::Ref<const Eigen::VectorXd> &x) {
    if (x.size() != f.config().dim) { throw InputError("evaluate: point dimension does not match the interpolant"); }
    double acc = 0.0;
    for (Eigen::Index k = 0; k < f.nodes().cols(); ++k) {
        acc += f.coeffs()(k) * kernel_eval(x, f.nodes().col(k), f.config());
    }
    return acc;
}

double rkhs_norm_sq(const Interpolant &f) {
    if (f.coeffs().size() == 0) { return 0.0; }
    const Eigen::MatrixXd k = gram(f.nodes(), f.config());
    return std::max(0.0, f.coeffs().dot(k * f.coeffs()));
}

}  // namespace pwband
