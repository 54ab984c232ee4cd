#include "pwband/simgen.hpp"

#include <cmath>
#include <numbers>

#include "pwband/errors.hpp"

namespace pwband {

void TruthSpec::validate() const {
    kernel.validate();
    if (kernel.dim != 1) { throw InputError("TruthSpec: only one-dimensional truths are generated"); }
    if (knot_count < 1) { throw InputError("TruthSpec: knot_count must be >= 1"); }
    if (!(a < b)) { throw InputError("TruthSpec: need a < b"); }
}

void NoiseSpec::validate() const {
    if (!(lambda0 >= 0.0) || !std::isfinite(lambda0)) { throw InputError("NoiseSpec: lambda0 must be nonnegative"); }
}

void InputLaw::validate() const {
    if (!(zeta > 0.0) || !std::isfinite(zeta) || !std::isfinite(mu)) {
        throw InputError("InputLaw: zeta must be positive and mu finite");
    }
}

GeneratedTruth truth_from_weights(const TruthSpec &spec, const Eigen::VectorXd &knots,
                                  const Eigen::VectorXd &raw_weights) {
    spec.validate();
    if (knots.size() != raw_weights.size() || knots.size() == 0) {
        throw InputError("truth_from_weights: knots and weights must be nonempty and of equal length");
    }
    const Points nodes = knots.transpose();
    const Interpolant raw(nodes, raw_weights, spec.kernel);
    const double margin = 5.0 * std::numbers::pi / spec.kernel.eta;
    const double lo = spec.a - margin;
    const double hi = spec.b + margin;
    double sup = 0.0;
    for (int i = 0; i < kSupGridPoints; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(kSupGridPoints - 1);
        sup = std::max(sup, std::abs(raw(x)));
    }
    GeneratedTruth out;
    out.knots = knots;
    out.raw_weights = raw_weights;
    out.normalizer = sup > 1.0 ? sup : 1.0;
    const Eigen::VectorXd w = raw_weights / out.normalizer;
    // Kernel quadratic form directly; the knots need not give a well-conditioned Gram.
    Eigen::MatrixXd k(knots.size(), knots.size());
    for (Eigen::Index i = 0; i < knots.size(); ++i) {
        for (Eigen::Index j = 0; j < knots.size(); ++j) {
            k(i, j) = kernel_eval(nodes.col(i), nodes.col(j), spec.kernel);
        }
    }
    out.norm_sq = std::max(0.0, w.dot(k * w));
    out.f = Interpolant(nodes, w, spec.kernel);
    return out;
}

GeneratedTruth gen_true_function(const TruthSpec &spec, Rng &rng) {
    spec.validate();
    Eigen::VectorXd knots(spec.knot_count);
    Eigen::VectorXd weights(spec.knot_count);
    for (int k = 0; k < spec.knot_count; ++k) { knots(k) = rng.uniform(spec.a, spec.b); }
    for (int k = 0; k < spec.knot_count; ++k) { weights(k) = rng.uniform(-1.0, 1.0); }
    return truth_from_weights(spec, knots, weights);
}

Points sample_inputs(Eigen::Index n, const InputLaw &law, Rng &rng) {
    law.validate();
    if (n < 0) { throw InputError("sample_inputs: n must be nonnegative"); }
    Points x(1, n);
    for (Eigen::Index i = 0; i < n; ++i) { x(0, i) = rng.laplace(law.mu, law.zeta); }
    return x;
}

double laplace_pdf(double x, double mu, double zeta) {
    if (!(zeta > 0.0)) { throw InputError("laplace_pdf: zeta must be positive"); }
    return std::exp(-std::abs(x - mu) / zeta) / (2.0 * zeta);
}

Eigen::VectorXd gen_noise(Eigen::Index n, const NoiseSpec &noise, Rng &rng) {
    noise.validate();
    if (n < 0) { throw InputError("gen_noise: n must be nonnegative"); }
    Eigen::VectorXd e(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        e(i) = noise.lambda0 == 0.0 ? 0.0 : rng.exponential_mean(noise.lambda0) - noise.lambda0;
    }
    return e;
}

double compute_rho(const Interpolant &f, const InputLaw &law) {
    law.validate();
    constexpr int kPoints = 10000;
    const double lo = law.mu - 10.0 * law.zeta;
    const double hi = law.mu + 10.0 * law.zeta;
    double best = 0.0;
    for (int i = 0; i < kPoints; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(kPoints - 1);
        const double v = f(x);
        best = std::max(best, v * v / laplace_pdf(x, law.mu, law.zeta));
    }
    return std::max(1.05 * best, 1e-12);
}

DensityModel laplace_density(const InputLaw &law, double rho) {
    law.validate();
    DensityModel d;
    d.rho = rho;
    d.pdf = [mu = law.mu, zeta = law.zeta](const Eigen::Ref<const Eigen::VectorXd> &x) {
        return laplace_pdf(x(0), mu, zeta);
    };
    return d;
}

Dataset generate_dataset(const TruthSpec &spec, const InputLaw &law, const NoiseSpec &noise, Eigen::Index n,
                         std::uint64_t master_seed, std::uint64_t trial) {
    spec.validate();
    law.validate();
    noise.validate();
    Dataset d;
    d.master_seed = master_seed;
    d.trial = trial;
    d.truth_spec = spec;
    d.law = law;
    d.noise = noise;
    Rng truth_rng(master_seed, trial, Stream::truth);
    Rng input_rng(master_seed, trial, Stream::inputs);
    Rng noise_rng(master_seed, trial, Stream::noise);
    d.truth = gen_true_function(spec, truth_rng);
    d.sample.inputs = sample_inputs(n, law, input_rng);
    d.noiseless.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) { d.noiseless(i) = d.truth.f(d.sample.inputs(0, i)); }
    d.sample.outputs = d.noiseless + gen_noise(n, noise, noise_rng);
    d.rho = compute_rho(d.truth.f, law);
    return d;
}

}  // namespace pwband
