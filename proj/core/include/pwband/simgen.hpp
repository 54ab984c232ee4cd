#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "pwband/kernel.hpp"
#include "pwband/normbound.hpp"
#include "pwband/rng.hpp"

namespace pwband {

/// Random band-limited truth: knot_count knots uniform on [a, b], weights uniform on [-1, 1].
struct TruthSpec {
    int knot_count = 20;
    double a = 0.0;
    double b = 1.0;
    KernelConfig kernel;

    void validate() const;
};

struct NoiseSpec {
    double lambda0 = 0.3;  // mean of the exponential before centering; 0 means noise free

    void validate() const;
};

/// Laplace(mu, zeta) input law.
struct InputLaw {
    double mu = 0.0;
    double zeta = 1.0;

    void validate() const;
};

struct GeneratedTruth {
    Interpolant f;               // normalized truth
    Eigen::VectorXd knots;
    Eigen::VectorXd raw_weights; // before normalization
    double normalizer = 1.0;     // raw weights are divided by this
    double norm_sq = 0.0;        // ||f||_H^2 = w^T K w / normalizer^2
};

/// Grid used for the sup-norm estimate: 10^4 points over [a - 5 pi/eta, b + 5 pi/eta].
inline constexpr int kSupGridPoints = 10000;

/// Builds the truth from explicit knots and raw weights, dividing by the grid sup of |f|
/// when it exceeds 1.
GeneratedTruth truth_from_weights(const TruthSpec &spec, const Eigen::VectorXd &knots,
                                  const Eigen::VectorXd &raw_weights);

GeneratedTruth gen_true_function(const TruthSpec &spec, Rng &rng);

Points sample_inputs(Eigen::Index n, const InputLaw &law, Rng &rng);

double laplace_pdf(double x, double mu, double zeta);

/// eps_i = E_i - lambda0 with E_i exponential of mean lambda0.
Eigen::VectorXd gen_noise(Eigen::Index n, const NoiseSpec &noise, Rng &rng);

/// 1.05 * max of f^2(x) / h(x) over 10^4 points on [mu - 10 zeta, mu + 10 zeta], at least 1e-12.
double compute_rho(const Interpolant &f, const InputLaw &law);

/// Density model for the Laplace law with the given rho.
DensityModel laplace_density(const InputLaw &law, double rho);

/// One simulated data set: truth, inputs, noiseless values and observations.
struct Dataset {
    std::uint64_t master_seed = 0;
    std::uint64_t trial = 0;
    TruthSpec truth_spec;
    InputLaw law;
    NoiseSpec noise;
    GeneratedTruth truth;
    SampleSet sample;          // observed outputs
    Eigen::VectorXd noiseless; // f*(x_k)
    double rho = 0.0;

    [[nodiscard]] DensityModel density() const { return laplace_density(law, rho); }
};

/// Deterministic in (master_seed, trial): truth, inputs and noise use separate streams.
Dataset generate_dataset(const TruthSpec &spec, const InputLaw &law, const NoiseSpec &noise, Eigen::Index n,
                         std::uint64_t master_seed, std::uint64_t trial);

}  // namespace pwband
