#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "pwband/band.hpp"
#include "pwband/ellipsoid.hpp"
#include "pwband/normbound.hpp"
#include "pwband/simgen.hpp"
#include "pwband/voting.hpp"

namespace pwband {

struct GridSpec {
    Eigen::Index points = 201;
    double lo = -1.0;
    double hi = 1.0;
};

struct SizePair {
    std::int64_t n = 0;
    std::int64_t n0 = 0;
};

enum class CoverageMode { single, voting, noisefree, oracle };

const char *to_string(CoverageMode m);
CoverageMode coverage_mode_from_string(std::string_view s);

/// Parameters shared by all experiments. Each experiment reads the fields it needs.
struct ExperimentConfig {
    std::string experiment = "band";
    std::int64_t trials = 1;
    std::int64_t n = 100;
    std::int64_t n0 = 30;
    std::int64_t K = 51;
    std::vector<std::int64_t> sample_sizes{50, 500};
    std::vector<SizePair> size_pairs{{100, 20}, {250, 50}, {500, 100}};
    double alpha = 0.05;
    double beta = 0.05;
    double gamma = 0.1;  // alpha + beta, the per-set risk
    double eta = 20.0;
    double zeta = 0.5;
    double mu = 0.0;
    double lambda0 = 0.3;
    double a = -1.0;
    double b = 1.0;
    int knot_count = 20;
    std::uint64_t master_seed = 1;
    GridSpec grid;
    std::int64_t randomizations = 100;
    std::int64_t quantile_draws = 100000;
    CoverageMode coverage_mode = CoverageMode::single;
    double coverage_slack = 0.03;
    unsigned workers = 0;  // 0: hardware concurrency

    /// Throws InputError on inconsistent values (including gamma != alpha + beta).
    void validate() const;

    /// Defaults of the named experiment: norm-bounds, voting-bands, diameter-table, coverage, band.
    static ExperimentConfig defaults_for(std::string_view experiment);

    [[nodiscard]] TruthSpec truth_spec() const;
    [[nodiscard]] InputLaw input_law() const;
    [[nodiscard]] NoiseSpec noise_spec() const;
    [[nodiscard]] KernelConfig kernel() const;
};

/// One confidence set built from a random subsample of a data set.
struct MemberSet {
    std::vector<std::size_t> indices;
    SampleSet subsample;
    Ellipsoid ellipsoid;
    NormBound bound;
};

/// Draws n0 indices without replacement, builds the known-noise ball (or the point set when
/// the data are noise free) and the norm bound chosen by select_bound.
MemberSet build_member(const Dataset &data, std::int64_t n0, double alpha, double beta,
                       const NoiseRadiusQuantile &quantile, Rng &subsample_rng, Rng &u_rng, Rng &search_rng);

/// Median, quartiles and 1.5 IQR whiskers.
struct BoxSummary {
    std::int64_t count = 0;
    double mean = 0.0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double whisker_lo = 0.0;
    double whisker_hi = 0.0;
};

BoxSummary box_summary(std::vector<double> values);

// ---------------------------------------------------------------- norm bounds

struct NormBoundTrial {
    std::int64_t n = 0;
    std::int64_t trial = 0;
    double norm_sq = 0.0;
    double rho = 0.0;
    NormBound hoeffding;
    NormBound randomized;
    NormBound bernstein;
};

struct NormBoundSummary {
    std::int64_t n = 0;
    BoundMethod method = BoundMethod::hoeffding;
    BoxSummary excess;            // tau - ||f*||^2
    double valid_fraction = 0.0;  // fraction with ||f*||^2 <= tau
};

struct NormBoundExperimentResult {
    std::vector<NormBoundTrial> trials;
    std::vector<NormBoundSummary> summaries;

    [[nodiscard]] const NormBoundSummary &summary(std::int64_t n, BoundMethod method) const;
};

/// Noise-free norm-bound comparison: for each n in sample_sizes, `trials` data sets with
/// tau_0, tau_u and tau_b computed from all n points.
NormBoundExperimentResult run_norm_bound_experiment(const ExperimentConfig &cfg);

// ---------------------------------------------------------------- voting bands

struct VotingDraw {
    std::string scheme;  // "RO", "RT(0.5,1)", "RT(0,1)"
    std::int64_t id = 0;
    double u = 0.0;      // threshold draw; unused for RO
    std::vector<UnionOfIntervals> sets;  // one per grid point
};

struct SchemeSummary {
    std::string scheme;
    double mean_length = 0.0;    // average total length over grid points and draws
    double mean_spread = 0.0;    // grid average of the across-draw standard deviation of length
    std::int64_t subset_violations = 0;  // grid points where the set is not inside the majority set
};

struct VotingBandResult {
    Dataset data;
    Points grid;
    Eigen::VectorXd truth;  // f* on the grid
    std::vector<MemberSet> members;
    std::vector<std::vector<IntervalEstimate>> member_bands;  // [member][grid point]
    std::vector<UnionOfIntervals> majority_sets;
    std::vector<VotingDraw> draws;
    std::vector<SchemeSummary> summaries;

    [[nodiscard]] const SchemeSummary &summary(std::string_view scheme) const;
};

/// One data set, K subsample bands on the grid, then `randomizations` draws for each of
/// random ordering and the two random-threshold schemes.
VotingBandResult run_voting_band_experiment(const ExperimentConfig &cfg);

// ---------------------------------------------------------------- diameter table

inline constexpr const char *kDiameterSchemes[] = {"ST", "RO", "RT(0.5,1)", "RT(0,1)"};

struct DiameterStats {
    double avg = 0.0;
    double med = 0.0;
    double std = 0.0;
};

struct DiameterRow {
    SizePair size;
    /// [scheme][trial] diameters, schemes in kDiameterSchemes order.
    std::vector<std::vector<double>> diameters;
    std::vector<DiameterStats> stats;
    std::int64_t empty_members = 0;
};

struct DiameterTableResult {
    std::vector<DiameterRow> rows;
};

DiameterStats diameter_stats(const std::vector<double> &values);

/// For each (n, n0): `trials` repetitions of truth, data, Laplace query x0, K subsample
/// intervals, and the diameters of ST (first subsample) and the voted sets.
DiameterTableResult run_diameter_table(const ExperimentConfig &cfg);

// ---------------------------------------------------------------- coverage

struct CoverageTrial {
    std::int64_t trial = 0;
    bool covered = false;
    bool error = false;
    double norm_sq = 0.0;
    double tau = 0.0;
    std::string message;
};

struct CoverageReport {
    CoverageMode mode = CoverageMode::single;
    std::int64_t trials = 0;
    std::int64_t covered = 0;
    std::int64_t errors = 0;
    double frequency = 0.0;  // covered / trials (errors count as not covered)
    double wilson_lo = 0.0;
    double wilson_hi = 0.0;
    double nominal = 0.0;
    double slack = 0.0;
    bool pass = false;
    std::vector<CoverageTrial> details;
};

/// Simultaneous coverage of the grid band:
///  single: one subsample, ball provider, randomized Hoeffding, nominal 1 - alpha - beta;
///  voting: K subsamples at alpha + beta each, majority per grid point, nominal 1 - 2(alpha + beta);
///  noisefree: point set at the noiseless values, tau_u, nominal 1 - alpha;
///  oracle: point set at the noiseless values with tau = ||f*||^2, nominal 1.
CoverageReport run_coverage_audit(const ExperimentConfig &cfg);

// ---------------------------------------------------------------- single band

struct SingleBandResult {
    Dataset data;
    MemberSet member;
    Points grid;
    Eigen::VectorXd truth;
    std::vector<IntervalEstimate> band;
};

/// One data set, one subsample, its band over the grid.
SingleBandResult run_single_band(const ExperimentConfig &cfg);

/// Shared noise quantile estimator for a configuration (seeded from the master seed).
std::shared_ptr<const ShiftedExponentialNormQuantile> make_noise_quantile(const ExperimentConfig &cfg);

/// f* evaluated at the columns of a one-dimensional grid.
Eigen::VectorXd evaluate_on_grid(const Interpolant &f, const Points &grid);

}  // namespace pwband
