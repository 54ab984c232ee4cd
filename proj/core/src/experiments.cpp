#include "pwband/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pwband/errors.hpp"
#include "pwband/parallel.hpp"

namespace pwband {

const char *to_string(CoverageMode m) {
    switch (m) {
        case CoverageMode::single: return "single";
        case CoverageMode::voting: return "voting";
        case CoverageMode::noisefree: return "noisefree";
        case CoverageMode::oracle: return "oracle";
    }
    return "unknown";
}

CoverageMode coverage_mode_from_string(std::string_view s) {
    for (CoverageMode m : {CoverageMode::single, CoverageMode::voting, CoverageMode::noisefree, CoverageMode::oracle}) {
        if (s == to_string(m)) { return m; }
    }
    throw InputError("unknown coverage mode: " + std::string(s));
}

void ExperimentConfig::validate() const {
    auto require = [](bool ok, const char *msg) {
        if (!ok) { throw InputError(std::string("ExperimentConfig: ") + msg); }
    };
    require(trials >= 1, "trials must be >= 1");
    require(n >= 1, "n must be >= 1");
    require(n0 >= 1 && n0 <= n, "need 1 <= n0 <= n");
    require(K >= 2, "K must be >= 2");
    require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    require(beta >= 0.0 && beta < 1.0, "beta must lie in [0, 1)");
    require(alpha + beta < 1.0, "alpha + beta must be < 1");
    require(std::abs(gamma - (alpha + beta)) <= 1e-12, "gamma must equal alpha + beta");
    require(eta > 0.0 && std::isfinite(eta), "eta must be positive");
    require(zeta > 0.0 && std::isfinite(zeta), "zeta must be positive");
    require(std::isfinite(mu), "mu must be finite");
    require(lambda0 >= 0.0 && std::isfinite(lambda0), "lambda0 must be nonnegative");
    require(a < b, "need a < b");
    require(knot_count >= 1, "knot_count must be >= 1");
    require(grid.points >= 1 && grid.lo <= grid.hi, "grid needs points >= 1 and lo <= hi");
    require(randomizations >= 1, "randomizations must be >= 1");
    require(quantile_draws >= 1, "quantile_draws must be >= 1");
    require(coverage_slack >= 0.0 && coverage_slack < 1.0, "coverage_slack must lie in [0, 1)");
    require(!sample_sizes.empty(), "sample_sizes must not be empty");
    for (auto s : sample_sizes) { require(s >= 2, "sample_sizes entries must be >= 2"); }
    require(!size_pairs.empty(), "size_pairs must not be empty");
    for (const auto &p : size_pairs) { require(p.n0 >= 1 && p.n0 <= p.n, "size_pairs need 1 <= n0 <= n"); }
    require(lambda0 == 0.0 || beta > 0.0 || experiment == "norm-bounds" ||
                (experiment == "coverage" && coverage_mode != CoverageMode::single &&
                 coverage_mode != CoverageMode::voting),
            "noisy data need beta > 0");
}

ExperimentConfig ExperimentConfig::defaults_for(std::string_view experiment) {
    ExperimentConfig c;
    c.experiment = std::string(experiment);
    if (experiment == "norm-bounds") {
        c.trials = 100;
        c.alpha = 0.1;
        c.beta = 0.0;
        c.gamma = 0.1;
        c.eta = 100.0;
        c.zeta = 1.0;
        c.a = 0.0;
        c.b = 1.0;
        c.lambda0 = 0.0;
        c.n = 500;
        c.n0 = 500;
    } else if (experiment == "voting-bands") {
        c.trials = 1;
        c.n = 300;
        c.n0 = 17;
        c.K = 51;
        c.alpha = c.beta = 0.025;
        c.gamma = 0.05;
        c.eta = 20.0;
        c.grid = {201, -1.0, 1.0};
    } else if (experiment == "diameter-table") {
        c.trials = 100;
        c.K = 101;
        c.eta = 30.0;
        c.alpha = c.beta = 0.025;
        c.gamma = 0.05;
        c.n = 500;
        c.n0 = 100;
    } else if (experiment == "coverage") {
        c.trials = 500;
        c.n = 100;
        c.n0 = 30;
        c.K = 11;
        c.grid = {101, -1.0, 1.0};
    } else if (experiment == "band") {
        c.trials = 1;
    } else {
        throw InputError("unknown experiment: " + std::string(experiment));
    }
    return c;
}

TruthSpec ExperimentConfig::truth_spec() const { return TruthSpec{knot_count, a, b, kernel()}; }
InputLaw ExperimentConfig::input_law() const { return InputLaw{mu, zeta}; }
NoiseSpec ExperimentConfig::noise_spec() const { return NoiseSpec{lambda0}; }
KernelConfig ExperimentConfig::kernel() const { return KernelConfig{eta, 1}; }

std::shared_ptr<const ShiftedExponentialNormQuantile> make_noise_quantile(const ExperimentConfig &cfg) {
    return std::make_shared<const ShiftedExponentialNormQuantile>(cfg.lambda0, cfg.quantile_draws,
                                                                  derive_seed(cfg.master_seed, 0, Stream::provider));
}

Eigen::VectorXd evaluate_on_grid(const Interpolant &f, const Points &grid) {
    Eigen::VectorXd v(grid.cols());
    for (Eigen::Index i = 0; i < grid.cols(); ++i) { v(i) = f(grid.col(i)); }
    return v;
}

MemberSet build_member(const Dataset &data, std::int64_t n0, double alpha, double beta,
                       const NoiseRadiusQuantile &quantile, Rng &subsample_rng, Rng &u_rng, Rng &search_rng) {
    const auto n = static_cast<std::size_t>(data.sample.size());
    if (n0 < 1 || static_cast<std::size_t>(n0) > n) { throw InputError("build_member: need 1 <= n0 <= n"); }
    MemberSet m;
    m.indices = subsample_rng.permutation(n);
    m.indices.resize(static_cast<std::size_t>(n0));
    m.subsample = data.sample.subset(m.indices);
    const DensityModel density = data.density();
    const bool noise_free = data.noise.lambda0 == 0.0;
    m.ellipsoid = noise_free ? noise_free_provider(m.subsample.outputs)
                             : known_noise_ball_provider(m.subsample, beta, quantile);
    const double set_beta = noise_free ? 0.0 : beta;
    const TailBudget budget{alpha, n0};
    const double xi = xi_star(m.subsample, density, m.ellipsoid);
    const BoundFamily family = n0 >= 2 ? select_bound(budget, density) : BoundFamily::randomized_hoeffding;
    if (family == BoundFamily::bernstein) {
        if (m.ellipsoid.degenerate()) {
            m.bound = tau_bernstein_noisefree(m.subsample, density, budget);
        } else {
            const VarianceBound v = max_empirical_variance(density, m.subsample, m.ellipsoid, search_rng);
            m.bound = tau_bernstein_noisy(xi, v.v_star, density, budget, set_beta);
        }
    } else {
        m.bound = tau_randomized(xi, density, budget, u_rng.uniform_open(), set_beta);
    }
    return m;
}

BoxSummary box_summary(std::vector<double> values) {
    BoxSummary s;
    s.count = static_cast<std::int64_t>(values.size());
    if (values.empty()) { return s; }
    std::sort(values.begin(), values.end());
    // Linear interpolation between order statistics.
    auto quantile = [&](double p) {
        const double pos = p * static_cast<double>(values.size() - 1);
        const auto i = static_cast<std::size_t>(std::floor(pos));
        const double frac = pos - static_cast<double>(i);
        return i + 1 < values.size() ? values[i] * (1.0 - frac) + values[i + 1] * frac : values[i];
    };
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    s.median = quantile(0.5);
    s.q1 = quantile(0.25);
    s.q3 = quantile(0.75);
    const double iqr = s.q3 - s.q1;
    const double lo_fence = s.q1 - 1.5 * iqr;
    const double hi_fence = s.q3 + 1.5 * iqr;
    s.whisker_lo = *std::lower_bound(values.begin(), values.end(), lo_fence);
    s.whisker_hi = *(std::upper_bound(values.begin(), values.end(), hi_fence) - 1);
    return s;
}

// ---------------------------------------------------------------- norm bounds

namespace {

std::uint64_t trial_key(std::uint64_t group, std::uint64_t trial) { return (group << 32) | trial; }

}  // namespace

const NormBoundSummary &NormBoundExperimentResult::summary(std::int64_t n, BoundMethod method) const {
    for (const auto &s : summaries) {
        if (s.n == n && s.method == method) { return s; }
    }
    throw InputError("no summary for the requested sample size and method");
}

NormBoundExperimentResult run_norm_bound_experiment(const ExperimentConfig &cfg) {
    cfg.validate();
    const TruthSpec spec = cfg.truth_spec();
    const InputLaw law = cfg.input_law();
    const NoiseSpec noise{0.0};
    NormBoundExperimentResult result;
    for (std::size_t g = 0; g < cfg.sample_sizes.size(); ++g) {
        const std::int64_t n = cfg.sample_sizes[g];
        auto trials = parallel_map<NormBoundTrial>(cfg.trials, cfg.workers, [&](std::int64_t t) {
            const std::uint64_t key = trial_key(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(t));
            const Dataset data = generate_dataset(spec, law, noise, n, cfg.master_seed, key);
            const DensityModel density = data.density();
            const TailBudget budget{cfg.alpha, n};
            const Ellipsoid e = noise_free_provider(data.sample.outputs);
            const double xi = xi_star(data.sample, density, e);
            Rng u_rng(cfg.master_seed, key, Stream::norm_u);
            NormBoundTrial tr;
            tr.n = n;
            tr.trial = t;
            tr.norm_sq = data.truth.norm_sq;
            tr.rho = data.rho;
            tr.hoeffding = tau_hoeffding(xi, density, budget);
            tr.randomized = tau_randomized(xi, density, budget, u_rng.uniform_open());
            tr.bernstein = tau_bernstein_noisefree(data.sample, density, budget);
            return tr;
        });
        for (BoundMethod m : {BoundMethod::hoeffding, BoundMethod::randomized_hoeffding,
                              BoundMethod::bernstein_noisefree}) {
            std::vector<double> excess;
            std::int64_t valid = 0;
            for (const auto &tr : trials) {
                const NormBound &b = m == BoundMethod::hoeffding              ? tr.hoeffding
                                     : m == BoundMethod::randomized_hoeffding ? tr.randomized
                                                                              : tr.bernstein;
                excess.push_back(b.tau - tr.norm_sq);
                if (tr.norm_sq <= b.tau) { ++valid; }
            }
            NormBoundSummary s;
            s.n = n;
            s.method = m;
            s.excess = box_summary(excess);
            s.valid_fraction = static_cast<double>(valid) / static_cast<double>(trials.size());
            result.summaries.push_back(s);
        }
        result.trials.insert(result.trials.end(), std::make_move_iterator(trials.begin()),
                             std::make_move_iterator(trials.end()));
    }
    return result;
}

// ---------------------------------------------------------------- voting bands

namespace {

IntervalCollection collect(const std::vector<std::vector<IntervalEstimate>> &bands, std::size_t g) {
    IntervalCollection c;
    c.reserve(bands.size());
    for (const auto &band : bands) {
        const auto &iv = band[g];
        if (iv.ok()) { c.push_back(Interval{iv.lo, iv.hi}); } else { c.push_back(std::nullopt); }
    }
    return c;
}

bool subset_of(const UnionOfIntervals &inner, const UnionOfIntervals &outer, double tol = 1e-12) {
    for (const auto &p : inner.parts()) {
        const bool inside = std::any_of(outer.parts().begin(), outer.parts().end(), [&](const Interval &q) {
            return q.lo <= p.lo + tol && p.hi <= q.hi + tol;
        });
        if (!inside) { return false; }
    }
    return true;
}

double mean_of(const std::vector<double> &v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_std(const std::vector<double> &v) {
    if (v.size() < 2) { return 0.0; }
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) { ss += (x - m) * (x - m); }
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

const SchemeSummary &VotingBandResult::summary(std::string_view scheme) const {
    for (const auto &s : summaries) {
        if (s.scheme == scheme) { return s; }
    }
    throw InputError("no summary for scheme " + std::string(scheme));
}

VotingBandResult run_voting_band_experiment(const ExperimentConfig &cfg) {
    cfg.validate();
    VotingBandResult r;
    r.data = generate_dataset(cfg.truth_spec(), cfg.input_law(), cfg.noise_spec(), cfg.n, cfg.master_seed, 0);
    r.grid = uniform_grid(cfg.grid.lo, cfg.grid.hi, cfg.grid.points);
    r.truth = evaluate_on_grid(r.data.truth.f, r.grid);
    const NoiseRadiusQuantile quantile = as_quantile_function(make_noise_quantile(cfg));
    Rng sub_rng(cfg.master_seed, 0, Stream::subsample);
    Rng u_rng(cfg.master_seed, 0, Stream::norm_u);
    Rng search_rng(cfg.master_seed, 0, Stream::search);
    for (std::int64_t k = 0; k < cfg.K; ++k) {
        r.members.push_back(build_member(r.data, cfg.n0, cfg.alpha, cfg.beta, quantile, sub_rng, u_rng, search_rng));
    }
    BandConfig bc{cfg.alpha, cfg.beta, cfg.n0, cfg.kernel(), BoundMethod::randomized_hoeffding};
    r.member_bands = parallel_map<std::vector<IntervalEstimate>>(cfg.K, cfg.workers, [&](std::int64_t k) {
        const MemberSet &m = r.members[static_cast<std::size_t>(k)];
        BandConfig local = bc;
        local.bound_method = m.bound.method;
        return band_over_grid(r.grid, m.subsample, m.ellipsoid, m.bound, local);
    });

    const auto points = static_cast<std::size_t>(r.grid.cols());
    std::vector<IntervalCollection> collections(points);
    for (std::size_t g = 0; g < points; ++g) {
        collections[g] = collect(r.member_bands, g);
        r.majority_sets.push_back(majority(collections[g]));
    }

    Rng perm_rng(cfg.master_seed, 0, Stream::voting_perm);
    Rng vu_rng(cfg.master_seed, 0, Stream::voting_u);
    std::vector<VotingDraw> ro;
    std::vector<VotingDraw> rt_half;
    std::vector<VotingDraw> rt_full;
    for (std::int64_t d = 0; d < cfg.randomizations; ++d) {
        const auto perm = perm_rng.permutation(static_cast<std::size_t>(cfg.K));
        const double u = vu_rng.uniform();
        VotingDraw a{"RO", d, 0.0, {}};
        VotingDraw h{"RT(0.5,1)", d, u, {}};
        VotingDraw f{"RT(0,1)", d, u, {}};
        for (std::size_t g = 0; g < points; ++g) {
            a.sets.push_back(random_ordering(collections[g], perm));
            h.sets.push_back(randomized_threshold_half(collections[g], u));
            f.sets.push_back(randomized_threshold_full(collections[g], u));
        }
        ro.push_back(std::move(a));
        rt_half.push_back(std::move(h));
        rt_full.push_back(std::move(f));
    }
    for (auto *group : {&ro, &rt_half, &rt_full}) {
        SchemeSummary s;
        s.scheme = group->front().scheme;
        std::vector<double> all;
        double spread = 0.0;
        for (std::size_t g = 0; g < points; ++g) {
            std::vector<double> lengths;
            for (const auto &draw : *group) {
                lengths.push_back(total_length(draw.sets[g]));
                if (!subset_of(draw.sets[g], r.majority_sets[g])) { ++s.subset_violations; }
            }
            spread += sample_std(lengths);
            all.insert(all.end(), lengths.begin(), lengths.end());
        }
        s.mean_length = mean_of(all);
        s.mean_spread = spread / static_cast<double>(points);
        r.summaries.push_back(s);
        for (auto &draw : *group) { r.draws.push_back(std::move(draw)); }
    }
    return r;
}

// ---------------------------------------------------------------- diameter table

DiameterStats diameter_stats(const std::vector<double> &values) {
    DiameterStats s;
    if (values.empty()) { return s; }
    s.avg = mean_of(values);
    s.med = box_summary(values).median;
    s.std = sample_std(values);
    return s;
}

DiameterTableResult run_diameter_table(const ExperimentConfig &cfg) {
    cfg.validate();
    DiameterTableResult result;
    const NoiseRadiusQuantile quantile = as_quantile_function(make_noise_quantile(cfg));
    const TruthSpec spec = cfg.truth_spec();
    const InputLaw law = cfg.input_law();
    const NoiseSpec noise = cfg.noise_spec();
    const KernelConfig kernel = cfg.kernel();
    constexpr std::size_t kSchemes = std::size(kDiameterSchemes);

    struct TrialOut {
        std::array<double, kSchemes> d{};
        std::int64_t empty = 0;
    };
    for (std::size_t p = 0; p < cfg.size_pairs.size(); ++p) {
        const SizePair size = cfg.size_pairs[p];
        auto outs = parallel_map<TrialOut>(cfg.trials, cfg.workers, [&](std::int64_t t) {
            const std::uint64_t key = trial_key(p + 1, static_cast<std::uint64_t>(t));
            const Dataset data = generate_dataset(spec, law, noise, size.n, cfg.master_seed, key);
            Rng query_rng(cfg.master_seed, key, Stream::query);
            Eigen::VectorXd x0(1);
            x0(0) = query_rng.laplace(law.mu, law.zeta);
            Rng sub_rng(cfg.master_seed, key, Stream::subsample);
            Rng u_rng(cfg.master_seed, key, Stream::norm_u);
            Rng search_rng(cfg.master_seed, key, Stream::search);
            IntervalCollection c;
            TrialOut out;
            for (std::int64_t k = 0; k < cfg.K; ++k) {
                const MemberSet m =
                    build_member(data, size.n0, cfg.alpha, cfg.beta, quantile, sub_rng, u_rng, search_rng);
                const BandConfig bc{cfg.alpha, cfg.beta, size.n0, kernel, m.bound.method};
                const IntervalEstimate iv = interval_at(x0, m.subsample, m.ellipsoid, m.bound, bc);
                if (iv.ok()) { c.push_back(Interval{iv.lo, iv.hi}); } else { c.push_back(std::nullopt); ++out.empty; }
            }
            Rng perm_rng(cfg.master_seed, key, Stream::voting_perm);
            Rng vu_rng(cfg.master_seed, key, Stream::voting_u);
            const auto perm = perm_rng.permutation(static_cast<std::size_t>(cfg.K));
            const double u = vu_rng.uniform();
            out.d[0] = c.front() ? c.front()->length() : 0.0;
            out.d[1] = total_length(random_ordering(c, perm));
            out.d[2] = total_length(randomized_threshold_half(c, u));
            out.d[3] = total_length(randomized_threshold_full(c, u));
            return out;
        });
        DiameterRow row;
        row.size = size;
        row.diameters.assign(kSchemes, {});
        for (const auto &o : outs) {
            for (std::size_t s = 0; s < kSchemes; ++s) { row.diameters[s].push_back(o.d[s]); }
            row.empty_members += o.empty;
        }
        for (std::size_t s = 0; s < kSchemes; ++s) { row.stats.push_back(diameter_stats(row.diameters[s])); }
        result.rows.push_back(std::move(row));
    }
    return result;
}

// ---------------------------------------------------------------- coverage

namespace {

constexpr double kCoverageTolerance = 1e-6;

bool band_covers(const std::vector<IntervalEstimate> &band, const Eigen::VectorXd &truth) {
    for (std::size_t g = 0; g < band.size(); ++g) {
        if (!band[g].covers(truth(static_cast<Eigen::Index>(g)), kCoverageTolerance)) { return false; }
    }
    return true;
}

}  // namespace

CoverageReport run_coverage_audit(const ExperimentConfig &cfg) {
    cfg.validate();
    const CoverageMode mode = cfg.coverage_mode;
    const bool noise_free = mode == CoverageMode::noisefree || mode == CoverageMode::oracle;
    const double beta = noise_free ? 0.0 : cfg.beta;
    const NoiseSpec noise{noise_free ? 0.0 : cfg.lambda0};
    const NoiseRadiusQuantile quantile = as_quantile_function(make_noise_quantile(cfg));
    const TruthSpec spec = cfg.truth_spec();
    const InputLaw law = cfg.input_law();
    const Points grid = uniform_grid(cfg.grid.lo, cfg.grid.hi, cfg.grid.points);
    const BandConfig bc{cfg.alpha, beta, cfg.n0, cfg.kernel(), BoundMethod::randomized_hoeffding};

    CoverageReport rep;
    rep.mode = mode;
    rep.trials = cfg.trials;
    rep.slack = cfg.coverage_slack;
    switch (mode) {
        case CoverageMode::single: rep.nominal = 1.0 - cfg.alpha - cfg.beta; break;
        case CoverageMode::voting: rep.nominal = std::max(0.0, 1.0 - 2.0 * (cfg.alpha + cfg.beta)); break;
        case CoverageMode::noisefree: rep.nominal = 1.0 - cfg.alpha; break;
        case CoverageMode::oracle: rep.nominal = 1.0; break;
    }

    rep.details = parallel_map<CoverageTrial>(cfg.trials, cfg.workers, [&](std::int64_t t) {
        CoverageTrial tr;
        tr.trial = t;
        try {
            const auto key = static_cast<std::uint64_t>(t);
            const Dataset data = generate_dataset(spec, law, noise, cfg.n, cfg.master_seed, key);
            const Eigen::VectorXd truth = evaluate_on_grid(data.truth.f, grid);
            tr.norm_sq = data.truth.norm_sq;
            Rng sub_rng(cfg.master_seed, key, Stream::subsample);
            Rng u_rng(cfg.master_seed, key, Stream::norm_u);
            Rng search_rng(cfg.master_seed, key, Stream::search);
            if (mode == CoverageMode::voting) {
                std::vector<std::vector<IntervalEstimate>> bands;
                for (std::int64_t k = 0; k < cfg.K; ++k) {
                    const MemberSet m =
                        build_member(data, cfg.n0, cfg.alpha, beta, quantile, sub_rng, u_rng, search_rng);
                    bands.push_back(band_over_grid(grid, m.subsample, m.ellipsoid, m.bound, bc));
                }
                tr.covered = true;
                for (std::size_t g = 0; g < static_cast<std::size_t>(grid.cols()); ++g) {
                    if (!majority(collect(bands, g)).contains(truth(static_cast<Eigen::Index>(g)), kCoverageTolerance)) {
                        tr.covered = false;
                        break;
                    }
                }
                return tr;
            }
            MemberSet m = build_member(data, cfg.n0, cfg.alpha, beta, quantile, sub_rng, u_rng, search_rng);
            if (mode == CoverageMode::oracle) {
                Eigen::VectorXd values(static_cast<Eigen::Index>(m.indices.size()));
                for (std::size_t j = 0; j < m.indices.size(); ++j) {
                    values(static_cast<Eigen::Index>(j)) = data.noiseless(static_cast<Eigen::Index>(m.indices[j]));
                }
                m.ellipsoid = Ellipsoid::point(values);
                m.bound.tau = data.truth.norm_sq * (1.0 + 1e-9) + 1e-12;
            }
            tr.tau = m.bound.tau;
            const auto band = band_over_grid(grid, m.subsample, m.ellipsoid, m.bound, bc);
            for (const auto &iv : band) {
                if (iv.status == IntervalStatus::error) {
                    tr.error = true;
                    tr.message = iv.error;
                    break;
                }
            }
            tr.covered = !tr.error && band_covers(band, truth);
        } catch (const std::exception &ex) {
            tr.error = true;
            tr.covered = false;
            tr.message = ex.what();
        }
        return tr;
    });

    for (const auto &tr : rep.details) {
        if (tr.covered) { ++rep.covered; }
        if (tr.error) { ++rep.errors; }
    }
    const double nt = static_cast<double>(rep.trials);
    rep.frequency = static_cast<double>(rep.covered) / nt;
    // Wilson score interval at 95 %.
    const double z = 1.959963984540054;
    const double p = rep.frequency;
    const double denom = 1.0 + z * z / nt;
    const double centre = (p + z * z / (2.0 * nt)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nt + z * z / (4.0 * nt * nt)) / denom;
    rep.wilson_lo = std::max(0.0, centre - half);
    rep.wilson_hi = std::min(1.0, centre + half);
    rep.pass = rep.frequency >= rep.nominal - rep.slack;
    return rep;
}

// ---------------------------------------------------------------- single band

SingleBandResult run_single_band(const ExperimentConfig &cfg) {
    cfg.validate();
    SingleBandResult r;
    r.data = generate_dataset(cfg.truth_spec(), cfg.input_law(), cfg.noise_spec(), cfg.n, cfg.master_seed, 0);
    const NoiseRadiusQuantile quantile = as_quantile_function(make_noise_quantile(cfg));
    Rng sub_rng(cfg.master_seed, 0, Stream::subsample);
    Rng u_rng(cfg.master_seed, 0, Stream::norm_u);
    Rng search_rng(cfg.master_seed, 0, Stream::search);
    r.member = build_member(r.data, cfg.n0, cfg.alpha, cfg.beta, quantile, sub_rng, u_rng, search_rng);
    r.grid = uniform_grid(cfg.grid.lo, cfg.grid.hi, cfg.grid.points);
    r.truth = evaluate_on_grid(r.data.truth.f, r.grid);
    const BandConfig bc{cfg.alpha, r.member.bound.beta, cfg.n0, cfg.kernel(), r.member.bound.method};
    r.band = band_over_grid(r.grid, r.member.subsample, r.member.ellipsoid, r.member.bound, bc);
    return r;
}

}  // namespace pwband
