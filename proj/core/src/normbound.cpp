#include "pwband/normbound.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "pwband/errors.hpp"
#include "pwband/quadopt.hpp"

namespace pwband {

void DensityModel::validate() const {
    if (!pdf) { throw InputError("DensityModel: pdf is not set"); }
    if (!(rho > 0.0) || !std::isfinite(rho)) { throw InputError("DensityModel: rho must be positive and finite"); }
}

Eigen::VectorXd DensityModel::inverse_density(const Points &inputs) const {
    if (!pdf) { throw InputError("DensityModel: pdf is not set"); }
    Eigen::VectorXd s(inputs.cols());
    for (Eigen::Index k = 0; k < inputs.cols(); ++k) {
        const double h = pdf(inputs.col(k));
        if (!(h > 0.0) || !std::isfinite(h)) { throw InputError("DensityModel: density must be positive at every input"); }
        s(k) = 1.0 / h;
    }
    return s;
}

const char *to_string(BoundMethod m) {
    switch (m) {
        case BoundMethod::hoeffding: return "hoeffding";
        case BoundMethod::randomized_hoeffding: return "randomized_hoeffding";
        case BoundMethod::bernstein_noisefree: return "bernstein_noisefree";
        case BoundMethod::bernstein_noisy: return "bernstein_noisy";
    }
    return "unknown";
}

BoundMethod bound_method_from_string(std::string_view s) {
    for (BoundMethod m : {BoundMethod::hoeffding, BoundMethod::randomized_hoeffding, BoundMethod::bernstein_noisefree,
                          BoundMethod::bernstein_noisy}) {
        if (s == to_string(m)) { return m; }
    }
    throw InputError("unknown bound method: " + std::string(s));
}

const char *to_string(BoundFamily f) {
    return f == BoundFamily::bernstein ? "bernstein" : "randomized_hoeffding";
}

namespace {

void check_dimensions(const SampleSet &subsample, const Ellipsoid &e) {
    if (e.dimension() != subsample.size()) { throw InputError("ellipsoid dimension does not match the subsample"); }
    if (subsample.size() == 0) { throw InputError("subsample is empty"); }
}

void check_budget_size(const TailBudget &budget, Eigen::Index n0) {
    if (budget.n != static_cast<std::int64_t>(n0)) { throw InputError("TailBudget: n must equal the subsample size"); }
}

double variance_of(const Eigen::VectorXd &t) {
    return empirical_variance(std::span<const double>(t.data(), static_cast<std::size_t>(t.size())));
}

}  // namespace

double xi_star(const SampleSet &subsample, const DensityModel &density, const Ellipsoid &e) {
    check_dimensions(subsample, e);
    const Eigen::VectorXd s = density.inverse_density(subsample.inputs);
    const double n0 = static_cast<double>(subsample.size());
    if (e.degenerate()) { return (e.center().array().square() * s.array()).sum() / n0; }
    const Eigen::MatrixXd a = (s / n0).asDiagonal();
    return max_quadratic_over_ellipsoid(QuadraticObjective{a, Eigen::VectorXd::Zero(s.size()), 0.0}, e).value;
}

NormBound tau_hoeffding(double xi, const DensityModel &density, const TailBudget &budget, double beta) {
    density.validate();
    budget.validate();
    const double term = density.rho * std::sqrt(std::log(1.0 / budget.alpha) / (2.0 * static_cast<double>(budget.n)));
    return NormBound{xi + term, BoundMethod::hoeffding, budget.alpha, beta, xi, std::nullopt};
}

NormBound tau_randomized(double xi, const DensityModel &density, const TailBudget &budget, double u, double beta) {
    density.validate();
    if (!(u > 0.0 && u < 1.0)) { throw InputError("tau_randomized: u must lie in (0, 1)"); }
    const double term = randomized_hoeffding_term(density.rho / 2.0, budget, u);
    return NormBound{xi + term, BoundMethod::randomized_hoeffding, budget.alpha, beta, xi, u};
}

NormBound tau_bernstein_noisefree(const SampleSet &subsample, const DensityModel &density, const TailBudget &budget) {
    density.validate();
    budget.validate_bernstein();
    if (!subsample.has_outputs()) { throw InputError("tau_bernstein_noisefree: outputs required"); }
    check_budget_size(budget, subsample.size());
    const Eigen::VectorXd t = subsample.outputs.array().square() * density.inverse_density(subsample.inputs).array();
    const double xi = t.mean();
    const double v = variance_of(t) / (density.rho * density.rho);
    return NormBound{xi + empirical_bernstein_term(density.rho, budget, v), BoundMethod::bernstein_noisefree,
                     budget.alpha, 0.0, xi, std::nullopt};
}

NormBound tau_bernstein_noisy(double xi, double v_star, const DensityModel &density, const TailBudget &budget,
                              double beta) {
    density.validate();
    budget.validate_bernstein();
    if (v_star < 0.0) { throw InputError("tau_bernstein_noisy: v_star must be nonnegative"); }
    const double v = v_star / (density.rho * density.rho);
    return NormBound{xi + empirical_bernstein_term(density.rho, budget, v), BoundMethod::bernstein_noisy, budget.alpha,
                     beta, xi, std::nullopt};
}

double max_variance_over_box(std::span<const double> lo, std::span<const double> hi) {
    const std::size_t n = lo.size();
    if (hi.size() != n) { throw InputError("max_variance_over_box: bound lengths differ"); }
    if (n < 2) { throw InputError("max_variance_over_box: at least two coordinates required"); }
    for (std::size_t k = 0; k < n; ++k) {
        if (!(lo[k] <= hi[k])) { throw InputError("max_variance_over_box: lo must not exceed hi"); }
    }
    if (n <= 12) {
        // V_n is convex, so its maximum over the box sits at a vertex.
        double best = 0.0;
        std::vector<double> t(n);
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            for (std::size_t k = 0; k < n; ++k) { t[k] = (mask >> k) & 1u ? hi[k] : lo[k]; }
            best = std::max(best, empirical_variance(t));
        }
        return best;
    }
    // max_T min_c sum (T_k - c)^2 <= min_c sum max((lo_k - c)^2, (hi_k - c)^2).
    // Between consecutive sorted midpoints the right-hand side is a single quadratic in c.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> mid(n);
    for (std::size_t k = 0; k < n; ++k) { mid[k] = 0.5 * (lo[k] + hi[k]); }
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return mid[x] < mid[y]; });
    auto cost = [&](double c) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) { s += std::max((lo[k] - c) * (lo[k] - c), (hi[k] - c) * (hi[k] - c)); }
        return s;
    };
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t split = 0; split <= n; ++split) {
        // Coordinates order[0..split) have midpoints below c and use lo; the rest use hi.
        const double left = split == 0 ? -std::numeric_limits<double>::infinity() : mid[order[split - 1]];
        const double right = split == n ? std::numeric_limits<double>::infinity() : mid[order[split]];
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) { sum += i < split ? lo[order[i]] : hi[order[i]]; }
        const double c = std::clamp(sum / static_cast<double>(n), left, right);
        best = std::min(best, cost(c));
    }
    return best / static_cast<double>(n - 1);
}

namespace {

class VarianceObjective {
public:
    VarianceObjective(const Eigen::VectorXd &center, const Eigen::MatrixXd &l, const Eigen::VectorXd &s)
        : center_(center), l_(l), s_(s) {}

    [[nodiscard]] Eigen::VectorXd point(const Eigen::VectorXd &w) const { return center_ + l_ * w; }

    [[nodiscard]] double value_at(const Eigen::VectorXd &z) const {
        const Eigen::VectorXd t = z.array().square() * s_.array();
        return variance_of(t);
    }

    [[nodiscard]] double value(const Eigen::VectorXd &w) const { return value_at(point(w)); }

    [[nodiscard]] Eigen::VectorXd gradient(const Eigen::VectorXd &w) const {
        const Eigen::VectorXd z = point(w);
        const Eigen::VectorXd t = z.array().square() * s_.array();
        const double n = static_cast<double>(t.size());
        const Eigen::VectorXd dv = (2.0 / (n - 1.0)) * (t.array() - t.mean());
        const Eigen::VectorXd gz = dv.array() * 2.0 * z.array() * s_.array();
        return l_ * gz;
    }

private:
    const Eigen::VectorXd &center_;
    const Eigen::MatrixXd &l_;
    const Eigen::VectorXd &s_;
};

Eigen::VectorXd project_unit_ball(Eigen::VectorXd w) {
    const double norm = w.norm();
    if (norm > 1.0) { w /= norm; }
    return w;
}

// Projected gradient ascent with an adaptive step; returns the final iterate.
Eigen::VectorXd ascend(const VarianceObjective &obj, Eigen::VectorXd w, double &value) {
    value = obj.value(w);
    double step = 0.0;
    for (int it = 0; it < 300; ++it) {
        const Eigen::VectorXd g = obj.gradient(w);
        const double gn = g.norm();
        if (gn == 0.0) { break; }
        if (step == 0.0) { step = 0.5 / gn; }
        bool improved = false;
        for (int ls = 0; ls < 40; ++ls) {
            Eigen::VectorXd trial = project_unit_ball(w + step * g);
            const double v = obj.value(trial);
            if (v > value) {
                const double gain = v - value;
                w = std::move(trial);
                value = v;
                improved = true;
                step *= 2.0;
                if (gain <= 1e-14 * std::max(1.0, value)) { return w; }
                break;
            }
            step *= 0.5;
        }
        if (!improved) { break; }
    }
    return w;
}

Eigen::VectorXd random_unit(Eigen::Index n, Rng &rng) {
    Eigen::VectorXd w(n);
    double norm = 0.0;
    do {
        for (Eigen::Index i = 0; i < n; ++i) { w(i) = rng.normal(); }
        norm = w.norm();
    } while (norm == 0.0);
    return w / norm;
}

}  // namespace

VarianceBound max_empirical_variance(const DensityModel &density, const SampleSet &subsample, const Ellipsoid &e,
                                     Rng &rng) {
    check_dimensions(subsample, e);
    const Eigen::Index n0 = subsample.size();
    if (n0 < 2) { throw InputError("max_empirical_variance: at least two points required"); }
    const Eigen::VectorXd s = density.inverse_density(subsample.inputs);
    const Eigen::VectorXd &center = e.center();

    VarianceBound out;
    if (e.degenerate()) {
        out.z_star = center;
        out.local_best = variance_of(center.array().square() * s.array());
        out.box_bound = out.local_best;
        out.v_star = out.local_best;
        return out;
    }

    std::vector<double> lo(static_cast<std::size_t>(n0));
    std::vector<double> hi(static_cast<std::size_t>(n0));
    for (Eigen::Index k = 0; k < n0; ++k) {
        const double hw = axis_halfwidth(e, k);
        const double a = std::max(0.0, std::abs(center(k)) - hw);
        const double b = std::abs(center(k)) + hw;
        lo[static_cast<std::size_t>(k)] = a * a * s(k);
        hi[static_cast<std::size_t>(k)] = b * b * s(k);
    }
    out.box_bound = max_variance_over_box(lo, hi);

    const Eigen::MatrixXd &l = e.whitening_inverse();
    const VarianceObjective obj(center, l, s);

    std::vector<Eigen::VectorXd> starts;
    starts.emplace_back(Eigen::VectorXd::Zero(n0));
    std::vector<Eigen::Index> by_range(static_cast<std::size_t>(n0));
    std::iota(by_range.begin(), by_range.end(), Eigen::Index{0});
    std::sort(by_range.begin(), by_range.end(), [&](Eigen::Index x, Eigen::Index y) {
        return hi[static_cast<std::size_t>(x)] > hi[static_cast<std::size_t>(y)];
    });
    constexpr std::size_t kStarts = 20;
    constexpr std::size_t kExtremal = 15;
    for (Eigen::Index k : by_range) {
        if (starts.size() + 2 > kExtremal) { break; }
        const Eigen::VectorXd dir = l.col(k) / l.col(k).norm();
        starts.push_back(dir);
        starts.push_back(-dir);
    }
    while (starts.size() < kStarts) { starts.push_back(random_unit(n0, rng)); }

    double best = -1.0;
    Eigen::VectorXd best_w;
    for (const auto &w0 : starts) {
        double v = 0.0;
        Eigen::VectorXd w = ascend(obj, w0, v);
        if (v > best) {
            best = v;
            best_w = std::move(w);
        }
    }

    // Boundary sampling, then one more ascent from the best sample.
    constexpr int kSamples = 10000;
    constexpr int kChunk = 1000;
    double sample_best = -1.0;
    Eigen::VectorXd sample_w;
    for (int done = 0; done < kSamples; done += kChunk) {
        Eigen::MatrixXd w(n0, kChunk);
        for (int j = 0; j < kChunk; ++j) { w.col(j) = random_unit(n0, rng); }
        const Eigen::MatrixXd z = (l * w).colwise() + center;
        for (int j = 0; j < kChunk; ++j) {
            const double v = obj.value_at(z.col(j));
            if (v > sample_best) {
                sample_best = v;
                sample_w = w.col(j);
            }
        }
    }
    {
        double v = 0.0;
        Eigen::VectorXd w = ascend(obj, sample_w, v);
        if (v > best) {
            best = v;
            best_w = std::move(w);
        }
    }

    out.z_star = obj.point(best_w);
    out.local_best = best;
    out.v_star = std::min(out.box_bound, 1.01 * best);
    return out;
}

BoundFamily select_bound(const TailBudget &budget, const DensityModel &density) {
    budget.validate();
    density.validate();
    const auto threshold = conservative_threshold(budget.alpha, density.rho);
    if (threshold && budget.n >= *threshold) { return BoundFamily::bernstein; }
    return BoundFamily::randomized_hoeffding;
}

}  // namespace pwband
