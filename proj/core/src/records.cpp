#include "pwband/records.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "pwband/errors.hpp"

namespace pwband {

using nlohmann::json;

namespace {

json vector_json(const Eigen::VectorXd &v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) { a.push_back(v(i)); }
    return a;
}

json matrix_json(const Eigen::MatrixXd &m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) { row.push_back(m(i, j)); }
        rows.push_back(std::move(row));
    }
    return rows;
}

json parse(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error &ex) {
        throw InputError(std::string("malformed JSON: ") + ex.what());
    }
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) { return "nan"; }
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string ellipsoid_to_json(const Ellipsoid &e) {
    json j;
    j["center"] = vector_json(e.center());
    j["shape"] = e.degenerate() ? json::array() : matrix_json(e.shape());
    j["degenerate"] = e.degenerate();
    return j.dump(2);
}

Ellipsoid ellipsoid_from_json(std::string_view text) {
    const json j = parse(text);
    try {
        const auto center_v = j.at("center").get<std::vector<double>>();
        const Eigen::VectorXd center = Eigen::Map<const Eigen::VectorXd>(center_v.data(), static_cast<Eigen::Index>(center_v.size()));
        if (j.at("degenerate").get<bool>()) { return Ellipsoid::point(center); }
        const auto rows = j.at("shape").get<std::vector<std::vector<double>>>();
        Eigen::MatrixXd p(static_cast<Eigen::Index>(rows.size()), center.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != static_cast<std::size_t>(center.size())) { throw InputError("ellipsoid JSON: ragged shape matrix"); }
            for (std::size_t k = 0; k < rows[i].size(); ++k) { p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k]; }
        }
        return Ellipsoid::from_shape(center, p);
    } catch (const json::exception &ex) {
        throw InputError(std::string("ellipsoid JSON: ") + ex.what());
    }
}

std::string dataset_to_json(const Dataset &d) {
    json j;
    j["master_seed"] = d.master_seed;
    j["trial"] = d.trial;
    j["truth_spec"] = {{"knot_count", d.truth_spec.knot_count},
                       {"a", d.truth_spec.a},
                       {"b", d.truth_spec.b},
                       {"eta", d.truth_spec.kernel.eta},
                       {"dim", d.truth_spec.kernel.dim}};
    j["input_law"] = {{"distribution", "laplace"}, {"mu", d.law.mu}, {"zeta", d.law.zeta}};
    j["noise"] = {{"distribution", "shifted_exponential"}, {"lambda0", d.noise.lambda0}};
    j["rho"] = d.rho;
    j["truth"] = {{"knots", vector_json(d.truth.knots)},
                  {"raw_weights", vector_json(d.truth.raw_weights)},
                  {"normalizer", d.truth.normalizer},
                  {"norm_sq", d.truth.norm_sq}};
    j["inputs"] = vector_json(d.sample.inputs.row(0).transpose());
    j["outputs"] = vector_json(d.sample.outputs);
    j["noiseless"] = vector_json(d.noiseless);
    return j.dump(2);
}

ExperimentConfig config_from_json(std::string_view text, std::string_view experiment) {
    const json j = parse(text);
    if (!j.is_object()) { throw InputError("config: top level must be an object"); }
    ExperimentConfig c = ExperimentConfig::defaults_for(experiment);
    try {
        for (const auto &[key, value] : j.items()) {
            if (key == "experiment") {
                if (value.get<std::string>() != experiment) {
                    throw InputError("config: experiment '" + value.get<std::string>() + "' does not match subcommand '" +
                                     std::string(experiment) + "'");
                }
            } else if (key == "trials") { c.trials = value.get<std::int64_t>();
            } else if (key == "n") { c.n = value.get<std::int64_t>();
            } else if (key == "n0") { c.n0 = value.get<std::int64_t>();
            } else if (key == "K") { c.K = value.get<std::int64_t>();
            } else if (key == "sample_sizes") { c.sample_sizes = value.get<std::vector<std::int64_t>>();
            } else if (key == "size_pairs") {
                c.size_pairs.clear();
                for (const auto &p : value) { c.size_pairs.push_back({p.at(0).get<std::int64_t>(), p.at(1).get<std::int64_t>()}); }
            } else if (key == "alpha") { c.alpha = value.get<double>();
            } else if (key == "beta") { c.beta = value.get<double>();
            } else if (key == "gamma") { c.gamma = value.get<double>();
            } else if (key == "eta") { c.eta = value.get<double>();
            } else if (key == "zeta") { c.zeta = value.get<double>();
            } else if (key == "mu") { c.mu = value.get<double>();
            } else if (key == "lambda0") { c.lambda0 = value.get<double>();
            } else if (key == "a") { c.a = value.get<double>();
            } else if (key == "b") { c.b = value.get<double>();
            } else if (key == "knot_count") { c.knot_count = value.get<int>();
            } else if (key == "master_seed") { c.master_seed = value.get<std::uint64_t>();
            } else if (key == "grid") {
                if (value.contains("points")) { c.grid.points = value.at("points").get<Eigen::Index>(); }
                if (value.contains("lo")) { c.grid.lo = value.at("lo").get<double>(); }
                if (value.contains("hi")) { c.grid.hi = value.at("hi").get<double>(); }
            } else if (key == "randomizations") { c.randomizations = value.get<std::int64_t>();
            } else if (key == "quantile_draws") { c.quantile_draws = value.get<std::int64_t>();
            } else if (key == "coverage_mode") { c.coverage_mode = coverage_mode_from_string(value.get<std::string>());
            } else if (key == "coverage_slack") { c.coverage_slack = value.get<double>();
            } else if (key == "workers") { c.workers = value.get<unsigned>();
            } else {
                throw InputError("config: unknown key '" + key + "'");
            }
        }
    } catch (const json::exception &ex) {
        throw InputError(std::string("config: ") + ex.what());
    }
    // alpha/beta overrides without gamma keep gamma consistent.
    if (!j.contains("gamma")) { c.gamma = c.alpha + c.beta; }
    return c;
}

std::string config_to_json(const ExperimentConfig &c) {
    json pairs = json::array();
    for (const auto &p : c.size_pairs) { pairs.push_back({p.n, p.n0}); }
    json j = {{"experiment", c.experiment},
              {"trials", c.trials},
              {"n", c.n},
              {"n0", c.n0},
              {"K", c.K},
              {"sample_sizes", c.sample_sizes},
              {"size_pairs", pairs},
              {"alpha", c.alpha},
              {"beta", c.beta},
              {"gamma", c.gamma},
              {"eta", c.eta},
              {"zeta", c.zeta},
              {"mu", c.mu},
              {"lambda0", c.lambda0},
              {"a", c.a},
              {"b", c.b},
              {"knot_count", c.knot_count},
              {"master_seed", c.master_seed},
              {"grid", {{"points", c.grid.points}, {"lo", c.grid.lo}, {"hi", c.grid.hi}}},
              {"randomizations", c.randomizations},
              {"quantile_draws", c.quantile_draws},
              {"coverage_mode", to_string(c.coverage_mode)},
              {"coverage_slack", c.coverage_slack},
              {"workers", c.workers}};
    return j.dump(2);
}

std::string error_record(std::string_view kind, std::string_view message, double condition_estimate) {
    json j = {{"status", "error"}, {"kind", kind}, {"message", message}};
    if (condition_estimate >= 0.0) { j["condition_estimate"] = condition_estimate; }
    return j.dump();
}

void write_band_csv(std::ostream &os, const std::vector<IntervalEstimate> &band) {
    os << "x,lo,hi,empty_flag\n";
    for (const auto &iv : band) {
        os << format_double(iv.query(0)) << ',';
        if (iv.ok()) {
            os << format_double(iv.lo) << ',' << format_double(iv.hi) << ",0\n";
        } else {
            os << ",,1\n";
        }
    }
}

void write_aggregated_csv(std::ostream &os, const std::vector<AggregatedRow> &rows) {
    os << "x,scheme,u_or_perm_id,segments,total_length\n";
    for (const auto &r : rows) {
        os << format_double(r.x) << ',' << r.scheme << ',' << r.u_or_perm_id << ',' << r.set->segments() << ','
           << format_double(total_length(*r.set)) << '\n';
    }
}

void write_normbound_header(std::ostream &os, std::string_view leading_columns) {
    if (!leading_columns.empty()) { os << leading_columns << ','; }
    os << "method,tau,xi_star,alpha,beta,u";
}

void write_normbound_fields(std::ostream &os, const NormBound &b) {
    os << to_string(b.method) << ',' << format_double(b.tau) << ',' << format_double(b.xi_star) << ','
       << format_double(b.alpha) << ',' << format_double(b.beta) << ',';
    if (b.u_draw) { os << format_double(*b.u_draw); }
}

}  // namespace pwband
