// pwband: experiment driver for band-limited confidence bands.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pwband/errors.hpp"
#include "pwband/experiments.hpp"
#include "pwband/records.hpp"
#include "pwband/svg.hpp"

namespace fs = std::filesystem;
using namespace pwband;

namespace {

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "pwband_out";
    std::optional<std::int64_t> trials;
    std::optional<Eigen::Index> grid_points;
    bool plot = false;
};

void add_common(CLI::App *cmd, CommonOptions &o) {
    cmd->add_option("--config", o.config_path, "JSON file with ExperimentConfig fields")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "master seed (overrides the config)");
    cmd->add_option("--out", o.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--trials", o.trials, "number of trials (overrides the config)");
    cmd->add_option("--grid-points", o.grid_points, "grid resolution (overrides the config)");
    cmd->add_flag("--plot", o.plot, "also write SVG plots");
}

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) { throw InputError("cannot read " + path); }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig load_config(const std::string &experiment, const CommonOptions &o) {
    ExperimentConfig cfg = o.config_path.empty() ? ExperimentConfig::defaults_for(experiment)
                                                 : config_from_json(read_file(o.config_path), experiment);
    if (o.seed) { cfg.master_seed = *o.seed; }
    if (o.trials) { cfg.trials = *o.trials; }
    if (o.grid_points) { cfg.grid.points = *o.grid_points; }
    cfg.validate();
    return cfg;
}

std::ofstream open_out(const fs::path &dir, const std::string &name) {
    std::ofstream out(dir / name);
    if (!out) { throw InputError("cannot write " + (dir / name).string()); }
    return out;
}

fs::path prepare_out(const CommonOptions &o, const ExperimentConfig &cfg) {
    const fs::path dir(o.out_dir);
    fs::create_directories(dir);
    open_out(dir, "config.json") << config_to_json(cfg) << '\n';
    return dir;
}

std::vector<double> grid_xs(const Points &grid) {
    std::vector<double> xs;
    for (Eigen::Index i = 0; i < grid.cols(); ++i) { xs.push_back(grid(0, i)); }
    return xs;
}

int cmd_norm_bounds(const CommonOptions &o) {
    const ExperimentConfig cfg = load_config("norm-bounds", o);
    const fs::path dir = prepare_out(o, cfg);
    const auto res = run_norm_bound_experiment(cfg);
    {
        auto out = open_out(dir, "normbounds.csv");
        write_normbound_header(out, "n,trial,norm_sq,rho");
        out << ",excess\n";
        for (const auto &t : res.trials) {
            for (const NormBound *b : {&t.hoeffding, &t.randomized, &t.bernstein}) {
                out << t.n << ',' << t.trial << ',' << format_double(t.norm_sq) << ',' << format_double(t.rho) << ',';
                write_normbound_fields(out, *b);
                out << ',' << format_double(b->tau - t.norm_sq) << '\n';
            }
        }
    }
    {
        auto out = open_out(dir, "normbounds_summary.csv");
        out << "n,method,count,mean,median,q1,q3,whisker_lo,whisker_hi,valid_fraction\n";
        for (const auto &s : res.summaries) {
            out << s.n << ',' << to_string(s.method) << ',' << s.excess.count << ',' << format_double(s.excess.mean) << ','
                << format_double(s.excess.median) << ',' << format_double(s.excess.q1) << ','
                << format_double(s.excess.q3) << ',' << format_double(s.excess.whisker_lo) << ','
                << format_double(s.excess.whisker_hi) << ',' << format_double(s.valid_fraction) << '\n';
            std::cout << "n=" << s.n << " " << to_string(s.method) << ": median excess " << s.excess.median
                      << ", valid " << s.valid_fraction << '\n';
        }
    }
    if (o.plot) {
        std::vector<SvgBox> boxes;
        for (const auto &s : res.summaries) {
            boxes.push_back({std::string(to_string(s.method)).substr(0, 12) + " n=" + std::to_string(s.n),
                             s.excess.whisker_lo, s.excess.q1, s.excess.median, s.excess.q3, s.excess.whisker_hi});
        }
        open_out(dir, "normbounds.svg") << box_plot_svg("tau - ||f*||^2", boxes);
    }
    return 0;
}

int cmd_voting_bands(const CommonOptions &o) {
    const ExperimentConfig cfg = load_config("voting-bands", o);
    const fs::path dir = prepare_out(o, cfg);
    const auto res = run_voting_band_experiment(cfg);
    open_out(dir, "dataset.json") << dataset_to_json(res.data) << '\n';
    {
        auto out = open_out(dir, "member_band.csv");
        write_band_csv(out, res.member_bands.front());
    }
    {
        std::vector<AggregatedRow> rows;
        const auto xs = grid_xs(res.grid);
        for (std::size_t g = 0; g < xs.size(); ++g) { rows.push_back({xs[g], "majority", "0", &res.majority_sets[g]}); }
        for (const auto &d : res.draws) {
            const std::string id = d.scheme == "RO" ? std::to_string(d.id) : format_double(d.u);
            for (std::size_t g = 0; g < xs.size(); ++g) { rows.push_back({xs[g], d.scheme, id, &d.sets[g]}); }
        }
        auto out = open_out(dir, "aggregated.csv");
        write_aggregated_csv(out, rows);
    }
    {
        auto out = open_out(dir, "voting_summary.csv");
        out << "scheme,mean_length,mean_spread,subset_violations\n";
        for (const auto &s : res.summaries) {
            out << s.scheme << ',' << format_double(s.mean_length) << ',' << format_double(s.mean_spread) << ','
                << s.subset_violations << '\n';
            std::cout << s.scheme << ": mean length " << s.mean_length << ", spread " << s.mean_spread << '\n';
        }
    }
    if (o.plot) {
        const auto xs = grid_xs(res.grid);
        for (const char *scheme : {"RO", "RT(0.5,1)", "RT(0,1)"}) {
            std::vector<double> lo_min(xs.size(), NAN), hi_max(xs.size(), NAN);
            for (const auto &d : res.draws) {
                if (d.scheme != scheme) { continue; }
                for (std::size_t g = 0; g < xs.size(); ++g) {
                    if (d.sets[g].empty()) { continue; }
                    const Interval h = d.sets[g].hull();
                    lo_min[g] = std::isnan(lo_min[g]) ? h.lo : std::min(lo_min[g], h.lo);
                    hi_max[g] = std::isnan(hi_max[g]) ? h.hi : std::max(hi_max[g], h.hi);
                }
            }
            std::vector<double> truth(res.truth.data(), res.truth.data() + res.truth.size());
            std::string name = std::string("band_") + scheme + ".svg";
            std::replace(name.begin(), name.end(), '(', '_');
            std::replace(name.begin(), name.end(), ')', '_');
            std::replace(name.begin(), name.end(), ',', '-');
            open_out(dir, name) << line_chart_svg(std::string(scheme) + " envelope over draws",
                                                  {{"truth", "black", xs, truth, false},
                                                   {"lower", "#1f77b4", xs, lo_min, false},
                                                   {"upper", "#d62728", xs, hi_max, false}});
        }
    }
    return 0;
}

int cmd_diameter_table(const CommonOptions &o) {
    const ExperimentConfig cfg = load_config("diameter-table", o);
    const fs::path dir = prepare_out(o, cfg);
    const auto res = run_diameter_table(cfg);
    auto table = open_out(dir, "diameter_table.csv");
    auto raw = open_out(dir, "diameters.csv");
    table << "stat,n,n0,ST,RO,RT(0.5,1),RT(0,1)\n";
    raw << "n,n0,trial,ST,RO,RT(0.5,1),RT(0,1)\n";
    for (const auto &row : res.rows) {
        for (const char *stat : {"avg", "med", "std"}) {
            table << stat << ',' << row.size.n << ',' << row.size.n0;
            std::cout << stat << " n=" << row.size.n << " n0=" << row.size.n0;
            for (const auto &s : row.stats) {
                const double v = std::string(stat) == "avg" ? s.avg : std::string(stat) == "med" ? s.med : s.std;
                table << ',' << format_double(v);
                std::cout << ' ' << v;
            }
            table << '\n';
            std::cout << '\n';
        }
        for (std::size_t t = 0; t < row.diameters.front().size(); ++t) {
            raw << row.size.n << ',' << row.size.n0 << ',' << t;
            for (const auto &d : row.diameters) { raw << ',' << format_double(d[t]); }
            raw << '\n';
        }
    }
    return 0;
}

int cmd_coverage(const CommonOptions &o) {
    const ExperimentConfig cfg = load_config("coverage", o);
    const fs::path dir = prepare_out(o, cfg);
    const auto rep = run_coverage_audit(cfg);
    {
        auto out = open_out(dir, "coverage_trials.csv");
        out << "trial,covered,error,norm_sq,tau,message\n";
        for (const auto &t : rep.details) {
            std::string msg = t.message;
            std::replace(msg.begin(), msg.end(), ',', ';');
            out << t.trial << ',' << t.covered << ',' << t.error << ',' << format_double(t.norm_sq) << ','
                << format_double(t.tau) << ',' << msg << '\n';
        }
    }
    std::ostringstream js;
    js << "{\n  \"mode\": \"" << to_string(rep.mode) << "\",\n  \"trials\": " << rep.trials
       << ",\n  \"covered\": " << rep.covered << ",\n  \"errors\": " << rep.errors
       << ",\n  \"frequency\": " << format_double(rep.frequency) << ",\n  \"wilson_lo\": " << format_double(rep.wilson_lo)
       << ",\n  \"wilson_hi\": " << format_double(rep.wilson_hi) << ",\n  \"nominal\": " << format_double(rep.nominal)
       << ",\n  \"slack\": " << format_double(rep.slack) << ",\n  \"pass\": " << (rep.pass ? "true" : "false") << "\n}\n";
    open_out(dir, "coverage.json") << js.str();
    std::cout << js.str();
    return 0;
}

int cmd_band(const CommonOptions &o) {
    const ExperimentConfig cfg = load_config("band", o);
    const fs::path dir = prepare_out(o, cfg);
    const auto res = run_single_band(cfg);
    open_out(dir, "dataset.json") << dataset_to_json(res.data) << '\n';
    open_out(dir, "ellipsoid.json") << ellipsoid_to_json(res.member.ellipsoid) << '\n';
    {
        auto out = open_out(dir, "normbound.csv");
        write_normbound_header(out);
        out << '\n';
        write_normbound_fields(out, res.member.bound);
        out << '\n';
    }
    {
        auto out = open_out(dir, "band.csv");
        write_band_csv(out, res.band);
    }
    std::size_t covered = 0, empty = 0, errors = 0;
    for (std::size_t g = 0; g < res.band.size(); ++g) {
        if (res.band[g].covers(res.truth(static_cast<Eigen::Index>(g)), 1e-6)) { ++covered; }
        if (res.band[g].empty()) { ++empty; }
        if (res.band[g].status == IntervalStatus::error) { ++errors; }
    }
    std::cout << "tau " << res.member.bound.tau << " (" << to_string(res.member.bound.method) << "), grid points "
              << res.band.size() << ", covering truth " << covered << ", empty " << empty << ", errors " << errors
              << '\n';
    if (o.plot) {
        const auto xs = grid_xs(res.grid);
        std::vector<double> lo, hi, truth;
        for (std::size_t g = 0; g < res.band.size(); ++g) {
            lo.push_back(res.band[g].ok() ? res.band[g].lo : NAN);
            hi.push_back(res.band[g].ok() ? res.band[g].hi : NAN);
            truth.push_back(res.truth(static_cast<Eigen::Index>(g)));
        }
        open_out(dir, "band.svg") << line_chart_svg("confidence band",
                                                    {{"truth", "black", xs, truth, false},
                                                     {"lower", "#1f77b4", xs, lo, false},
                                                     {"upper", "#d62728", xs, hi, false}});
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Confidence bands for band-limited regression functions"};
    app.require_subcommand(1);
    CommonOptions opts;
    struct Entry {
        const char *name;
        const char *help;
        int (*run)(const CommonOptions &);
    };
    const Entry entries[] = {
        {"norm-bounds", "noise-free comparison of tau_0, tau_u and tau_b", cmd_norm_bounds},
        {"voting-bands", "aggregated bands by random ordering and random thresholds", cmd_voting_bands},
        {"diameter-table", "diameter statistics of ST, RO and RT at random queries", cmd_diameter_table},
        {"coverage", "empirical simultaneous coverage audit", cmd_coverage},
        {"band", "one data set, one subsample, band CSV", cmd_band},
    };
    std::vector<std::pair<CLI::App *, const Entry *>> cmds;
    for (const auto &e : entries) {
        CLI::App *cmd = app.add_subcommand(e.name, e.help);
        add_common(cmd, opts);
        cmds.emplace_back(cmd, &e);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() != 0) { std::cerr << error_record("usage", e.what()) << '\n'; }
        return app.exit(e);
    }
    try {
        for (const auto &[cmd, entry] : cmds) {
            if (cmd->parsed()) { return entry->run(opts); }
        }
        return 1;
    } catch (const ConditioningError &e) {
        std::cerr << error_record("conditioning", e.what(), e.condition_estimate()) << '\n';
        return 3;
    } catch (const InputError &e) {
        std::cerr << error_record("input", e.what()) << '\n';
        return 2;
    } catch (const NumericError &e) {
        std::cerr << error_record("numeric", e.what()) << '\n';
        return 4;
    } catch (const std::exception &e) {
        std::cerr << error_record("internal", e.what()) << '\n';
        return 1;
    }
}
