#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pwband/experiments.hpp"

namespace pwband {

/// {"center": [...], "shape": [[...], ...] (row-major), "degenerate": bool}.
std::string ellipsoid_to_json(const Ellipsoid &e);
Ellipsoid ellipsoid_from_json(std::string_view text);

/// Seed, specs, inputs, outputs, noiseless values and truth knots/weights.
std::string dataset_to_json(const Dataset &d);

/// Starts from ExperimentConfig::defaults_for(experiment) and overrides the fields present
/// in the JSON object. Unknown keys and type mismatches throw InputError.
ExperimentConfig config_from_json(std::string_view text, std::string_view experiment);
std::string config_to_json(const ExperimentConfig &cfg);

/// {"status": "error", "kind": ..., "message": ...} plus optional numeric details.
std::string error_record(std::string_view kind, std::string_view message, double condition_estimate = -1.0);

/// x, lo, hi, empty_flag. Non-ok rows carry empty lo/hi fields and empty_flag 1.
void write_band_csv(std::ostream &os, const std::vector<IntervalEstimate> &band);

struct AggregatedRow {
    double x = 0.0;
    std::string scheme;
    std::string u_or_perm_id;
    const UnionOfIntervals *set = nullptr;
};

/// x, scheme, u_or_perm_id, segments, total_length.
void write_aggregated_csv(std::ostream &os, const std::vector<AggregatedRow> &rows);

/// Header for norm bound records: method, tau, xi_star, alpha, beta, u.
void write_normbound_header(std::ostream &os, std::string_view leading_columns = {});
void write_normbound_fields(std::ostream &os, const NormBound &b);

/// Full-precision decimal text for CSV and JSON output.
std::string format_double(double v);

}  // namespace pwband
