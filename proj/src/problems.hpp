// SPDX-License-Identifier: MIT

#ifndef OSGP_PROBLEMS_HPP
#define OSGP_PROBLEMS_HPP

#include <map>
#include <string>
#include <vector>

#include "config.hpp"
#include "dataset.hpp"
#include "rng.hpp"
#include "symbols.hpp"

namespace osgp {

// Target polynomial over x[0..9].
double poly10_target(const double* x);

// Ten inputs uniform in [-1, 1) plus the computed target, target last.
Dataset gen_poly10(Rng& rng, size_t rows);

struct MackeyGlassParams {
    // Emitted samples, after the transient.
    size_t count = 1056;
    double tau = 17.0;
    double initial = 1.2;
    double dt = 0.1;
    double sample_every = 1.0;
    // Leading samples discarded before emission.
    size_t transient = 100;
    double a = 0.2;
    double b = 0.1;
    double exponent = 10.0;
};

// Fixed-step fourth-order integration of the delay differential equation
// dx/dt = a*x(t-tau) / (1 + x(t-tau)^exponent) - b*x(t), with constant
// initial history and linear interpolation for delayed half-step lookups.
// tau = 0 reduces to the plain ordinary differential equation.
std::vector<double> gen_mackey_glass(const MackeyGlassParams& params = {});

// Default lag structure for the time-series problem.
const std::vector<size_t>& mackey_glass_lags();

// Row t: inputs series[t - lag] per lag, target series[t]; the first usable
// t is max(lags). Target column last.
Dataset lag_embed(const std::vector<double>& series, const std::vector<size_t>& lags,
                  size_t count);

struct ClassificationLoad {
    Dataset dataset;
    // Rows dropped for unparseable or unmapped cells.
    size_t skipped_rows = 0;
};

// Numeric CSV with a header row. Rows containing cells that do not parse
// (the classic files mark missing values with '?') are skipped and counted.
// Target cells go through target_map when it is non-empty; unmapped labels
// skip the row. Inputs keep their column order, the target moves last.
ClassificationLoad load_classification_csv(const std::string& path,
                                           const std::string& target_column,
                                           const std::map<std::string, double>& target_map,
                                           size_t sample_count,
                                           const std::vector<std::string>& exclude_columns = {});

// Single-column (or first-column) numeric CSV; a non-numeric header line is
// allowed and ignored.
std::vector<double> load_series_csv(const std::string& path);

// Uniform row permutation; column structure unchanged.
Dataset shuffle_dataset(const Dataset& ds, Rng& rng);

struct Problem {
    Dataset dataset;
    PrimitiveSet prims;
};

// Materializes the configured benchmark: generates or loads the dataset
// (classification data is reshuffled per run) and builds the matching
// primitive set.
Problem make_problem(const RunConfig& cfg, Rng& rng);

} // namespace osgp

#endif
