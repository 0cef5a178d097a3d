// SPDX-License-Identifier: MIT

#include "problems.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

namespace osgp {

double poly10_target(const double* x) {
    return x[0] * x[1] + x[2] * x[3] + x[4] * x[5] + x[0] * x[6] * x[8] +
           x[2] * x[5] * x[9];
}

Dataset gen_poly10(Rng& rng, size_t rows) {
    if (rows < 1) throw ValidationError("poly10 needs at least one row");
    std::vector<std::string> columns;
    for (int i = 1; i <= 10; ++i) columns.push_back("x" + std::to_string(i));
    columns.push_back("y");
    std::vector<double> values;
    values.reserve(rows * 11);
    double x[10];
    for (size_t r = 0; r < rows; ++r) {
        for (double& xi : x) xi = rng.real(-1.0, 1.0);
        values.insert(values.end(), x, x + 10);
        values.push_back(poly10_target(x));
    }
    return Dataset(std::move(columns), std::move(values), 10);
}

namespace {

double mg_drive(double x, double a, double exponent) {
    return a * x / (1.0 + std::pow(x, exponent));
}

} // namespace

std::vector<double> gen_mackey_glass(const MackeyGlassParams& p) {
    if (p.count < 1) throw ValidationError("series needs at least one sample");
    if (!(p.dt > 0)) throw ValidationError("integration step must be positive");
    const auto steps_per_sample = static_cast<size_t>(std::llround(p.sample_every / p.dt));
    if (steps_per_sample < 1 ||
        std::fabs(static_cast<double>(steps_per_sample) * p.dt - p.sample_every) > 1e-9)
        throw ValidationError("sampling interval must be a multiple of the step");
    if (p.tau < 0 || (p.tau > 0 && p.tau < p.dt))
        throw ValidationError("delay must be zero or at least one step");

    const size_t total_samples = p.transient + p.count;
    const size_t steps = (total_samples - 1) * steps_per_sample;

    std::vector<double> x;
    x.reserve(steps + 1);
    x.push_back(p.initial);

    // Delayed state at a (possibly fractional) step index; times at or
    // before zero sit on the constant initial history.
    auto delayed = [&](double step_index) {
        if (step_index <= 0.0) return p.initial;
        const double floor_index = std::floor(step_index);
        const auto i0 = static_cast<size_t>(floor_index);
        const double frac = step_index - floor_index;
        if (frac == 0.0) return x[i0];
        return x[i0] + frac * (x[i0 + 1] - x[i0]);
    };

    const double lag_steps = p.tau / p.dt;
    for (size_t k = 0; k < steps; ++k) {
        const double y = x[k];
        double k1, k2, k3, k4;
        if (p.tau == 0.0) {
            auto f = [&](double v) { return mg_drive(v, p.a, p.exponent) - p.b * v; };
            k1 = f(y);
            k2 = f(y + 0.5 * p.dt * k1);
            k3 = f(y + 0.5 * p.dt * k2);
            k4 = f(y + p.dt * k3);
        } else {
            const double g0 = mg_drive(delayed(static_cast<double>(k) - lag_steps), p.a, p.exponent);
            const double gh = mg_drive(delayed(static_cast<double>(k) + 0.5 - lag_steps), p.a, p.exponent);
            const double g1 = mg_drive(delayed(static_cast<double>(k) + 1.0 - lag_steps), p.a, p.exponent);
            k1 = g0 - p.b * y;
            k2 = gh - p.b * (y + 0.5 * p.dt * k1);
            k3 = gh - p.b * (y + 0.5 * p.dt * k2);
            k4 = g1 - p.b * (y + p.dt * k3);
        }
        x.push_back(y + p.dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    }

    std::vector<double> out;
    out.reserve(p.count);
    for (size_t j = p.transient; j < total_samples; ++j)
        out.push_back(x[j * steps_per_sample]);
    return out;
}

const std::vector<size_t>& mackey_glass_lags() {
    static const std::vector<size_t> lags = {128, 64, 32, 16, 8, 4, 2, 1};
    return lags;
}

Dataset lag_embed(const std::vector<double>& series, const std::vector<size_t>& lags,
                  size_t count) {
    if (lags.empty()) throw ValidationError("lag embedding needs at least one lag");
    if (count < 1) throw ValidationError("lag embedding needs at least one row");
    size_t max_lag = 0;
    for (size_t lag : lags) {
        if (lag < 1) throw ValidationError("lags must be positive");
        max_lag = std::max(max_lag, lag);
    }
    if (series.size() < count + max_lag)
        throw ValidationError("series too short: need " + std::to_string(count + max_lag) +
                              " samples, have " + std::to_string(series.size()));

    std::vector<std::string> columns;
    for (size_t i = 1; i <= lags.size(); ++i) columns.push_back("x" + std::to_string(i));
    columns.push_back("y");
    std::vector<double> values;
    values.reserve(count * (lags.size() + 1));
    for (size_t r = 0; r < count; ++r) {
        const size_t t = max_lag + r;
        for (size_t lag : lags) values.push_back(series[t - lag]);
        values.push_back(series[t]);
    }
    return Dataset(std::move(columns), std::move(values), lags.size());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    while (start <= line.size()) {
        size_t end = line.find(',', start);
        if (end == std::string::npos) end = line.size();
        std::string cell = line.substr(start, end - start);
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ' || cell.back() == '\t'))
            cell.pop_back();
        size_t lead = 0;
        while (lead < cell.size() && (cell[lead] == ' ' || cell[lead] == '\t')) ++lead;
        out.push_back(cell.substr(lead));
        if (end == line.size()) break;
        start = end + 1;
    }
    return out;
}

bool parse_cell(const std::string& cell, double& out) {
    if (cell.empty()) return false;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
    return ec == std::errc() && ptr == cell.data() + cell.size() && std::isfinite(out);
}

} // namespace

ClassificationLoad load_classification_csv(const std::string& path,
                                           const std::string& target_column,
                                           const std::map<std::string, double>& target_map,
                                           size_t sample_count,
                                           const std::vector<std::string>& exclude_columns) {
    if (sample_count < 1) throw ValidationError("sample_count must be at least 1");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read: " + path);

    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": missing header row");
    const std::vector<std::string> header = split_csv_line(line);

    size_t target_idx = header.size();
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == target_column) target_idx = i;
    if (target_idx == header.size())
        throw ValidationError(path + ": no column named '" + target_column + "'");

    std::vector<bool> excluded(header.size(), false);
    for (const std::string& name : exclude_columns) {
        bool found = false;
        for (size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) {
                excluded[i] = true;
                found = true;
            }
        if (!found)
            throw ValidationError(path + ": excluded column '" + name + "' not in header");
    }
    if (excluded[target_idx])
        throw ValidationError(path + ": target column cannot be excluded");

    std::vector<std::string> columns;
    std::vector<size_t> input_idx;
    for (size_t i = 0; i < header.size(); ++i) {
        if (i == target_idx || excluded[i]) continue;
        input_idx.push_back(i);
        columns.push_back(header[i]);
    }
    if (input_idx.empty()) throw ValidationError(path + ": no input columns remain");
    columns.push_back(header[target_idx]);

    std::vector<double> values;
    values.reserve(sample_count * (input_idx.size() + 1));
    size_t retained = 0, skipped = 0;
    std::vector<double> row(input_idx.size() + 1);
    while (retained < sample_count && std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> cells = split_csv_line(line);
        bool ok = cells.size() == header.size();
        if (ok) {
            for (size_t i = 0; i < input_idx.size() && ok; ++i)
                ok = parse_cell(cells[input_idx[i]], row[i]);
        }
        if (ok) {
            const std::string& raw = cells[target_idx];
            if (target_map.empty()) {
                ok = parse_cell(raw, row.back());
            } else {
                auto it = target_map.find(raw);
                if (it == target_map.end())
                    ok = false;
                else
                    row.back() = it->second;
            }
        }
        if (!ok) {
            ++skipped;
            continue;
        }
        values.insert(values.end(), row.begin(), row.end());
        ++retained;
    }
    if (retained < sample_count)
        throw ValidationError(path + ": only " + std::to_string(retained) +
                              " usable rows, need " + std::to_string(sample_count));

    return ClassificationLoad{
        Dataset(std::move(columns), std::move(values), input_idx.size()), skipped};
}

std::vector<double> load_series_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read: " + path);
    std::vector<double> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> cells = split_csv_line(line);
        double v = 0;
        if (!parse_cell(cells[0], v)) {
            if (lineno == 1) continue;
            throw ParseError(path + ": line " + std::to_string(lineno) +
                             ": not a number: '" + cells[0] + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) throw ValidationError(path + ": no samples");
    return out;
}

Dataset shuffle_dataset(const Dataset& ds, Rng& rng) {
    std::vector<size_t> order(ds.rows());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    std::vector<double> values;
    values.reserve(ds.rows() * ds.cols());
    for (size_t r : order)
        values.insert(values.end(), ds.row(r), ds.row(r) + ds.cols());
    return Dataset(ds.columns(), std::move(values), ds.target());
}

Problem make_problem(const RunConfig& cfg, Rng& rng) {
    switch (cfg.problem) {
    case ProblemKind::Poly10:
        return Problem{gen_poly10(rng, cfg.rows), PrimitiveSet::arithmetic(10)};
    case ProblemKind::MackeyGlass: {
        const size_t max_lag = mackey_glass_lags().front();
        std::vector<double> series;
        if (cfg.data_file.empty()) {
            MackeyGlassParams p;
            p.count = cfg.rows + max_lag;
            series = gen_mackey_glass(p);
        } else {
            series = load_series_csv(cfg.data_file);
        }
        Dataset ds = lag_embed(series, mackey_glass_lags(), cfg.rows);
        return Problem{std::move(ds),
                       PrimitiveSet::arithmetic(static_cast<int>(mackey_glass_lags().size()),
                                                ConstantSampler::int_range(1, 127))};
    }
    case ProblemKind::Classification: {
        ClassificationLoad load =
            load_classification_csv(cfg.data_file, cfg.target_column, cfg.target_map,
                                    cfg.sample_count, cfg.exclude_columns);
        Dataset ds = shuffle_dataset(load.dataset, rng);
        const int nvars = static_cast<int>(ds.cols() - 1);
        return Problem{std::move(ds),
                       PrimitiveSet::extended(nvars, ConstantSampler::real_range(-20.0, 20.0))};
    }
    }
    throw ValidationError("unknown problem kind");
}

} // namespace osgp
