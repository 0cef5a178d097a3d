// SPDX-License-Identifier: MIT

#include "dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <system_error>

namespace osgp {

Dataset::Dataset(std::vector<std::string> columns, std::vector<double> values, size_t target)
    : columns_(std::move(columns)), values_(std::move(values)), target_(target) {
    if (columns_.empty()) throw ValidationError("dataset needs at least one column");
    if (target_ >= columns_.size()) throw ValidationError("target column out of range");
    if (values_.size() % columns_.size() != 0)
        throw ValidationError("value count is not a multiple of the column count");
    rows_ = values_.size() / columns_.size();
    for (double v : values_)
        if (!std::isfinite(v)) throw ValidationError("dataset contains a non-finite value");
}

std::vector<size_t> Dataset::input_columns() const {
    std::vector<size_t> out;
    out.reserve(cols() - 1);
    for (size_t c = 0; c < cols(); ++c)
        if (c != target_) out.push_back(c);
    return out;
}

std::vector<double> Dataset::target_values() const {
    std::vector<double> out;
    out.reserve(rows_);
    for (size_t r = 0; r < rows_; ++r) out.push_back(value(r, target_));
    return out;
}

std::vector<double> Dataset::input_values(size_t input_index) const {
    auto inputs = input_columns();
    if (input_index >= inputs.size()) throw ValidationError("input index out of range");
    std::vector<double> out;
    out.reserve(rows_);
    for (size_t r = 0; r < rows_; ++r) out.push_back(value(r, inputs[input_index]));
    return out;
}

std::string format_real(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc())
        throw IoError("failed to format a real value");
    return std::string(buf, ptr);
}

void write_csv(const Dataset& ds, const std::string& path) {
    FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw IoError("cannot open for writing: " + path);
    std::string line;
    for (size_t c = 0; c < ds.cols(); ++c) {
        if (c) line += ',';
        line += ds.columns()[c];
    }
    line += '\n';
    std::fputs(line.c_str(), f);
    for (size_t r = 0; r < ds.rows(); ++r) {
        line.clear();
        for (size_t c = 0; c < ds.cols(); ++c) {
            if (c) line += ',';
            line += format_real(ds.value(r, c));
        }
        line += '\n';
        std::fputs(line.c_str(), f);
    }
    if (std::fclose(f) != 0) throw IoError("failed to close: " + path);
}

} // namespace osgp
