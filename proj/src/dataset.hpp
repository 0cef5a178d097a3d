// SPDX-License-Identifier: MIT

#ifndef OSGP_DATASET_HPP
#define OSGP_DATASET_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"

namespace osgp {

// Row-major numeric table with one designated target column. All values are
// finite by construction; loaders enforce this.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<std::string> columns, std::vector<double> values, size_t target);

    size_t rows() const { return rows_; }
    size_t cols() const { return columns_.size(); }
    size_t target() const { return target_; }
    const std::vector<std::string>& columns() const { return columns_; }

    double value(size_t row, size_t col) const { return values_[row * cols() + col]; }
    const double* row(size_t r) const { return values_.data() + r * cols(); }

    // Input column indices in order, skipping the target.
    std::vector<size_t> input_columns() const;
    // Copy of the target column.
    std::vector<double> target_values() const;
    // Copy of one input column (input index, not raw column index).
    std::vector<double> input_values(size_t input_index) const;

    bool operator==(const Dataset&) const = default;

private:
    std::vector<std::string> columns_;
    std::vector<double> values_;
    size_t rows_ = 0;
    size_t target_ = 0;
};

// Shortest decimal rendering that parses back to the same double.
std::string format_real(double v);

// Comma-separated dump with header row; reals rendered shortest round-trip.
void write_csv(const Dataset& ds, const std::string& path);

} // namespace osgp

#endif
