#ifndef DATAFLOW_MATRIX_HPP
#define DATAFLOW_MATRIX_HPP

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "dataflow/error.hpp"

namespace dataflow {

/// Dense row-major matrix of doubles. One row per sample; used both for
/// feature points and for regression targets.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    /// Convenience for literals in tests and small fixtures; rows must agree in width.
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0; }

    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    const double* row_ptr(std::size_t r) const { return data_.data() + r * cols_; }
    double* row_ptr(std::size_t r) { return data_.data() + r * cols_; }
    std::span<const double> row(std::size_t r) const { return {row_ptr(r), cols_}; }

    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Integer class labels in {1..classes}, one per sample.
struct Labels {
    std::vector<std::int32_t> values;
    std::int32_t classes = 0;

    std::size_t size() const { return values.size(); }
};

/// Builds a validated label vector. With declared_classes == 0 the class count
/// is inferred as the maximum label. Throws ValidationError on out-of-range labels.
Labels make_labels(std::vector<std::int32_t> values, std::int32_t declared_classes = 0);

/// Throws ValidationError naming the first non-finite entry (row/col), or a
/// too-small shape. `what` names the offending input in messages ("points", "targets", ...).
void validate_finite(const Matrix& m, const char* what);

/// Same finiteness check plus the point-matrix shape invariants Q >= 2, d >= 1.
void validate_points(const Matrix& m, const char* what = "points");

} // namespace dataflow

#endif
