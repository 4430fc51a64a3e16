#include "dataflow/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dataflow {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        std::ostringstream msg;
        msg << "matrix payload has " << data_.size() << " values, expected " << rows_ << " x "
            << cols_ << " = " << rows_ * cols_;
        throw ValidationError(msg.str());
    }
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
    std::size_t r = 0;
    for (const auto& row : rows) {
        if (row.size() != m.cols_) {
            throw ValidationError("from_rows: ragged row " + std::to_string(r));
        }
        std::copy(row.begin(), row.end(), m.row_ptr(r));
        ++r;
    }
    return m;
}

Labels make_labels(std::vector<std::int32_t> values, std::int32_t declared_classes) {
    Labels out;
    out.values = std::move(values);
    std::int32_t max_seen = 0;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const std::int32_t v = out.values[i];
        if (v < 1 || (declared_classes > 0 && v > declared_classes)) {
            std::ostringstream msg;
            msg << "label " << v << " at sample " << i << " outside [1, "
                << (declared_classes > 0 ? declared_classes : v) << "]";
            throw ValidationError(msg.str());
        }
        max_seen = std::max(max_seen, v);
    }
    out.classes = declared_classes > 0 ? declared_classes : max_seen;
    return out;
}

void validate_finite(const Matrix& m, const char* what) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const double* row = m.row_ptr(r);
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (!std::isfinite(row[c])) {
                std::ostringstream msg;
                msg << what << ": non-finite value at row " << r << ", col " << c;
                throw ValidationError(msg.str());
            }
        }
    }
}

void validate_points(const Matrix& m, const char* what) {
    if (m.rows() < 2) {
        throw ValidationError(std::string(what) + ": need at least 2 samples, got " +
                              std::to_string(m.rows()));
    }
    if (m.cols() < 1) {
        throw ValidationError(std::string(what) + ": need at least 1 feature column");
    }
    validate_finite(m, what);
}

} // namespace dataflow
