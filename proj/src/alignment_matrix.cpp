#include "uws/alignment_matrix.hpp"

#include <cmath>

#include <fmt/core.h>

#include "uws/error.hpp"

namespace uws {

AlignmentMatrix::AlignmentMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

AlignmentMatrix AlignmentMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    AlignmentMatrix m;
    if (rows.empty()) return m;
    m.rows_ = rows.size();
    m.cols_ = rows.front().size();
    m.values_.reserve(m.rows_ * m.cols_);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols_) {
            throw ValidationError(fmt::format("matrix row {} has {} columns, expected {}", i,
                                              rows[i].size(), m.cols_));
        }
        m.values_.insert(m.values_.end(), rows[i].begin(), rows[i].end());
    }
    return m;
}

double row_sum(std::span<const double> row) noexcept {
    double sum = 0.0;
    for (double p : row) sum += p;
    return sum;
}

void validate_row(std::span<const double> row, double tolerance) {
    if (row.empty()) throw ValidationError("empty probability row");
    for (std::size_t j = 0; j < row.size(); ++j) {
        const double p = row[j];
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ValidationError(fmt::format("probability {} at column {} outside [0,1]", p, j));
        }
    }
    const double sum = row_sum(row);
    if (std::abs(sum - 1.0) > tolerance) {
        throw ValidationError(fmt::format("row sums to {:.9f}, not 1 within {}", sum, tolerance));
    }
}

void AlignmentMatrix::validate(double tolerance) const {
    if (cols_ == 0 && rows_ > 0) throw ValidationError("matrix has rows but no columns");
    for (std::size_t i = 0; i < rows_; ++i) {
        try {
            validate_row(row(i), tolerance);
        } catch (const ValidationError& e) {
            throw ValidationError(fmt::format("matrix row {}: {}", i, e.detail()));
        }
    }
}

void AlignmentMatrix::renormalize() noexcept {
    for (std::size_t i = 0; i < rows_; ++i) {
        auto r = row(i);
        const double sum = row_sum(r);
        if (sum <= 0.0) continue;
        for (double& p : r) p /= sum;
    }
}

}  // namespace uws
