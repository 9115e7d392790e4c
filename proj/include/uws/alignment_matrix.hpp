#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace uws {

/// Default tolerance on row sums when validating soft-alignment rows.
inline constexpr double kRowSumTolerance = 1e-4;

/// Row-major |t| x |s| matrix of phone -> source-word alignment probabilities.
/// Row i is the distribution of (non-silence) target phone i over the source words.
class AlignmentMatrix {
public:
    AlignmentMatrix() = default;
    AlignmentMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    /// Throws ValidationError if the rows are ragged.
    static AlignmentMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0; }

    std::span<const double> row(std::size_t i) const noexcept {
        return {values_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) noexcept { return {values_.data() + i * cols_, cols_}; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return values_[i * cols_ + j]; }

    std::span<const double> values() const noexcept { return values_; }

    /// Checks every entry lies in [0,1] and every row sums to 1 within `tolerance`.
    /// Throws ValidationError naming the first offending row.
    void validate(double tolerance = kRowSumTolerance) const;

    /// Divides each row by its sum. Rows summing to zero are left untouched.
    void renormalize() noexcept;

    friend bool operator==(const AlignmentMatrix&, const AlignmentMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

/// Left-to-right sum of a row.
double row_sum(std::span<const double> row) noexcept;

/// Checks a single probability row: non-empty, entries in [0,1], sum within tolerance.
void validate_row(std::span<const double> row, double tolerance = kRowSumTolerance);

}  // namespace uws
