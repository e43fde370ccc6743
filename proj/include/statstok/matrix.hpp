#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace statstok {

/// Non-owning view over a contiguous block of rows of a row-major matrix.
class MatrixView {
public:
    MatrixView() = default;
    MatrixView(const double* data, std::size_t rows, std::size_t cols)
        : data_(data), rows_(rows), cols_(cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0; }

    std::span<const double> row(std::size_t r) const {
        assert(r < rows_);
        return {data_ + r * cols_, cols_};
    }
    double operator()(std::size_t r, std::size_t c) const {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }
    std::span<const double> values() const { return {data_, rows_ * cols_}; }

    /// Rows [begin, end).
    MatrixView slice_rows(std::size_t begin, std::size_t end) const {
        assert(begin <= end && end <= rows_);
        return {data_ + begin * cols_, end - begin, cols_};
    }

private:
    const double* data_ = nullptr;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
};

/// Dense row-major matrix with value semantics.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
        : rows_(rows), cols_(cols), data_(std::move(values)) {
        assert(data_.size() == rows_ * cols_);
    }

    static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
        Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            assert(rows[r].size() == m.cols_);
            for (std::size_t c = 0; c < m.cols_; ++c) m(r, c) = rows[r][c];
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0; }

    double& operator()(std::size_t r, std::size_t c) {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }
    double operator()(std::size_t r, std::size_t c) const {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }

    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }

    MatrixView view() const { return {data_.data(), rows_, cols_}; }
    operator MatrixView() const { return view(); }
    MatrixView slice_rows(std::size_t begin, std::size_t end) const {
        return view().slice_rows(begin, end);
    }

    void append_row(std::span<const double> row) {
        assert(rows_ == 0 ? true : row.size() == cols_);
        if (rows_ == 0) cols_ = row.size();
        data_.insert(data_.end(), row.begin(), row.end());
        ++rows_;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

} // namespace statstok
