#pragma once

#include <cstddef>
#include <vector>

#include "cohmms/errors.hpp"

namespace cohmms {

/// Dense row-major matrix. Small and value-semantic; everything at desk scale
/// fits comfortably in n^2 storage.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, T fill = T(0))
        : rows_(rows), cols_(cols), v_(static_cast<size_t>(rows) * cols, fill) {
        if (rows < 0 || cols < 0) throw StructuralError("negative matrix dimension");
    }

    static Matrix square(int n, T fill = T(0)) { return Matrix(n, n, fill); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    T& operator()(int i, int j) { return v_[static_cast<size_t>(i) * cols_ + j]; }
    const T& operator()(int i, int j) const { return v_[static_cast<size_t>(i) * cols_ + j]; }

    const std::vector<T>& data() const { return v_; }
    std::vector<T>& data() { return v_; }

    bool operator==(const Matrix& other) const = default;

    Matrix transposed() const {
        Matrix out(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> v_;
};

} // namespace cohmms
