#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace sockspot {

// Dense row-major double matrix. Kept deliberately small; the heavy lifting
// lives in kernels.hpp.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    Matrix() = default;
    Matrix(int r, int c, double fill = 0.0)
        : rows(r), cols(c), v(static_cast<size_t>(r) * c, fill) {}

    double& at(int i, int j) { return v[static_cast<size_t>(i) * cols + j]; }
    double at(int i, int j) const { return v[static_cast<size_t>(i) * cols + j]; }

    double* row(int i) { return v.data() + static_cast<size_t>(i) * cols; }
    const double* row(int i) const { return v.data() + static_cast<size_t>(i) * cols; }

    double* data() { return v.data(); }
    const double* data() const { return v.data(); }

    bool empty() const { return rows == 0 || cols == 0; }
};

} // namespace sockspot
