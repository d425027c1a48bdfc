#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "mlnt/error.hpp"

namespace mlnt {

/// Dense row-major matrix of 64-bit floats.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> values; // row-major, size rows*cols

    Matrix() = default;

    Matrix(int r, int c, double fill = 0.0)
        : rows(r), cols(c), values(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {
        if (r <= 0 || c <= 0) throw DimensionError("Matrix: dimensions must be positive");
    }

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> data) {
        const int r = static_cast<int>(data.size());
        if (r == 0) throw DimensionError("Matrix::from_rows: empty");
        const int c = static_cast<int>(data.begin()->size());
        Matrix m(r, c);
        int i = 0;
        for (const auto& row : data) {
            if (static_cast<int>(row.size()) != c)
                throw DimensionError("Matrix::from_rows: ragged rows");
            int j = 0;
            for (double v : row) m(i, j++) = v;
            ++i;
        }
        return m;
    }

    double& operator()(int i, int j) {
        return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)];
    }
    double operator()(int i, int j) const {
        return values[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)];
    }

    const double* row_ptr(int i) const { return values.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(cols); }
    double* row_ptr(int i) { return values.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(cols); }

    bool same_shape(const Matrix& other) const { return rows == other.rows && cols == other.cols; }

    bool all_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

inline void require_same_shape(const Matrix& a, const Matrix& b, const char* where) {
    if (!a.same_shape(b))
        throw DimensionError(std::string(where) + ": shape mismatch (" + std::to_string(a.rows) + "x" +
                             std::to_string(a.cols) + " vs " + std::to_string(b.rows) + "x" +
                             std::to_string(b.cols) + ")");
}

inline void require_finite(const Matrix& m, const char* where) {
    if (!m.all_finite()) throw NumericError(std::string(where) + ": non-finite entries");
}

/// a[k x n] * b[n x m] -> [k x m]
inline Matrix matmul_nn(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw DimensionError("matmul_nn: inner dimensions disagree");
    Matrix out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        const double* ai = a.row_ptr(i);
        double* oi = out.row_ptr(i);
        for (int l = 0; l < a.cols; ++l) {
            const double v = ai[l];
            const double* bl = b.row_ptr(l);
            for (int j = 0; j < b.cols; ++j) oi[j] += v * bl[j];
        }
    }
    return out;
}

/// a[k x n] * b[m x n]^T -> [k x m]
inline Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols != b.cols) throw DimensionError("matmul_nt: inner dimensions disagree");
    Matrix out(a.rows, b.rows);
    for (int i = 0; i < a.rows; ++i) {
        const double* ai = a.row_ptr(i);
        double* oi = out.row_ptr(i);
        for (int j = 0; j < b.rows; ++j) {
            const double* bj = b.row_ptr(j);
            double acc = 0.0;
            for (int l = 0; l < a.cols; ++l) acc += ai[l] * bj[l];
            oi[j] = acc;
        }
    }
    return out;
}

/// a[k x n]^T * b[k x m] -> [n x m]
inline Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows) throw DimensionError("matmul_tn: inner dimensions disagree");
    Matrix out(a.cols, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        const double* ai = a.row_ptr(i);
        const double* bi = b.row_ptr(i);
        for (int l = 0; l < a.cols; ++l) {
            const double v = ai[l];
            double* ol = out.row_ptr(l);
            for (int j = 0; j < b.cols; ++j) ol[j] += v * bi[j];
        }
    }
    return out;
}

inline void add_row_vector(Matrix& m, const std::vector<double>& v) {
    if (static_cast<int>(v.size()) != m.cols)
        throw DimensionError("add_row_vector: length mismatch");
    for (int i = 0; i < m.rows; ++i) {
        double* mi = m.row_ptr(i);
        for (int j = 0; j < m.cols; ++j) mi[j] += v[static_cast<std::size_t>(j)];
    }
}

inline std::vector<double> column_sums(const Matrix& m) {
    std::vector<double> s(static_cast<std::size_t>(m.cols), 0.0);
    for (int i = 0; i < m.rows; ++i) {
        const double* mi = m.row_ptr(i);
        for (int j = 0; j < m.cols; ++j) s[static_cast<std::size_t>(j)] += mi[j];
    }
    return s;
}

/// Squared Euclidean distance between two equal-length rows.
inline double squared_distance(const double* a, const double* b, int n) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

} // namespace mlnt
