#pragma once

#include "bstab/scalar.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

namespace bstab::linalg {

template <Scalar T>
using Vec4 = std::array<T, 4>;

template <Scalar T>
using Mat4 = std::array<std::array<T, 4>, 4>;

template <Scalar T>
T dot(const Vec4<T>& a, const Vec4<T>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

template <Scalar T>
T quad(const Mat4<T>& g, const Vec4<T>& x) {
    T s{0};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) s += g[i][j] * x[i] * x[j];
    }
    return s;
}

template <Scalar T>
T bilinear(const Mat4<T>& g, const Vec4<T>& x, const Vec4<T>& y) {
    T s{0};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) s += g[i][j] * x[i] * y[j];
    }
    return s;
}

/// Basis of the null space of the rows, by Gauss-Jordan elimination.
/// Pivots below `tol` in magnitude count as zero (double backend only).
template <Scalar T>
std::vector<Vec4<T>> nullspace(std::vector<Vec4<T>> rows, double tol = 1e-12) {
    std::array<int, 4> pivot_col{-1, -1, -1, -1};
    int rank = 0;
    for (int col = 0; col < 4 && rank < static_cast<int>(rows.size()); ++col) {
        int best = -1;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
            if (is_zero(rows[r][col], tol)) continue;
            if (best < 0 || abs_of(rows[r][col]) > abs_of(rows[best][col])) best = r;
        }
        if (best < 0) continue;
        std::swap(rows[rank], rows[best]);
        const T p = rows[rank][col];
        for (int c = 0; c < 4; ++c) rows[rank][c] /= p;
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            if (r == rank || rows[r][col] == 0) continue;
            const T f = rows[r][col];
            for (int c = 0; c < 4; ++c) rows[r][c] -= f * rows[rank][c];
        }
        pivot_col[rank] = col;
        ++rank;
    }
    std::array<bool, 4> is_pivot{};
    for (int r = 0; r < rank; ++r) is_pivot[pivot_col[r]] = true;
    std::vector<Vec4<T>> basis;
    for (int free = 0; free < 4; ++free) {
        if (is_pivot[free]) continue;
        Vec4<T> v{};
        v[free] = T(1);
        for (int r = 0; r < rank; ++r) v[pivot_col[r]] = -rows[r][free];
        basis.push_back(v);
    }
    return basis;
}

/// Solves m x = rhs; empty when m is singular (pivot below tol).
template <Scalar T>
std::optional<Vec4<T>> solve(Mat4<T> m, Vec4<T> rhs, double tol = 1e-12) {
    for (int col = 0; col < 4; ++col) {
        int best = col;
        for (int r = col + 1; r < 4; ++r) {
            if (abs_of(m[r][col]) > abs_of(m[best][col])) best = r;
        }
        if (is_zero(m[best][col], tol)) return std::nullopt;
        std::swap(m[col], m[best]);
        std::swap(rhs[col], rhs[best]);
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const T f = m[r][col] / m[col][col];
            if (f == 0) continue;
            for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    Vec4<T> x;
    for (int i = 0; i < 4; ++i) x[i] = rhs[i] / m[i][i];
    return x;
}

template <Scalar T>
T determinant(Mat4<T> m) {
    T det{1};
    for (int col = 0; col < 4; ++col) {
        int best = -1;
        for (int r = col; r < 4; ++r) {
            if (m[r][col] != 0 && (best < 0 || abs_of(m[r][col]) > abs_of(m[best][col]))) best = r;
        }
        if (best < 0) return T(0);
        if (best != col) {
            std::swap(m[col], m[best]);
            det = -det;
        }
        det *= m[col][col];
        for (int r = col + 1; r < 4; ++r) {
            const T f = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return det;
}

}  // namespace bstab::linalg
