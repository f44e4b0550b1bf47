#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "segre/gaussian_rational.hpp"
#include "segre/series.hpp"

namespace segre {

using Vector = std::vector<GaussianRational>;
using Matrix = std::vector<Vector>;

struct Echelon {
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_rows;  // original row indices, in pivot order
    std::vector<std::size_t> pivot_cols;
    Matrix reduced;                       // row-reduced copy (rows reordered)
};

/// Exact Gaussian elimination over Q(i).
inline Echelon row_reduce(Matrix a) {
    Echelon out;
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a.front().size() : 0;
    std::vector<std::size_t> order(rows);
    for (std::size_t i = 0; i < rows; ++i) order[i] = i;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        std::swap(order[p], order[r]);
        const GaussianRational inv = GaussianRational(1) / a[r][c];
        for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (a[i][c].is_zero()) continue;
            const GaussianRational f = a[i][c];
            for (std::size_t j = c; j < cols; ++j)
                if (!a[r][j].is_zero()) a[i][j] -= f * a[r][j];
        }
        out.pivot_rows.push_back(order[r]);
        out.pivot_cols.push_back(c);
        ++r;
    }
    out.rank = r;
    out.reduced = std::move(a);
    return out;
}

inline std::size_t rank(const Matrix& a) { return row_reduce(a).rank; }

inline GaussianRational determinant(Matrix a) {
    const std::size_t n = a.size();
    for (const auto& row : a)
        if (row.size() != n) throw DimensionMismatch("determinant of a non-square matrix");
    GaussianRational det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c].is_zero()) ++p;
        if (p == n) return GaussianRational(0);
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        const GaussianRational inv = GaussianRational(1) / a[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (a[i][c].is_zero()) continue;
            const GaussianRational f = a[i][c] * inv;
            for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    return det;
}

inline Matrix submatrix(const Matrix& a, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    Matrix out;
    for (auto r : rows) {
        Vector row;
        for (auto c : cols) row.push_back(a.at(r).at(c));
        out.push_back(std::move(row));
    }
    return out;
}

/*
 * Determinant of a square matrix of series, expanded along rows with the
 * minors of the remaining rows memoised by column subset. No division, so
 * it is exact in both modes. Intended for sizes up to about 6.
 */
inline Series determinant(const std::vector<std::vector<Series>>& a) {
    const std::size_t n = a.size();
    if (n == 0) throw DimensionMismatch("determinant of an empty matrix");
    for (const auto& row : a)
        if (row.size() != n) throw DimensionMismatch("determinant of a non-square matrix");
    if (n > 16) throw DimensionMismatch("symbolic determinant too large");
    const auto& space = a[0][0].space();
    // minors[mask] = det of rows (n - popcount(mask))..n-1 against the columns in mask
    std::map<unsigned, Series> minors;
    const unsigned full = (1u << n) - 1u;
    minors.emplace(0u, Series::constant(space, 1, a[0][0].order()));
    for (std::size_t size = 1; size <= n; ++size) {
        const std::size_t row = n - size;
        for (unsigned mask = 1; mask <= full; ++mask) {
            if (static_cast<std::size_t>(__builtin_popcount(mask)) != size) continue;
            Series acc(space, a[0][0].order());
            int sign = 1;
            for (std::size_t c = 0; c < n; ++c) {
                if (!(mask & (1u << c))) continue;
                const auto& rest = minors.at(mask & ~(1u << c));
                if (!a[row][c].is_zero() && !rest.is_zero()) {
                    if (sign > 0) acc += a[row][c] * rest;
                    else acc -= a[row][c] * rest;
                }
                sign = -sign;
            }
            minors.emplace(mask, std::move(acc));
        }
    }
    return minors.at(full);
}

}  // namespace segre
