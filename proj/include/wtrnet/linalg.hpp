#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "wtrnet/field.hpp"

namespace wtrnet {

using Row = std::vector<Symbol>;
using Matrix = std::vector<Row>;

namespace detail {

// Reduces `m` to row echelon form in place and returns the rank.
inline std::size_t echelon(Matrix& m, const PrimeField& f) {
    if (m.empty()) return 0;
    const std::size_t cols = m.front().size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < m.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < m.size() && m[pivot][col] == 0) ++pivot;
        if (pivot == m.size()) continue;
        std::swap(m[rank], m[pivot]);
        const Symbol scale = f.inv(m[rank][col]);
        for (auto& v : m[rank]) v = f.mul(v, scale);
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == rank || m[r][col] == 0) continue;
            const Symbol factor = m[r][col];
            for (std::size_t c = col; c < cols; ++c) m[r][c] = f.sub(m[r][c], f.mul(factor, m[rank][c]));
        }
        ++rank;
    }
    return rank;
}

}  // namespace detail

/// Rank of a set of row vectors over GF(q). All rows must share a length.
inline std::size_t rank(Matrix rows, const PrimeField& f) {
    for (auto& r : rows)
        for (auto& v : r) v = f.reduce(v);
    return detail::echelon(rows, f);
}

/// H(target | observed) in log_q units for a uniform source vector X, where the
/// target is `T·X` and the observation is `O·X`. For linear images of a uniform
/// vector this equals rank([O; T]) − rank(O).
inline std::size_t conditional_entropy_rows(std::span<const Row> target, std::span<const Row> observed,
                                            const PrimeField& f) {
    Matrix joint(observed.begin(), observed.end());
    const std::size_t observed_rank = rank(joint, f);
    joint.insert(joint.end(), target.begin(), target.end());
    return rank(std::move(joint), f) - observed_rank;
}

/// Coefficients `c` with `Σ c_i · rows[i] == target`, or nullopt if the target is
/// outside the row span.
inline std::optional<Row> solve_combination(std::span<const Row> rows, const Row& target, const PrimeField& f) {
    const std::size_t n = rows.size();
    const std::size_t d = target.size();
    // Columns of the system are the given rows; augmented column is the target.
    Matrix aug(d, Row(n + 1, 0));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug[i][j] = f.reduce(rows[j][i]);
        aug[i][n] = f.reduce(target[i]);
    }
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t col = 0; col < n && r < d; ++col) {
        std::size_t p = r;
        while (p < d && aug[p][col] == 0) ++p;
        if (p == d) continue;
        std::swap(aug[r], aug[p]);
        const Symbol s = f.inv(aug[r][col]);
        for (auto& v : aug[r]) v = f.mul(v, s);
        for (std::size_t i = 0; i < d; ++i) {
            if (i == r || aug[i][col] == 0) continue;
            const Symbol factor = aug[i][col];
            for (std::size_t c = 0; c <= n; ++c) aug[i][c] = f.sub(aug[i][c], f.mul(factor, aug[r][c]));
        }
        pivot_col.push_back(col);
        ++r;
    }
    for (std::size_t i = r; i < d; ++i)
        if (aug[i][n] != 0) return std::nullopt;
    Row coeffs(n, 0);
    for (std::size_t i = 0; i < r; ++i) coeffs[pivot_col[i]] = aug[i][n];
    return coeffs;
}

inline Symbol dot(const Row& a, std::span<const Symbol> x, const PrimeField& f) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc = (acc + std::uint64_t{a[i]} * x[i]) % f.modulus();
    return static_cast<Symbol>(acc);
}

inline Row unit_row(std::size_t length, std::size_t index) {
    Row r(length, 0);
    r.at(index) = 1;
    return r;
}

}  // namespace wtrnet
