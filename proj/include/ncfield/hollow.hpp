#pragma once

// Zero-block detection on the nonzero pattern of a square matrix.
//
// A square N x N matrix has an r x s zero block with r + s > N exactly when the
// bipartite graph rows -> columns (edge where the entry is nonzero) has no perfect
// matching. From a maximum matching, Koenig's construction yields a minimum vertex
// cover C; the rows and columns outside C span a zero block of size 2N - |C| > N.

#include <functional>
#include <optional>
#include <vector>

#include "ncfield/errors.hpp"
#include "ncfield/ncmatrix.hpp"

namespace ncfield {

/// Row and column indices (0-based, ascending) of a zero block.
struct ZeroBlock {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
};

/// Maximum bipartite matching by augmenting paths. `adj[r]` lists columns adjacent to row r.
/// Returns match_of_col (col -> row, or -1).
inline std::vector<int> max_bipartite_matching(const std::vector<std::vector<std::size_t>>& adj, std::size_t n_cols) {
    std::vector<int> match_col(n_cols, -1);
    std::vector<char> seen;
    std::function<bool(std::size_t)> augment = [&](std::size_t r) {
        for (std::size_t c : adj[r]) {
            if (seen[c]) continue;
            seen[c] = 1;
            if (match_col[c] < 0 || augment(static_cast<std::size_t>(match_col[c]))) {
                match_col[c] = static_cast<int>(r);
                return true;
            }
        }
        return false;
    };
    for (std::size_t r = 0; r < adj.size(); ++r) {
        seen.assign(n_cols, 0);
        augment(r);
    }
    return match_col;
}

/// Zero block with |rows| + |cols| > N from a boolean nonzero pattern, or none.
inline std::optional<ZeroBlock> hollow_block_from_pattern(const std::vector<std::vector<bool>>& nonzero) {
    const std::size_t n = nonzero.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t r = 0; r < n; ++r) {
        if (nonzero[r].size() != n) throw DimensionMismatch("hollow check requires a square pattern");
        for (std::size_t c = 0; c < n; ++c)
            if (nonzero[r][c]) adj[r].push_back(c);
    }
    std::vector<int> match_col = max_bipartite_matching(adj, n);
    std::vector<int> match_row(n, -1);
    std::size_t size = 0;
    for (std::size_t c = 0; c < n; ++c)
        if (match_col[c] >= 0) {
            match_row[static_cast<std::size_t>(match_col[c])] = static_cast<int>(c);
            ++size;
        }
    if (size == n) return std::nullopt;

    // Alternating-path reachability from unmatched rows.
    std::vector<char> row_z(n, 0), col_z(n, 0);
    std::vector<std::size_t> stack;
    for (std::size_t r = 0; r < n; ++r)
        if (match_row[r] < 0) {
            row_z[r] = 1;
            stack.push_back(r);
        }
    while (!stack.empty()) {
        std::size_t r = stack.back();
        stack.pop_back();
        for (std::size_t c : adj[r]) {
            if (col_z[c]) continue;
            col_z[c] = 1;
            int r2 = match_col[c];
            if (r2 >= 0 && !row_z[static_cast<std::size_t>(r2)]) {
                row_z[static_cast<std::size_t>(r2)] = 1;
                stack.push_back(static_cast<std::size_t>(r2));
            }
        }
    }
    // Cover = (rows not in Z) + (cols in Z); the block is its complement.
    ZeroBlock block;
    for (std::size_t r = 0; r < n; ++r)
        if (row_z[r]) block.rows.push_back(r);
    for (std::size_t c = 0; c < n; ++c)
        if (!col_z[c]) block.cols.push_back(c);
    return block;
}

inline std::optional<ZeroBlock> hollow_check(const NcMatrix& p) {
    if (!p.is_square()) throw DimensionMismatch("hollow_check requires a square matrix");
    std::vector<std::vector<bool>> pattern(p.rows(), std::vector<bool>(p.cols()));
    for (std::size_t r = 0; r < p.rows(); ++r)
        for (std::size_t c = 0; c < p.cols(); ++c) pattern[r][c] = !p(r, c).is_zero();
    return hollow_block_from_pattern(pattern);
}

/// Nonzero pattern of a pencil: an entry is zero iff it vanishes in every coefficient.
inline std::optional<ZeroBlock> hollow_check(const LinearPencil& a) { return hollow_check(pencil_to_matrix(a)); }

}  // namespace ncfield
