#include "qf/intlin.hpp"

namespace qf {

IntMatrix identity_matrix(size_t n) {
    IntMatrix I(n, std::vector<Int>(n, Int(0)));
    for (size_t i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

IntMatrix mat_mul(const IntMatrix& A, const IntMatrix& B) {
    size_t n = A.size(), k = B.size(), m = B.empty() ? 0 : B[0].size();
    IntMatrix C(n, std::vector<Int>(m, Int(0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (A[i][l] == 0) continue;
            for (size_t j = 0; j < m; ++j) C[i][j] += A[i][l] * B[l][j];
        }
    return C;
}

SmithResult smith_normal_form(IntMatrix A) {
    size_t rows = A.size();
    size_t cols = rows ? A[0].size() : 0;
    SmithResult res;
    res.U = identity_matrix(rows);
    res.V = identity_matrix(cols);
    size_t t = 0;

    auto swap_rows = [&](size_t a, size_t b) {
        std::swap(A[a], A[b]);
        std::swap(res.U[a], res.U[b]);
    };
    auto swap_cols = [&](size_t a, size_t b) {
        for (size_t i = 0; i < rows; ++i) std::swap(A[i][a], A[i][b]);
        for (size_t i = 0; i < cols; ++i) std::swap(res.V[i][a], res.V[i][b]);
    };
    auto add_row = [&](size_t dst, size_t src, const Int& c) { // row dst += c * row src
        for (size_t j = 0; j < cols; ++j) A[dst][j] += c * A[src][j];
        for (size_t j = 0; j < rows; ++j) res.U[dst][j] += c * res.U[src][j];
    };
    auto add_col = [&](size_t dst, size_t src, const Int& c) {
        for (size_t i = 0; i < rows; ++i) A[i][dst] += c * A[i][src];
        for (size_t i = 0; i < cols; ++i) res.V[i][dst] += c * res.V[i][src];
    };
    auto negate_row = [&](size_t r) {
        for (size_t j = 0; j < cols; ++j) A[r][j] = -A[r][j];
        for (size_t j = 0; j < rows; ++j) res.U[r][j] = -res.U[r][j];
    };

    while (t < rows && t < cols) {
        // Locate the smallest-magnitude nonzero pivot in the remaining block.
        size_t pi = t, pj = t;
        bool found = false;
        for (size_t i = t; i < rows; ++i)
            for (size_t j = t; j < cols; ++j)
                if (A[i][j] != 0 &&
                    (!found || cmp(abs(A[i][j]), abs(A[pi][pj])) < 0)) {
                    pi = i;
                    pj = j;
                    found = true;
                }
        if (!found) break;
        swap_rows(t, pi);
        swap_cols(t, pj);

        // Clear row and column t by division with remainder; restart when a
        // smaller remainder takes over as pivot.
        bool dirty = true;
        while (dirty) {
            dirty = false;
            for (size_t i = t + 1; i < rows; ++i) {
                if (A[i][t] == 0) continue;
                Int q = A[i][t] / A[t][t]; // C++ truncation; remainder may be negative
                add_row(i, t, -q);
                if (A[i][t] != 0) {
                    swap_rows(t, i); // smaller magnitude becomes the pivot
                    dirty = true;
                }
            }
            for (size_t j = t + 1; j < cols; ++j) {
                if (A[t][j] == 0) continue;
                Int q = A[t][j] / A[t][t];
                add_col(j, t, -q);
                if (A[t][j] != 0) {
                    swap_cols(t, j);
                    dirty = true;
                }
            }
        }
        // Divisibility chain: fold any entry the pivot does not divide.
        bool folded = false;
        for (size_t i = t + 1; i < rows && !folded; ++i)
            for (size_t j = t + 1; j < cols && !folded; ++j)
                if (A[i][j] % A[t][t] != 0) {
                    add_row(t, i, 1);
                    folded = true;
                }
        if (folded) continue; // redo the elimination at position t
        if (A[t][t] < 0) negate_row(t);
        ++t;
    }
    res.diag.resize(std::min(rows, cols), Int(0));
    for (size_t i = 0; i < res.diag.size(); ++i) res.diag[i] = A[i][i];
    res.rank = (long)t;
    return res;
}

Int cokernel_order(const IntMatrix& A, const std::vector<long>& moduli) {
    size_t n = moduli.size();
    size_t k = A.empty() ? 0 : A[0].size();
    if (A.size() != n) throw Error("Internal", "cokernel_order shape mismatch");
    IntMatrix M(n, std::vector<Int>(k + n, Int(0)));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < k; ++j) M[i][j] = A[i][j];
        M[i][k + i] = moduli[i];
    }
    SmithResult s = smith_normal_form(std::move(M));
    Int order(1);
    for (size_t i = 0; i < n; ++i) {
        if (i >= s.diag.size() || s.diag[i] == 0) return Int(0);
        order *= s.diag[i];
    }
    return order;
}

} // namespace qf
