#pragma once

#include <vector>

#include "qf/numbers.hpp"

namespace qf {

using IntMatrix = std::vector<std::vector<Int>>;

// Smith normal form with transforms: U * A * V = S with U, V unimodular
// and S diagonal, diag[0] | diag[1] | ..., all entries >= 0.
struct SmithResult {
    IntMatrix U;            // rows x rows
    IntMatrix V;            // cols x cols
    std::vector<Int> diag;  // length min(rows, cols)
    long rank = 0;          // number of nonzero diagonal entries
};

SmithResult smith_normal_form(IntMatrix A);

IntMatrix identity_matrix(size_t n);
IntMatrix mat_mul(const IntMatrix& A, const IntMatrix& B);

// Order of Z^n / (column lattice of A + sum_i n_i e_i Z); 0 means infinite.
// Used to decide surjectivity of maps into a finite abelian group.
Int cokernel_order(const IntMatrix& A, const std::vector<long>& moduli);

} // namespace qf
