#include "qtheta/smith.hpp"

#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace qtheta {

namespace {

std::int64_t iabs(std::int64_t v) { return v < 0 ? -v : v; }

void swap_rows(MatrixXll& m, int a, int b) { m.row(a).swap(m.row(b)); }
void swap_cols(MatrixXll& m, int a, int b) { m.col(a).swap(m.col(b)); }

}  // namespace

SmithResult smith_normal_form(MatrixXll A) {
    const int rows = static_cast<int>(A.rows());
    const int cols = static_cast<int>(A.cols());
    MatrixXll U = MatrixXll::Identity(rows, rows);
    MatrixXll V = MatrixXll::Identity(cols, cols);

    int t = 0;
    while (t < rows && t < cols) {
        // find the smallest nonzero pivot in the trailing block
        int pr = -1, pc = -1;
        std::int64_t best = 0;
        for (int i = t; i < rows; ++i)
            for (int j = t; j < cols; ++j)
                if (A(i, j) != 0 && (pr < 0 || iabs(A(i, j)) < best)) {
                    best = iabs(A(i, j));
                    pr = i;
                    pc = j;
                }
        if (pr < 0) break;
        if (pr != t) {
            swap_rows(A, pr, t);
            swap_rows(U, pr, t);
        }
        if (pc != t) {
            swap_cols(A, pc, t);
            swap_cols(V, pc, t);
        }

        bool clean = true;
        for (int i = t + 1; i < rows; ++i)
            if (A(i, t) != 0) {
                std::int64_t q = A(i, t) / A(t, t);
                A.row(i) -= q * A.row(t);
                U.row(i) -= q * U.row(t);
                if (A(i, t) != 0) clean = false;
            }
        for (int j = t + 1; j < cols; ++j)
            if (A(t, j) != 0) {
                std::int64_t q = A(t, j) / A(t, t);
                A.col(j) -= q * A.col(t);
                V.col(j) -= q * V.col(t);
                if (A(t, j) != 0) clean = false;
            }
        if (!clean) continue;  // re-pick a smaller pivot

        // divisibility: fold any non-multiple into the pivot's row
        bool redo = false;
        for (int i = t + 1; i < rows && !redo; ++i)
            for (int j = t + 1; j < cols && !redo; ++j)
                if (A(i, j) % A(t, t) != 0) {
                    A.row(t) += A.row(i);
                    U.row(t) += U.row(i);
                    redo = true;
                }
        if (redo) continue;

        if (A(t, t) < 0) {
            A.row(t) = -A.row(t);
            U.row(t) = -U.row(t);
        }
        ++t;
    }
    return {A, U, V};
}

MatrixXll column_lattice_basis(MatrixXll A) {
    const int rows = static_cast<int>(A.rows());
    const int cols = static_cast<int>(A.cols());
    // column echelon via repeated gcd elimination, working down the rows
    int lead = 0;
    for (int row = 0; row < rows && lead < cols; ++row) {
        while (true) {
            int p = -1;
            std::int64_t best = 0;
            for (int j = lead; j < cols; ++j)
                if (A(row, j) != 0 && (p < 0 || iabs(A(row, j)) < best)) {
                    best = iabs(A(row, j));
                    p = j;
                }
            if (p < 0) break;
            if (p != lead) swap_cols(A, p, lead);
            bool reduced = true;
            for (int j = lead + 1; j < cols; ++j)
                if (A(row, j) != 0) {
                    std::int64_t q = A(row, j) / A(row, lead);
                    A.col(j) -= q * A.col(lead);
                    if (A(row, j) != 0) reduced = false;
                }
            if (reduced) {
                ++lead;
                break;
            }
        }
    }
    // drop zero columns
    std::vector<int> keep;
    for (int j = 0; j < cols; ++j)
        if (!(A.col(j).array() == 0).all()) keep.push_back(j);
    MatrixXll out(rows, static_cast<int>(keep.size()));
    for (size_t j = 0; j < keep.size(); ++j) out.col(j) = A.col(keep[j]);
    return out;
}

MatrixXll kernel_mod_basis(const MatrixXll& A, const std::vector<std::int64_t>& mods) {
    const int rows = static_cast<int>(A.rows());
    const int cols = static_cast<int>(A.cols());
    if (static_cast<int>(mods.size()) != rows)
        throw std::invalid_argument("kernel_mod_basis: one modulus per row required");

    // { n : A n = M t for some integer t } is the projection of the kernel
    // of [A | -M] onto the first block.
    MatrixXll ext(rows, cols + rows);
    ext.leftCols(cols) = A;
    ext.rightCols(rows) = MatrixXll::Zero(rows, rows);
    for (int i = 0; i < rows; ++i) ext(i, cols + i) = -mods[i];

    SmithResult s = smith_normal_form(ext);
    std::vector<int> zero_cols;
    for (int j = 0; j < cols + rows; ++j) {
        bool zero = j >= std::min<int>(rows, cols + rows) || s.S(j, j) == 0;
        if (zero) zero_cols.push_back(j);
    }
    MatrixXll gen(cols, static_cast<int>(zero_cols.size()));
    for (size_t j = 0; j < zero_cols.size(); ++j)
        gen.col(j) = s.V.col(zero_cols[j]).head(cols);
    return column_lattice_basis(gen);
}

}  // namespace qtheta
