#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace qtheta {

using MatrixXll = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Smith normal form: unimodular U, V with U * A * V = S, S diagonal with
/// s_1 | s_2 | ... Desk scale (small entries, small dimensions).
struct SmithResult {
    MatrixXll S, U, V;
};
SmithResult smith_normal_form(MatrixXll A);

/// Basis of the integer lattice generated by the columns of A (column-style
/// Hermite reduction); result has one column per independent direction.
MatrixXll column_lattice_basis(MatrixXll A);

/// Basis of { n : A n = 0 (mod mods) }, one column per basis vector; mods
/// applies componentwise to the rows of A.
MatrixXll kernel_mod_basis(const MatrixXll& A, const std::vector<std::int64_t>& mods);

}  // namespace qtheta
