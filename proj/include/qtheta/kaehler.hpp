#pragma once

#include "qtheta/lattice.hpp"
#include "qtheta/rng.hpp"

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include <complex>

namespace qtheta {

/// Point of the Siegel upper half space: a complex symmetric matrix T with
/// positive definite imaginary part. Symmetrized on construction.
class SiegelPoint {
public:
    explicit SiegelPoint(Eigen::MatrixXcd T);

    int dim() const { return static_cast<int>(T_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return T_; }
    Eigen::MatrixXd real_part() const { return T_.real(); }
    Eigen::MatrixXd imag_part() const { return T_.imag(); }

private:
    Eigen::MatrixXcd T_;
};

/// Compatible Kaehler structure on the standard symplectic R^{2N}: the
/// complex-structure identification x -> T x1 + x2 together with the
/// Hermitian form H(u,v) = u^T (Im T)^{-1} v* whose imaginary part is the
/// symplectic form.
class KaehlerStructure {
public:
    explicit KaehlerStructure(SiegelPoint siegel);
    KaehlerStructure(SiegelPoint siegel, SymplecticSpace space);

    const SiegelPoint& siegel() const { return siegel_; }
    const SymplecticSpace& space() const { return space_; }
    const Eigen::MatrixXd& imag_inverse() const { return S_inv_; }

    Eigen::VectorXcd embed(const Eigen::VectorXd& x) const;
    /// Complex-linear extension of the embedding, used when completing
    /// squares over complexified arguments.
    Eigen::VectorXcd embed(const Eigen::VectorXcd& x) const;

    /// H(u, v): linear in u, conjugate-linear in v.
    Complex hermitian(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) const;

    /// Real symmetric matrix M with x^T M x = H(embed(x), embed(x)).
    Eigen::MatrixXd q_matrix() const;

private:
    SiegelPoint siegel_;
    SymplecticSpace space_;
    Eigen::MatrixXd S_inv_;
};

/// Random Siegel point T = Sym(C) + i (Sym(B)^T Sym(B) + I); the imaginary
/// part is positive definite by construction.
SiegelPoint random_siegel(int N, Rng& rng);

nlohmann::json siegel_to_json(const SiegelPoint& p);
SiegelPoint siegel_from_json(const nlohmann::json& j);

}  // namespace qtheta
