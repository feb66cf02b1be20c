#pragma once

#include "qtheta/rational.hpp"

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace qtheta {

using Complex = std::complex<double>;

/// Integer coordinate vector of a lattice point. Ordered lexicographically,
/// which fixes the deterministic enumeration and map-key order everywhere.
struct IntVector {
    std::vector<std::int64_t> c;

    IntVector() = default;
    explicit IntVector(std::vector<std::int64_t> coords) : c(std::move(coords)) {}
    static IntVector zero(int r) { return IntVector(std::vector<std::int64_t>(r, 0)); }

    int size() const { return static_cast<int>(c.size()); }
    std::int64_t operator[](int i) const { return c[i]; }
    std::int64_t& operator[](int i) { return c[i]; }

    IntVector operator+(const IntVector& o) const;
    IntVector operator-(const IntVector& o) const;
    IntVector operator-() const;
    IntVector operator*(std::int64_t k) const;
    bool operator==(const IntVector& o) const = default;
    bool operator<(const IntVector& o) const { return c < o.c; }

    bool is_zero() const;
    double squared_norm() const;
    Eigen::VectorXd as_double() const;
};

/// Real symplectic vector space (R^{2N}, A) with A antisymmetric and
/// nondegenerate. The default is the standard form A(x,y) = x1.y2 - x2.y1.
class SymplecticSpace {
public:
    static SymplecticSpace standard(int N);
    /// Validates exact antisymmetry and nondegeneracy.
    explicit SymplecticSpace(Eigen::MatrixXd A);

    int half_dim() const { return N_; }
    int dim() const { return 2 * N_; }
    const Eigen::MatrixXd& form_matrix() const { return A_; }
    const std::optional<RationalMatrix>& form_exact() const { return A_exact_; }
    bool is_standard() const;

private:
    int N_;
    Eigen::MatrixXd A_;
    std::optional<RationalMatrix> A_exact_;
};

/// A(x,y), evaluated as sum_{i<j} A_ij (x_i y_j - x_j y_i) so that
/// antisymmetry holds exactly in floating point.
double pair_value(const SymplecticSpace& space, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Gram matrix A_D of the symplectic pairing on a lattice basis.
struct GramForm {
    Eigen::MatrixXd A_D;
    std::optional<RationalMatrix> exact;
};

/// Free lattice of rank r embedded in a symplectic space by a generator
/// matrix G (columns = images of the basis vectors). Carries an exact
/// rational copy of G whenever the entries admit one, so duality and the
/// quantization-form comparisons can be done in exact arithmetic.
class LatticeEmbedding {
public:
    LatticeEmbedding(SymplecticSpace space, Eigen::MatrixXd generators);
    LatticeEmbedding(SymplecticSpace space, RationalMatrix generators);
    /// Z^{2N} with identity generators in the standard space.
    static LatticeEmbedding standard_zn(int N);

    const SymplecticSpace& space() const { return space_; }
    int rank() const { return rank_; }
    const Eigen::MatrixXd& generators() const { return G_; }
    const std::optional<RationalMatrix>& generators_exact() const { return G_exact_; }

    Eigen::VectorXd embed_point(const IntVector& h) const { return G_ * h.as_double(); }

private:
    void validate() const;

    SymplecticSpace space_;
    Eigen::MatrixXd G_;
    std::optional<RationalMatrix> G_exact_;
    int rank_;
};

GramForm gram(const LatticeEmbedding& embedding);

/// Dual lattice D! = { x | A(x, y) in Z for all y in D } for full-rank
/// embeddings, returned in the A-dual basis (A(g_k, h_l) = delta_kl).
/// The generator matrix is checked against the defining integrality
/// condition rather than trusted from the closed-form solve.
LatticeEmbedding dual_lattice(const LatticeEmbedding& embedding);

/// Gram form of the dual lattice in the A-dual basis: -A_D^{-1}. Exact when
/// the input carries exact entries.
GramForm morita_dual_form(const GramForm& g);

/// All integer points n of Z^r with n^T Q n <= radius^2 for a positive
/// definite Q, in lexicographic order.
std::vector<IntVector> points_in_quadratic_ball(const Eigen::MatrixXd& Q, double radius);

/// All lattice coordinates n with norm(G n) <= radius^2, lexicographic.
std::vector<IntVector> enumerate_lattice(const LatticeEmbedding& embedding, double radius,
                                         const Eigen::MatrixXd& norm);

/// |det G| for full-rank embeddings, in the measure where Z^{2N} has
/// covolume 1.
double covolume(const LatticeEmbedding& embedding);

nlohmann::json lattice_to_json(const LatticeEmbedding& embedding);
LatticeEmbedding lattice_from_json(const nlohmann::json& j);

}  // namespace qtheta
