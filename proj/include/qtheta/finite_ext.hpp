#pragma once

#include "qtheta/heisenberg.hpp"
#include "qtheta/kaehler.hpp"
#include "qtheta/smith.hpp"
#include "qtheta/theta.hpp"
#include "qtheta/torus.hpp"

#include <nlohmann/json_fwd.hpp>

#include <map>
#include <vector>

namespace qtheta {

/// Product of cyclic groups Z/m_1 x ... x Z/m_k; elements and characters
/// are residue vectors, with l(a) = exp(2 pi i sum l_j a_j / m_j).
class FiniteAbelianGroup {
public:
    explicit FiniteAbelianGroup(std::vector<std::int64_t> orders);

    int factors() const { return static_cast<int>(orders_.size()); }
    const std::vector<std::int64_t>& orders() const { return orders_; }
    std::int64_t size() const;
    std::int64_t exponent() const;

    IntVector reduce(const IntVector& a) const;
    Complex character_value(const IntVector& l, const IntVector& a) const;
    /// All elements in lexicographic residue order.
    std::vector<IntVector> elements() const;
    int element_index(const IntVector& a) const;

private:
    std::vector<std::int64_t> orders_;
};

/// psi_0((a,l), (a',l')) = l'(a).
Complex psi0(const FiniteAbelianGroup& F, const IntVector& a, const IntVector& l,
             const IntVector& a2, const IntVector& l2);

struct ExtendedGenerator {
    Eigen::VectorXd v;  // real part in R^{2N}
    IntVector a;        // F part
    IntVector l;        // F-hat part
};

/// Lattice embedding D in R^{2N} x F x F-hat, given on a basis.
class ExtendedLattice {
public:
    ExtendedLattice(int N, FiniteAbelianGroup F, std::vector<ExtendedGenerator> generators);

    int half_dim() const { return N_; }
    int rank() const { return static_cast<int>(gens_.size()); }
    const FiniteAbelianGroup& group() const { return F_; }
    const std::vector<ExtendedGenerator>& generators() const { return gens_; }
    const Eigen::MatrixXd& real_parts() const { return V_; }
    const SymplecticSpace& space() const { return space_; }

    Eigen::VectorXd real_part(const IntVector& n) const { return V_ * n.as_double(); }
    /// Reduced finite parts (a_n, l_n) of a coordinate vector.
    std::pair<IntVector, IntVector> finite_part(const IntVector& n) const;
    /// The vector cocycle lifted through the real-part projection.
    Complex psi_real(const IntVector& g, const IntVector& h) const;

private:
    int N_;
    FiniteAbelianGroup F_;
    std::vector<ExtendedGenerator> gens_;
    Eigen::MatrixXd V_;
    SymplecticSpace space_;
};

/// Kernel D0 of the projection D -> F x F-hat, its coset structure, and the
/// induced full lattice in R^{2N}.
class KernelData {
public:
    KernelData(const ExtendedLattice& D, MatrixXll lambda_basis);

    const LatticeEmbedding& d0() const { return d0_; }
    const MatrixXll& lambda_basis() const { return lambda_; }
    std::int64_t index() const { return index_; }
    const std::vector<IntVector>& coset_reps() const { return reps_; }
    int coset_index(const IntVector& n) const;

private:
    MatrixXll lambda_;
    RationalMatrix lambda_inv_;
    LatticeEmbedding d0_;
    std::int64_t index_;
    std::vector<IntVector> reps_;
    std::map<std::vector<Rational>, int> rep_lookup_;

    std::vector<Rational> frac_key(const IntVector& n) const;
};

/// Computes D0 via the Smith normal form of the finite projection and
/// checks the dimension count (index = |F|^2, i.e. the projection is
/// surjective).
KernelData kernel_d0(const ExtendedLattice& D);

/// Unimodular constants on D/D0 correcting psi psi_0 to an antisymmetric
/// quantization form; 1 on the zero coset.
class Cochain {
public:
    explicit Cochain(std::vector<Complex> values_per_coset);
    int size() const { return static_cast<int>(values_.size()); }
    Complex value(int coset_idx) const { return values_[coset_idx]; }

private:
    std::vector<Complex> values_;
};

/// Builds the corrected quantization form
/// alpha(g,h) = (c_g c_h / c_{g+h}) psi(g,h) psi_0(g,h) and verifies
/// antisymmetry on generator pairs plus 50 random pairs; throws naming the
/// failing pair.
QuantizationForm validate_cochain(const ExtendedLattice& D, const KernelData& kd, const Cochain& c);

/// Deterministic brute-force search for a valid cochain over roots of unity
/// of order 4 exponent(F). Throws if none exists at that order.
Cochain solve_cochain(const ExtendedLattice& D, const KernelData& kd);

/// Theta series between two delta sectors: coefficients
/// conj(c_h) conj(l_h(a)) [a + a_h = b] exp(-pi/2 H(h'_,h'_)).
TorusElement theta_ab(const ExtendedLattice& D, const KernelData& kd, const Cochain& c,
                      const QuantizationForm& form, const KaehlerStructure& k, const IntVector& a,
                      const IntVector& b, double radius);

/// Independent route: the same series computed from the factorized scalar
/// products (Model I bracket) x (finite delta bracket).
TorusElement theta_ab_factorized(const ExtendedLattice& D, const KernelData& kd, const Cochain& c,
                                 const QuantizationForm& form, const KaehlerStructure& k,
                                 const IntVector& a, const IntVector& b, double radius);

/// (U_{(lambda; a, l)} phi)(b) = lambda l(b) phi(a+b) on complex functions
/// on F (vectors in element order).
Eigen::VectorXcd act_h2(Complex lambda, const IntVector& a, const IntVector& l,
                        const FiniteAbelianGroup& F, const Eigen::VectorXcd& phi);

/// Multiplier invariance of a theta_ab series under g in D0 (Hermitian data
/// lifted through the real-part projection); max coefficient residual on
/// the truncation overlap.
double verify_theta_ab_invariance(const TorusElement& theta, const ExtendedLattice& D,
                                  const KernelData& kd, const KaehlerStructure& k,
                                  const IntVector& g, double radius);

/// Rank of the matrix of theta_ab coefficients restricted to the coset
/// representatives, over all (a, b); must equal |F|^2.
int basis_rank_check(const ExtendedLattice& D, const KernelData& kd, const Cochain& c,
                     const QuantizationForm& form, const KaehlerStructure& k, double radius);

/// The D0 multiplier g -> [C_g; x_g, g] over the corrected form.
Multiplier extension_multiplier(const ExtendedLattice& D, const KernelData& kd,
                                const QuantizationForm& form, const KaehlerStructure& k);

nlohmann::json extended_lattice_to_json(const ExtendedLattice& D);
ExtendedLattice extended_lattice_from_json(const nlohmann::json& j);
nlohmann::json cochain_to_json(const Cochain& c);
Cochain cochain_from_json(const nlohmann::json& j);

}  // namespace qtheta
