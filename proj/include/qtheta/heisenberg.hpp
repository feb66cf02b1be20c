#pragma once

#include "qtheta/torus.hpp"

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include <array>
#include <complex>
#include <functional>
#include <vector>

namespace qtheta {

/// Element (lambda, x) of the central extension of a vector group by the
/// unit circle.
struct VectorHeisenbergElement {
    Complex lambda;
    Eigen::VectorXd x;
};

/// Validating constructor: |lambda| must be 1 within 1e-12.
VectorHeisenbergElement make_vector_heisenberg(Complex lambda, Eigen::VectorXd x);

/// psi(x,y) = exp(i pi A(x,y)) for the space's symplectic form.
Complex symplectic_cocycle(const SymplecticSpace& space, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& y);

/// (lambda, x)(mu, y) = (lambda mu psi(x,y), x+y).
VectorHeisenbergElement compose_vector(const VectorHeisenbergElement& a,
                                       const VectorHeisenbergElement& b,
                                       const SymplecticSpace& space);

VectorHeisenbergElement vector_inverse(const VectorHeisenbergElement& a,
                                       const SymplecticSpace& space);

/// Verifies psi(x,y) psi(x+y,z) = psi(x,y+z) psi(y,z) on the sample triples.
template <class Elem, class PsiFn, class AddFn>
bool cocycle_check(PsiFn psi, const std::vector<std::array<Elem, 3>>& samples, AddFn add,
                   double tol = 1e-12) {
    for (const auto& [x, y, z] : samples) {
        Complex lhs = psi(x, y) * psi(add(x, y), z);
        Complex rhs = psi(x, add(y, z)) * psi(y, z);
        if (std::abs(lhs - rhs) > tol) return false;
    }
    return true;
}

/// Left representative [c; x, g] of an element of the torus Heisenberg
/// group: the map f -> c e(g) x*(f).
struct TorusHeisenbergElement {
    Complex c;
    TorusCharacterAction x;
    IntVector g;
};

TorusHeisenbergElement compose_torus(const TorusHeisenbergElement& a,
                                     const TorusHeisenbergElement& b,
                                     const QuantizationForm& form);

TorusHeisenbergElement torus_inverse(const TorusHeisenbergElement& a,
                                     const QuantizationForm& form);

TorusElement apply_heisenberg(const TorusHeisenbergElement& a, const TorusElement& f);

/// Values of the extension's bicharacter restricted to a lifted subgroup,
/// on pairs of its generators, extended bimultiplicatively.
struct StructureForm {
    std::vector<IntVector> basis;
    Eigen::MatrixXcd values;

    Complex value_by_coords(const std::vector<std::int64_t>& m1,
                            const std::vector<std::int64_t>& m2) const;
};

/// Homomorphic lift of a sublattice B of the underlying lattice into the
/// torus Heisenberg group, given on a basis of B. Each lift's lattice part
/// must equal its basis vector (the left-representative projection is the
/// identity on B).
class Multiplier {
public:
    Multiplier(QuantizationForm form, std::vector<IntVector> basis,
               std::vector<TorusHeisenbergElement> lifts, bool validate = true);

    const QuantizationForm& form() const { return form_; }
    const std::vector<IntVector>& basis() const { return basis_; }
    const std::vector<TorusHeisenbergElement>& generator_lifts() const { return lifts_; }
    std::int64_t domain_index() const;

    /// Coordinates of b in the B-basis; throws if b is not in B.
    std::vector<std::int64_t> coords_in_basis(const IntVector& b) const;
    bool contains(const IntVector& b) const;
    /// Fractional parts of the B-coordinates of n; constant on cosets of B.
    std::vector<Rational> coset_key(const IntVector& n) const;
    /// Lift of an arbitrary element of B via the group law.
    TorusHeisenbergElement lift(const IntVector& b) const;

    /// Homomorphism test on generator pairs plus `random_pairs` random
    /// pairs; throws identifying the first failing generator pair.
    void validate_homomorphism(int random_pairs = 50) const;

private:
    QuantizationForm form_;
    std::vector<IntVector> basis_;
    std::vector<TorusHeisenbergElement> lifts_;
    RationalMatrix basis_inv_;
};

/// Restriction of the extension bicharacter to B; throws identifying the
/// generator pair at the first symmetry violation (the liftability
/// criterion).
StructureForm structure_form(const Multiplier& m);

/// True iff b -> log|<b,b>| is negative definite on B (x) R.
bool is_ample(const Multiplier& m);

/// Basis of the truncated space of series invariant under the multiplier,
/// indexed by coset representatives of D/B (minimal-norm, lexicographic
/// tie-break). Requires an ample multiplier of finite index.
std::vector<TorusElement> gamma_basis(const Multiplier& m, double radius);

nlohmann::json multiplier_to_json(const Multiplier& m);
Multiplier multiplier_from_json(const nlohmann::json& j, const QuantizationForm& form);

}  // namespace qtheta
