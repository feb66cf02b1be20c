#pragma once

#include "qtheta/gaussian.hpp"
#include "qtheta/heisenberg.hpp"
#include "qtheta/kaehler.hpp"
#include "qtheta/lattice.hpp"
#include "qtheta/tail.hpp"
#include "qtheta/torus.hpp"

#include <complex>
#include <vector>

namespace qtheta {

struct ClassicalThetaParams {
    SiegelPoint omega;
    Eigen::VectorXcd z;
};

struct ClassicalThetaValue {
    Complex value;
    double tail_bound;
};

/// Truncated sum over the coordinate ball |n| <= radius of
/// exp(i pi n^T Omega n + 2 pi i n.z), with a certified tail bound.
/// Throws (reporting the achievable bound) if the bound exceeds tolerance.
ClassicalThetaValue classical_theta(const ClassicalThetaParams& p, double radius,
                                    double tolerance = 1e-12);

/// Residual of the inversion functional equation
/// theta(Omega^{-1} z, -Omega^{-1}) = det(Omega/i)^{1/2} exp(i pi z^T Omega^{-1} z) theta(z, Omega),
/// square root on the branch continuous from Omega = i I.
double classical_modular_check(const SiegelPoint& omega, const Eigen::VectorXcd& z,
                               double radius = 8.0);

/// Theta series of a lattice: normalized coefficients exp(-pi/2 H(h_,h_))
/// with the 1/sqrt(2^N det Im T) prefactor kept separate.
struct QuantumTheta {
    TorusElement element;
    KaehlerStructure kaehler;
    LatticeEmbedding lattice;
    double prefactor;
};

QuantumTheta quantum_theta(const KaehlerStructure& k, const LatticeEmbedding& D, double radius);

/// The canonical ample multiplier of a quantum theta: g -> [C_g; x_g, g]
/// with C_g = exp(-pi/2 H(g_,g_)) and x_g the log-character
/// h -> exp(-pi H(g_,h_)).
Multiplier theta_multiplier(const KaehlerStructure& k, const LatticeEmbedding& D);

struct RieffelResult {
    TorusElement element;
    double tail_bound;
};

/// Algebra-valued scalar product sum_h <Phi, E(h) Psi> e(h) over D, each
/// bracket in closed form. Throws if the certified tail bound exceeds
/// tail_tolerance.
RieffelResult rieffel_product_left(const PacketSum& phi, const PacketSum& psi,
                                   const LatticeEmbedding& D, double radius,
                                   double tail_tolerance = 1e-6);

/// Dual-side product (1/vol K/D) sum_h <E!(h) Psi, Phi> e(h) over D!, with
/// values in the conjugate dual torus algebra. The normalization
/// 1/vol(K/D) = covolume(D!) is derived from the dual embedding.
RieffelResult rieffel_product_right(const PacketSum& phi, const PacketSum& psi,
                                    const LatticeEmbedding& D_dual, double radius,
                                    double tail_tolerance = 1e-6);

/// Max pointwise residual of the associativity relation
/// (left product) . Xi = Phi . (right product) at the sample points.
double associativity_check(const PacketSum& phi, const PacketSum& psi, const PacketSum& xi,
                           const LatticeEmbedding& D, double radius,
                           const std::vector<Eigen::VectorXd>& sample_points);

/// Max coefficient residual of C_g e(g) x_g*(Theta) vs Theta on the
/// truncation overlap.
double verify_multiplier_invariance(const QuantumTheta& theta, const IntVector& g, double radius);

/// Theta applied to the Fock vacuum: sum_h a_h exp(-pi/2 H(h_,h_)) U'(1,h) 1.
FockSum apply_to_vacuum(const QuantumTheta& theta);

/// Max over sample points of |sum_D f_x - (1/vol K/D) sum_D! f_x| where
/// f_x(v) = exp(-pi H(v_,v_) - pi H(x_,v_)); the dual lattice and the
/// Poisson normalization are computed independently.
struct PoissonResult {
    double residual;
    double tail_bound;
};
PoissonResult poisson_check(const KaehlerStructure& k, const LatticeEmbedding& D,
                            const std::vector<Eigen::VectorXd>& x_samples, double radius);

/// Complexified shift solving Q(h+eta) - Q(eta) = H(h_,h_) + H(x_,h_) + 2i A(g,h).
Eigen::VectorXcd eta_solve(const KaehlerStructure& k, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& g);

/// Residual of the self-Fourier property of f_x under the symplectic
/// Fourier transform, via 2d quadrature (N = 1).
double self_fourier_check(const KaehlerStructure& k, const Eigen::VectorXd& x,
                          const std::vector<Eigen::VectorXd>& g_samples, double box_half_width,
                          int points_per_axis);

struct Reconstruction {
    KaehlerStructure kaehler;
    LatticeEmbedding lattice;
    QuantumTheta theta;
};

/// Rebuilds (K, Kaehler structure, lattice, theta series) from an ample
/// multiplier whose structure form is real with log-modulus -pi Re H and
/// whose quantization phases are exp(i pi Im H); verifies the round trip.
Reconstruction reconstruct_from_multiplier(const Multiplier& m, double radius);

/// Real change of basis P with P^T A P equal to the standard symplectic
/// form, for antisymmetric nondegenerate A.
Eigen::MatrixXd darboux_basis(const Eigen::MatrixXd& A);

}  // namespace qtheta
