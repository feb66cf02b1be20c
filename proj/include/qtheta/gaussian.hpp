#pragma once

#include "qtheta/heisenberg.hpp"
#include "qtheta/kaehler.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace qtheta {

/// sqrt(det Q) on the branch continuous from the real positive definite
/// cone: for Re Q > 0 all eigenvalues stay in the right half plane, so the
/// sum of principal logs is the continuous logarithm of det.
Complex sqrt_det_continuous(const Eigen::MatrixXcd& Q);

/// Closed form of int_{R^r} exp(-pi (x^T Q x + l. x + c)) dx for complex
/// symmetric Q with positive definite real part.
Complex gaussian_integral(const Eigen::MatrixXcd& Q, const Eigen::VectorXcd& l, Complex c);

/// Completing-the-square shift: the lambda with
/// q(x + lambda) - q(lambda) = q(x) + l.x.
Eigen::VectorXcd completing_square_shift(const Eigen::MatrixXcd& Q, const Eigen::VectorXcd& l);

/// x1 -> gamma exp(i pi (x1+s)^T T (x1+s) + 2 pi i b.x1).
struct GaussianPacket {
    Complex gamma;
    Eigen::VectorXcd s;
    Eigen::VectorXcd b;
};

/// Finite sum of Gaussian packets sharing one Siegel parameter T; the
/// closure of the fundamental quadratic exponential under the Heisenberg
/// action. Packets with equal (s, b) are merged.
class PacketSum {
public:
    explicit PacketSum(SiegelPoint T) : T_(std::move(T)) {}
    /// The quadratic exponential exp(i pi x1^T T x1).
    static PacketSum theta_vector(SiegelPoint T);

    const SiegelPoint& siegel() const { return T_; }
    const std::vector<GaussianPacket>& packets() const { return packets_; }
    void add(GaussianPacket p);
    PacketSum operator*(Complex sc) const;
    PacketSum operator+(const PacketSum& o) const;

    Complex evaluate(const Eigen::VectorXd& x1) const;
    Complex evaluate(const Eigen::VectorXcd& x1) const;

private:
    SiegelPoint T_;
    std::vector<GaussianPacket> packets_;
};

/// L2 inner product (antilinear in the second slot), each packet pair in
/// closed form through gaussian_integral.
Complex model1_inner(const PacketSum& f, const PacketSum& g);

/// Single packet-pair inner product; model1_inner sums this over pairs.
Complex model1_pair_inner(const SiegelPoint& T, const GaussianPacket& p, const GaussianPacket& q);

/// (U_{(lambda,y)} f)(x1) = lambda exp(2 pi i x1.y2 + pi i y1.y2) f(x1+y1).
PacketSum model1_act(const VectorHeisenbergElement& el, const PacketSum& f);

/// x_ -> gamma exp(l . x_); the vacuum is (1, 0).
struct FockExponential {
    Complex gamma;
    Eigen::VectorXcd l;
};

class FockSum {
public:
    explicit FockSum(int dim) : dim_(dim) {}
    static FockSum vacuum(int dim);

    int dim() const { return dim_; }
    const std::vector<FockExponential>& terms() const { return terms_; }
    void add(FockExponential t);

    Complex evaluate(const Eigen::VectorXcd& xe) const;

private:
    int dim_;
    std::vector<FockExponential> terms_;
};

/// (U'_{(lambda,y)} f)(x_) = lambda^{-1} exp(-pi H(x_,y_) - pi/2 H(y_,y_)) f(x_+y_).
FockSum model2_act(const VectorHeisenbergElement& el, const FockSum& f, const KaehlerStructure& k);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Tensor-product Gauss-Legendre approximation of model1_inner on
/// [-L, L]^N. Oracle only.
Complex quadrature_inner(const PacketSum& f, const PacketSum& g, double box_half_width,
                         int points_per_axis);

/// Quadrature oracle for the Fock-space inner product with weight
/// exp(-pi H(x_,x_)), N = 1 only.
Complex fock_quadrature_inner(const FockSum& f, const FockSum& g, const KaehlerStructure& k,
                              double box_half_width, int points_per_axis);

}  // namespace qtheta
