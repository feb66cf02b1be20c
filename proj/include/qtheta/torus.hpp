#pragma once

#include "qtheta/lattice.hpp"

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <string>

namespace qtheta {

using Complex = std::complex<double>;

/// Unimodular pairing alpha(g,h) used in the exponent relation
/// e(g) e(h) = alpha(g,h) e(g+h). The common case is a real antisymmetric
/// matrix A_D with alpha(g,h) = exp(i pi g^T A_D h); general cocycles
/// (finite extensions with a coboundary correction) are carried as a
/// callback and compared by identity.
class QuantizationForm {
public:
    explicit QuantizationForm(Eigen::MatrixXd A_D);
    QuantizationForm(int rank,
                     std::function<Complex(const IntVector&, const IntVector&)> alpha,
                     std::string tag);

    int rank() const { return impl_->rank; }
    Complex alpha(const IntVector& g, const IntVector& h) const;
    bool has_matrix() const { return impl_->A.has_value(); }
    const Eigen::MatrixXd& matrix() const;
    const std::string& tag() const { return impl_->tag; }
    bool compatible_with(const QuantizationForm& o) const;

private:
    struct Impl {
        int rank;
        std::optional<Eigen::MatrixXd> A;
        std::function<Complex(const IntVector&, const IntVector&)> fn;
        std::string tag;
    };
    std::shared_ptr<const Impl> impl_;
};

/// Finitely supported noncommutative Fourier series sum a_h e(h).
class TorusElement {
public:
    explicit TorusElement(QuantizationForm form) : form_(std::move(form)) {}
    static TorusElement monomial(QuantizationForm form, IntVector h, Complex c = Complex(1, 0));

    const QuantizationForm& form() const { return form_; }
    const std::map<IntVector, Complex>& terms() const { return terms_; }
    Complex coeff(const IntVector& h) const;
    /// Accumulates into the coefficient at h, dropping exact zeros.
    void add_term(const IntVector& h, Complex c);
    void set_term(const IntVector& h, Complex c);
    int support_size() const { return static_cast<int>(terms_.size()); }

    TorusElement operator+(const TorusElement& o) const;
    TorusElement operator*(Complex s) const;

private:
    QuantizationForm form_;
    std::map<IntVector, Complex> terms_;
};

TorusElement multiply(const TorusElement& a, const TorusElement& b);

/// Involution (sum a_h e(h))* = sum conj(a_h) e(h)^{-1}.
TorusElement star(const TorusElement& a);

/// Point of the classical torus stored through its log-character w:
/// x(h) = exp(w . h).
struct TorusCharacterAction {
    Eigen::VectorXcd w;

    Complex value_at(const IntVector& h) const;
};

TorusCharacterAction character_compose(const TorusCharacterAction& a, const TorusCharacterAction& b);

TorusElement apply_character(const TorusCharacterAction& x, const TorusElement& a);

/// Index set used by the finite regular-representation section: the
/// Euclidean coordinate ball of Z^r, lexicographic.
std::vector<IntVector> regular_rep_basis(int rank, double radius);

/// Finite section of left multiplication by a on l2 of the lattice,
/// rows/cols in regular_rep_basis order.
Eigen::MatrixXcd regular_rep_matrix(const TorusElement& a, double radius);

/// Positions in `basis` whose translate by every vector of `support`
/// stays inside `basis`.
std::vector<int> interior_indices(const std::vector<IntVector>& basis,
                                  const std::vector<IntVector>& support);

nlohmann::json torus_element_to_json(const TorusElement& a);
TorusElement torus_element_from_json(const nlohmann::json& j);

}  // namespace qtheta
