#include "qtheta/heisenberg.hpp"

#include "qtheta/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qtheta {

VectorHeisenbergElement make_vector_heisenberg(Complex lambda, Eigen::VectorXd x) {
    if (std::abs(std::abs(lambda) - 1.0) > 1e-12)
        throw std::invalid_argument("make_vector_heisenberg: |lambda| must be 1");
    return VectorHeisenbergElement{lambda, std::move(x)};
}

Complex symplectic_cocycle(const SymplecticSpace& space, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& y) {
    return std::polar(1.0, std::numbers::pi * pair_value(space, x, y));
}

VectorHeisenbergElement compose_vector(const VectorHeisenbergElement& a,
                                       const VectorHeisenbergElement& b,
                                       const SymplecticSpace& space) {
    return {a.lambda * b.lambda * symplectic_cocycle(space, a.x, b.x), a.x + b.x};
}

VectorHeisenbergElement vector_inverse(const VectorHeisenbergElement& a,
                                       const SymplecticSpace& space) {
    // psi(x,-x) = 1 exactly since pair(x,x) = 0 exactly.
    (void)space;
    return {Complex(1, 0) / a.lambda, -a.x};
}

TorusHeisenbergElement compose_torus(const TorusHeisenbergElement& a,
                                     const TorusHeisenbergElement& b,
                                     const QuantizationForm& form) {
    Complex c = a.c * b.c * a.x.value_at(b.g) * form.alpha(a.g, b.g);
    return {c, character_compose(a.x, b.x), a.g + b.g};
}

TorusHeisenbergElement torus_inverse(const TorusHeisenbergElement& a,
                                     const QuantizationForm& form) {
    Complex denom = a.x.value_at(-a.g) * form.alpha(a.g, -a.g);
    return {Complex(1, 0) / (a.c * denom), TorusCharacterAction{-a.x.w}, -a.g};
}

TorusElement apply_heisenberg(const TorusHeisenbergElement& a, const TorusElement& f) {
    if (a.g.size() != f.form().rank())
        throw std::invalid_argument("apply_heisenberg: rank mismatch");
    TorusElement eg = TorusElement::monomial(f.form(), a.g);
    return multiply(eg, apply_character(a.x, f)) * a.c;
}

Complex StructureForm::value_by_coords(const std::vector<std::int64_t>& m1,
                                       const std::vector<std::int64_t>& m2) const {
    Complex out(1, 0);
    for (size_t i = 0; i < m1.size(); ++i)
        for (size_t j = 0; j < m2.size(); ++j) {
            std::int64_t e = m1[i] * m2[j];
            if (e == 0) continue;
            Complex base = values(i, j);
            Complex p = std::pow(base, static_cast<double>(e));
            out *= p;
        }
    return out;
}

namespace {

RationalMatrix basis_matrix(const std::vector<IntVector>& basis) {
    int r = basis.empty() ? 0 : basis[0].size();
    RationalMatrix B(r, static_cast<int>(basis.size()));
    for (int j = 0; j < static_cast<int>(basis.size()); ++j)
        for (int i = 0; i < r; ++i) B(i, j) = Rational(basis[j][i]);
    return B;
}

bool close(Complex a, Complex b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

Multiplier::Multiplier(QuantizationForm form, std::vector<IntVector> basis,
                       std::vector<TorusHeisenbergElement> lifts, bool validate)
    : form_(std::move(form)), basis_(std::move(basis)), lifts_(std::move(lifts)) {
    if (basis_.size() != lifts_.size())
        throw std::invalid_argument("Multiplier: one lift per basis vector required");
    for (size_t j = 0; j < basis_.size(); ++j)
        if (!(lifts_[j].g == basis_[j]))
            throw std::invalid_argument("Multiplier: lift lattice part must equal its basis vector");
    RationalMatrix B = basis_matrix(basis_);
    if (B.rows() != B.cols())
        throw std::invalid_argument("Multiplier: B must have finite index (square basis matrix)");
    if (B.det() == Rational(0))
        throw std::invalid_argument("Multiplier: basis vectors are not independent");
    basis_inv_ = B.inverse();
    if (validate) validate_homomorphism();
}

std::int64_t Multiplier::domain_index() const {
    Rational d = basis_matrix(basis_).det();
    std::int64_t v = d.numerator() / d.denominator();
    return v < 0 ? -v : v;
}

std::vector<std::int64_t> Multiplier::coords_in_basis(const IntVector& b) const {
    if (basis_.empty()) {
        if (!b.is_zero()) throw std::invalid_argument("Multiplier: element is not in B");
        return {};
    }
    std::vector<std::int64_t> out(basis_.size());
    for (size_t i = 0; i < basis_.size(); ++i) {
        Rational v(0);
        for (int j = 0; j < b.size(); ++j) v += basis_inv_(static_cast<int>(i), j) * Rational(b[j]);
        if (v.denominator() != 1) throw std::invalid_argument("Multiplier: element is not in B");
        out[i] = v.numerator();
    }
    return out;
}

bool Multiplier::contains(const IntVector& b) const {
    if (basis_.empty()) return b.is_zero();
    for (size_t i = 0; i < basis_.size(); ++i) {
        Rational v(0);
        for (int j = 0; j < b.size(); ++j) v += basis_inv_(static_cast<int>(i), j) * Rational(b[j]);
        if (v.denominator() != 1) return false;
    }
    return true;
}

std::vector<Rational> Multiplier::coset_key(const IntVector& n) const {
    std::vector<Rational> key;
    key.reserve(basis_.size());
    for (size_t i = 0; i < basis_.size(); ++i) {
        Rational v(0);
        for (int j = 0; j < n.size(); ++j) v += basis_inv_(static_cast<int>(i), j) * Rational(n[j]);
        // reduce to the fractional part in [0, 1)
        long long fl = v.numerator() >= 0 ? v.numerator() / v.denominator()
                                          : -((-v.numerator() + v.denominator() - 1) / v.denominator());
        key.push_back(v - Rational(fl));
    }
    return key;
}

TorusHeisenbergElement Multiplier::lift(const IntVector& b) const {
    auto m = coords_in_basis(b);
    int r = form_.rank();
    TorusHeisenbergElement out{Complex(1, 0), TorusCharacterAction{Eigen::VectorXcd::Zero(r)},
                               IntVector::zero(r)};
    for (size_t j = 0; j < basis_.size(); ++j) {
        std::int64_t k = m[j];
        if (k == 0) continue;
        TorusHeisenbergElement factor =
            k > 0 ? lifts_[j] : torus_inverse(lifts_[j], form_);
        for (std::int64_t i = 0; i < std::abs(k); ++i) out = compose_torus(out, factor, form_);
    }
    return out;
}

void Multiplier::validate_homomorphism(int random_pairs) const {
    const double tol = 1e-8;
    for (size_t i = 0; i < basis_.size(); ++i)
        for (size_t j = i + 1; j < basis_.size(); ++j) {
            auto ab = compose_torus(lifts_[i], lifts_[j], form_);
            auto ba = compose_torus(lifts_[j], lifts_[i], form_);
            if (!close(ab.c, ba.c, tol)) {
                std::ostringstream msg;
                msg << "Multiplier: lift is not a homomorphism on generator pair (" << i << "," << j
                    << ")";
                throw std::runtime_error(msg.str());
            }
        }
    Rng rng(2024);
    for (int t = 0; t < random_pairs; ++t) {
        IntVector b = IntVector::zero(form_.rank());
        IntVector bp = IntVector::zero(form_.rank());
        for (size_t j = 0; j < basis_.size(); ++j) {
            std::int64_t k1 = rng.integer(-2, 2), k2 = rng.integer(-2, 2);
            b = b + basis_[j] * k1;
            bp = bp + basis_[j] * k2;
        }
        auto lhs = compose_torus(lift(b), lift(bp), form_);
        auto rhs = lift(b + bp);
        if (!close(lhs.c, rhs.c, tol) || (lhs.x.w - rhs.x.w).norm() > tol * (1 + rhs.x.w.norm()))
            throw std::runtime_error("Multiplier: lift is not a homomorphism on a random pair");
    }
}

StructureForm structure_form(const Multiplier& m) {
    const auto& basis = m.basis();
    const auto& lifts = m.generator_lifts();
    const int s = static_cast<int>(basis.size());
    StructureForm out;
    out.basis = basis;
    out.values = Eigen::MatrixXcd(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            out.values(i, j) = lifts[i].x.value_at(basis[j]) * m.form().alpha(basis[i], basis[j]);
    for (int i = 0; i < s; ++i)
        for (int j = i + 1; j < s; ++j)
            if (!close(out.values(i, j), out.values(j, i), 1e-10)) {
                std::ostringstream msg;
                msg << "structure_form: not symmetric on generator pair (" << i << "," << j
                    << "); the subgroup is not liftable";
                throw std::runtime_error(msg.str());
            }
    return out;
}

bool is_ample(const Multiplier& m) {
    StructureForm f = structure_form(m);
    const int s = static_cast<int>(f.basis.size());
    if (s == 0) return false;
    Eigen::MatrixXd L(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) L(i, j) = std::log(std::abs(f.values(i, j)));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (L + L.transpose()));
    return es.eigenvalues().maxCoeff() < -1e-10;
}

std::vector<TorusElement> gamma_basis(const Multiplier& m, double radius) {
    if (!is_ample(m))
        throw std::runtime_error("gamma_basis: multiplier is not ample; coefficients would not decay");
    const int r = m.form().rank();
    const std::int64_t index = m.domain_index();

    // Coset representatives of Z^r / B: minimal Euclidean norm,
    // lexicographic tie-break.
    std::map<std::vector<Rational>, IntVector> reps;
    for (double rho = 1.5; static_cast<std::int64_t>(reps.size()) < index; rho *= 2) {
        if (rho > 1024) throw std::runtime_error("gamma_basis: failed to find coset representatives");
        auto pts = points_in_quadratic_ball(Eigen::MatrixXd::Identity(r, r), rho);
        std::stable_sort(pts.begin(), pts.end(), [](const IntVector& a, const IntVector& b) {
            double na = a.squared_norm(), nb = b.squared_norm();
            if (na != nb) return na < nb;
            return a < b;
        });
        reps.clear();
        for (const auto& n : pts) {
            auto k = m.coset_key(n);
            if (!reps.count(k)) reps.emplace(std::move(k), n);
            if (static_cast<std::int64_t>(reps.size()) == index) break;
        }
    }

    std::vector<IntVector> rep_list;
    for (const auto& [k, v] : reps) rep_list.push_back(v);
    std::stable_sort(rep_list.begin(), rep_list.end(), [](const IntVector& a, const IntVector& b) {
        double na = a.squared_norm(), nb = b.squared_norm();
        if (na != nb) return na < nb;
        return a < b;
    });

    auto pts = points_in_quadratic_ball(Eigen::MatrixXd::Identity(r, r), radius);
    std::vector<TorusElement> out;
    for (const auto& rep : rep_list) {
        TorusElement elem(m.form());
        for (const auto& h : pts) {
            IntVector b = h - rep;
            if (!m.contains(b)) continue;
            auto lifted = m.lift(b);
            Complex coef = lifted.c * lifted.x.value_at(rep) * m.form().alpha(b, rep);
            elem.set_term(h, coef);
        }
        out.push_back(std::move(elem));
    }
    return out;
}

nlohmann::json multiplier_to_json(const Multiplier& m) {
    nlohmann::json j;
    nlohmann::json bb = nlohmann::json::array();
    for (const auto& b : m.basis()) bb.push_back(b.c);
    j["B_basis"] = bb;
    nlohmann::json lifts = nlohmann::json::array();
    for (const auto& l : m.generator_lifts()) {
        nlohmann::json lj;
        lj["c"] = {l.c.real(), l.c.imag()};
        nlohmann::json w = nlohmann::json::array();
        for (int i = 0; i < l.x.w.size(); ++i) w.push_back({l.x.w[i].real(), l.x.w[i].imag()});
        lj["w"] = w;
        lj["g"] = l.g.c;
        lifts.push_back(lj);
    }
    j["lifts"] = lifts;
    return j;
}

Multiplier multiplier_from_json(const nlohmann::json& j, const QuantizationForm& form) {
    std::vector<IntVector> basis;
    for (const auto& b : j.at("B_basis")) basis.emplace_back(b.get<std::vector<std::int64_t>>());
    std::vector<TorusHeisenbergElement> lifts;
    for (const auto& lj : j.at("lifts")) {
        Complex c(lj.at("c")[0].get<double>(), lj.at("c")[1].get<double>());
        const auto& wj = lj.at("w");
        Eigen::VectorXcd w(wj.size());
        for (size_t i = 0; i < wj.size(); ++i)
            w[i] = Complex(wj[i][0].get<double>(), wj[i][1].get<double>());
        IntVector g(lj.at("g").get<std::vector<std::int64_t>>());
        lifts.push_back({c, TorusCharacterAction{w}, g});
    }
    return Multiplier(form, std::move(basis), std::move(lifts));
}

}  // namespace qtheta
