#include "qtheta/rng.hpp"
#include "qtheta/torus.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>

using namespace qtheta;

namespace {

constexpr double kPi = std::numbers::pi;

QuantizationForm theta_form(double theta) {
    Eigen::MatrixXd A(2, 2);
    A << 0, theta, -theta, 0;
    return QuantizationForm(A);
}

TorusElement random_element(const QuantizationForm& form, Rng& rng, int terms = 3) {
    TorusElement e(form);
    for (int t = 0; t < terms; ++t) {
        IntVector h = IntVector::zero(form.rank());
        for (int i = 0; i < form.rank(); ++i) h[i] = rng.integer(-2, 2);
        e.add_term(h, Complex(rng.uniform(-1, 1), rng.uniform(-1, 1)));
    }
    return e;
}

double max_diff(const TorusElement& a, const TorusElement& b) {
    double worst = 0;
    for (const auto& [h, c] : a.terms()) worst = std::max(worst, std::abs(c - b.coeff(h)));
    for (const auto& [h, c] : b.terms()) worst = std::max(worst, std::abs(c - a.coeff(h)));
    return worst;
}

}  // namespace

TEST_SUITE("torus") {

TEST_CASE("exponent relation and the deformation parameter") {
    double theta = 0.37;
    QuantizationForm form = theta_form(theta);
    TorusElement e10 = TorusElement::monomial(form, IntVector({1, 0}));
    TorusElement e01 = TorusElement::monomial(form, IntVector({0, 1}));

    TorusElement ab = multiply(e10, e01);
    TorusElement ba = multiply(e01, e10);
    IntVector e11({1, 1});
    CHECK(std::abs(ab.coeff(e11) - std::polar(1.0, kPi * theta)) < 1e-15);
    CHECK(std::abs(ba.coeff(e11) - std::polar(1.0, -kPi * theta)) < 1e-15);
    // commutation ratio epsilon = exp(2 pi i theta)
    CHECK(std::abs(ab.coeff(e11) / ba.coeff(e11) - std::polar(1.0, 2 * kPi * theta)) < 1e-15);

    // identity element
    Rng rng(2);
    TorusElement x = random_element(form, rng);
    CHECK(max_diff(multiply(TorusElement::monomial(form, IntVector::zero(2)), x), x) == 0.0);
}

TEST_CASE("alpha is unimodular and a bicharacter") {
    QuantizationForm form = theta_form(0.4321);
    Rng rng(3);
    for (int t = 0; t < 100; ++t) {
        IntVector g({rng.integer(-9, 9), rng.integer(-9, 9)});
        IntVector h({rng.integer(-9, 9), rng.integer(-9, 9)});
        IntVector gp({rng.integer(-9, 9), rng.integer(-9, 9)});
        CHECK(std::abs(std::abs(form.alpha(g, h)) - 1.0) <= 1e-15);
        CHECK(std::abs(form.alpha(g, h) * form.alpha(h, g) - 1.0) < 1e-12);
        CHECK(std::abs(form.alpha(g, g) - 1.0) < 1e-12);
        CHECK(std::abs(form.alpha(g + gp, h) - form.alpha(g, h) * form.alpha(gp, h)) < 1e-12);
    }
}

TEST_CASE("multiplication is associative") {
    QuantizationForm form = theta_form(1.0 / std::sqrt(5.0));
    Rng rng(4);
    for (int t = 0; t < 100; ++t) {
        TorusElement a = random_element(form, rng);
        TorusElement b = random_element(form, rng);
        TorusElement c = random_element(form, rng);
        CHECK(max_diff(multiply(multiply(a, b), c), multiply(a, multiply(b, c))) < 1e-12);
    }
    QuantizationForm other = theta_form(0.11);
    CHECK_THROWS_AS(multiply(random_element(form, rng), random_element(other, rng)),
                    std::invalid_argument);
}

TEST_CASE("star is an involutive antihomomorphism") {
    QuantizationForm form = theta_form(0.7113);
    TorusElement one = TorusElement::monomial(form, IntVector::zero(2));
    CHECK(max_diff(star(one), one) == 0.0);

    Complex c(0.3, -1.2);
    TorusElement ch = TorusElement::monomial(form, IntVector({2, -1}), c);
    TorusElement s = star(ch);
    CHECK(std::abs(s.coeff(IntVector({-2, 1})) - std::conj(c)) == 0.0);

    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
        TorusElement a = random_element(form, rng);
        TorusElement b = random_element(form, rng);
        CHECK(max_diff(star(star(a)), a) == 0.0);
        CHECK(max_diff(star(multiply(a, b)), multiply(star(b), star(a))) < 1e-12);
    }
}

TEST_CASE("character action") {
    QuantizationForm form = theta_form(0.25);
    Rng rng(6);
    TorusCharacterAction zero{Eigen::VectorXcd::Zero(2)};
    TorusElement a = random_element(form, rng);
    CHECK(max_diff(apply_character(zero, a), a) == 0.0);

    Eigen::VectorXcd w(2);
    w << Complex(0.2, 1.3), Complex(-0.4, 0.9);
    TorusCharacterAction x{w};
    IntVector h({3, -2});
    TorusElement eh = TorusElement::monomial(form, h);
    CHECK(std::abs(apply_character(x, eh).coeff(h) -
                   std::exp(w[0] * 3.0 - w[1] * 2.0)) < 1e-13);

    for (int t = 0; t < 50; ++t) {
        TorusElement u = random_element(form, rng);
        TorusElement v = random_element(form, rng);
        TorusElement lhs = apply_character(x, multiply(u, v));
        TorusElement rhs = multiply(apply_character(x, u), apply_character(x, v));
        for (const auto& [hh, cc] : lhs.terms())
            CHECK(std::abs(cc - rhs.coeff(hh)) < 1e-12 * std::max(1.0, std::abs(cc)));
    }
}

TEST_CASE("regular representation finite section") {
    QuantizationForm form = theta_form(0.318);
    double radius = 4.0;
    auto basis = regular_rep_basis(2, radius);

    // identity element -> identity matrix
    Eigen::MatrixXcd id = regular_rep_matrix(TorusElement::monomial(form, IntVector::zero(2)), radius);
    CHECK((id - Eigen::MatrixXcd::Identity(basis.size(), basis.size())).cwiseAbs().maxCoeff() == 0.0);

    // a single exponent acts by a phase permutation: one unimodular entry
    // per populated column
    Eigen::MatrixXcd perm = regular_rep_matrix(TorusElement::monomial(form, IntVector({1, 0})), radius);
    for (int col = 0; col < perm.cols(); ++col) {
        int nonzeros = 0;
        for (int row = 0; row < perm.rows(); ++row)
            if (perm(row, col) != Complex(0, 0)) {
                ++nonzeros;
                CHECK(std::abs(std::abs(perm(row, col)) - 1.0) < 1e-15);
            }
        CHECK(nonzeros <= 1);
    }

    // star section equals the adjoint section
    Rng rng(7);
    TorusElement a = random_element(form, rng);
    Eigen::MatrixXcd ma = regular_rep_matrix(a, radius);
    Eigen::MatrixXcd ms = regular_rep_matrix(star(a), radius);
    CHECK((ms - ma.adjoint()).cwiseAbs().maxCoeff() < 1e-13);

    // self-adjoint element: Hermitian on the interior sub-block
    TorusElement h = a + star(a);
    Eigen::MatrixXcd mh = regular_rep_matrix(h, radius);
    std::vector<IntVector> support;
    for (const auto& [hh, cc] : h.terms()) support.push_back(hh);
    auto interior = interior_indices(basis, support);
    CHECK(!interior.empty());
    for (int i : interior)
        for (int j : interior) CHECK(std::abs(mh(i, j) - std::conj(mh(j, i))) < 1e-12);
}

TEST_CASE("torus element json") {
    QuantizationForm form = theta_form(0.5);
    TorusElement a = TorusElement::monomial(form, IntVector({1, -2}), Complex(0.25, -1));
    a.add_term(IntVector({0, 3}), Complex(2, 0.5));
    TorusElement back = torus_element_from_json(torus_element_to_json(a));
    CHECK(max_diff(a, back) == 0.0);
    CHECK(back.form().compatible_with(form));
}

}  // TEST_SUITE
