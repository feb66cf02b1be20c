#include "qtheta/rng.hpp"
#include "qtheta/theta.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace qtheta;

namespace {

constexpr double kPi = std::numbers::pi;

SiegelPoint t_i() { return SiegelPoint(Eigen::MatrixXcd::Constant(1, 1, Complex(0, 1))); }

LatticeEmbedding two_one_lattice() {
    RationalMatrix G(2, 2);
    G(0, 0) = Rational(2);
    G(1, 1) = Rational(1);
    return LatticeEmbedding(SymplecticSpace::standard(1), G);
}

// plain direct summation, independent of the classical_theta truncation and
// tail machinery
Complex direct_theta_1d(Complex omega, Complex z, int box) {
    Complex s(0, 0);
    for (int n = -box; n <= box; ++n) {
        double nd = n;
        s += std::exp(Complex(0, kPi) * (nd * nd * omega) + Complex(0, 2 * kPi) * (nd * z));
    }
    return s;
}

SiegelPoint scalar_siegel(Complex w) { return SiegelPoint(Eigen::MatrixXcd::Constant(1, 1, w)); }

}  // namespace

TEST_SUITE("theta") {

TEST_CASE("classical theta value against the independent oracle") {
    ClassicalThetaParams p{t_i(), Eigen::VectorXcd::Zero(1)};
    ClassicalThetaValue v = classical_theta(p, 8.0);
    CHECK(v.tail_bound < 1e-12);
    // frozen reference: sum over Z of exp(-pi n^2)
    CHECK(std::abs(v.value - Complex(1.0864348112133080, 0)) < 1e-13);
    CHECK(std::abs(v.value - direct_theta_1d(Complex(0, 1), Complex(0, 0), 12)) < 1e-12);

    // z with an imaginary part shifts the certified bound
    Eigen::VectorXcd z(1);
    z << Complex(0.3, 0.2);
    ClassicalThetaValue vz = classical_theta({t_i(), z}, 9.0);
    CHECK(std::abs(vz.value - direct_theta_1d(Complex(0, 1), z[0], 14)) < 1e-12);

    // too small a radius reports the achievable bound in the error
    CHECK_THROWS_WITH_AS(classical_theta(p, 1.5), doctest::Contains("certifies tail"),
                         std::runtime_error);
}

TEST_CASE("classical functional equations for lattice shifts") {
    Rng rng(41);
    for (int t = 0; t < 5; ++t) {
        Eigen::VectorXcd z(1);
        z << Complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.3, 0.3));
        Eigen::VectorXcd m(1);
        m << Complex(1, 0);

        Complex base = classical_theta({t_i(), z}, 9.0).value;
        Complex shifted = classical_theta({t_i(), Eigen::VectorXcd(z + m)}, 9.0).value;
        CHECK(std::abs(shifted - base) < 1e-12);

        Eigen::VectorXcd zm = z + t_i().matrix() * m;
        Complex quasi = classical_theta({t_i(), zm}, 9.0).value;
        Complex factor = std::exp(Complex(0, -kPi) * (m.transpose() * (t_i().matrix() * m)).value() +
                                  Complex(0, -2 * kPi) * (m.transpose() * z).value());
        CHECK(std::abs(quasi - factor * base) < 1e-12);
    }
}

TEST_CASE("classical modular inversion") {
    Rng rng(42);
    Eigen::VectorXcd z0 = Eigen::VectorXcd::Zero(1);
    Eigen::VectorXcd z(1);
    z << Complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.2, 0.2));

    CHECK(classical_modular_check(scalar_siegel(Complex(0, 1)), z0) < 1e-12);
    CHECK(classical_modular_check(scalar_siegel(Complex(0, 2)), z0) < 1e-10);
    CHECK(classical_modular_check(scalar_siegel(Complex(1, 1)), z0) < 1e-10);
    CHECK(classical_modular_check(scalar_siegel(Complex(0, 1)), z) < 1e-10);
    CHECK(classical_modular_check(scalar_siegel(Complex(0, 2)), z) < 1e-10);
    CHECK(classical_modular_check(scalar_siegel(Complex(1, 1)), z) < 1e-10);

    // cross-check the N=1 scaling case against the frozen values:
    // theta(0, i/2) = sqrt(2) theta(0, 2i)
    Complex lhs = classical_theta({scalar_siegel(Complex(0, 0.5)), z0}, 10.0).value;
    CHECK(std::abs(lhs - std::sqrt(2.0) * Complex(1.0037348854877391, 0)) < 1e-12);
}

TEST_CASE("quantum theta coefficients") {
    KaehlerStructure k(t_i());
    LatticeEmbedding D = LatticeEmbedding::standard_zn(1);
    QuantumTheta qt = quantum_theta(k, D, 6.0);
    CHECK(std::abs(qt.element.coeff(IntVector::zero(2)) - Complex(1, 0)) == 0.0);
    CHECK(std::abs(qt.element.coeff(IntVector({1, 0})) - Complex(std::exp(-kPi / 2), 0)) < 1e-16);
    CHECK(std::abs(qt.element.coeff(IntVector({1, 1})) - Complex(std::exp(-kPi), 0)) < 1e-16);
    CHECK(qt.prefactor == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

    // full prefactored coefficient at 0 against the quadrature oracle
    PacketSum f = PacketSum::theta_vector(k.siegel());
    Complex oracle = quadrature_inner(f, f, 6.0, 200);
    CHECK(std::abs(qt.prefactor * qt.element.coeff(IntVector::zero(2)) - oracle) < 1e-8);

    // incompatible dimensions are rejected
    Rng rng(43);
    KaehlerStructure k2(random_siegel(2, rng));
    CHECK_THROWS_AS(quantum_theta(k2, D, 5.0), std::invalid_argument);
}

TEST_CASE("rieffel product reproduces the theta series") {
    Rng rng(44);
    std::vector<std::pair<KaehlerStructure, LatticeEmbedding>> cases;
    cases.emplace_back(KaehlerStructure(t_i()), LatticeEmbedding::standard_zn(1));
    cases.emplace_back(KaehlerStructure(t_i()), two_one_lattice());
    cases.emplace_back(KaehlerStructure(random_siegel(1, rng)), LatticeEmbedding::standard_zn(1));
    for (const auto& [k, D] : cases) {
        PacketSum f = PacketSum::theta_vector(k.siegel());
        RieffelResult rp = rieffel_product_left(f, f, D, 6.0);
        QuantumTheta qt = quantum_theta(k, D, 6.0);
        for (const auto& [h, c] : qt.element.terms()) {
            if (std::sqrt(h.squared_norm()) > 5.0) continue;
            CHECK(std::abs(rp.element.coeff(h) - qt.prefactor * c) < 1e-10);
        }
        CHECK(rp.tail_bound < 1e-6);
    }
}

TEST_CASE("rieffel product symmetry and module linearity") {
    KaehlerStructure k(t_i());
    LatticeEmbedding D = LatticeEmbedding::standard_zn(1);
    Rng rng(45);
    PacketSum f = PacketSum::theta_vector(k.siegel());
    Eigen::VectorXd y(2);
    y << rng.uniform(-1, 1), rng.uniform(-1, 1);
    PacketSum g = model1_act({Complex(1, 0), y}, f);

    TorusElement pq = rieffel_product_left(f, g, D, 6.0).element;
    TorusElement qp = rieffel_product_left(g, f, D, 6.0).element;
    TorusElement spq = star(pq);
    for (const auto& [h, c] : spq.terms())
        CHECK(std::abs(c - qp.coeff(h)) < 1e-10);

    // left linearity over a monomial a = c e(g0): <a Phi, Psi> = a <Phi, Psi>
    IntVector g0({1, -1});
    Complex coef(0.6, -0.3);
    TorusElement a = TorusElement::monomial(pq.form(), g0, coef);
    PacketSum a_f = model1_act({Complex(1, 0), D.embed_point(g0)}, f) * coef;
    TorusElement lhs = rieffel_product_left(a_f, g, D, 6.0).element;
    TorusElement rhs = multiply(a, pq);
    for (const auto& [h, c] : rhs.terms()) {
        if (std::sqrt(h.squared_norm()) > 4.0) continue;
        CHECK(std::abs(c - lhs.coeff(h)) < 1e-10);
    }
}

TEST_CASE("dual-side rieffel product") {
    KaehlerStructure k(t_i());
    PacketSum f = PacketSum::theta_vector(k.siegel());

    LatticeEmbedding z2 = LatticeEmbedding::standard_zn(1);
    TorusElement r1 = rieffel_product_right(f, f, dual_lattice(z2), 6.0).element;
    CHECK(std::abs(r1.coeff(IntVector::zero(2)) - Complex(1.0 / std::sqrt(2.0), 0)) < 1e-14);

    LatticeEmbedding d21 = two_one_lattice();
    LatticeEmbedding d21_dual = dual_lattice(d21);
    TorusElement r2 = rieffel_product_right(f, f, d21_dual, 6.0).element;
    // normalization divides by vol(K/D) = 2
    CHECK(std::abs(r2.coeff(IntVector::zero(2)) - Complex(0.5 / std::sqrt(2.0), 0)) < 1e-14);

    // symmetry analogue on the dual side
    Rng rng(46);
    Eigen::VectorXd y(2);
    y << rng.uniform(-1, 1), rng.uniform(-1, 1);
    PacketSum g = model1_act({Complex(1, 0), y}, f);
    TorusElement pq = rieffel_product_right(f, g, d21_dual, 6.0).element;
    TorusElement qp = rieffel_product_right(g, f, d21_dual, 6.0).element;
    TorusElement spq = star(pq);
    for (const auto& [h, c] : spq.terms()) CHECK(std::abs(c - qp.coeff(h)) < 1e-10);
}

TEST_CASE("associativity of the two products") {
    Rng rng(47);
    KaehlerStructure k(t_i());
    PacketSum f = PacketSum::theta_vector(k.siegel());
    std::vector<Eigen::VectorXd> samples;
    for (int t = 0; t < 5; ++t) {
        Eigen::VectorXd x(1);
        x << rng.uniform(-1, 1);
        samples.push_back(x);
    }
    CHECK(associativity_check(f, f, f, LatticeEmbedding::standard_zn(1), 6.0, samples) < 1e-6);
    CHECK(associativity_check(f, f, f, two_one_lattice(), 6.0, samples) < 1e-6);

    Eigen::VectorXd y(2);
    y << rng.uniform(-1, 1), rng.uniform(-1, 1);
    PacketSum xi = model1_act({Complex(1, 0), y}, f);
    CHECK(associativity_check(f, f, xi, LatticeEmbedding::standard_zn(1), 6.0, samples) < 1e-6);
}

TEST_CASE("multiplier invariance of the theta series") {
    KaehlerStructure k(t_i());
    LatticeEmbedding D = LatticeEmbedding::standard_zn(1);
    QuantumTheta qt = quantum_theta(k, D, 6.0);
    CHECK(verify_multiplier_invariance(qt, IntVector::zero(2), 6.0) == 0.0);
    CHECK(verify_multiplier_invariance(qt, IntVector({1, 0}), 5.0) < 1e-10);
    CHECK(verify_multiplier_invariance(qt, IntVector({0, 1}), 5.0) < 1e-10);

    Rng rng(48);
    KaehlerStructure kr(random_siegel(1, rng));
    QuantumTheta qtr = quantum_theta(kr, D, 7.0);
    CHECK(verify_multiplier_invariance(qtr, IntVector({0, 1}), 5.0) < 1e-8);
}

TEST_CASE("vacuum application") {
    KaehlerStructure k(t_i());
    LatticeEmbedding D = LatticeEmbedding::standard_zn(1);
    QuantumTheta qt = quantum_theta(k, D, 7.0);
    FockSum applied = apply_to_vacuum(qt);

    // at the origin the value is sum_h exp(-pi H(h_,h_)); direct double sum
    double direct = 0;
    for (int a = -8; a <= 8; ++a)
        for (int b = -8; b <= 8; ++b) direct += std::exp(-kPi * (a * a + b * b));
    CHECK(std::abs(applied.evaluate(Eigen::VectorXcd::Zero(1)) - Complex(direct, 0)) < 1e-11);

    // a single term matches the Fock action of its lattice point
    IntVector h({1, -2});
    FockSum single = model2_act({Complex(1, 0), D.embed_point(h)}, FockSum::vacuum(1), k);
    Eigen::VectorXcd he = k.embed(D.embed_point(h));
    Complex coef = std::exp(-kPi / 2.0 * k.hermitian(he, he).real());
    bool found = false;
    for (const auto& t : applied.terms())
        if ((t.l - single.terms()[0].l).norm() < 1e-12) {
            found = true;
            CHECK(std::abs(t.gamma - coef * single.terms()[0].gamma) < 1e-14);
        }
    CHECK(found);
}

TEST_CASE("poisson functional equation") {
    KaehlerStructure k(t_i());
    std::vector<Eigen::VectorXd> xs;
    xs.push_back(Eigen::VectorXd::Zero(2));
    Eigen::VectorXd x1(2), x2(2);
    x1 << 0.3, -0.7;
    x2 << 1.1, 0.4;
    xs.push_back(x1);
    xs.push_back(x2);

    PoissonResult self_dual = poisson_check(k, LatticeEmbedding::standard_zn(1), xs, 8.0);
    CHECK(self_dual.residual < 1e-12);

    PoissonResult pr = poisson_check(k, two_one_lattice(), xs, 8.0);
    CHECK(pr.residual < 1e-8);
    CHECK(pr.tail_bound < 1e-10);
}

TEST_CASE("eta closed form") {
    KaehlerStructure k(t_i());
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
    CHECK(eta_solve(k, zero, zero).norm() == 0.0);

    Rng rng(49);
    for (int trial = 0; trial < 3; ++trial) {
        KaehlerStructure kk = trial == 0 ? k : KaehlerStructure(random_siegel(1, rng));
        Eigen::MatrixXd M = kk.q_matrix();
        for (int t = 0; t < 7; ++t) {
            Eigen::VectorXd x(2), g(2);
            x << rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5);
            g << rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5);
            Eigen::VectorXcd eta = eta_solve(kk, x, g);
            Eigen::VectorXcd xe = kk.embed(x), ge = kk.embed(g);
            Complex q_eta = (eta.transpose() * (M.cast<Complex>() * eta)).value();
            CHECK(std::abs(q_eta + kk.hermitian(ge, ge) + kk.hermitian(xe, ge)) < 1e-10);
            for (int s = 0; s < 20; ++s) {
                Eigen::VectorXd h(2);
                h << rng.uniform(-2, 2), rng.uniform(-2, 2);
                Eigen::VectorXcd hc = h.cast<Complex>();
                Complex defining =
                    ((hc + eta).transpose() * (M.cast<Complex>() * (hc + eta))).value() - q_eta;
                Eigen::VectorXcd he = kk.embed(h);
                Complex expect = kk.hermitian(he, he) + kk.hermitian(xe, he) +
                                 Complex(0, 2) * pair_value(kk.space(), g, h);
                CHECK(std::abs(defining - expect) < 1e-10);
            }
        }
    }
}

TEST_CASE("self fourier property") {
    KaehlerStructure k(t_i());
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
    CHECK(self_fourier_check(k, zero, {zero}, 5.0, 140) < 1e-6);
    CHECK(self_fourier_check(k, zero, {Eigen::Vector2d(1.0, 0.0)}, 5.0, 140) < 1e-6);

    Rng rng(50);
    KaehlerStructure kr(random_siegel(1, rng));
    Eigen::VectorXd xs(2);
    xs << rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4);
    CHECK(self_fourier_check(kr, xs, {Eigen::Vector2d(0.0, 1.0)}, 6.0, 160) < 1e-6);
}

TEST_CASE("reconstruction from an ample multiplier") {
    KaehlerStructure k(t_i());
    LatticeEmbedding D = LatticeEmbedding::standard_zn(1);
    Multiplier m = theta_multiplier(k, D);
    Reconstruction rec = reconstruct_from_multiplier(m, 6.0);
    QuantumTheta qt = quantum_theta(k, D, 6.0);
    for (const auto& [h, c] : qt.element.terms())
        CHECK(std::abs(c - rec.theta.element.coeff(h)) < 1e-10);

    // a random Siegel parameter round-trips as well
    Rng rng(51);
    KaehlerStructure kr(random_siegel(1, rng));
    Multiplier mr = theta_multiplier(kr, D);
    Reconstruction rr = reconstruct_from_multiplier(mr, 6.0);
    QuantumTheta qtr = quantum_theta(kr, D, 6.0);
    for (const auto& [h, c] : qtr.element.terms())
        CHECK(std::abs(c - rr.theta.element.coeff(h)) < 1e-10);

    // a non-unimodular lattice enters through its Gram data
    Multiplier m21 = theta_multiplier(KaehlerStructure(t_i()), two_one_lattice());
    Reconstruction r21 = reconstruct_from_multiplier(m21, 6.0);
    QuantumTheta qt21 = quantum_theta(KaehlerStructure(t_i()), two_one_lattice(), 6.0);
    for (const auto& [h, c] : qt21.element.terms())
        CHECK(std::abs(c - r21.theta.element.coeff(h)) < 1e-10);

    // flat structure form: rejected
    QuantizationForm flat_form(Eigen::MatrixXd::Zero(2, 2));
    std::vector<IntVector> basis = {IntVector({1, 0}), IntVector({0, 1})};
    std::vector<TorusHeisenbergElement> lifts;
    for (const auto& b : basis)
        lifts.push_back({Complex(1, 0), TorusCharacterAction{Eigen::VectorXcd::Zero(2)}, b});
    Multiplier flat(flat_form, basis, lifts);
    CHECK_THROWS(reconstruct_from_multiplier(flat, 5.0));
}

TEST_CASE("darboux bases") {
    Rng rng(52);
    for (int t = 0; t < 10; ++t) {
        Eigen::MatrixXd B(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) B(i, j) = rng.uniform(-2, 2);
        Eigen::MatrixXd A = B - B.transpose();
        if (std::abs(A.determinant()) < 1e-3) continue;
        Eigen::MatrixXd P = darboux_basis(A);
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(4, 4);
        J.topRightCorner(2, 2) = Eigen::MatrixXd::Identity(2, 2);
        J.bottomLeftCorner(2, 2) = -Eigen::MatrixXd::Identity(2, 2);
        CHECK((P.transpose() * A * P - J).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("tail bound machinery") {
    // monotone in the radius, and the default radius meets its tolerance
    double t1 = lattice_gaussian_tail(kPi / 2, 0.0, 3.0, 2);
    double t2 = lattice_gaussian_tail(kPi / 2, 0.0, 5.0, 2);
    CHECK(t2 < t1);
    double R = default_radius(kPi / 2, 2, 0.0, 1e-10);
    CHECK(lattice_gaussian_tail(kPi / 2, 0.0, R, 2) < 1e-10);
    CHECK_THROWS_AS(lattice_gaussian_tail(-1.0, 0.0, 1.0, 2), std::invalid_argument);

    // the certified rieffel tail really bounds the dropped coefficients:
    // compare a small-radius truncation with a larger one
    KaehlerStructure k(t_i());
    LatticeEmbedding D = LatticeEmbedding::standard_zn(1);
    PacketSum f = PacketSum::theta_vector(k.siegel());
    RieffelResult small = rieffel_product_left(f, f, D, 3.0, 1.0);
    RieffelResult large = rieffel_product_left(f, f, D, 6.0, 1.0);
    double dropped = 0;
    for (const auto& [h, c] : large.element.terms())
        if (small.element.coeff(h) == Complex(0, 0)) dropped += std::abs(c);
    CHECK(dropped <= small.tail_bound * (1 + 1e-12));
    CHECK(large.tail_bound < small.tail_bound);

    // requesting an unreachable tolerance names the bound
    CHECK_THROWS_WITH_AS(rieffel_product_left(f, f, D, 2.0, 1e-12),
                         doctest::Contains("tail bound"), std::runtime_error);
}

}  // TEST_SUITE
