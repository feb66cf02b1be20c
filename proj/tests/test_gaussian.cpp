#include "qtheta/gaussian.hpp"
#include "qtheta/kaehler.hpp"
#include "qtheta/rng.hpp"

#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

using namespace qtheta;

namespace {

constexpr double kPi = std::numbers::pi;

// independent adaptive-quadrature oracle for the 1d Gaussian integral
Complex gk_integral_1d(Complex Q, Complex l, Complex c, double L) {
    using boost::math::quadrature::gauss_kronrod;
    auto integrand = [&](double x, bool real_part) {
        Complex v = std::exp(-kPi * (Q * x * x + l * x + c));
        return real_part ? v.real() : v.imag();
    };
    double re = gauss_kronrod<double, 61>::integrate([&](double x) { return integrand(x, true); },
                                                     -L, L, 12, 1e-12);
    double im = gauss_kronrod<double, 61>::integrate([&](double x) { return integrand(x, false); },
                                                     -L, L, 12, 1e-12);
    return {re, im};
}

SiegelPoint t_i() { return SiegelPoint(Eigen::MatrixXcd::Constant(1, 1, Complex(0, 1))); }

}  // namespace

TEST_SUITE("gaussian") {

TEST_CASE("gaussian integral closed form") {
    Eigen::MatrixXcd one = Eigen::MatrixXcd::Constant(1, 1, Complex(1, 0));
    Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(1);
    CHECK(std::abs(gaussian_integral(one, zero, Complex(0, 0)) - Complex(1, 0)) < 1e-15);

    Eigen::MatrixXcd two = Eigen::MatrixXcd::Constant(1, 1, Complex(2, 0));
    CHECK(std::abs(gaussian_integral(two, zero, Complex(0, 0)) - Complex(1.0 / std::sqrt(2.0), 0)) <
          1e-15);

    Eigen::MatrixXcd neg = Eigen::MatrixXcd::Constant(1, 1, Complex(-1, 0));
    CHECK_THROWS_AS(gaussian_integral(neg, zero, Complex(0, 0)), std::invalid_argument);
}

TEST_CASE("gaussian integral vs adaptive quadrature, 50 random instances") {
    Rng rng(31);
    for (int t = 0; t < 50; ++t) {
        Complex Q(rng.uniform(0.4, 2.5), rng.uniform(-1, 1));
        Complex l(rng.uniform(-1, 1), rng.uniform(-1, 1));
        Complex c(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
        Complex closed = gaussian_integral(Eigen::MatrixXcd::Constant(1, 1, Q),
                                           Eigen::VectorXcd::Constant(1, l), c);
        Complex oracle = gk_integral_1d(Q, l, c, 9.0);
        CHECK(std::abs(closed - oracle) < 1e-8);
    }
}

TEST_CASE("gaussian integral in two variables vs tensor quadrature") {
    Rng rng(32);
    for (int t = 0; t < 5; ++t) {
        Eigen::MatrixXcd Q(2, 2);
        Complex off(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3));
        Q << Complex(rng.uniform(0.8, 1.6), rng.uniform(-0.4, 0.4)), off, off,
            Complex(rng.uniform(0.8, 1.6), rng.uniform(-0.4, 0.4));
        Eigen::VectorXcd l(2);
        l << Complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)),
            Complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
        Complex c(0.1, -0.2);
        Complex closed = gaussian_integral(Q, l, c);

        std::vector<double> xs, ws;
        gauss_legendre(160, xs, ws);
        double L = 7.0;
        Complex quad(0, 0);
        for (size_t i = 0; i < xs.size(); ++i)
            for (size_t j = 0; j < xs.size(); ++j) {
                Eigen::VectorXcd x(2);
                x << Complex(L * xs[i], 0), Complex(L * xs[j], 0);
                Complex e = (x.transpose() * (Q * x)).value() + (l.transpose() * x).value() + c;
                quad += L * L * ws[i] * ws[j] * std::exp(-kPi * e);
            }
        CHECK(std::abs(closed - quad) < 1e-8);
    }
}

TEST_CASE("completing the square") {
    Rng rng(33);
    for (int t = 0; t < 30; ++t) {
        Eigen::MatrixXcd Q(2, 2);
        Complex off(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3));
        Q << Complex(rng.uniform(0.7, 2.0), rng.uniform(-0.5, 0.5)), off, off,
            Complex(rng.uniform(0.7, 2.0), rng.uniform(-0.5, 0.5));
        Eigen::VectorXcd l(2);
        l << Complex(rng.uniform(-1, 1), rng.uniform(-1, 1)),
            Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
        Eigen::VectorXcd lambda = completing_square_shift(Q, l);
        for (int s = 0; s < 10; ++s) {
            Eigen::VectorXcd x(2);
            x << Complex(rng.uniform(-2, 2), rng.uniform(-2, 2)),
                Complex(rng.uniform(-2, 2), rng.uniform(-2, 2));
            Complex q_shift = ((x + lambda).transpose() * (Q * (x + lambda))).value() -
                              (lambda.transpose() * (Q * lambda)).value();
            Complex expect = (x.transpose() * (Q * x)).value() + (l.transpose() * x).value();
            CHECK(std::abs(q_shift - expect) < 1e-12);
        }
    }
}

TEST_CASE("sqrt det branch") {
    // real positive definite: the positive root
    Eigen::MatrixXcd Q = Eigen::MatrixXcd::Constant(1, 1, Complex(4, 0));
    CHECK(std::abs(sqrt_det_continuous(Q) - Complex(2, 0)) < 1e-14);
    // principal root has positive real part in one variable
    Rng rng(34);
    for (int t = 0; t < 20; ++t) {
        Complex q(rng.uniform(0.2, 2.0), rng.uniform(-2, 2));
        Complex r = sqrt_det_continuous(Eigen::MatrixXcd::Constant(1, 1, q));
        CHECK(r.real() > 0);
        CHECK(std::abs(r * r - q) < 1e-12);
    }
}

TEST_CASE("model I inner products") {
    PacketSum f = PacketSum::theta_vector(t_i());
    Complex v = model1_inner(f, f);
    CHECK(std::abs(v - Complex(0.7071067811865476, 0)) < 1e-15);

    // <f_T, U_{(1,(1,0))} f_T> = exp(-pi/2)/sqrt(2)
    Eigen::VectorXd h(2);
    h << 1, 0;
    Complex v2 = model1_inner(f, model1_act({Complex(1, 0), h}, f));
    CHECK(std::abs(v2 - Complex(0.1469930581078104, 0)) < 1e-15);

    // conjugate symmetry on random packets
    Rng rng(35);
    for (int t = 0; t < 20; ++t) {
        Eigen::VectorXd y1(2), y2(2);
        y1 << rng.uniform(-1, 1), rng.uniform(-1, 1);
        y2 << rng.uniform(-1, 1), rng.uniform(-1, 1);
        PacketSum a = model1_act({std::polar(1.0, rng.uniform(0, 2 * kPi)), y1}, f);
        PacketSum b = model1_act({std::polar(1.0, rng.uniform(0, 2 * kPi)), y2}, f);
        CHECK(std::abs(model1_inner(a, b) - std::conj(model1_inner(b, a))) < 1e-14);
    }
}

TEST_CASE("model I action matches the defining formula pointwise") {
    Rng rng(36);
    SiegelPoint T = random_siegel(1, rng);
    PacketSum f = PacketSum::theta_vector(T);
    for (int t = 0; t < 20; ++t) {
        Eigen::VectorXd y(2);
        y << rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5);
        Complex lambda = std::polar(1.0, rng.uniform(0, 2 * kPi));
        PacketSum acted = model1_act({lambda, y}, f);
        for (int s = 0; s < 5; ++s) {
            Eigen::VectorXd x(1);
            x << rng.uniform(-1, 1);
            Complex direct = lambda * std::exp(Complex(0, 2 * kPi) * (x[0] * y[1]) +
                                               Complex(0, kPi) * (y[0] * y[1])) *
                             f.evaluate(Eigen::VectorXd(x + y.head(1)));
            CHECK(std::abs(acted.evaluate(x) - direct) < 1e-13);
        }
    }

    // scalar part acts by the scalar
    PacketSum scaled = model1_act({Complex(0, 1), Eigen::VectorXd::Zero(2)}, f);
    CHECK(std::abs(scaled.evaluate(Eigen::VectorXd(Eigen::VectorXd::Zero(1))) - Complex(0, 1)) < 1e-15);
}

TEST_CASE("model I representation property and unitarity") {
    Rng rng(37);
    SiegelPoint T = random_siegel(1, rng);
    SymplecticSpace sp = SymplecticSpace::standard(1);
    PacketSum f = PacketSum::theta_vector(T);
    for (int t = 0; t < 15; ++t) {
        Eigen::VectorXd ya(2), yb(2);
        ya << rng.uniform(-1, 1), rng.uniform(-1, 1);
        yb << rng.uniform(-1, 1), rng.uniform(-1, 1);
        VectorHeisenbergElement a{std::polar(1.0, rng.uniform(0, 2 * kPi)), ya};
        VectorHeisenbergElement b{std::polar(1.0, rng.uniform(0, 2 * kPi)), yb};

        PacketSum lhs = model1_act(a, model1_act(b, f));
        PacketSum rhs = model1_act(compose_vector(a, b, sp), f);
        for (int s = 0; s < 5; ++s) {
            Eigen::VectorXd x(1);
            x << rng.uniform(-1, 1);
            CHECK(std::abs(lhs.evaluate(x) - rhs.evaluate(x)) < 1e-13);
        }

        // unitarity in closed form
        PacketSum g = model1_act(b, f) * Complex(0.7, -0.2);
        Complex before = model1_inner(f, g);
        Complex after = model1_inner(model1_act(a, f), model1_act(a, g));
        CHECK(std::abs(before - after) < 1e-10);
    }
}

TEST_CASE("pointwise evaluation") {
    PacketSum f = PacketSum::theta_vector(t_i());
    CHECK(std::abs(f.evaluate(Eigen::VectorXd(Eigen::VectorXd::Zero(1))) - Complex(1, 0)) == 0.0);
    Eigen::VectorXd one(1);
    one << 1;
    CHECK(std::abs(f.evaluate(one) - Complex(std::exp(-kPi), 0)) < 1e-18);

    FockSum vac = FockSum::vacuum(1);
    Eigen::VectorXcd xe(1);
    xe << Complex(0.3, -0.8);
    CHECK(std::abs(vac.evaluate(xe) - Complex(1, 0)) == 0.0);
}

TEST_CASE("fock model action") {
    Rng rng(38);
    SiegelPoint T = random_siegel(1, rng);
    KaehlerStructure k(T);
    FockSum vac = FockSum::vacuum(1);

    // central scalar acts by its inverse
    FockSum scaled = model2_act({Complex(0, 1), Eigen::VectorXd::Zero(2)}, vac, k);
    CHECK(std::abs(scaled.terms()[0].gamma - Complex(1, 0) / Complex(0, 1)) < 1e-15);

    // the vacuum maps to the expected exponential
    Eigen::VectorXd y(2);
    y << 0.4, -0.9;
    FockSum moved = model2_act({Complex(1, 0), y}, vac, k);
    REQUIRE(moved.terms().size() == 1);
    Eigen::VectorXcd ye = k.embed(y);
    Complex expect_gamma = std::exp(-kPi / 2.0 * k.hermitian(ye, ye));
    Eigen::VectorXcd expect_l = -kPi * (k.imag_inverse().cast<Complex>() * ye.conjugate());
    CHECK(std::abs(moved.terms()[0].gamma - expect_gamma) < 1e-14);
    CHECK((moved.terms()[0].l - expect_l).norm() < 1e-14);

    // representation property, checked by evaluation at sample points
    SymplecticSpace sp = SymplecticSpace::standard(1);
    for (int t = 0; t < 10; ++t) {
        Eigen::VectorXd ya(2), yb(2);
        ya << rng.uniform(-1, 1), rng.uniform(-1, 1);
        yb << rng.uniform(-1, 1), rng.uniform(-1, 1);
        VectorHeisenbergElement a{std::polar(1.0, rng.uniform(0, 2 * kPi)), ya};
        VectorHeisenbergElement b{std::polar(1.0, rng.uniform(0, 2 * kPi)), yb};
        FockSum lhs = model2_act(a, model2_act(b, vac, k), k);
        FockSum rhs = model2_act(compose_vector(a, b, sp), vac, k);
        for (int s = 0; s < 5; ++s) {
            Eigen::VectorXd x(2);
            x << rng.uniform(-1, 1), rng.uniform(-1, 1);
            Eigen::VectorXcd xe = k.embed(x);
            CHECK(std::abs(lhs.evaluate(xe) - rhs.evaluate(xe)) < 1e-12);
        }
    }
}

TEST_CASE("quadrature oracle") {
    PacketSum f = PacketSum::theta_vector(t_i());
    Complex closed = model1_inner(f, f);
    Complex coarse = quadrature_inner(f, f, 6.0, 20);
    Complex fine = quadrature_inner(f, f, 6.0, 200);
    CHECK(std::abs(fine - closed) < 1e-8);
    CHECK(std::abs(fine - closed) <= std::abs(coarse - closed));
    CHECK(std::abs(fine.imag()) < 1e-12);

    // the Fock-space weight normalizes the vacuum to norm 1
    Rng rng(39);
    KaehlerStructure k(random_siegel(1, rng));
    FockSum vac = FockSum::vacuum(1);
    CHECK(std::abs(fock_quadrature_inner(vac, vac, k, 6.0, 160) - Complex(1, 0)) < 1e-9);
}

TEST_CASE("model II unitarity via quadrature") {
    Rng rng(40);
    KaehlerStructure k(random_siegel(1, rng));
    FockSum vac = FockSum::vacuum(1);
    Eigen::VectorXd y(2);
    y << rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8);
    VectorHeisenbergElement a{std::polar(1.0, rng.uniform(0, 2 * kPi)), y};
    FockSum f = model2_act(a, vac, k);
    Complex before = fock_quadrature_inner(vac, vac, k, 6.0, 160);
    Complex after = fock_quadrature_inner(f, f, k, 6.0, 160);
    CHECK(std::abs(after - before) < 1e-6);
}

}  // TEST_SUITE
