#include "qtheta/theta.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qtheta {

namespace {

constexpr double kPi = std::numbers::pi;

double min_eig_sym(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()));
    return es.eigenvalues().minCoeff();
}

double max_eig_sym(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()));
    return es.eigenvalues().maxCoeff();
}

/// Operator 2-norm of the coordinate-to-embedded map n -> embed(G n).
double embed_column_norm(const KaehlerStructure& k, const LatticeEmbedding& D) {
    Eigen::MatrixXcd E(k.siegel().dim(), D.rank());
    for (int j = 0; j < D.rank(); ++j) E.col(j) = k.embed(Eigen::VectorXd(D.generators().col(j)));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(E);
    return svd.singularValues().maxCoeff();
}

void require_compatible(const KaehlerStructure& k, const LatticeEmbedding& D) {
    if (k.space().dim() != D.space().dim() || k.space().form_matrix() != D.space().form_matrix())
        throw std::invalid_argument("incompatible Kaehler structure for this lattice embedding");
}

}  // namespace

ClassicalThetaValue classical_theta(const ClassicalThetaParams& p, double radius, double tolerance) {
    const int N = p.omega.dim();
    if (p.z.size() != N) throw std::invalid_argument("classical_theta: z has wrong dimension");
    double lam = min_eig_sym(p.omega.imag_part());
    double b = 2.0 * kPi * p.z.imag().norm();
    double tail = lattice_gaussian_tail(kPi * lam, b, radius, N);
    if (tail > tolerance) {
        std::ostringstream msg;
        msg << "classical_theta: radius " << radius << " only certifies tail " << tail
            << " > tolerance " << tolerance;
        throw std::runtime_error(msg.str());
    }
    Complex value(0, 0);
    for (const auto& n : points_in_quadratic_ball(Eigen::MatrixXd::Identity(N, N), radius)) {
        Eigen::VectorXcd nv = n.as_double().cast<Complex>();
        Complex quad = (nv.transpose() * (p.omega.matrix() * nv)).value();
        Complex lin = (nv.transpose() * p.z).value();
        value += std::exp(Complex(0, kPi) * quad + Complex(0, 2 * kPi) * lin);
    }
    return {value, tail};
}

double classical_modular_check(const SiegelPoint& omega, const Eigen::VectorXcd& z, double radius) {
    Eigen::MatrixXcd Om = omega.matrix();
    Eigen::MatrixXcd Oinv = Om.inverse();
    SiegelPoint dual_omega(-Oinv);
    ClassicalThetaValue lhs = classical_theta({dual_omega, Oinv * z}, radius, 1e-9);
    // det(Omega/i)^{1/2}: Re(Omega/i) = Im Omega > 0, so the principal-log
    // branch is the one continuous from Omega = iI.
    Complex factor = sqrt_det_continuous(Om / Complex(0, 1));
    Complex quad = (z.transpose() * (Oinv * z)).value();
    ClassicalThetaValue base = classical_theta({omega, z}, radius, 1e-9);
    Complex rhs = factor * std::exp(Complex(0, kPi) * quad) * base.value;
    return std::abs(lhs.value - rhs);
}

QuantumTheta quantum_theta(const KaehlerStructure& k, const LatticeEmbedding& D, double radius) {
    require_compatible(k, D);
    QuantizationForm form(gram(D).A_D);
    TorusElement elem(form);
    for (const auto& h : enumerate_lattice(D, radius, k.q_matrix())) {
        Eigen::VectorXcd he = k.embed(D.embed_point(h));
        double q = k.hermitian(he, he).real();
        elem.set_term(h, std::exp(-kPi / 2.0 * q));
    }
    const int N = k.siegel().dim();
    double pref = 1.0 / std::sqrt(std::pow(2.0, N) * k.siegel().imag_part().determinant());
    return {std::move(elem), k, D, pref};
}

Multiplier theta_multiplier(const KaehlerStructure& k, const LatticeEmbedding& D) {
    require_compatible(k, D);
    QuantizationForm form(gram(D).A_D);
    const int r = D.rank();
    std::vector<IntVector> basis;
    std::vector<TorusHeisenbergElement> lifts;
    std::vector<Eigen::VectorXcd> cols(r);
    for (int j = 0; j < r; ++j) cols[j] = k.embed(Eigen::VectorXd(D.generators().col(j)));
    for (int j = 0; j < r; ++j) {
        IntVector e = IntVector::zero(r);
        e[j] = 1;
        Complex C = std::exp(-kPi / 2.0 * k.hermitian(cols[j], cols[j]));
        Eigen::VectorXcd w(r);
        for (int i = 0; i < r; ++i) w[i] = -kPi * k.hermitian(cols[j], cols[i]);
        basis.push_back(e);
        lifts.push_back({C, TorusCharacterAction{w}, e});
    }
    return Multiplier(std::move(form), std::move(basis), std::move(lifts));
}

namespace {

/// Certified bound on the sum of |<Phi, E(h) Psi>| outside the enumerated
/// ball. log of each packet-pair bracket magnitude is exactly quadratic in
/// the lattice coordinates, so it is interpolated from finitely many
/// evaluations and bounded by its worst-case spectral envelope.
double rieffel_tail_bound(const PacketSum& phi, const PacketSum& psi, const LatticeEmbedding& D,
                          double radius, const Eigen::MatrixXd& norm) {
    const int r = D.rank();
    Eigen::MatrixXd Qc = D.generators().transpose() * norm * D.generators();
    const double r2 = radius * radius;

    auto log_bracket = [&](const GaussianPacket& p, const GaussianPacket& q,
                           const Eigen::VectorXd& n) {
        VectorHeisenbergElement el{Complex(1, 0), D.generators() * n};
        PacketSum qs(phi.siegel());
        qs.add(q);
        PacketSum acted = model1_act(el, qs);
        return std::log(std::abs(model1_pair_inner(phi.siegel(), p, acted.packets()[0])));
    };

    double total = 0;
    for (const auto& p : phi.packets())
        for (const auto& q : psi.packets()) {
            // log|bracket| is exactly quadratic in the coordinates, so the
            // envelope n^T P n + beta.n + kappa is interpolated from a few
            // evaluations.
            Eigen::MatrixXd P(r, r);
            Eigen::VectorXd beta(r);
            double kappa = log_bracket(p, q, Eigen::VectorXd::Zero(r));
            for (int i = 0; i < r; ++i) {
                Eigen::VectorXd e = Eigen::VectorXd::Zero(r);
                e[i] = 1;
                double ep = log_bracket(p, q, e), em = log_bracket(p, q, -e);
                P(i, i) = 0.5 * (ep + em) - kappa;
                beta[i] = 0.5 * (ep - em);
            }
            for (int i = 0; i < r; ++i)
                for (int j = i + 1; j < r; ++j) {
                    Eigen::VectorXd e = Eigen::VectorXd::Zero(r);
                    e[i] = 1;
                    e[j] = 1;
                    double eij = log_bracket(p, q, e);
                    double pij = 0.5 * (eij - P(i, i) - P(j, j) - beta[i] - beta[j] - kappa);
                    P(i, j) = P(j, i) = pij;
                }
            double a = -max_eig_sym(P);
            if (a <= 0)
                throw std::runtime_error("rieffel tail bound: packet pair does not decay");

            // envelope values over the box outside the enumerated ellipsoid,
            // plus an analytic remainder beyond the box
            std::int64_t box = 2;
            while (box < 64 &&
                   lattice_gaussian_tail(a, beta.norm(), static_cast<double>(box), r) >
                       1e-30 * std::exp(-kappa))
                ++box;
            double part = 0;
            IntVector n = IntVector::zero(r);
            for (int i = 0; i < r; ++i) n[i] = -box;
            while (true) {
                Eigen::VectorXd v = n.as_double();
                if (v.dot(Qc * v) > r2 + 1e-12) {
                    double env = (v.transpose() * (P * v)).value() + beta.dot(v) + kappa;
                    part += std::exp(env);
                }
                int i = r - 1;
                while (i >= 0 && n[i] == box) {
                    n[i] = -box;
                    --i;
                }
                if (i < 0) break;
                ++n[i];
            }
            total += part + std::exp(kappa) *
                                lattice_gaussian_tail(a, beta.norm(), static_cast<double>(box), r);
        }
    return total;
}

}  // namespace

RieffelResult rieffel_product_left(const PacketSum& phi, const PacketSum& psi,
                                   const LatticeEmbedding& D, double radius,
                                   double tail_tolerance) {
    if (phi.siegel().matrix() != psi.siegel().matrix())
        throw std::invalid_argument("rieffel_product_left: mismatched Siegel parameters");
    KaehlerStructure k{phi.siegel(), D.space()};
    Eigen::MatrixXd M = k.q_matrix();
    double tail = rieffel_tail_bound(phi, psi, D, radius, M);
    if (tail > tail_tolerance) {
        std::ostringstream msg;
        msg << "rieffel_product_left: tail bound " << tail << " exceeds tolerance " << tail_tolerance;
        throw std::runtime_error(msg.str());
    }
    QuantizationForm form(gram(D).A_D);
    TorusElement elem(form);
    for (const auto& h : enumerate_lattice(D, radius, M)) {
        VectorHeisenbergElement el{Complex(1, 0), D.embed_point(h)};
        elem.set_term(h, model1_inner(phi, model1_act(el, psi)));
    }
    return {std::move(elem), tail};
}

RieffelResult rieffel_product_right(const PacketSum& phi, const PacketSum& psi,
                                    const LatticeEmbedding& D_dual, double radius,
                                    double tail_tolerance) {
    if (phi.siegel().matrix() != psi.siegel().matrix())
        throw std::invalid_argument("rieffel_product_right: mismatched Siegel parameters");
    KaehlerStructure k{phi.siegel(), D_dual.space()};
    Eigen::MatrixXd M = k.q_matrix();
    double tail = rieffel_tail_bound(psi, phi, D_dual, radius, M);
    if (tail > tail_tolerance) {
        std::ostringstream msg;
        msg << "rieffel_product_right: tail bound " << tail << " exceeds tolerance "
            << tail_tolerance;
        throw std::runtime_error(msg.str());
    }
    // vol(K/D) = 1/covolume(D!) for the standard form; the conjugate dual
    // quantization form is -gram(D!).
    double inv_vol = covolume(D_dual);
    QuantizationForm form(Eigen::MatrixXd(-gram(D_dual).A_D));
    TorusElement elem(form);
    for (const auto& h : enumerate_lattice(D_dual, radius, M)) {
        VectorHeisenbergElement el{Complex(1, 0), D_dual.embed_point(h)};
        elem.set_term(h, inv_vol * model1_inner(model1_act(el, psi), phi));
    }
    return {std::move(elem), tail};
}

double associativity_check(const PacketSum& phi, const PacketSum& psi, const PacketSum& xi,
                           const LatticeEmbedding& D, double radius,
                           const std::vector<Eigen::VectorXd>& sample_points) {
    RieffelResult left = rieffel_product_left(phi, psi, D, radius);
    LatticeEmbedding D_dual = dual_lattice(D);
    RieffelResult right = rieffel_product_right(psi, xi, D_dual, radius);

    PacketSum lhs(xi.siegel());
    for (const auto& [h, c] : left.element.terms()) {
        VectorHeisenbergElement el{Complex(1, 0), D.embed_point(h)};
        lhs = lhs + model1_act(el, xi) * c;
    }
    PacketSum rhs(phi.siegel());
    for (const auto& [h, c] : right.element.terms()) {
        VectorHeisenbergElement el{Complex(1, 0), Eigen::VectorXd(-D_dual.embed_point(h))};
        rhs = rhs + model1_act(el, phi) * c;
    }
    double worst = 0;
    for (const auto& x : sample_points)
        worst = std::max(worst, std::abs(lhs.evaluate(x) - rhs.evaluate(x)));
    return worst;
}

double verify_multiplier_invariance(const QuantumTheta& theta, const IntVector& g, double radius) {
    const KaehlerStructure& k = theta.kaehler;
    const LatticeEmbedding& D = theta.lattice;
    Eigen::VectorXcd ge = k.embed(D.embed_point(g));
    double Cg = std::exp(-kPi / 2.0 * k.hermitian(ge, ge).real());

    std::map<IntVector, Complex> transformed;
    for (const auto& [h, a] : theta.element.terms()) {
        Eigen::VectorXcd he = k.embed(D.embed_point(h));
        Complex xgh = std::exp(-kPi * k.hermitian(ge, he));
        transformed[g + h] = Cg * xgh * theta.element.form().alpha(g, h) * a;
    }
    double worst = 0;
    for (const auto& [h, v] : transformed) {
        Complex orig = theta.element.coeff(h);
        if (orig == Complex(0, 0)) continue;  // outside the truncation overlap
        if (std::sqrt(h.squared_norm()) > radius) continue;
        worst = std::max(worst, std::abs(v - orig));
    }
    return worst;
}

FockSum apply_to_vacuum(const QuantumTheta& theta) {
    const int N = theta.kaehler.siegel().dim();
    FockSum vac = FockSum::vacuum(N);
    FockSum out(N);
    for (const auto& [h, a] : theta.element.terms()) {
        VectorHeisenbergElement el{Complex(1, 0), theta.lattice.embed_point(h)};
        FockSum acted = model2_act(el, vac, theta.kaehler);
        for (const auto& t : acted.terms()) out.add({a * t.gamma, t.l});
    }
    return out;
}

PoissonResult poisson_check(const KaehlerStructure& k, const LatticeEmbedding& D,
                            const std::vector<Eigen::VectorXd>& x_samples, double radius) {
    require_compatible(k, D);
    if (D.rank() != D.space().dim())
        throw std::invalid_argument("poisson_check: requires a full-rank lattice");
    LatticeEmbedding D_dual = dual_lattice(D);
    Eigen::MatrixXd M = k.q_matrix();
    double poisson_factor = 1.0 / covolume(D);

    auto side_sum = [&](const LatticeEmbedding& L, const Eigen::VectorXcd& xe) {
        Complex s(0, 0);
        for (const auto& n : enumerate_lattice(L, radius, M)) {
            Eigen::VectorXcd ve = k.embed(L.embed_point(n));
            s += std::exp(-kPi * k.hermitian(ve, ve) - kPi * k.hermitian(xe, ve));
        }
        return s;
    };
    // Exact term magnitudes over the box outside the enumerated ellipsoid,
    // plus an analytic shell bound beyond the box.
    auto side_tail = [&](const LatticeEmbedding& L, const Eigen::VectorXcd& xe) {
        const int r = L.rank();
        Eigen::MatrixXd Qc = L.generators().transpose() * M * L.generators();
        double a = kPi * min_eig_sym(Qc);
        double b = kPi * (k.imag_inverse().cast<Complex>() * xe).norm() * embed_column_norm(k, L);
        std::int64_t box = 2;
        while (box < 64 && lattice_gaussian_tail(a, b, static_cast<double>(box), r) > 1e-28) ++box;
        double part = 0;
        IntVector n = IntVector::zero(r);
        for (int i = 0; i < r; ++i) n[i] = -box;
        const double r2 = radius * radius;
        while (true) {
            Eigen::VectorXd v = n.as_double();
            if (v.dot(Qc * v) > r2 + 1e-12) {
                Eigen::VectorXcd ve = k.embed(L.embed_point(n));
                part += std::exp(-kPi * k.hermitian(ve, ve).real() -
                                 kPi * k.hermitian(xe, ve).real());
            }
            int i = r - 1;
            while (i >= 0 && n[i] == box) {
                n[i] = -box;
                --i;
            }
            if (i < 0) break;
            ++n[i];
        }
        return part + lattice_gaussian_tail(a, b, static_cast<double>(box), r);
    };

    double worst = 0, worst_tail = 0;
    for (const auto& x : x_samples) {
        Eigen::VectorXcd xe = k.embed(x);
        Complex lhs = side_sum(D, xe);
        Complex rhs = side_sum(D_dual, xe);
        worst = std::max(worst, std::abs(lhs - poisson_factor * rhs));
        worst_tail = std::max(worst_tail,
                              side_tail(D, xe) + poisson_factor * side_tail(D_dual, xe));
    }
    return {worst, worst_tail};
}

Eigen::VectorXcd eta_solve(const KaehlerStructure& k, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& g) {
    const int N = k.siegel().dim();
    if (x.size() != 2 * N || g.size() != 2 * N) throw std::invalid_argument("eta_solve: bad dimensions");
    Eigen::MatrixXd R = k.siegel().real_part();
    Eigen::MatrixXd S = k.siegel().imag_part();
    const Eigen::MatrixXd& Si = k.imag_inverse();
    Eigen::VectorXd u1 = x.head(N) + 2.0 * g.head(N);
    Eigen::VectorXd u2 = x.tail(N) + 2.0 * g.tail(N);
    Eigen::VectorXcd eta(2 * N);
    eta.head(N) = 0.5 * x.head(N).cast<Complex>() -
                  Complex(0, 0.5) * (Si * R * u1 + Si * u2).cast<Complex>();
    eta.tail(N) = 0.5 * x.tail(N).cast<Complex>() +
                  Complex(0, 0.5) * ((S + R * Si * R) * u1 + R * Si * u2).cast<Complex>();
    return eta;
}

double self_fourier_check(const KaehlerStructure& k, const Eigen::VectorXd& x,
                          const std::vector<Eigen::VectorXd>& g_samples, double box_half_width,
                          int points_per_axis) {
    if (k.siegel().dim() != 1) throw std::invalid_argument("self_fourier_check: N = 1 only");
    Eigen::VectorXcd xe = k.embed(x);
    auto f_x = [&](const Eigen::VectorXd& h) {
        Eigen::VectorXcd he = k.embed(h);
        return std::exp(-kPi * k.hermitian(he, he) - kPi * k.hermitian(xe, he));
    };
    std::vector<double> xs, ws;
    gauss_legendre(points_per_axis, xs, ws);
    double worst = 0;
    for (const auto& g : g_samples) {
        Complex transform(0, 0);
        Eigen::VectorXd h(2);
        for (int i = 0; i < points_per_axis; ++i)
            for (int j = 0; j < points_per_axis; ++j) {
                h[0] = box_half_width * xs[i];
                h[1] = box_half_width * xs[j];
                double a = pair_value(k.space(), g, h);
                transform += box_half_width * box_half_width * ws[i] * ws[j] * f_x(h) *
                             std::polar(1.0, -2.0 * kPi * a);
            }
        worst = std::max(worst, std::abs(transform - f_x(g)));
    }
    return worst;
}

Eigen::MatrixXd darboux_basis(const Eigen::MatrixXd& A) {
    const int n = static_cast<int>(A.rows());
    if (n % 2 != 0) throw std::invalid_argument("darboux_basis: odd dimension");
    std::vector<Eigen::VectorXd> pool;
    for (int i = 0; i < n; ++i) pool.push_back(Eigen::VectorXd::Unit(n, i));
    std::vector<Eigen::VectorXd> us, ws;
    while (!pool.empty()) {
        Eigen::VectorXd u = pool.front();
        pool.erase(pool.begin());
        int best = -1;
        double best_val = 0;
        for (size_t j = 0; j < pool.size(); ++j) {
            double v = std::abs(u.dot(A * pool[j]));
            if (v > best_val) {
                best_val = v;
                best = static_cast<int>(j);
            }
        }
        if (best < 0 || best_val < 1e-10)
            throw std::invalid_argument("darboux_basis: form is degenerate");
        Eigen::VectorXd w = pool[best];
        pool.erase(pool.begin() + best);
        w /= u.dot(A * w);
        for (auto& v : pool) v = v - (u.dot(A * v)) * w + (w.dot(A * v)) * u;
        us.push_back(u);
        ws.push_back(w);
    }
    Eigen::MatrixXd P(n, n);
    for (int i = 0; i < n / 2; ++i) {
        P.col(i) = us[i];
        P.col(n / 2 + i) = ws[i];
    }
    return P;
}

Reconstruction reconstruct_from_multiplier(const Multiplier& m, double radius) {
    StructureForm sf = structure_form(m);
    const int r = static_cast<int>(sf.basis.size());
    if (r % 2 != 0) throw std::invalid_argument("reconstruct_from_multiplier: odd rank");
    if (m.domain_index() != 1)
        throw std::invalid_argument(
            "reconstruct_from_multiplier: the projection of B must be an isomorphism onto D");
    if (!m.form().has_matrix())
        throw std::invalid_argument("reconstruct_from_multiplier: requires a matrix quantization form");
    const int N = r / 2;

    Eigen::MatrixXd re_h(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            Complex v = sf.values(i, j);
            if (std::abs(v.imag()) > 1e-10 * std::abs(v) || v.real() <= 0) {
                std::ostringstream msg;
                msg << "reconstruct_from_multiplier: structure form value at pair (" << i << "," << j
                    << ") is not real positive";
                throw std::runtime_error(msg.str());
            }
            re_h(i, j) = -std::log(v.real()) / kPi;
        }
    Eigen::MatrixXd im_h(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            im_h(i, j) = (sf.basis[i].as_double().transpose() * m.form().matrix() *
                          sf.basis[j].as_double())(0);

    // Positivity of H on the real span is positivity of the real-part Gram;
    // the complex Gram of the 2N (C-dependent) embedded vectors is only PSD
    // of rank N.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(re_h);
    if (es.eigenvalues().minCoeff() <= 1e-12)
        throw std::runtime_error(
            "reconstruct_from_multiplier: the recovered Hermitian form is not positive definite");

    Eigen::MatrixXd P = darboux_basis(im_h);
    Eigen::MatrixXd G = P.inverse();
    Eigen::MatrixXd Ginv = P;
    Eigen::MatrixXd M = Ginv.transpose() * re_h * Ginv;
    Eigen::MatrixXd S = M.bottomRightCorner(N, N).inverse();
    S = 0.5 * (S + S.transpose());
    Eigen::MatrixXd R = S * M.bottomLeftCorner(N, N);
    R = 0.5 * (R + R.transpose());
    Eigen::MatrixXd m11 = R * S.inverse() * R + S;
    if ((M.topLeftCorner(N, N) - m11).cwiseAbs().maxCoeff() > 1e-8)
        throw std::runtime_error(
            "reconstruct_from_multiplier: structure form is not induced by a Kaehler structure");

    SiegelPoint T(R.cast<Complex>() + Complex(0, 1) * S.cast<Complex>());
    KaehlerStructure k(T);
    LatticeEmbedding D(SymplecticSpace::standard(N), G);

    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            Complex got = k.hermitian(k.embed(Eigen::VectorXd(G.col(i))),
                                      k.embed(Eigen::VectorXd(G.col(j))));
            if (std::abs(got - Complex(re_h(i, j), im_h(i, j))) > 1e-8) {
                std::ostringstream msg;
                msg << "reconstruct_from_multiplier: round-trip mismatch at pair (" << i << "," << j
                    << ")";
                throw std::runtime_error(msg.str());
            }
        }

    QuantumTheta theta = quantum_theta(k, D, radius);
    auto basis = gamma_basis(m, radius);
    if (basis.size() != 1)
        throw std::runtime_error("reconstruct_from_multiplier: expected a one-dimensional section space");
    for (const auto& [h, c] : basis[0].terms()) {
        Complex expect = theta.element.coeff(h);
        if (expect != Complex(0, 0) && std::abs(c - expect) > 1e-10)
            throw std::runtime_error(
                "reconstruct_from_multiplier: invariant series does not match the theta series");
    }
    return {k, D, std::move(theta)};
}

}  // namespace qtheta
