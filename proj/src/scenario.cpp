#include "qtheta/scenario.hpp"

#include "qtheta/finite_ext.hpp"
#include "qtheta/gaussian.hpp"
#include "qtheta/heisenberg.hpp"
#include "qtheta/kaehler.hpp"
#include "qtheta/lattice.hpp"
#include "qtheta/rng.hpp"
#include "qtheta/theta.hpp"
#include "qtheta/torus.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace qtheta {

namespace {

constexpr double kPi = std::numbers::pi;

struct CheckContext {
    std::optional<LatticeEmbedding> lattice;
    std::optional<KaehlerStructure> kaehler;
    std::optional<ExtendedLattice> extended;
    std::uint64_t seed = 0;

    const LatticeEmbedding& need_lattice() const {
        if (!lattice) throw std::invalid_argument("scenario: check requires a lattice");
        return *lattice;
    }
    const KaehlerStructure& need_kaehler() const {
        if (!kaehler) throw std::invalid_argument("scenario: check requires a Siegel point");
        return *kaehler;
    }
    const ExtendedLattice& need_extended() const {
        if (!extended) throw std::invalid_argument("scenario: check requires an extended lattice");
        return *extended;
    }
};

struct CheckValue {
    double residual = 0;
    double tail_bound = 0;
    double default_tolerance = 1e-10;
};

double get_or(const nlohmann::json& p, const char* key, double dflt) {
    return p.contains(key) ? p.at(key).get<double>() : dflt;
}

std::vector<Eigen::VectorXd> seeded_box_points(Rng& rng, int dim, int count, bool with_origin) {
    std::vector<Eigen::VectorXd> pts;
    if (with_origin) pts.push_back(Eigen::VectorXd::Zero(dim));
    for (int i = 0; i < count; ++i) {
        Eigen::VectorXd x(dim);
        for (int j = 0; j < dim; ++j) x[j] = rng.uniform(-1, 1);
        pts.push_back(x);
    }
    return pts;
}

// --- independent summation oracle for the classical theta, kept apart
// --- from the library path on purpose
Complex brute_force_theta(const Eigen::MatrixXcd& omega, const Eigen::VectorXcd& z, int box) {
    const int N = static_cast<int>(omega.rows());
    Complex total(0, 0);
    std::vector<std::int64_t> n(N, -box);
    while (true) {
        Complex quad(0, 0), lin(0, 0);
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < N; ++j)
                quad += static_cast<double>(n[i]) * omega(i, j) * static_cast<double>(n[j]);
            lin += static_cast<double>(n[i]) * z[i];
        }
        total += std::exp(Complex(0, kPi) * quad + Complex(0, 2 * kPi) * lin);
        int i = N - 1;
        while (i >= 0 && n[i] == box) n[i--] = -box;
        if (i < 0) break;
        ++n[i];
    }
    return total;
}

CheckValue check_classical_theta_value(const CheckContext& ctx, const nlohmann::json& p) {
    const auto& k = ctx.need_kaehler();
    double radius = get_or(p, "radius", 8.0);
    ClassicalThetaParams params{k.siegel(), Eigen::VectorXcd::Zero(k.siegel().dim())};
    ClassicalThetaValue v = classical_theta(params, radius);
    Complex oracle = brute_force_theta(k.siegel().matrix(), params.z, 12);
    return {std::abs(v.value - oracle), v.tail_bound, 1e-12};
}

CheckValue check_classical_periodicity(const CheckContext& ctx, const nlohmann::json& p) {
    const auto& k = ctx.need_kaehler();
    const int N = k.siegel().dim();
    double radius = get_or(p, "radius", 9.0);
    Rng rng(ctx.seed + 11);
    double worst = 0, tail = 0;
    for (int t = 0; t < 4; ++t) {
        Eigen::VectorXcd z(N);
        for (int i = 0; i < N; ++i) z[i] = Complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.3, 0.3));
        Eigen::VectorXcd m = Eigen::VectorXcd::Zero(N);
        m[t % N] = 1;
        auto base = classical_theta({k.siegel(), z}, radius, 1e-9);
        auto shifted = classical_theta({k.siegel(), z + m}, radius, 1e-9);
        worst = std::max(worst, std::abs(shifted.value - base.value));
        // quasi-periodicity under z -> z + Omega m
        auto shifted2 = classical_theta({k.siegel(), z + k.siegel().matrix() * m}, radius, 1e-9);
        Complex quad = (m.transpose() * (k.siegel().matrix() * m)).value();
        Complex lin = (m.transpose() * z).value();
        Complex factor = std::exp(Complex(0, -kPi) * quad + Complex(0, -2 * kPi) * lin);
        worst = std::max(worst, std::abs(shifted2.value - factor * base.value));
        tail = std::max({tail, base.tail_bound, shifted.tail_bound, shifted2.tail_bound});
    }
    return {worst, tail, 1e-12};
}

CheckValue check_classical_modular(const CheckContext& ctx, const nlohmann::json& p) {
    const auto& k = ctx.need_kaehler();
    const int N = k.siegel().dim();
    double radius = get_or(p, "radius", 9.0);
    Rng rng(ctx.seed + 12);
    Eigen::VectorXcd z(N);
    for (int i = 0; i < N; ++i) z[i] = Complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.2, 0.2));

    std::vector<SiegelPoint> omegas;
    if (p.contains("omegas")) {
        for (const auto& oj : p.at("omegas")) omegas.push_back(siegel_from_json(oj));
    } else {
        omegas.push_back(k.siegel());
        if (N == 1) {
            omegas.emplace_back(Eigen::MatrixXcd::Constant(1, 1, Complex(0, 2)));
            omegas.emplace_back(Eigen::MatrixXcd::Constant(1, 1, Complex(1, 1)));
        }
    }
    double worst = 0;
    for (const auto& om : omegas) {
        worst = std::max(worst, classical_modular_check(om, Eigen::VectorXcd::Zero(N), radius));
        worst = std::max(worst, classical_modular_check(om, z, radius));
    }
    return {worst, 0, 1e-10};
}

CheckValue check_heisenberg_laws(const CheckContext& ctx, const nlohmann::json& p) {
    const auto& D = ctx.need_lattice();
    const auto& space = D.space();
    const int dim = space.dim();
    const int r = D.rank();
    QuantizationForm form(gram(D).A_D);
    int count = static_cast<int>(get_or(p, "samples", 100));
    Rng rng(ctx.seed + 13);
    double worst = 0;

    auto rand_vec = [&] {
        Eigen::VectorXd x(dim);
        for (int i = 0; i < dim; ++i) x[i] = rng.uniform(-2, 2);
        return x;
    };
    auto rand_torus_elem = [&] {
        Eigen::VectorXcd w(r);
        for (int i = 0; i < r; ++i) w[i] = Complex(rng.uniform(-0.4, 0.4), rng.uniform(-2, 2));
        IntVector g = IntVector::zero(r);
        for (int i = 0; i < r; ++i) g[i] = rng.integer(-3, 3);
        Complex c = std::polar(1.0, 2 * kPi * rng.uniform());
        return TorusHeisenbergElement{c, TorusCharacterAction{w}, g};
    };

    for (int t = 0; t < count; ++t) {
        // cocycle law for the vector group cocycle
        Eigen::VectorXd x = rand_vec(), y = rand_vec(), z = rand_vec();
        Complex lhs = symplectic_cocycle(space, x, y) * symplectic_cocycle(space, x + y, z);
        Complex rhs = symplectic_cocycle(space, x, y + z) * symplectic_cocycle(space, y, z);
        worst = std::max(worst, std::abs(lhs - rhs));

        // commutator bicharacter: group commutator vs psi(x,y)/psi(y,x)
        VectorHeisenbergElement a{std::polar(1.0, 2 * kPi * rng.uniform()), x};
        VectorHeisenbergElement b{std::polar(1.0, 2 * kPi * rng.uniform()), y};
        auto comm = compose_vector(compose_vector(compose_vector(a, b, space), vector_inverse(a, space), space),
                                   vector_inverse(b, space), space);
        Complex eps = symplectic_cocycle(space, x, y) / symplectic_cocycle(space, y, x);
        worst = std::max(worst, std::abs(comm.lambda - eps));
        worst = std::max(worst, comm.x.norm());

        // torus Heisenberg group: cocycle of the pair form, associativity,
        // and the commutator formula
        auto ta = rand_torus_elem(), tb = rand_torus_elem(), tc = rand_torus_elem();
        auto psi_pair = [&](const TorusHeisenbergElement& u, const TorusHeisenbergElement& v) {
            return u.x.value_at(v.g) * form.alpha(u.g, v.g);
        };
        Complex c_lhs = psi_pair(ta, tb) * psi_pair(compose_torus(ta, tb, form), tc);
        Complex c_rhs = psi_pair(ta, compose_torus(tb, tc, form)) * psi_pair(tb, tc);
        worst = std::max(worst, std::abs(c_lhs - c_rhs) / std::max(1.0, std::abs(c_lhs)));

        auto ab_c = compose_torus(compose_torus(ta, tb, form), tc, form);
        auto a_bc = compose_torus(ta, compose_torus(tb, tc, form), form);
        worst = std::max(worst, std::abs(ab_c.c - a_bc.c) / std::max(1.0, std::abs(ab_c.c)));

        auto tcomm = compose_torus(
            compose_torus(compose_torus(ta, tb, form), torus_inverse(ta, form), form),
            torus_inverse(tb, form), form);
        Complex eps_expected = ta.x.value_at(tb.g) / tb.x.value_at(ta.g) *
                               form.alpha(ta.g, tb.g) * form.alpha(ta.g, tb.g);
        worst = std::max(worst, std::abs(tcomm.c - eps_expected) / std::max(1.0, std::abs(eps_expected)));
    }
    return {worst, 0, 1e-12};
}

CheckValue check_torus_laws(const CheckContext& ctx, const nlohmann::json& p) {
    const auto& D = ctx.need_lattice();
    QuantizationForm form(gram(D).A_D);
    const int r = D.rank();
    int count = static_cast<int>(get_or(p, "samples", 60));
    Rng rng(ctx.seed + 14);
    double worst = 0;

    auto rand_elem = [&] {
        TorusElement e(form);
        for (int t = 0; t < 3; ++t) {
            IntVector h = IntVector::zero(r);
            for (int i = 0; i < r; ++i) h[i] = rng.integer(-2, 2);
            e.add_term(h, Complex(rng.uniform(-1, 1), rng.uniform(-1, 1)));
        }
        return e;
    };

    for (int t = 0; t < count; ++t) {
        TorusElement a = rand_elem(), b = rand_elem(), c = rand_elem();
        TorusElement lhs = multiply(multiply(a, b), c);
        TorusElement rhs = multiply(a, multiply(b, c));
        for (const auto& [h, v] : lhs.terms()) worst = std::max(worst, std::abs(v - rhs.coeff(h)));
        TorusElement sab = star(multiply(a, b));
        TorusElement sba = multiply(star(b), star(a));
        for (const auto& [h, v] : sab.terms()) worst = std::max(worst, std::abs(v - sba.coeff(h)));
        Eigen::VectorXcd w(r);
        for (int i = 0; i < r; ++i) w[i] = Complex(rng.uniform(-0.3, 0.3), rng.uniform(-1, 1));
        TorusCharacterAction xa{w};
        TorusElement x_ab = apply_character(xa, multiply(a, b));
        TorusElement xa_xb = multiply(apply_character(xa, a), apply_character(xa, b));
        for (const auto& [h, v] : x_ab.terms())
            worst = std::max(worst, std::abs(v - xa_xb.coeff(h)) / std::max(1.0, std::abs(v)));
    }
    return {worst, 0, 1e-12};
}

CheckValue check_lattice_duality(const CheckContext& ctx, const nlohmann::json& p) {
    (void)p;
    const auto& D = ctx.need_lattice();
    LatticeEmbedding Dd = dual_lattice(D);
    double worst = 0;

    GramForm gd = gram(Dd);
    GramForm md = morita_dual_form(gram(D));
    if (gd.exact && md.exact) {
        if (!(*gd.exact == *md.exact)) worst = 1.0;
    } else {
        worst = std::max(worst, (gd.A_D - md.A_D).cwiseAbs().maxCoeff());
    }
    for (int i = 0; i < Dd.rank(); ++i)
        for (int j = 0; j < D.rank(); ++j) {
            double v = pair_value(D.space(), Dd.generators().col(i), D.generators().col(j));
            worst = std::max(worst, std::abs(v - std::round(v)));
        }
    // covolume product for the standard form
    worst = std::max(worst, std::abs(covolume(D) * covolume(Dd) - 1.0));
    return {worst, 0, 1e-12};
}

CheckValue check_rieffel_theta_match(const CheckContext& ctx, const nlohmann::json& p) {
    const auto& D = ctx.need_lattice();
    const auto& k = ctx.need_kaehler();
    double radius = get_or(p, "radius", 6.0);
    double hmax = get_or(p, "hmax", 5.0);
    PacketSum f_T = PacketSum::theta_vector(k.siegel());
    RieffelResult rp = rieffel_product_left(f_T, f_T, D, radius);
    QuantumTheta qt = quantum_theta(k, D, radius);
    double worst = 0;
    for (const auto& [h, c] : qt.element.terms()) {
        if (std::sqrt(h.squared_norm()) > hmax) continue;
        worst = std::max(worst, std::abs(rp.element.coeff(h) - qt.prefactor * c));
    }
    return {worst, rp.tail_bound, 1e-10};
}

CheckValue check_rieffel_h0_quadrature(const CheckContext& ctx, const nlohmann::json& p) {
    const auto& D = ctx.need_lattice();
    const auto& k = ctx.need_kaehler();
    double radius = get_or(p, "radius", 6.0);
    double L = get_or(p, "box_half_width", 6.0);
    int n = static_cast<int>(get_or(p, "points_per_axis", 200));
    PacketSum f_T = PacketSum::theta_vector(k.siegel());
    RieffelResult rp = rieffel_product_left(f_T, f_T, D, radius);
    Complex oracle = quadrature_inner(f_T, f_T, L, n);
    return {std::abs(rp.element.coeff(IntVector::zero(D.rank())) - oracle), 0, 1e-8};
}

CheckValue check_multiplier_invariance(const CheckContext& ctx, const nlohmann::json& p) {
    const auto& D = ctx.need_lattice();
    const auto& k = ctx.need_kaehler();
    double radius = get_or(p, "radius", 7.0);
    QuantumTheta qt = quantum_theta(k, D, radius);
    std::vector<IntVector> gs;
    if (p.contains("g_list")) {
        for (const auto& gj : p.at("g_list")) gs.emplace_back(gj.get<std::vector<std::int64_t>>());
    } else {
        for (int i = 0; i < D.rank(); ++i) {
            IntVector e = IntVector::zero(D.rank());
            e[i] = 1;
            gs.push_back(e);
        }
    }
    double worst = 0;
    for (const auto& g : gs)
        worst = std::max(worst, verify_multiplier_invariance(qt, g, radius - 2.0));
    return {worst, 0, 1e-10};
}

CheckValue check_poisson(const CheckContext& ctx, const nlohmann::json& p) {
    const auto& D = ctx.need_lattice();
    const auto& k = ctx.need_kaehler();
    double radius = get_or(p, "radius", 8.0);
    std::vector<Eigen::VectorXd> xs;
    if (p.contains("x_samples")) {
        for (const auto& xj : p.at("x_samples")) {
            auto v = xj.get<std::vector<double>>();
            xs.push_back(Eigen::Map<Eigen::VectorXd>(v.data(), v.size()));
        }
    } else {
        Rng rng(ctx.seed + 15);
        xs = seeded_box_points(rng, D.space().dim(), 2, true);
    }
    PoissonResult pr = poisson_check(k, D, xs, radius);
    return {pr.residual, pr.tail_bound, 1e-8};
}

CheckValue check_associativity(const CheckContext& ctx, const nlohmann::json& p) {
    const auto& D = ctx.need_lattice();
    const auto& k = ctx.need_kaehler();
    double radius = get_or(p, "radius", 6.0);
    int points = static_cast<int>(get_or(p, "sample_points", 5));
    Rng rng(ctx.seed + 16);
    auto pts = seeded_box_points(rng, k.siegel().dim(), points, false);
    PacketSum f_T = PacketSum::theta_vector(k.siegel());
    double worst = associativity_check(f_T, f_T, f_T, D, radius, pts);
    if (p.contains("with_shifted_xi") && p.at("with_shifted_xi").get<bool>()) {
        Eigen::VectorXd y(D.space().dim());
        for (int i = 0; i < y.size(); ++i) y[i] = rng.uniform(-1, 1);
        PacketSum xi = model1_act({Complex(1, 0), y}, f_T);
        worst = std::max(worst, associativity_check(f_T, f_T, xi, D, radius, pts));
    }
    return {worst, 0, 1e-6};
}

CheckValue check_self_fourier(const CheckContext& ctx, const nlohmann::json& p) {
    const auto& k = ctx.need_kaehler();
    double L = get_or(p, "box_half_width", 5.0);
    int n = static_cast<int>(get_or(p, "points_per_axis", 140));
    Rng rng(ctx.seed + 17);
    double worst = 0;
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
    std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> pairs;
    pairs.emplace_back(zero, zero);
    pairs.emplace_back(zero, Eigen::Vector2d(1.0, 0.0));
    Eigen::VectorXd xr(2);
    xr << rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5);
    pairs.emplace_back(xr, Eigen::Vector2d(0.0, 1.0));
    for (const auto& [x, g] : pairs)
        worst = std::max(worst, self_fourier_check(k, x, {g}, L, n));
    return {worst, 0, 1e-6};
}

CheckValue check_eta_identities(const CheckContext& ctx, const nlohmann::json& p) {
    const auto& k = ctx.need_kaehler();
    const int dim = k.space().dim();
    int count = static_cast<int>(get_or(p, "samples", 20));
    Rng rng(ctx.seed + 18);
    Eigen::MatrixXd M = k.q_matrix();
    double worst = 0;
    for (int t = 0; t < count; ++t) {
        Eigen::VectorXd x(dim), g(dim);
        for (int i = 0; i < dim; ++i) {
            x[i] = rng.uniform(-1.5, 1.5);
            g[i] = rng.uniform(-1.5, 1.5);
        }
        Eigen::VectorXcd eta = eta_solve(k, x, g);
        Complex q_eta = (eta.transpose() * (M.cast<Complex>() * eta)).value();
        Eigen::VectorXcd xe = k.embed(x), ge = k.embed(g);
        worst = std::max(worst,
                         std::abs(q_eta + k.hermitian(ge, ge) + k.hermitian(xe, ge)));
        for (int s = 0; s < 5; ++s) {
            Eigen::VectorXd h(dim);
            for (int i = 0; i < dim; ++i) h[i] = rng.uniform(-2, 2);
            Eigen::VectorXcd hc = h.cast<Complex>();
            Complex lhs = ((hc + eta).transpose() * (M.cast<Complex>() * (hc + eta))).value() - q_eta;
            Eigen::VectorXcd he = k.embed(h);
            Complex rhs = k.hermitian(he, he) + k.hermitian(xe, he) +
                          Complex(0, 2) * pair_value(k.space(), g, h);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return {worst, 0, 1e-10};
}

CheckValue check_positivity(const CheckContext& ctx, const nlohmann::json& p) {
    const auto& D = ctx.need_lattice();
    const auto& k = ctx.need_kaehler();
    double radius = get_or(p, "radius", 6.5);
    double rep_radius = get_or(p, "rep_radius", 9.5);
    int count = static_cast<int>(get_or(p, "packets", 5));
    Rng rng(ctx.seed + 19);
    const int N = k.siegel().dim();
    double worst = 0;
    for (int t = 0; t < count; ++t) {
        PacketSum phi = PacketSum::theta_vector(k.siegel());
        Eigen::VectorXd y(2 * N);
        for (int i = 0; i < 2 * N; ++i) y[i] = rng.uniform(-1, 1);
        phi = phi + model1_act({Complex(1, 0), y}, phi) * Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
        // the tail gate here only guards the truncation of the element; the
        // criterion itself is the eigenvalue bound below
        RieffelResult rp = rieffel_product_left(phi, phi, D, radius, 1e-2);
        Eigen::MatrixXcd M = regular_rep_matrix(rp.element, rep_radius);
        auto basis = regular_rep_basis(D.rank(), rep_radius);
        std::vector<IntVector> support;
        for (const auto& [h, c] : rp.element.terms()) support.push_back(h);
        auto interior = interior_indices(basis, support);
        Eigen::MatrixXcd B(interior.size(), interior.size());
        for (size_t i = 0; i < interior.size(); ++i)
            for (size_t j = 0; j < interior.size(); ++j) B(i, j) = M(interior[i], interior[j]);
        Eigen::MatrixXcd H = 0.5 * (B + B.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
        worst = std::max(worst, std::max(0.0, -es.eigenvalues().minCoeff()));
    }
    return {worst, 0, 1e-8};
}

CheckValue check_fock_unitarity(const CheckContext& ctx, const nlohmann::json& p) {
    const auto& k = ctx.need_kaehler();
    double L = get_or(p, "box_half_width", 6.0);
    int n = static_cast<int>(get_or(p, "points_per_axis", 160));
    Rng rng(ctx.seed + 20);
    FockSum vac = FockSum::vacuum(k.siegel().dim());
    Eigen::VectorXd y(k.space().dim());
    for (int i = 0; i < y.size(); ++i) y[i] = rng.uniform(-0.8, 0.8);
    Complex lambda = std::polar(1.0, 2 * kPi * rng.uniform());
    FockSum f = model2_act({lambda, y}, vac, k);
    Complex before = fock_quadrature_inner(vac, vac, k, L, n);
    Complex after = fock_quadrature_inner(f, f, k, L, n);
    double worst = std::abs(after - before);
    // second vector: a two-term sum
    Eigen::VectorXd y2(k.space().dim());
    for (int i = 0; i < y2.size(); ++i) y2[i] = rng.uniform(-0.8, 0.8);
    FockSum g(k.siegel().dim());
    for (const auto& t : vac.terms()) g.add(t);
    for (const auto& t : model2_act({Complex(1, 0), y2}, vac, k).terms()) g.add(t);
    FockSum gacted = model2_act({lambda, y}, g, k);
    worst = std::max(worst, std::abs(fock_quadrature_inner(gacted, gacted, k, L, n) -
                                     fock_quadrature_inner(g, g, k, L, n)));
    return {worst, 0, 1e-6};
}

CheckValue check_vacuum_match(const CheckContext& ctx, const nlohmann::json& p) {
    const auto& D = ctx.need_lattice();
    const auto& k = ctx.need_kaehler();
    double radius = get_or(p, "radius", 8.0);
    int points = static_cast<int>(get_or(p, "sample_points", 5));
    Rng rng(ctx.seed + 21);
    QuantumTheta qt = quantum_theta(k, D, radius);
    LatticeEmbedding Dd = dual_lattice(D);
    QuantumTheta qtd = quantum_theta(k, Dd, radius);
    FockSum lhs = apply_to_vacuum(qt);
    FockSum rhs = apply_to_vacuum(qtd);
    double factor = 1.0 / covolume(D);
    auto pts = seeded_box_points(rng, D.space().dim(), points, true);
    double worst = 0;
    for (const auto& x : pts) {
        Eigen::VectorXcd xe = k.embed(x);
        worst = std::max(worst, std::abs(lhs.evaluate(xe) - factor * rhs.evaluate(xe)));
    }
    return {worst, 0, 1e-6};
}

CheckValue check_gamma_basis_theta(const CheckContext& ctx, const nlohmann::json& p) {
    const auto& D = ctx.need_lattice();
    const auto& k = ctx.need_kaehler();
    double radius = get_or(p, "radius", 6.0);
    QuantumTheta qt = quantum_theta(k, D, radius);
    Multiplier m = theta_multiplier(k, D);
    auto basis = gamma_basis(m, radius + 2.0);
    if (basis.size() != 1) return {1.0, 0, 1e-10};
    double worst = 0;
    for (const auto& [h, c] : qt.element.terms())
        worst = std::max(worst, std::abs(c - basis[0].coeff(h)));
    return {worst, 0, 1e-10};
}

CheckValue check_reconstruction(const CheckContext& ctx, const nlohmann::json& p) {
    const auto& D = ctx.need_lattice();
    const auto& k = ctx.need_kaehler();
    double radius = get_or(p, "radius", 6.0);
    Multiplier m = theta_multiplier(k, D);
    Reconstruction rec = reconstruct_from_multiplier(m, radius);
    QuantumTheta qt = quantum_theta(k, D, radius);
    double worst = 0;
    for (const auto& [h, c] : qt.element.terms())
        worst = std::max(worst, std::abs(c - rec.theta.element.coeff(h)));
    return {worst, 0, 1e-10};
}

CheckValue check_finite_ext_suite(const CheckContext& ctx, const nlohmann::json& p) {
    const auto& D = ctx.need_extended();
    const auto& k = ctx.need_kaehler();
    double radius = get_or(p, "radius", 6.0);
    KernelData kd = kernel_d0(D);
    Cochain c = solve_cochain(D, kd);
    QuantizationForm form = validate_cochain(D, kd, c);

    double worst = 0;
    auto elems = D.group().elements();
    std::vector<IntVector> d0_gens;
    for (int j = 0; j < D.rank(); ++j) {
        IntVector b = IntVector::zero(D.rank());
        for (int i = 0; i < D.rank(); ++i) b[i] = kd.lambda_basis()(i, j);
        d0_gens.push_back(b);
    }
    for (const auto& a : elems)
        for (const auto& b : elems) {
            TorusElement t1 = theta_ab(D, kd, c, form, k, a, b, radius);
            TorusElement t2 = theta_ab_factorized(D, kd, c, form, k, a, b, radius);
            for (const auto& [h, v] : t1.terms()) worst = std::max(worst, std::abs(v - t2.coeff(h)));
            for (const auto& g : d0_gens)
                worst = std::max(worst, verify_theta_ab_invariance(t1, D, kd, k, g, radius - 2.0));
        }

    std::int64_t f2 = D.group().size() * D.group().size();
    int rank = basis_rank_check(D, kd, c, form, k, radius);
    if (rank != f2) worst = std::max(worst, 1.0);

    Multiplier m = extension_multiplier(D, kd, form, k);
    auto gb = gamma_basis(m, radius);
    if (static_cast<std::int64_t>(gb.size()) != f2) worst = std::max(worst, 1.0);
    for (const auto& e : gb) {
        for (const auto& g : d0_gens)
            worst = std::max(worst, verify_theta_ab_invariance(e, D, kd, k, g, radius - 2.0));
    }
    return {worst, 0, 1e-10};
}

using CheckFn = std::function<CheckValue(const CheckContext&, const nlohmann::json&)>;

const std::map<std::string, CheckFn>& registry() {
    static const std::map<std::string, CheckFn> reg = {
        {"classical_theta_value", check_classical_theta_value},
        {"classical_periodicity", check_classical_periodicity},
        {"classical_modular", check_classical_modular},
        {"heisenberg_laws", check_heisenberg_laws},
        {"torus_laws", check_torus_laws},
        {"lattice_duality", check_lattice_duality},
        {"rieffel_theta_match", check_rieffel_theta_match},
        {"rieffel_h0_quadrature", check_rieffel_h0_quadrature},
        {"multiplier_invariance", check_multiplier_invariance},
        {"poisson", check_poisson},
        {"associativity", check_associativity},
        {"self_fourier", check_self_fourier},
        {"eta_identities", check_eta_identities},
        {"positivity", check_positivity},
        {"fock_unitarity", check_fock_unitarity},
        {"vacuum_match", check_vacuum_match},
        {"gamma_basis_theta", check_gamma_basis_theta},
        {"reconstruction", check_reconstruction},
        {"finite_ext_suite", check_finite_ext_suite},
    };
    return reg;
}

}  // namespace

std::vector<std::string> available_checks() {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
}

Report run_scenario(const nlohmann::json& scenario) {
    if (!scenario.is_object()) throw std::invalid_argument("scenario: top level must be an object");
    Report report;
    report.scenario = scenario.contains("name") ? scenario.at("name").get<std::string>() : "unnamed";
    report.seed = scenario.contains("seed") ? scenario.at("seed").get<std::uint64_t>() : 12345;

    CheckContext ctx;
    ctx.seed = report.seed;
    if (scenario.contains("lattice")) ctx.lattice = lattice_from_json(scenario.at("lattice"));
    if (scenario.contains("siegel")) ctx.kaehler = KaehlerStructure(siegel_from_json(scenario.at("siegel")));
    if (scenario.contains("extended_lattice"))
        ctx.extended = extended_lattice_from_json(scenario.at("extended_lattice"));
    if (!scenario.contains("checks") || !scenario.at("checks").is_array())
        throw std::invalid_argument("scenario: missing checks array");

    bool all = true;
    for (const auto& cj : scenario.at("checks")) {
        std::string name = cj.at("name").get<std::string>();
        auto it = registry().find(name);
        if (it == registry().end())
            throw std::invalid_argument("scenario: unknown check name '" + name + "'");
        CheckOutcome out;
        out.name = name;
        out.params = cj;
        out.params.erase("name");
        auto t0 = std::chrono::steady_clock::now();
        try {
            CheckValue v = it->second(ctx, cj);
            out.residual = v.residual;
            out.tail_bound = v.tail_bound;
            out.tolerance = cj.contains("tolerance") ? cj.at("tolerance").get<double>()
                                                     : v.default_tolerance;
            out.pass = out.residual <= out.tolerance + out.tail_bound;
        } catch (const std::invalid_argument&) {
            throw;  // configuration problem: surface as a usage error
        } catch (const std::exception& e) {
            out.error = e.what();
            out.residual = std::numeric_limits<double>::infinity();
            out.tolerance = cj.contains("tolerance") ? cj.at("tolerance").get<double>() : 0.0;
            out.pass = false;
        }
        out.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        all = all && out.pass;
        report.checks.push_back(std::move(out));
    }
    report.all_pass = all;
    return report;
}

nlohmann::json report_to_json(const Report& r, bool include_timings) {
    nlohmann::json j;
    j["schema_version"] = r.schema_version;
    j["scenario"] = r.scenario;
    j["seed"] = r.seed;
    j["all_pass"] = r.all_pass;
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) {
        nlohmann::json cj;
        cj["check"] = c.name;
        cj["params"] = c.params;
        cj["residual"] = c.residual;
        cj["tail_bound"] = c.tail_bound;
        cj["tolerance"] = c.tolerance;
        cj["pass"] = c.pass;
        if (!c.error.empty()) cj["error"] = c.error;
        if (include_timings) cj["wall_ms"] = c.wall_ms;
        checks.push_back(cj);
    }
    j["checks"] = checks;
    return j;
}

}  // namespace qtheta
