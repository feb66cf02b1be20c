#include "qtheta/finite_ext.hpp"

#include "qtheta/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qtheta {

namespace {
constexpr double kPi = std::numbers::pi;
}

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<std::int64_t> orders) : orders_(std::move(orders)) {
    for (auto m : orders_)
        if (m < 1) throw std::invalid_argument("FiniteAbelianGroup: orders must be positive");
}

std::int64_t FiniteAbelianGroup::size() const {
    std::int64_t s = 1;
    for (auto m : orders_) s *= m;
    return s;
}

std::int64_t FiniteAbelianGroup::exponent() const {
    std::int64_t e = 1;
    for (auto m : orders_) e = std::lcm(e, m);
    return e;
}

IntVector FiniteAbelianGroup::reduce(const IntVector& a) const {
    if (a.size() != factors()) throw std::invalid_argument("FiniteAbelianGroup: wrong residue length");
    IntVector out = a;
    for (int i = 0; i < factors(); ++i) {
        out[i] %= orders_[i];
        if (out[i] < 0) out[i] += orders_[i];
    }
    return out;
}

Complex FiniteAbelianGroup::character_value(const IntVector& l, const IntVector& a) const {
    double phase = 0;
    for (int i = 0; i < factors(); ++i)
        phase += static_cast<double>(l[i]) * static_cast<double>(a[i]) / static_cast<double>(orders_[i]);
    return std::polar(1.0, 2.0 * kPi * phase);
}

std::vector<IntVector> FiniteAbelianGroup::elements() const {
    std::vector<IntVector> out;
    IntVector cur = IntVector::zero(factors());
    while (true) {
        out.push_back(cur);
        int i = factors() - 1;
        while (i >= 0 && cur[i] == orders_[i] - 1) cur[i--] = 0;
        if (i < 0) break;
        ++cur[i];
    }
    return out;
}

int FiniteAbelianGroup::element_index(const IntVector& a) const {
    IntVector red = reduce(a);
    std::int64_t idx = 0;
    for (int i = 0; i < factors(); ++i) idx = idx * orders_[i] + red[i];
    return static_cast<int>(idx);
}

Complex psi0(const FiniteAbelianGroup& F, const IntVector& a, const IntVector& l,
             const IntVector& a2, const IntVector& l2) {
    (void)l;
    (void)a2;
    return F.character_value(l2, a);
}

ExtendedLattice::ExtendedLattice(int N, FiniteAbelianGroup F, std::vector<ExtendedGenerator> generators)
    : N_(N), F_(std::move(F)), gens_(std::move(generators)), space_(SymplecticSpace::standard(N)) {
    if (gens_.empty()) throw std::invalid_argument("ExtendedLattice: no generators");
    V_ = Eigen::MatrixXd(2 * N_, rank());
    for (int j = 0; j < rank(); ++j) {
        if (gens_[j].v.size() != 2 * N_)
            throw std::invalid_argument("ExtendedLattice: real part has wrong dimension");
        if (gens_[j].a.size() != F_.factors() || gens_[j].l.size() != F_.factors())
            throw std::invalid_argument("ExtendedLattice: finite part has wrong length");
        V_.col(j) = gens_[j].v;
    }
    if (rank() != 2 * N_)
        throw std::invalid_argument("ExtendedLattice: rank must equal 2N for a compact quotient");
}

std::pair<IntVector, IntVector> ExtendedLattice::finite_part(const IntVector& n) const {
    if (n.size() != rank()) throw std::invalid_argument("ExtendedLattice: wrong coordinate length");
    IntVector a = IntVector::zero(F_.factors());
    IntVector l = IntVector::zero(F_.factors());
    for (int j = 0; j < rank(); ++j)
        for (int i = 0; i < F_.factors(); ++i) {
            a[i] += n[j] * gens_[j].a[i];
            l[i] += n[j] * gens_[j].l[i];
        }
    return {F_.reduce(a), F_.reduce(l)};
}

Complex ExtendedLattice::psi_real(const IntVector& g, const IntVector& h) const {
    return std::polar(1.0, kPi * pair_value(space_, real_part(g), real_part(h)));
}

KernelData::KernelData(const ExtendedLattice& D, MatrixXll lambda_basis)
    : lambda_(std::move(lambda_basis)),
      d0_(D.space(), Eigen::MatrixXd(D.real_parts() * lambda_.cast<double>())) {
    const int r = D.rank();
    if (lambda_.rows() != r || lambda_.cols() != r)
        throw std::invalid_argument("KernelData: kernel must have full rank");
    RationalMatrix L(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) L(i, j) = Rational(lambda_(i, j));
    Rational det = L.det();
    if (det == Rational(0)) throw std::invalid_argument("KernelData: singular kernel basis");
    lambda_inv_ = L.inverse();
    index_ = std::abs(det.numerator() / det.denominator());

    // Coset representatives: minimal Euclidean norm of the real part,
    // lexicographic tie-break.
    for (double rho = 1.5; static_cast<std::int64_t>(reps_.size()) < index_; rho *= 2) {
        if (rho > 1024) throw std::runtime_error("KernelData: failed to find coset representatives");
        Eigen::MatrixXd Q = D.real_parts().transpose() * D.real_parts();
        auto pts = points_in_quadratic_ball(Q, rho);
        std::stable_sort(pts.begin(), pts.end(), [&](const IntVector& a, const IntVector& b) {
            double na = D.real_part(a).squaredNorm(), nb = D.real_part(b).squaredNorm();
            if (na != nb) return na < nb;
            return a < b;
        });
        reps_.clear();
        rep_lookup_.clear();
        for (const auto& n : pts) {
            auto key = frac_key(n);
            if (rep_lookup_.count(key)) continue;
            rep_lookup_.emplace(std::move(key), static_cast<int>(reps_.size()));
            reps_.push_back(n);
            if (static_cast<std::int64_t>(reps_.size()) == index_) break;
        }
    }
}

std::vector<Rational> KernelData::frac_key(const IntVector& n) const {
    std::vector<Rational> key;
    key.reserve(lambda_inv_.rows());
    for (int i = 0; i < lambda_inv_.rows(); ++i) {
        Rational v(0);
        for (int j = 0; j < n.size(); ++j) v += lambda_inv_(i, j) * Rational(n[j]);
        long long fl = v.numerator() >= 0 ? v.numerator() / v.denominator()
                                          : -((-v.numerator() + v.denominator() - 1) / v.denominator());
        key.push_back(v - Rational(fl));
    }
    return key;
}

int KernelData::coset_index(const IntVector& n) const {
    auto it = rep_lookup_.find(frac_key(n));
    if (it == rep_lookup_.end()) throw std::logic_error("KernelData: coset lookup failed");
    return it->second;
}

KernelData kernel_d0(const ExtendedLattice& D) {
    const int r = D.rank();
    const int k = D.group().factors();
    MatrixXll P(2 * k, r);
    for (int j = 0; j < r; ++j) {
        for (int i = 0; i < k; ++i) {
            P(i, j) = D.generators()[j].a[i];
            P(k + i, j) = D.generators()[j].l[i];
        }
    }
    std::vector<std::int64_t> mods;
    for (int i = 0; i < k; ++i) mods.push_back(D.group().orders()[i]);
    for (int i = 0; i < k; ++i) mods.push_back(D.group().orders()[i]);

    MatrixXll lambda = kernel_mod_basis(P, mods);
    if (lambda.cols() != r)
        throw std::runtime_error("kernel_d0: kernel does not have full rank");
    KernelData kd(D, lambda);

    std::int64_t f2 = D.group().size() * D.group().size();
    if (kd.index() != f2) {
        std::ostringstream msg;
        msg << "kernel_d0: projection to F x F-hat is not surjective (index " << kd.index()
            << " != |F|^2 = " << f2 << ")";
        throw std::runtime_error(msg.str());
    }
    return kd;
}

Cochain::Cochain(std::vector<Complex> values_per_coset) : values_(std::move(values_per_coset)) {
    if (values_.empty()) throw std::invalid_argument("Cochain: empty");
    for (const auto& v : values_)
        if (std::abs(std::abs(v) - 1.0) > 1e-12)
            throw std::invalid_argument("Cochain: values must be unimodular");
}

namespace {

struct CochainContext {
    ExtendedLattice D;
    KernelData kd;
    Cochain c;

    CochainContext(ExtendedLattice d, KernelData kdata, Cochain cc)
        : D(std::move(d)), kd(std::move(kdata)), c(std::move(cc)) {}

    Complex cochain_value(const IntVector& n) const { return c.value(kd.coset_index(n)); }

    Complex alpha(const IntVector& g, const IntVector& h) const {
        Complex cob = cochain_value(g) * cochain_value(h) / cochain_value(g + h);
        auto [ag, lg] = D.finite_part(g);
        auto [ah, lh] = D.finite_part(h);
        return cob * D.psi_real(g, h) * psi0(D.group(), ag, lg, ah, lh);
    }
};

}  // namespace

QuantizationForm validate_cochain(const ExtendedLattice& D, const KernelData& kd, const Cochain& c) {
    if (c.size() != static_cast<int>(kd.coset_reps().size()))
        throw std::invalid_argument("validate_cochain: one value per coset representative required");
    if (std::abs(c.value(0) - Complex(1, 0)) > 1e-12)
        throw std::invalid_argument("validate_cochain: c must be 1 on D0");

    auto ctx = std::make_shared<CochainContext>(D, kd, c);

    auto check_pair = [&](const IntVector& g, const IntVector& h, const char* what) {
        Complex prod = ctx->alpha(g, h) * ctx->alpha(h, g);
        if (std::abs(prod - Complex(1, 0)) > 1e-12) {
            std::ostringstream msg;
            msg << "validate_cochain: alpha is not antisymmetric on " << what << " cosets ("
                << kd.coset_index(g) << "," << kd.coset_index(h) << ")";
            throw std::runtime_error(msg.str());
        }
        Complex diag = ctx->alpha(g, g);
        if (std::abs(diag - Complex(1, 0)) > 1e-12) {
            std::ostringstream msg;
            msg << "validate_cochain: alpha(g,g) != 1 on " << what << " coset " << kd.coset_index(g);
            throw std::runtime_error(msg.str());
        }
    };

    const int r = D.rank();
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            IntVector ei = IntVector::zero(r), ej = IntVector::zero(r);
            ei[i] = 1;
            ej[j] = 1;
            check_pair(ei, ej, "generator");
        }
    Rng rng(515);
    for (int t = 0; t < 50; ++t) {
        IntVector g = IntVector::zero(r), h = IntVector::zero(r);
        for (int i = 0; i < r; ++i) {
            g[i] = rng.integer(-4, 4);
            h[i] = rng.integer(-4, 4);
        }
        check_pair(g, h, "random");
    }

    return QuantizationForm(
        r, [ctx](const IntVector& g, const IntVector& h) { return ctx->alpha(g, h); },
        "extended-cochain");
}

Cochain solve_cochain(const ExtendedLattice& D, const KernelData& kd) {
    const std::int64_t q = 4 * D.group().exponent();
    const int slots = static_cast<int>(kd.index()) - 1;
    double combos = std::pow(static_cast<double>(q), slots);
    if (combos > 1e7) throw std::runtime_error("solve_cochain: search space too large at desk scale");

    std::vector<Complex> roots(q);
    for (std::int64_t k = 0; k < q; ++k) roots[k] = std::polar(1.0, 2.0 * kPi * k / q);

    const auto& reps = kd.coset_reps();
    std::vector<int> digits(slots, 0);
    while (true) {
        std::vector<Complex> values(kd.index(), Complex(1, 0));
        for (int s = 0; s < slots; ++s) values[s + 1] = roots[digits[s]];
        Cochain cand(values);
        // constraints only involve coset data, so checking representative
        // pairs covers all of D x D
        bool ok = true;
        auto cval = [&](const IntVector& n) { return values[kd.coset_index(n)]; };
        for (size_t i = 0; i < reps.size() && ok; ++i) {
            for (size_t j = 0; j < reps.size() && ok; ++j) {
                const IntVector& g = reps[i];
                const IntVector& h = reps[j];
                Complex cob_gh = cval(g) * cval(h) / cval(g + h);
                auto [ag, lg] = D.finite_part(g);
                auto [ah, lh] = D.finite_part(h);
                Complex prod = cob_gh * cob_gh * psi0(D.group(), ag, lg, ah, lh) *
                               psi0(D.group(), ah, lh, ag, lg);
                if (std::abs(prod - Complex(1, 0)) > 1e-9) ok = false;
            }
            const IntVector& g = reps[i];
            IntVector g2 = g + g;
            Complex diag = cval(g) * cval(g) / cval(g2);
            auto [ag, lg] = D.finite_part(g);
            if (std::abs(diag * psi0(D.group(), ag, lg, ag, lg) - Complex(1, 0)) > 1e-9) ok = false;
        }
        if (ok) return cand;

        int s = slots - 1;
        while (s >= 0 && digits[s] == q - 1) digits[s--] = 0;
        if (s < 0) break;
        ++digits[s];
    }
    throw std::runtime_error("solve_cochain: no valid cochain at this root-of-unity order");
}

namespace {

Eigen::MatrixXd coordinate_norm(const ExtendedLattice& D, const KaehlerStructure& k) {
    return D.real_parts().transpose() * k.q_matrix() * D.real_parts();
}

}  // namespace

TorusElement theta_ab(const ExtendedLattice& D, const KernelData& kd, const Cochain& c,
                      const QuantizationForm& form, const KaehlerStructure& k, const IntVector& a,
                      const IntVector& b, double radius) {
    IntVector ar = D.group().reduce(a), br = D.group().reduce(b);
    TorusElement out(form);
    for (const auto& n : points_in_quadratic_ball(coordinate_norm(D, k), radius)) {
        auto [ah, lh] = D.finite_part(n);
        if (!(D.group().reduce(ar + ah) == br)) continue;
        Eigen::VectorXcd he = k.embed(D.real_part(n));
        Complex coef = std::conj(c.value(kd.coset_index(n))) *
                       std::conj(D.group().character_value(lh, ar)) *
                       std::exp(-kPi / 2.0 * k.hermitian(he, he).real());
        out.set_term(n, coef);
    }
    return out;
}

TorusElement theta_ab_factorized(const ExtendedLattice& D, const KernelData& kd, const Cochain& c,
                                 const QuantizationForm& form, const KaehlerStructure& k,
                                 const IntVector& a, const IntVector& b, double radius) {
    IntVector ar = D.group().reduce(a), br = D.group().reduce(b);
    const int N = k.siegel().dim();
    double prefactor = 1.0 / std::sqrt(std::pow(2.0, N) * k.siegel().imag_part().determinant());
    PacketSum f_T = PacketSum::theta_vector(k.siegel());
    auto elems = D.group().elements();

    Eigen::VectorXcd delta_a = Eigen::VectorXcd::Zero(elems.size());
    delta_a[D.group().element_index(ar)] = Complex(1, 0);
    Eigen::VectorXcd delta_b = Eigen::VectorXcd::Zero(elems.size());
    delta_b[D.group().element_index(br)] = Complex(1, 0);

    TorusElement out(form);
    for (const auto& n : points_in_quadratic_ball(coordinate_norm(D, k), radius)) {
        auto [ah, lh] = D.finite_part(n);
        VectorHeisenbergElement el{Complex(1, 0), D.real_part(n)};
        Complex bracket1 = model1_inner(f_T, model1_act(el, f_T));
        Eigen::VectorXcd phi = act_h2(Complex(1, 0), ah, lh, D.group(), delta_b);
        Complex bracket2(0, 0);
        for (size_t i = 0; i < elems.size(); ++i) bracket2 += delta_a[i] * std::conj(phi[i]);
        Complex coef = std::conj(c.value(kd.coset_index(n))) * bracket1 * bracket2 / prefactor;
        if (std::abs(coef) > 0) out.set_term(n, coef);
    }
    return out;
}

Eigen::VectorXcd act_h2(Complex lambda, const IntVector& a, const IntVector& l,
                        const FiniteAbelianGroup& F, const Eigen::VectorXcd& phi) {
    auto elems = F.elements();
    if (phi.size() != static_cast<Eigen::Index>(elems.size()))
        throw std::invalid_argument("act_h2: function vector has wrong length");
    Eigen::VectorXcd out(phi.size());
    for (size_t i = 0; i < elems.size(); ++i) {
        const IntVector& bpt = elems[i];
        out[i] = lambda * F.character_value(l, bpt) * phi[F.element_index(a + bpt)];
    }
    return out;
}

double verify_theta_ab_invariance(const TorusElement& theta, const ExtendedLattice& D,
                                  const KernelData& kd, const KaehlerStructure& k,
                                  const IntVector& g, double radius) {
    if (kd.coset_index(g) != 0)
        throw std::invalid_argument("verify_theta_ab_invariance: g must lie in D0");
    Eigen::VectorXcd ge = k.embed(D.real_part(g));
    double Cg = std::exp(-kPi / 2.0 * k.hermitian(ge, ge).real());

    std::map<IntVector, Complex> transformed;
    for (const auto& [h, ah] : theta.terms()) {
        Eigen::VectorXcd he = k.embed(D.real_part(h));
        Complex xgh = std::exp(-kPi * k.hermitian(ge, he));
        transformed[g + h] = Cg * xgh * theta.form().alpha(g, h) * ah;
    }
    double worst = 0;
    for (const auto& [h, v] : transformed) {
        Complex orig = theta.coeff(h);
        if (orig == Complex(0, 0)) continue;
        if (std::sqrt(h.squared_norm()) > radius) continue;
        worst = std::max(worst, std::abs(v - orig));
    }
    return worst;
}

int basis_rank_check(const ExtendedLattice& D, const KernelData& kd, const Cochain& c,
                     const QuantizationForm& form, const KaehlerStructure& k, double radius) {
    auto elems = D.group().elements();
    const int f2 = static_cast<int>(elems.size() * elems.size());
    Eigen::MatrixXcd M(f2, kd.index());
    int row = 0;
    for (const auto& a : elems)
        for (const auto& b : elems) {
            TorusElement t = theta_ab(D, kd, c, form, k, a, b, radius);
            for (std::int64_t j = 0; j < kd.index(); ++j)
                M(row, j) = t.coeff(kd.coset_reps()[static_cast<size_t>(j)]);
            ++row;
        }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(M);
    qr.setThreshold(1e-10);
    return static_cast<int>(qr.rank());
}

Multiplier extension_multiplier(const ExtendedLattice& D, const KernelData& kd,
                                const QuantizationForm& form, const KaehlerStructure& k) {
    const int r = D.rank();
    std::vector<IntVector> basis;
    std::vector<TorusHeisenbergElement> lifts;
    for (int j = 0; j < r; ++j) {
        IntVector b = IntVector::zero(r);
        for (int i = 0; i < r; ++i) b[i] = kd.lambda_basis()(i, j);
        Eigen::VectorXcd be = k.embed(D.real_part(b));
        Complex C = std::exp(-kPi / 2.0 * k.hermitian(be, be));
        Eigen::VectorXcd w(r);
        for (int i = 0; i < r; ++i) {
            IntVector e = IntVector::zero(r);
            e[i] = 1;
            w[i] = -kPi * k.hermitian(be, k.embed(D.real_part(e)));
        }
        basis.push_back(b);
        lifts.push_back({C, TorusCharacterAction{w}, b});
    }
    return Multiplier(form, std::move(basis), std::move(lifts));
}

nlohmann::json extended_lattice_to_json(const ExtendedLattice& D) {
    nlohmann::json j;
    j["N"] = D.half_dim();
    j["orders"] = D.group().orders();
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : D.generators()) {
        nlohmann::json gj;
        gj["v"] = std::vector<double>(g.v.data(), g.v.data() + g.v.size());
        gj["a"] = g.a.c;
        gj["l"] = g.l.c;
        gens.push_back(gj);
    }
    j["generators"] = gens;
    return j;
}

ExtendedLattice extended_lattice_from_json(const nlohmann::json& j) {
    int N = j.at("N").get<int>();
    FiniteAbelianGroup F(j.at("orders").get<std::vector<std::int64_t>>());
    std::vector<ExtendedGenerator> gens;
    for (const auto& gj : j.at("generators")) {
        auto vv = gj.at("v").get<std::vector<double>>();
        Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(vv.data(), vv.size());
        gens.push_back({v, IntVector(gj.at("a").get<std::vector<std::int64_t>>()),
                        IntVector(gj.at("l").get<std::vector<std::int64_t>>())});
    }
    return ExtendedLattice(N, std::move(F), std::move(gens));
}

nlohmann::json cochain_to_json(const Cochain& c) {
    nlohmann::json j;
    for (int i = 0; i < c.size(); ++i)
        j[std::to_string(i)] = {c.value(i).real(), c.value(i).imag()};
    return j;
}

Cochain cochain_from_json(const nlohmann::json& j) {
    std::vector<Complex> values(j.size());
    for (auto it = j.begin(); it != j.end(); ++it) {
        int idx = std::stoi(it.key());
        values.at(idx) = Complex(it.value()[0].get<double>(), it.value()[1].get<double>());
    }
    return Cochain(std::move(values));
}

}  // namespace qtheta
