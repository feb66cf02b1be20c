#include "qtheta/lattice.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <stdexcept>

namespace qtheta {

IntVector IntVector::operator+(const IntVector& o) const {
    IntVector out = *this;
    for (int i = 0; i < size(); ++i) out.c[i] += o.c[i];
    return out;
}

IntVector IntVector::operator-(const IntVector& o) const {
    IntVector out = *this;
    for (int i = 0; i < size(); ++i) out.c[i] -= o.c[i];
    return out;
}

IntVector IntVector::operator-() const {
    IntVector out = *this;
    for (auto& v : out.c) v = -v;
    return out;
}

IntVector IntVector::operator*(std::int64_t k) const {
    IntVector out = *this;
    for (auto& v : out.c) v *= k;
    return out;
}

bool IntVector::is_zero() const {
    for (auto v : c)
        if (v != 0) return false;
    return true;
}

double IntVector::squared_norm() const {
    double s = 0;
    for (auto v : c) s += static_cast<double>(v) * static_cast<double>(v);
    return s;
}

Eigen::VectorXd IntVector::as_double() const {
    Eigen::VectorXd v(size());
    for (int i = 0; i < size(); ++i) v[i] = static_cast<double>(c[i]);
    return v;
}

namespace {

std::optional<RationalMatrix> try_exact(const Eigen::MatrixXd& m) {
    RationalMatrix out(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            auto r = rational_from_double(m(i, j), 1LL << 20);
            if (!r) return std::nullopt;
            out(i, j) = *r;
        }
    return out;
}

Eigen::MatrixXd to_double_matrix(const RationalMatrix& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
    return out;
}

}  // namespace

SymplecticSpace SymplecticSpace::standard(int N) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    A.topRightCorner(N, N) = Eigen::MatrixXd::Identity(N, N);
    A.bottomLeftCorner(N, N) = -Eigen::MatrixXd::Identity(N, N);
    return SymplecticSpace(std::move(A));
}

SymplecticSpace::SymplecticSpace(Eigen::MatrixXd A) : A_(std::move(A)) {
    if (A_.rows() != A_.cols() || A_.rows() % 2 != 0 || A_.rows() == 0)
        throw std::invalid_argument("SymplecticSpace: form matrix must be square of even dimension");
    N_ = static_cast<int>(A_.rows()) / 2;
    for (int i = 0; i < A_.rows(); ++i)
        for (int j = 0; j < A_.cols(); ++j)
            if (A_(i, j) != -A_(j, i))
                throw std::invalid_argument("SymplecticSpace: form matrix is not exactly antisymmetric");
    if (std::abs(A_.determinant()) < 1e-12)
        throw std::invalid_argument("SymplecticSpace: form matrix is degenerate");
    A_exact_ = try_exact(A_);
}

bool SymplecticSpace::is_standard() const {
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(2 * N_, 2 * N_);
    S.topRightCorner(N_, N_) = Eigen::MatrixXd::Identity(N_, N_);
    S.bottomLeftCorner(N_, N_) = -Eigen::MatrixXd::Identity(N_, N_);
    return A_ == S;
}

double pair_value(const SymplecticSpace& space, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != space.dim() || y.size() != space.dim())
        throw std::invalid_argument("pair_value: vector length does not match the space dimension");
    const auto& A = space.form_matrix();
    double s = 0;
    for (int i = 0; i < A.rows(); ++i)
        for (int j = i + 1; j < A.cols(); ++j)
            if (A(i, j) != 0.0) s += A(i, j) * (x[i] * y[j] - x[j] * y[i]);
    return s;
}

LatticeEmbedding::LatticeEmbedding(SymplecticSpace space, Eigen::MatrixXd generators)
    : space_(std::move(space)), G_(std::move(generators)), rank_(static_cast<int>(G_.cols())) {
    G_exact_ = try_exact(G_);
    validate();
}

LatticeEmbedding::LatticeEmbedding(SymplecticSpace space, RationalMatrix generators)
    : space_(std::move(space)),
      G_(to_double_matrix(generators)),
      G_exact_(std::move(generators)),
      rank_(static_cast<int>(G_.cols())) {
    validate();
}

void LatticeEmbedding::validate() const {
    if (G_.rows() != space_.dim())
        throw std::invalid_argument("LatticeEmbedding: generator matrix rows must equal 2N");
    if (rank_ < 1 || rank_ > space_.dim())
        throw std::invalid_argument("LatticeEmbedding: rank out of range");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(G_);
    if (svd.singularValues().minCoeff() < 1e-12)
        throw std::invalid_argument("LatticeEmbedding: generator columns are not linearly independent");
}

LatticeEmbedding LatticeEmbedding::standard_zn(int N) {
    return LatticeEmbedding(SymplecticSpace::standard(N), RationalMatrix::identity(2 * N));
}

GramForm gram(const LatticeEmbedding& embedding) {
    const auto& G = embedding.generators();
    GramForm out;
    out.A_D = Eigen::MatrixXd(embedding.rank(), embedding.rank());
    for (int k = 0; k < embedding.rank(); ++k)
        for (int l = 0; l < embedding.rank(); ++l)
            out.A_D(k, l) = pair_value(embedding.space(), G.col(k), G.col(l));
    if (embedding.generators_exact() && embedding.space().form_exact()) {
        const auto& Ge = *embedding.generators_exact();
        out.exact = Ge.transpose() * (*embedding.space().form_exact()) * Ge;
    }
    return out;
}

LatticeEmbedding dual_lattice(const LatticeEmbedding& embedding) {
    if (embedding.rank() != embedding.space().dim())
        throw std::invalid_argument("dual_lattice: requires a full-rank embedding (r = 2N)");
    GramForm g = gram(embedding);
    if (std::abs(g.A_D.determinant()) < 1e-12)
        throw std::invalid_argument("dual_lattice: degenerate Gram form");

    // The A-dual basis solves A(g_k, h_l) = delta_kl, i.e. G! = (G^T A^T)^{-1}.
    if (embedding.generators_exact() && embedding.space().form_exact()) {
        const auto& Ge = *embedding.generators_exact();
        const auto& Ae = *embedding.space().form_exact();
        RationalMatrix M = Ge.transpose() * Ae.transpose();
        RationalMatrix Gd = M.inverse();
        // Verify the defining condition: A(Gd e_k, Ge e_l) is an integer.
        RationalMatrix pairings = Gd.transpose() * Ae * Ge;
        for (int i = 0; i < pairings.rows(); ++i)
            for (int j = 0; j < pairings.cols(); ++j)
                if (pairings(i, j).denominator() != 1)
                    throw std::runtime_error("dual_lattice: computed basis violates the integrality condition");
        return LatticeEmbedding(embedding.space(), Gd);
    }

    Eigen::MatrixXd M = embedding.generators().transpose() * embedding.space().form_matrix().transpose();
    Eigen::MatrixXd Gd = M.inverse();
    LatticeEmbedding dual(embedding.space(), Gd);
    for (int i = 0; i < dual.rank(); ++i)
        for (int j = 0; j < embedding.rank(); ++j) {
            double p = pair_value(embedding.space(), Gd.col(i), embedding.generators().col(j));
            if (std::abs(p - std::round(p)) > 1e-12)
                throw std::runtime_error("dual_lattice: computed basis violates the integrality condition");
        }
    return dual;
}

GramForm morita_dual_form(const GramForm& g) {
    GramForm out;
    if (g.exact) {
        if (g.exact->det() == Rational(0)) throw std::invalid_argument("morita_dual_form: singular Gram form");
        out.exact = -(g.exact->inverse());
        out.A_D = to_double_matrix(*out.exact);
        return out;
    }
    if (std::abs(g.A_D.determinant()) < 1e-12)
        throw std::invalid_argument("morita_dual_form: singular Gram form");
    out.A_D = -g.A_D.inverse();
    return out;
}

std::vector<IntVector> points_in_quadratic_ball(const Eigen::MatrixXd& Q, double radius) {
    if (radius <= 0) throw std::invalid_argument("points_in_quadratic_ball: radius must be positive");
    const int r = static_cast<int>(Q.rows());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (Q + Q.transpose()));
    double lam_min = es.eigenvalues().minCoeff();
    if (lam_min <= 0) throw std::invalid_argument("points_in_quadratic_ball: form is not positive definite");
    const auto bound = static_cast<std::int64_t>(std::floor(radius / std::sqrt(lam_min))) + 1;
    const double r2 = radius * radius;

    std::vector<IntVector> out;
    IntVector n = IntVector::zero(r);
    for (int i = 0; i < r; ++i) n[i] = -bound;
    while (true) {
        Eigen::VectorXd v = n.as_double();
        if (v.dot(Q * v) <= r2 + 1e-12) out.push_back(n);
        int i = r - 1;
        while (i >= 0 && n[i] == bound) {
            n[i] = -bound;
            --i;
        }
        if (i < 0) break;
        ++n[i];
    }
    return out;
}

std::vector<IntVector> enumerate_lattice(const LatticeEmbedding& embedding, double radius,
                                         const Eigen::MatrixXd& norm) {
    Eigen::MatrixXd Qc = embedding.generators().transpose() * norm * embedding.generators();
    return points_in_quadratic_ball(Qc, radius);
}

double covolume(const LatticeEmbedding& embedding) {
    if (embedding.rank() != embedding.space().dim())
        throw std::invalid_argument("covolume: requires a full-rank embedding (r = 2N)");
    if (embedding.generators_exact()) {
        Rational d = embedding.generators_exact()->det();
        return std::abs(to_double(d));
    }
    return std::abs(embedding.generators().determinant());
}

nlohmann::json lattice_to_json(const LatticeEmbedding& embedding) {
    nlohmann::json j;
    j["N"] = embedding.space().half_dim();
    if (!embedding.space().is_standard()) {
        const auto& A = embedding.space().form_matrix();
        nlohmann::json am = nlohmann::json::array();
        for (int i = 0; i < A.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (int jj = 0; jj < A.cols(); ++jj) row.push_back(A(i, jj));
            am.push_back(row);
        }
        j["A"] = am;
    }
    nlohmann::json gens = nlohmann::json::array();
    for (int c = 0; c < embedding.rank(); ++c) {
        nlohmann::json col = nlohmann::json::array();
        for (int i = 0; i < embedding.generators().rows(); ++i) {
            if (embedding.generators_exact())
                col.push_back(rational_to_string((*embedding.generators_exact())(i, c)));
            else
                col.push_back(embedding.generators()(i, c));
        }
        gens.push_back(col);
    }
    j["generators"] = gens;
    return j;
}

namespace {

Rational entry_to_rational(const nlohmann::json& e) {
    if (e.is_string()) return rational_from_string(e.get<std::string>());
    auto r = rational_from_double(e.get<double>());
    if (!r) throw std::invalid_argument("lattice_from_json: entry is not exactly representable");
    return *r;
}

}  // namespace

LatticeEmbedding lattice_from_json(const nlohmann::json& j) {
    int N = j.at("N").get<int>();
    SymplecticSpace space = SymplecticSpace::standard(N);
    if (j.contains("A")) {
        const auto& am = j.at("A");
        Eigen::MatrixXd A(am.size(), am.size());
        for (size_t i = 0; i < am.size(); ++i)
            for (size_t jj = 0; jj < am[i].size(); ++jj) A(i, jj) = am[i][jj].get<double>();
        space = SymplecticSpace(A);
    }
    const auto& gens = j.at("generators");
    int r = static_cast<int>(gens.size());
    if (r == 0) throw std::invalid_argument("lattice_from_json: no generators");
    RationalMatrix G(2 * N, r);
    for (int c = 0; c < r; ++c) {
        if (static_cast<int>(gens[c].size()) != 2 * N)
            throw std::invalid_argument("lattice_from_json: generator column has wrong length");
        for (int i = 0; i < 2 * N; ++i) G(i, c) = entry_to_rational(gens[c][i]);
    }
    return LatticeEmbedding(std::move(space), std::move(G));
}

}  // namespace qtheta
