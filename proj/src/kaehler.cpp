#include "qtheta/kaehler.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>

namespace qtheta {

SiegelPoint::SiegelPoint(Eigen::MatrixXcd T) {
    if (T.rows() != T.cols() || T.rows() == 0)
        throw std::invalid_argument("SiegelPoint: T must be square and nonempty");
    T_ = 0.5 * (T + T.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T_.imag());
    if (es.eigenvalues().minCoeff() <= 1e-12)
        throw std::invalid_argument("SiegelPoint: Im T must be positive definite");
    if (es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff() > 1e10)
        throw std::invalid_argument("SiegelPoint: Im T is too ill-conditioned");
}

KaehlerStructure::KaehlerStructure(SiegelPoint siegel)
    : KaehlerStructure(siegel, SymplecticSpace::standard(siegel.dim())) {}

KaehlerStructure::KaehlerStructure(SiegelPoint siegel, SymplecticSpace space)
    : siegel_(std::move(siegel)), space_(std::move(space)) {
    if (space_.half_dim() != siegel_.dim())
        throw std::invalid_argument("KaehlerStructure: Siegel dimension does not match the space");
    if (!space_.is_standard())
        throw std::invalid_argument("KaehlerStructure: requires the standard symplectic form");
    S_inv_ = siegel_.imag_part().inverse();
}

Eigen::VectorXcd KaehlerStructure::embed(const Eigen::VectorXd& x) const {
    return embed(x.cast<Complex>().eval());
}

Eigen::VectorXcd KaehlerStructure::embed(const Eigen::VectorXcd& x) const {
    const int N = siegel_.dim();
    if (x.size() != 2 * N) throw std::invalid_argument("KaehlerStructure::embed: dimension mismatch");
    return siegel_.matrix() * x.head(N) + x.tail(N);
}

Complex KaehlerStructure::hermitian(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) const {
    return (u.transpose() * (S_inv_.cast<Complex>() * v.conjugate())).value();
}

Eigen::MatrixXd KaehlerStructure::q_matrix() const {
    const int N = siegel_.dim();
    Eigen::MatrixXd R = siegel_.real_part();
    Eigen::MatrixXd S = siegel_.imag_part();
    Eigen::MatrixXd M(2 * N, 2 * N);
    M.topLeftCorner(N, N) = R * S_inv_ * R + S;
    M.topRightCorner(N, N) = R * S_inv_;
    M.bottomLeftCorner(N, N) = S_inv_ * R;
    M.bottomRightCorner(N, N) = S_inv_;
    return M;
}

SiegelPoint random_siegel(int N, Rng& rng) {
    Eigen::MatrixXd B(N, N), C(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            B(i, j) = rng.uniform(-1, 1);
            C(i, j) = rng.uniform(-1, 1);
        }
    Eigen::MatrixXd Bs = 0.5 * (B + B.transpose());
    Eigen::MatrixXd Cs = 0.5 * (C + C.transpose());
    Eigen::MatrixXcd T = Cs.cast<Complex>() +
                         Complex(0, 1) * (Bs.transpose() * Bs + Eigen::MatrixXd::Identity(N, N)).cast<Complex>();
    return SiegelPoint(T);
}

nlohmann::json siegel_to_json(const SiegelPoint& p) {
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (int i = 0; i < p.dim(); ++i) {
        nlohmann::json rrow = nlohmann::json::array(), irow = nlohmann::json::array();
        for (int j = 0; j < p.dim(); ++j) {
            rrow.push_back(p.matrix()(i, j).real());
            irow.push_back(p.matrix()(i, j).imag());
        }
        re.push_back(rrow);
        im.push_back(irow);
    }
    return nlohmann::json{{"T_re", re}, {"T_im", im}};
}

SiegelPoint siegel_from_json(const nlohmann::json& j) {
    const auto& re = j.at("T_re");
    const auto& im = j.at("T_im");
    int N = static_cast<int>(re.size());
    Eigen::MatrixXcd T(N, N);
    for (int i = 0; i < N; ++i)
        for (int jj = 0; jj < N; ++jj)
            T(i, jj) = Complex(re[i][jj].get<double>(), im[i][jj].get<double>());
    return SiegelPoint(T);
}

}  // namespace qtheta
