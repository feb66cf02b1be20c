#include "qtheta/torus.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qtheta {

QuantizationForm::QuantizationForm(Eigen::MatrixXd A_D) {
    if (A_D.rows() != A_D.cols()) throw std::invalid_argument("QuantizationForm: A_D must be square");
    for (int i = 0; i < A_D.rows(); ++i)
        for (int j = 0; j < A_D.cols(); ++j)
            if (A_D(i, j) != -A_D(j, i))
                throw std::invalid_argument("QuantizationForm: A_D must be exactly antisymmetric");
    auto impl = std::make_shared<Impl>();
    impl->rank = static_cast<int>(A_D.rows());
    impl->A = std::move(A_D);
    impl_ = std::move(impl);
}

QuantizationForm::QuantizationForm(int rank,
                                   std::function<Complex(const IntVector&, const IntVector&)> alpha,
                                   std::string tag) {
    auto impl = std::make_shared<Impl>();
    impl->rank = rank;
    impl->fn = std::move(alpha);
    impl->tag = std::move(tag);
    impl_ = std::move(impl);
}

Complex QuantizationForm::alpha(const IntVector& g, const IntVector& h) const {
    if (g.size() != rank() || h.size() != rank())
        throw std::invalid_argument("QuantizationForm::alpha: coordinate length mismatch");
    if (impl_->A) {
        const auto& A = *impl_->A;
        double phase = 0;
        for (int i = 0; i < rank(); ++i) {
            if (g[i] == 0) continue;
            double row = 0;
            for (int j = 0; j < rank(); ++j)
                if (h[j] != 0) row += A(i, j) * static_cast<double>(h[j]);
            phase += static_cast<double>(g[i]) * row;
        }
        return std::polar(1.0, std::numbers::pi * phase);
    }
    return impl_->fn(g, h);
}

const Eigen::MatrixXd& QuantizationForm::matrix() const {
    if (!impl_->A) throw std::logic_error("QuantizationForm: no matrix representation");
    return *impl_->A;
}

bool QuantizationForm::compatible_with(const QuantizationForm& o) const {
    if (impl_ == o.impl_) return true;
    if (impl_->A && o.impl_->A) return rank() == o.rank() && *impl_->A == *o.impl_->A;
    return false;
}

TorusElement TorusElement::monomial(QuantizationForm form, IntVector h, Complex c) {
    TorusElement out(std::move(form));
    out.add_term(std::move(h), c);
    return out;
}

Complex TorusElement::coeff(const IntVector& h) const {
    auto it = terms_.find(h);
    return it == terms_.end() ? Complex(0, 0) : it->second;
}

void TorusElement::add_term(const IntVector& h, Complex c) {
    auto it = terms_.find(h);
    if (it == terms_.end()) {
        if (c != Complex(0, 0)) terms_.emplace(h, c);
        return;
    }
    it->second += c;
    if (it->second == Complex(0, 0)) terms_.erase(it);
}

void TorusElement::set_term(const IntVector& h, Complex c) {
    if (c == Complex(0, 0))
        terms_.erase(h);
    else
        terms_[h] = c;
}

TorusElement TorusElement::operator+(const TorusElement& o) const {
    if (!form_.compatible_with(o.form_)) throw std::invalid_argument("TorusElement: mismatched quantization forms");
    TorusElement out = *this;
    for (const auto& [h, c] : o.terms_) out.add_term(h, c);
    return out;
}

TorusElement TorusElement::operator*(Complex s) const {
    TorusElement out(form_);
    if (s == Complex(0, 0)) return out;
    for (const auto& [h, c] : terms_) out.set_term(h, s * c);
    return out;
}

TorusElement multiply(const TorusElement& a, const TorusElement& b) {
    if (!a.form().compatible_with(b.form()))
        throw std::invalid_argument("multiply: mismatched quantization forms");
    TorusElement out(a.form());
    for (const auto& [g, cg] : a.terms())
        for (const auto& [h, ch] : b.terms())
            out.add_term(g + h, cg * ch * a.form().alpha(g, h));
    return out;
}

TorusElement star(const TorusElement& a) {
    // e(h)^{-1} = alpha(h,-h)^{-1} e(-h); for matrix forms alpha(h,-h) = 1.
    TorusElement out(a.form());
    for (const auto& [h, c] : a.terms()) {
        Complex inv_phase = a.form().has_matrix() ? Complex(1, 0) : Complex(1, 0) / a.form().alpha(h, -h);
        out.add_term(-h, std::conj(c) * inv_phase);
    }
    return out;
}

Complex TorusCharacterAction::value_at(const IntVector& h) const {
    if (h.size() != static_cast<int>(w.size()))
        throw std::invalid_argument("TorusCharacterAction: dimension mismatch");
    Complex e(0, 0);
    for (int i = 0; i < h.size(); ++i) e += w[i] * static_cast<double>(h[i]);
    return std::exp(e);
}

TorusCharacterAction character_compose(const TorusCharacterAction& a, const TorusCharacterAction& b) {
    return TorusCharacterAction{a.w + b.w};
}

TorusElement apply_character(const TorusCharacterAction& x, const TorusElement& a) {
    TorusElement out(a.form());
    for (const auto& [h, c] : a.terms()) out.set_term(h, x.value_at(h) * c);
    return out;
}

std::vector<IntVector> regular_rep_basis(int rank, double radius) {
    return points_in_quadratic_ball(Eigen::MatrixXd::Identity(rank, rank), radius);
}

Eigen::MatrixXcd regular_rep_matrix(const TorusElement& a, double radius) {
    auto basis = regular_rep_basis(a.form().rank(), radius);
    if (basis.empty()) throw std::invalid_argument("regular_rep_matrix: empty index set");
    std::map<IntVector, int> index;
    for (int i = 0; i < static_cast<int>(basis.size()); ++i) index[basis[i]] = i;

    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(basis.size(), basis.size());
    for (int col = 0; col < static_cast<int>(basis.size()); ++col) {
        const IntVector& n = basis[col];
        for (const auto& [g, cg] : a.terms()) {
            auto it = index.find(g + n);
            if (it == index.end()) continue;
            M(it->second, col) += cg * a.form().alpha(g, n);
        }
    }
    return M;
}

std::vector<int> interior_indices(const std::vector<IntVector>& basis,
                                  const std::vector<IntVector>& support) {
    std::map<IntVector, int> index;
    for (int i = 0; i < static_cast<int>(basis.size()); ++i) index[basis[i]] = i;
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(basis.size()); ++i) {
        bool inside = true;
        for (const auto& h : support)
            if (!index.count(basis[i] + h)) {
                inside = false;
                break;
            }
        if (inside) out.push_back(i);
    }
    return out;
}

nlohmann::json torus_element_to_json(const TorusElement& a) {
    if (!a.form().has_matrix())
        throw std::invalid_argument("torus_element_to_json: only matrix-backed forms serialize");
    nlohmann::json j;
    const auto& A = a.form().matrix();
    nlohmann::json am = nlohmann::json::array();
    for (int i = 0; i < A.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int jj = 0; jj < A.cols(); ++jj) row.push_back(A(i, jj));
        am.push_back(row);
    }
    j["A_D"] = am;
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [h, c] : a.terms()) {
        nlohmann::json t;
        t["h"] = h.c;
        t["re"] = c.real();
        t["im"] = c.imag();
        terms.push_back(t);
    }
    j["terms"] = terms;
    return j;
}

TorusElement torus_element_from_json(const nlohmann::json& j) {
    const auto& am = j.at("A_D");
    Eigen::MatrixXd A(am.size(), am.size());
    for (size_t i = 0; i < am.size(); ++i)
        for (size_t jj = 0; jj < am[i].size(); ++jj) A(i, jj) = am[i][jj].get<double>();
    TorusElement out{QuantizationForm(std::move(A))};
    for (const auto& t : j.at("terms")) {
        IntVector h(t.at("h").get<std::vector<std::int64_t>>());
        out.add_term(h, Complex(t.at("re").get<double>(), t.at("im").get<double>()));
    }
    return out;
}

}  // namespace qtheta
