#include "qtheta/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qtheta {

namespace {
constexpr double kPi = std::numbers::pi;

void require_symmetric_pd_real(const Eigen::MatrixXcd& Q) {
    if (Q.rows() != Q.cols()) throw std::invalid_argument("gaussian_integral: Q must be square");
    Eigen::MatrixXd re = 0.5 * (Q.real() + Q.real().transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(re);
    if (es.eigenvalues().minCoeff() <= 0)
        throw std::invalid_argument("gaussian_integral: Re Q must be positive definite");
}
}  // namespace

Complex sqrt_det_continuous(const Eigen::MatrixXcd& Q) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Q);
    Complex log_det(0, 0);
    for (int i = 0; i < Q.rows(); ++i) log_det += std::log(es.eigenvalues()[i]);
    return std::exp(0.5 * log_det);
}

Eigen::VectorXcd completing_square_shift(const Eigen::MatrixXcd& Q, const Eigen::VectorXcd& l) {
    return Q.fullPivLu().solve(l) / 2.0;
}

Complex gaussian_integral(const Eigen::MatrixXcd& Q, const Eigen::VectorXcd& l, Complex c) {
    require_symmetric_pd_real(Q);
    Eigen::VectorXcd lambda = completing_square_shift(Q, l);
    Complex q_lambda = (lambda.transpose() * (Q * lambda)).value();
    return std::exp(-kPi * (c - q_lambda)) / sqrt_det_continuous(Q);
}

PacketSum PacketSum::theta_vector(SiegelPoint T) {
    PacketSum out(T);
    int N = out.T_.dim();
    out.add({Complex(1, 0), Eigen::VectorXcd::Zero(N), Eigen::VectorXcd::Zero(N)});
    return out;
}

void PacketSum::add(GaussianPacket p) {
    if (p.gamma == Complex(0, 0)) return;
    for (auto& q : packets_)
        if (q.s == p.s && q.b == p.b) {
            q.gamma += p.gamma;
            return;
        }
    packets_.push_back(std::move(p));
}

PacketSum PacketSum::operator*(Complex sc) const {
    PacketSum out(T_);
    for (const auto& p : packets_) out.add({p.gamma * sc, p.s, p.b});
    return out;
}

PacketSum PacketSum::operator+(const PacketSum& o) const {
    PacketSum out = *this;
    for (const auto& p : o.packets_) out.add(p);
    return out;
}

Complex PacketSum::evaluate(const Eigen::VectorXd& x1) const {
    return evaluate(x1.cast<Complex>().eval());
}

Complex PacketSum::evaluate(const Eigen::VectorXcd& x1) const {
    Complex out(0, 0);
    const Eigen::MatrixXcd& T = T_.matrix();
    for (const auto& p : packets_) {
        Eigen::VectorXcd xs = x1 + p.s;
        Complex quad = (xs.transpose() * (T * xs)).value();
        Complex lin = (p.b.transpose() * x1).value();
        out += p.gamma * std::exp(Complex(0, kPi) * quad + Complex(0, 2 * kPi) * lin);
    }
    return out;
}

Complex model1_pair_inner(const SiegelPoint& T, const GaussianPacket& p, const GaussianPacket& q) {
    const Eigen::MatrixXcd& Tm = T.matrix();
    const Eigen::MatrixXcd Tc = Tm.conjugate();
    Eigen::MatrixXcd Q = (2.0 * T.imag_part()).cast<Complex>();
    Eigen::VectorXcd s2c = q.s.conjugate();
    Eigen::VectorXcd l = Complex(0, -2) * (Tm * p.s - Tc * s2c + p.b - q.b.conjugate());
    Complex c = Complex(0, -1) * ((p.s.transpose() * (Tm * p.s)).value() -
                                  (s2c.transpose() * (Tc * s2c)).value());
    return p.gamma * std::conj(q.gamma) * gaussian_integral(Q, l, c);
}

Complex model1_inner(const PacketSum& f, const PacketSum& g) {
    if (f.siegel().matrix() != g.siegel().matrix())
        throw std::invalid_argument("model1_inner: packet sums must share the Siegel parameter");
    Complex out(0, 0);
    for (const auto& p : f.packets())
        for (const auto& q : g.packets()) out += model1_pair_inner(f.siegel(), p, q);
    return out;
}

PacketSum model1_act(const VectorHeisenbergElement& el, const PacketSum& f) {
    const int N = f.siegel().dim();
    if (el.x.size() != 2 * N) throw std::invalid_argument("model1_act: dimension mismatch");
    Eigen::VectorXcd y1 = el.x.head(N).cast<Complex>();
    Eigen::VectorXcd y2 = el.x.tail(N).cast<Complex>();
    Complex phase = std::exp(Complex(0, kPi) * (y1.transpose() * y2).value());
    PacketSum out(f.siegel());
    for (const auto& p : f.packets()) {
        Complex bterm = std::exp(Complex(0, 2 * kPi) * (p.b.transpose() * y1).value());
        out.add({el.lambda * p.gamma * phase * bterm, p.s + y1, p.b + y2});
    }
    return out;
}

FockSum FockSum::vacuum(int dim) {
    FockSum out(dim);
    out.add({Complex(1, 0), Eigen::VectorXcd::Zero(dim)});
    return out;
}

void FockSum::add(FockExponential t) {
    if (t.gamma == Complex(0, 0)) return;
    for (auto& u : terms_)
        if (u.l == t.l) {
            u.gamma += t.gamma;
            return;
        }
    terms_.push_back(std::move(t));
}

Complex FockSum::evaluate(const Eigen::VectorXcd& xe) const {
    Complex out(0, 0);
    for (const auto& t : terms_) out += t.gamma * std::exp((t.l.transpose() * xe).value());
    return out;
}

FockSum model2_act(const VectorHeisenbergElement& el, const FockSum& f, const KaehlerStructure& k) {
    if (el.x.size() != k.space().dim()) throw std::invalid_argument("model2_act: dimension mismatch");
    Eigen::VectorXcd ye = k.embed(el.x);
    Complex hyy = k.hermitian(ye, ye);
    Eigen::VectorXcd lshift = -kPi * (k.imag_inverse().cast<Complex>() * ye.conjugate());
    FockSum out(f.dim());
    for (const auto& t : f.terms()) {
        Complex g = t.gamma / el.lambda * std::exp(-kPi / 2.0 * hyy + (t.l.transpose() * ye).value());
        out.add({g, t.l + lshift});
    }
    return out;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    // Newton iteration on the Legendre recurrence, symmetric in the nodes.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
}

Complex quadrature_inner(const PacketSum& f, const PacketSum& g, double box_half_width,
                         int points_per_axis) {
    const int N = f.siegel().dim();
    if (N > 2) throw std::invalid_argument("quadrature_inner: desk scale is N <= 2");
    std::vector<double> xs, ws;
    gauss_legendre(points_per_axis, xs, ws);
    Complex out(0, 0);
    if (N == 1) {
        Eigen::VectorXd x(1);
        for (int i = 0; i < points_per_axis; ++i) {
            x[0] = box_half_width * xs[i];
            out += box_half_width * ws[i] * f.evaluate(x) * std::conj(g.evaluate(x));
        }
    } else {
        Eigen::VectorXd x(2);
        for (int i = 0; i < points_per_axis; ++i)
            for (int j = 0; j < points_per_axis; ++j) {
                x[0] = box_half_width * xs[i];
                x[1] = box_half_width * xs[j];
                out += box_half_width * box_half_width * ws[i] * ws[j] * f.evaluate(x) *
                       std::conj(g.evaluate(x));
            }
    }
    return out;
}

Complex fock_quadrature_inner(const FockSum& f, const FockSum& g, const KaehlerStructure& k,
                              double box_half_width, int points_per_axis) {
    if (k.siegel().dim() != 1)
        throw std::invalid_argument("fock_quadrature_inner: N = 1 only");
    std::vector<double> xs, ws;
    gauss_legendre(points_per_axis, xs, ws);
    Complex out(0, 0);
    Eigen::VectorXd x(2);
    for (int i = 0; i < points_per_axis; ++i)
        for (int j = 0; j < points_per_axis; ++j) {
            x[0] = box_half_width * xs[i];
            x[1] = box_half_width * xs[j];
            Eigen::VectorXcd xe = k.embed(x);
            Complex w = std::exp(-kPi * k.hermitian(xe, xe));
            out += box_half_width * box_half_width * ws[i] * ws[j] * f.evaluate(xe) *
                   std::conj(g.evaluate(xe)) * w;
        }
    return out;
}

}  // namespace qtheta
