// Python bindings for the main operations: classical and quantum theta
// series, Rieffel scalar products, the functional-equation residual checks,
// and the scenario runner.

#include "qtheta/finite_ext.hpp"
#include "qtheta/gaussian.hpp"
#include "qtheta/kaehler.hpp"
#include "qtheta/lattice.hpp"
#include "qtheta/rng.hpp"
#include "qtheta/scenario.hpp"
#include "qtheta/theta.hpp"
#include "qtheta/torus.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

namespace py = pybind11;
using namespace qtheta;

namespace {

LatticeEmbedding lattice_from_str(const std::string& json_str) {
    return lattice_from_json(nlohmann::json::parse(json_str));
}

KaehlerStructure kaehler_from_matrix(const Eigen::MatrixXcd& T) {
    return KaehlerStructure(SiegelPoint(T));
}

py::dict coeff_dict(const TorusElement& e) {
    py::dict out;
    for (const auto& [h, c] : e.terms()) {
        py::tuple key(h.size());
        for (int i = 0; i < h.size(); ++i) key[i] = h[i];
        out[key] = c;
    }
    return out;
}

std::vector<Eigen::VectorXd> to_vectors(const std::vector<std::vector<double>>& xs) {
    std::vector<Eigen::VectorXd> out;
    for (const auto& x : xs)
        out.push_back(Eigen::Map<const Eigen::VectorXd>(x.data(), x.size()));
    return out;
}

}  // namespace

PYBIND11_MODULE(_qtheta, m) {
    m.doc() = "quantum tori, theta vectors, and quantum theta functions";

    m.def(
        "classical_theta",
        [](const Eigen::MatrixXcd& omega, const Eigen::VectorXcd& z, double radius,
           double tolerance) {
            auto v = classical_theta({SiegelPoint(omega), z}, radius, tolerance);
            return py::make_tuple(v.value, v.tail_bound);
        },
        py::arg("omega"), py::arg("z"), py::arg("radius") = 8.0, py::arg("tolerance") = 1e-12,
        "Truncated theta sum with a certified tail bound; returns (value, tail_bound).");

    m.def(
        "classical_modular_residual",
        [](const Eigen::MatrixXcd& omega, const Eigen::VectorXcd& z, double radius) {
            return classical_modular_check(SiegelPoint(omega), z, radius);
        },
        py::arg("omega"), py::arg("z"), py::arg("radius") = 8.0,
        "Residual of the modular inversion equation.");

    m.def(
        "quantum_theta_coeffs",
        [](const std::string& lattice_json, const Eigen::MatrixXcd& T, double radius) {
            QuantumTheta qt =
                quantum_theta(kaehler_from_matrix(T), lattice_from_str(lattice_json), radius);
            return py::make_tuple(coeff_dict(qt.element), qt.prefactor);
        },
        py::arg("lattice_json"), py::arg("T"), py::arg("radius") = 6.0,
        "Normalized theta-series coefficients and the scalar prefactor.");

    m.def(
        "rieffel_coeffs",
        [](const std::string& lattice_json, const Eigen::MatrixXcd& T, double radius) {
            PacketSum f = PacketSum::theta_vector(SiegelPoint(T));
            RieffelResult rp =
                rieffel_product_left(f, f, lattice_from_str(lattice_json), radius);
            return py::make_tuple(coeff_dict(rp.element), rp.tail_bound);
        },
        py::arg("lattice_json"), py::arg("T"), py::arg("radius") = 6.0,
        "Coefficients of the module scalar product of the theta vector with itself.");

    m.def(
        "poisson_residual",
        [](const std::string& lattice_json, const Eigen::MatrixXcd& T,
           const std::vector<std::vector<double>>& x_samples, double radius) {
            PoissonResult pr = poisson_check(kaehler_from_matrix(T),
                                             lattice_from_str(lattice_json),
                                             to_vectors(x_samples), radius);
            return py::make_tuple(pr.residual, pr.tail_bound);
        },
        py::arg("lattice_json"), py::arg("T"), py::arg("x_samples"), py::arg("radius") = 8.0,
        "Residual and certified tail of the lattice/dual-lattice summation identity.");

    m.def(
        "associativity_residual",
        [](const std::string& lattice_json, const Eigen::MatrixXcd& T, double radius,
           int sample_points, std::uint64_t seed) {
            SiegelPoint Tp(T);
            PacketSum f = PacketSum::theta_vector(Tp);
            Rng rng(seed);
            std::vector<Eigen::VectorXd> pts;
            for (int i = 0; i < sample_points; ++i) {
                Eigen::VectorXd x(Tp.dim());
                for (int j = 0; j < Tp.dim(); ++j) x[j] = rng.uniform(-1, 1);
                pts.push_back(x);
            }
            return associativity_check(f, f, f, lattice_from_str(lattice_json), radius, pts);
        },
        py::arg("lattice_json"), py::arg("T"), py::arg("radius") = 6.0,
        py::arg("sample_points") = 5, py::arg("seed") = 12345,
        "Pointwise residual of the associativity of the two module products.");

    m.def(
        "gaussian_integral",
        [](const Eigen::MatrixXcd& Q, const Eigen::VectorXcd& l, Complex c) {
            return gaussian_integral(Q, l, c);
        },
        py::arg("Q"), py::arg("l"), py::arg("c") = Complex(0, 0),
        "Closed form of the Gaussian integral with complex symmetric Q, Re Q > 0.");

    m.def(
        "dual_lattice_json",
        [](const std::string& lattice_json) {
            return lattice_to_json(dual_lattice(lattice_from_str(lattice_json))).dump();
        },
        py::arg("lattice_json"), "Dual lattice in the A-dual basis, as JSON.");

    m.def(
        "covolume", [](const std::string& lattice_json) { return covolume(lattice_from_str(lattice_json)); },
        py::arg("lattice_json"));

    m.def(
        "run_scenario",
        [](const std::string& scenario_json) {
            Report r = run_scenario(nlohmann::json::parse(scenario_json));
            return report_to_json(r, false).dump(2);
        },
        py::arg("scenario_json"),
        "Run a verification scenario (JSON string in, JSON report out).");

    m.attr("__version__") = "0.1.0";
}
