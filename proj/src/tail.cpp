#include "qtheta/tail.hpp"

#include <cmath>
#include <stdexcept>

namespace qtheta {

double lattice_gaussian_tail(double a, double b, double R, int dim) {
    if (a <= 0) throw std::invalid_argument("lattice_gaussian_tail: decay rate must be positive");
    if (R < 0) R = 0;
    const double sd = std::sqrt(static_cast<double>(dim));
    long long k0 = static_cast<long long>(std::floor(R / sd)) + 1;
    if (k0 < 1) k0 = 1;
    double total = 0;
    for (long long k = k0; k < k0 + 100000; ++k) {
        double count = std::pow(2.0 * k + 1.0, dim) - std::pow(2.0 * k - 1.0, dim);
        double growth = b >= 0 ? b * k * sd : b * k;
        double term = count * std::exp(-a * static_cast<double>(k) * static_cast<double>(k) + growth);
        total += term;
        if (term < 1e-300 && k > k0 + 2) break;
    }
    return total;
}

double default_radius(double a, int dim, double b, double tol) {
    for (double R = 1.0; R <= 128.0; R += 0.5)
        if (lattice_gaussian_tail(a, b, R, dim) < tol) return R;
    throw std::runtime_error("default_radius: no radius below 128 reaches the requested tolerance");
}

}  // namespace qtheta
