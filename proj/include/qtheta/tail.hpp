#pragma once

namespace qtheta {

/// Certified upper bound for sum_{n in Z^d, ||n||_2 > R} exp(-a ||n||^2 + b ||n||),
/// a > 0, via sup-norm shells (shell k holds at most (2k+1)^d - (2k-1)^d
/// points, each with ||n||_2 in [k, k sqrt(d)]).
double lattice_gaussian_tail(double a, double b, double R, int dim);

/// Smallest radius (half-integer steps) whose Gaussian tail bound is below
/// tol.
double default_radius(double a, int dim, double b = 0.0, double tol = 1e-10);

}  // namespace qtheta
