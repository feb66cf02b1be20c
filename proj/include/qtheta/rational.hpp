#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qtheta {

using Rational = boost::rational<long long>;

/// Exact conversion of a finite double to p/q. Fails (nullopt) if the
/// reduced denominator would exceed max_denom; every finite double is a
/// dyadic rational, so this succeeds for all "hand-entered" values like
/// 0.5 or -3.25 and rejects artifacts of irrational arithmetic.
std::optional<Rational> rational_from_double(double x, long long max_denom = (1LL << 40));

/// Parses "p/q" or a plain integer string.
Rational rational_from_string(const std::string& s);

std::string rational_to_string(const Rational& r);

inline double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

/// Dense matrix over the rationals, used for the exact lattice-duality
/// computations. Desk scale only (dimensions <= a few).
class RationalMatrix {
public:
    RationalMatrix() : rows_(0), cols_(0) {}
    RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

    static RationalMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rational& operator()(int i, int j) { return data_[i * cols_ + j]; }
    const Rational& operator()(int i, int j) const { return data_[i * cols_ + j]; }

    RationalMatrix transpose() const;
    RationalMatrix operator*(const RationalMatrix& o) const;
    RationalMatrix operator-() const;
    bool operator==(const RationalMatrix& o) const = default;

    Rational det() const;
    /// Gauss-Jordan inverse; throws std::runtime_error on a singular input.
    RationalMatrix inverse() const;

private:
    int rows_, cols_;
    std::vector<Rational> data_;
};

}  // namespace qtheta
