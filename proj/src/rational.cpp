#include "qtheta/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace qtheta {

std::optional<Rational> rational_from_double(double x, long long max_denom) {
    if (!std::isfinite(x)) return std::nullopt;
    double v = x;
    long long denom = 1;
    while (std::trunc(v) != v) {
        v *= 2.0;
        denom *= 2;
        if (denom > max_denom || std::abs(v) > 9.0e18) return std::nullopt;
    }
    return Rational(static_cast<long long>(v), denom);
}

Rational rational_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) {
        return Rational(std::stoll(s), 1);
    }
    long long p = std::stoll(s.substr(0, slash));
    long long q = std::stoll(s.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("rational_from_string: zero denominator in '" + s + "'");
    return Rational(p, q);
}

std::string rational_to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

RationalMatrix RationalMatrix::identity(int n) {
    RationalMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Rational(1);
    return m;
}

RationalMatrix RationalMatrix::transpose() const {
    RationalMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("RationalMatrix: dimension mismatch in product");
    RationalMatrix out(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Rational& a = (*this)(i, k);
            if (a == Rational(0)) continue;
            for (int j = 0; j < o.cols_; ++j) out(i, j) += a * o(k, j);
        }
    return out;
}

RationalMatrix RationalMatrix::operator-() const {
    RationalMatrix out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(i, j) = -(*this)(i, j);
    return out;
}

Rational RationalMatrix::det() const {
    if (rows_ != cols_) throw std::invalid_argument("RationalMatrix::det: not square");
    RationalMatrix a = *this;
    int n = rows_;
    Rational d(1);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int i = col; i < n; ++i)
            if (a(i, col) != Rational(0)) { pivot = i; break; }
        if (pivot < 0) return Rational(0);
        if (pivot != col) {
            for (int j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
            d = -d;
        }
        d *= a(col, col);
        for (int i = col + 1; i < n; ++i) {
            if (a(i, col) == Rational(0)) continue;
            Rational f = a(i, col) / a(col, col);
            for (int j = col; j < n; ++j) a(i, j) -= f * a(col, j);
        }
    }
    return d;
}

RationalMatrix RationalMatrix::inverse() const {
    if (rows_ != cols_) throw std::invalid_argument("RationalMatrix::inverse: not square");
    int n = rows_;
    RationalMatrix a = *this;
    RationalMatrix inv = identity(n);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int i = col; i < n; ++i)
            if (a(i, col) != Rational(0)) { pivot = i; break; }
        if (pivot < 0) throw std::runtime_error("RationalMatrix::inverse: singular matrix");
        if (pivot != col)
            for (int j = 0; j < n; ++j) {
                std::swap(a(pivot, j), a(col, j));
                std::swap(inv(pivot, j), inv(col, j));
            }
        Rational p = a(col, col);
        for (int j = 0; j < n; ++j) {
            a(col, j) /= p;
            inv(col, j) /= p;
        }
        for (int i = 0; i < n; ++i) {
            if (i == col || a(i, col) == Rational(0)) continue;
            Rational f = a(i, col);
            for (int j = 0; j < n; ++j) {
                a(i, j) -= f * a(col, j);
                inv(i, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

}  // namespace qtheta
