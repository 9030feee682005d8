#pragma once

#include "twistheight/exactmath.hpp"

#include <initializer_list>
#include <string>
#include <vector>

namespace twistheight {

/// Dense polynomial over Z, coefficients lowest degree first. The zero
/// polynomial has no coefficients and degree -1.
class IntPolynomial {
public:
    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<ExactInt> coeffs);
    IntPolynomial(std::initializer_list<long> coeffs);

    static IntPolynomial constant(const ExactInt &c);
    static IntPolynomial monomial(const ExactInt &c, std::size_t degree);
    static IntPolynomial variable() { return monomial(1, 1); }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    bool is_monic() const { return !is_zero() && coeffs_.back() == 1; }

    /// Coefficient of t^i (zero past the degree).
    ExactInt coeff(std::size_t i) const;
    const ExactInt &leading() const;
    const std::vector<ExactInt> &coefficients() const { return coeffs_; }

    ExactInt operator()(const ExactInt &t) const;
    ExactRational operator()(const ExactRational &t) const;

    IntPolynomial derivative() const;
    /// this(inner(t))
    IntPolynomial compose(const IntPolynomial &inner) const;

    IntPolynomial &operator+=(const IntPolynomial &o);
    IntPolynomial &operator-=(const IntPolynomial &o);
    IntPolynomial &operator*=(const IntPolynomial &o);
    IntPolynomial &operator*=(const ExactInt &c);

    friend IntPolynomial operator+(IntPolynomial a, const IntPolynomial &b) { return a += b; }
    friend IntPolynomial operator-(IntPolynomial a, const IntPolynomial &b) { return a -= b; }
    friend IntPolynomial operator*(IntPolynomial a, const IntPolynomial &b) { return a *= b; }
    friend IntPolynomial operator*(IntPolynomial a, const ExactInt &c) { return a *= c; }
    friend IntPolynomial operator*(const ExactInt &c, IntPolynomial a) { return a *= c; }
    IntPolynomial operator-() const;

    bool operator==(const IntPolynomial &o) const = default;

    /// "t^3 + t + 3"
    std::string to_string(const char *var = "t") const;
    /// "3,1,0,1" (constant term first), the command-line form
    std::string to_csv() const;
    static IntPolynomial from_csv(const std::string &csv);

private:
    void normalize();

    std::vector<ExactInt> coeffs_;
};

/// Quotient a / b in Z[t]. Throws math_error(inexact_division) when b does
/// not divide a, with the nonzero remainder in the message.
IntPolynomial exact_divide(const IntPolynomial &a, const IntPolynomial &b);

/// Sylvester resultant Res(a, b), exact.
ExactInt resultant(const IntPolynomial &a, const IntPolynomial &b);

/// disc(a) = (-1)^(d(d-1)/2) Res(a, a') / lc(a). For t^3 + At + B this is
/// -4A^3 - 27B^2.
ExactInt discriminant(const IntPolynomial &a);

/// Determinant of a square integer matrix (Bareiss fraction-free elimination).
ExactInt determinant(std::vector<std::vector<ExactInt>> m);

/// Characteristic polynomial of multiplication by g(alpha) on Q[alpha]/(f),
/// f monic. Equals Res_s(f(s), x - g(s)) as a polynomial in x.
IntPolynomial char_poly_of_image(const IntPolynomial &f, const IntPolynomial &g);

/// Integer roots of a polynomial (all rational roots when monic).
std::vector<ExactInt> integer_roots(const IntPolynomial &p);

} // namespace twistheight
