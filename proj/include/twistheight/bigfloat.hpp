#pragma once

// Arbitrary-precision real and complex floats on top of MPFR, plus the
// iterative kernels the period and height code needs (AGM, Carlson R_F,
// real roots of cubics).
//
// Precision convention: a caller asks for `precision` bits of output. Work
// is carried at working_precision(precision) = precision + guard_bits, and
// iterations stop once increments drop below 2^-(precision + 16). Reported
// values carry an error estimate of 2^-(precision - 16).

#include "twistheight/exactmath.hpp"

#include <mpfr.h>

#include <string>
#include <utility>
#include <vector>

namespace twistheight {

inline constexpr unsigned default_precision = 128;
inline constexpr unsigned min_precision = 64;
inline constexpr unsigned guard_bits = 32;

inline unsigned working_precision(unsigned precision) { return precision + guard_bits; }

class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t prec = working_precision(default_precision));
    BigFloat(long v, mpfr_prec_t prec);
    BigFloat(const ExactInt &v, mpfr_prec_t prec);
    BigFloat(const ExactRational &v, mpfr_prec_t prec);
    static BigFloat from_string(const std::string &s, mpfr_prec_t prec);
    static BigFloat from_double(double d, mpfr_prec_t prec);
    static BigFloat pi(mpfr_prec_t prec);
    static BigFloat log2(mpfr_prec_t prec);
    /// 2^e
    static BigFloat exp2(long e, mpfr_prec_t prec);

    BigFloat(const BigFloat &o);
    BigFloat(BigFloat &&o) noexcept;
    BigFloat &operator=(const BigFloat &o);
    BigFloat &operator=(BigFloat &&o) noexcept;
    ~BigFloat();

    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    /// Same value rounded to a new precision.
    BigFloat with_precision(mpfr_prec_t prec) const;

    mpfr_srcptr get() const { return v_; }
    mpfr_ptr get() { return v_; }

    int sign() const { return mpfr_sgn(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long exponent() const;  // e with 2^(e-1) <= |x| < 2^e; LONG_MIN for 0

    /// Fixed significant digits, scientific when very large or small.
    std::string to_string(int digits) const;
    /// Digits justified by `precision` bits with 16 bits held back.
    std::string to_string_for(unsigned precision) const;
    /// floor as an integer
    ExactInt floor_int() const;

    BigFloat &operator+=(const BigFloat &o);
    BigFloat &operator-=(const BigFloat &o);
    BigFloat &operator*=(const BigFloat &o);
    BigFloat &operator/=(const BigFloat &o);
    BigFloat &operator*=(long k);
    BigFloat &operator/=(long k);
    BigFloat operator-() const;

    friend BigFloat operator+(BigFloat a, const BigFloat &b) { return a += b; }
    friend BigFloat operator-(BigFloat a, const BigFloat &b) { return a -= b; }
    friend BigFloat operator*(BigFloat a, const BigFloat &b) { return a *= b; }
    friend BigFloat operator/(BigFloat a, const BigFloat &b) { return a /= b; }
    friend BigFloat operator*(BigFloat a, long k) { return a *= k; }
    friend BigFloat operator*(long k, BigFloat a) { return a *= k; }
    friend BigFloat operator/(BigFloat a, long k) { return a /= k; }

    friend bool operator<(const BigFloat &a, const BigFloat &b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const BigFloat &a, const BigFloat &b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const BigFloat &a, const BigFloat &b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const BigFloat &a, const BigFloat &b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
    friend bool operator==(const BigFloat &a, const BigFloat &b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

private:
    mpfr_t v_;
};

BigFloat abs(const BigFloat &x);
BigFloat sqrt(const BigFloat &x);
BigFloat log(const BigFloat &x);
BigFloat exp(const BigFloat &x);
BigFloat sin(const BigFloat &x);
BigFloat cos(const BigFloat &x);
BigFloat atan2(const BigFloat &y, const BigFloat &x);
BigFloat pow(const BigFloat &x, const BigFloat &e);
BigFloat pow(const BigFloat &x, unsigned long e);
BigFloat max(const BigFloat &a, const BigFloat &b);
BigFloat min(const BigFloat &a, const BigFloat &b);
/// log|n| for a nonzero integer, without overflow for huge n.
BigFloat log_abs(const ExactInt &n, mpfr_prec_t prec);
BigFloat log_abs(const ExactRational &r, mpfr_prec_t prec);

struct BigComplex {
    BigFloat re;
    BigFloat im;

    BigComplex() = default;
    BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}
    explicit BigComplex(const BigFloat &r) : re(r), im(0, r.precision()) {}

    mpfr_prec_t precision() const { return std::max(re.precision(), im.precision()); }

    BigComplex &operator+=(const BigComplex &o);
    BigComplex &operator-=(const BigComplex &o);
    BigComplex &operator*=(const BigComplex &o);
    BigComplex &operator/=(const BigComplex &o);
    BigComplex operator-() const { return {-re, -im}; }

    friend BigComplex operator+(BigComplex a, const BigComplex &b) { return a += b; }
    friend BigComplex operator-(BigComplex a, const BigComplex &b) { return a -= b; }
    friend BigComplex operator*(BigComplex a, const BigComplex &b) { return a *= b; }
    friend BigComplex operator/(BigComplex a, const BigComplex &b) { return a /= b; }
    friend BigComplex operator*(BigComplex a, const BigFloat &k) {
        a.re *= k;
        a.im *= k;
        return a;
    }
    friend BigComplex operator/(BigComplex a, const BigFloat &k) {
        a.re /= k;
        a.im /= k;
        return a;
    }
};

BigFloat abs(const BigComplex &z);
BigComplex conj(const BigComplex &z);
/// Principal square root: nonnegative real part, ties to nonnegative imaginary part.
BigComplex sqrt(const BigComplex &z);
BigComplex exp(const BigComplex &z);

/// Arithmetic-geometric mean to 2^-(precision+16) relative accuracy. Real
/// inputs must share a sign. Throws math_error(precision) if the iteration
/// has not settled within 8 * precision steps.
BigFloat agm(const BigFloat &a, const BigFloat &b, unsigned precision);

/// Complex AGM. Each new geometric mean is the square root of a*b with
/// Re(b'/a') >= 0 (ties: Im(b'/a') >= 0).
BigComplex agm(const BigComplex &a, const BigComplex &b, unsigned precision);

/// Carlson's symmetric integral R_F(x, y, z) = 1/2 int_0^inf dt / sqrt((t+x)(t+y)(t+z)),
/// by duplication. Arguments off the closed negative real axis, at most one zero.
BigComplex carlson_rf(const BigComplex &x, const BigComplex &y, const BigComplex &z, unsigned precision);

/// Roots of the monic cubic x^3 + c2 x^2 + c1 x + c0 (exact integer or
/// rational coefficients). Real roots come back sorted descending; when only
/// one root is real, `complex_pair` holds the conjugate pair (positive
/// imaginary part first).
struct CubicRoots {
    std::vector<BigFloat> real;
    std::vector<BigComplex> complex_pair;
};

CubicRoots cubic_roots(const ExactRational &c2, const ExactRational &c1, const ExactRational &c0, unsigned precision);

} // namespace twistheight
