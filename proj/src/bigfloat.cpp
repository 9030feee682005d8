#include "twistheight/bigfloat.hpp"

#include "twistheight/errors.hpp"

#include <climits>
#include <cmath>
#include <memory>

namespace twistheight {

BigFloat::BigFloat(mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(long v, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_si(v_, v, MPFR_RNDN);
}

BigFloat::BigFloat(const ExactInt &v, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_z(v_, v.get_mpz_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const ExactRational &v, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, v.get_mpq_t(), MPFR_RNDN);
}

BigFloat BigFloat::from_string(const std::string &s, mpfr_prec_t prec) {
    BigFloat r(prec);
    if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
        throw math_error(error_kind::domain, "bad decimal '" + s + "'");
    return r;
}

BigFloat BigFloat::from_double(double d, mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_set_d(r.v_, d, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::pi(mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::log2(mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_const_log2(r.v_, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::exp2(long e, mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
    return r;
}

BigFloat::BigFloat(const BigFloat &o) {
    mpfr_init2(v_, o.precision());
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat &&o) noexcept {
    // leave `o` valid but tiny
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
}

BigFloat &BigFloat::operator=(const BigFloat &o) {
    if (this != &o) {
        mpfr_set_prec(v_, o.precision());
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
}

BigFloat &BigFloat::operator=(BigFloat &&o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

BigFloat BigFloat::with_precision(mpfr_prec_t prec) const {
    BigFloat r(prec);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
}

long BigFloat::exponent() const {
    if (is_zero())
        return LONG_MIN;
    return mpfr_get_exp(v_);
}

std::string BigFloat::to_string(int digits) const {
    if (!is_finite())
        return mpfr_nan_p(v_) ? "nan" : (sign() > 0 ? "inf" : "-inf");
    std::unique_ptr<char, void (*)(char *)> buf(nullptr, mpfr_free_str);
    char *raw = nullptr;
    // %.*Rg trims trailing zeros; keep a fixed mantissa width instead
    mpfr_asprintf(&raw, "%.*Re", digits - 1, v_);
    buf.reset(raw);
    return std::string(buf.get());
}

std::string BigFloat::to_string_for(unsigned precision) const {
    int digits = static_cast<int>(std::floor((static_cast<double>(precision) - 16.0) * 0.30102999566398120));
    return to_string(std::max(digits, 6));
}

ExactInt BigFloat::floor_int() const {
    if (!is_finite())
        throw math_error(error_kind::domain, "floor of a non-finite value");
    ExactInt z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDD);
    return z;
}

namespace {
mpfr_prec_t join(const BigFloat &a, const BigFloat &b) { return std::max(a.precision(), b.precision()); }
} // namespace

BigFloat &BigFloat::operator+=(const BigFloat &o) {
    if (o.precision() > precision())
        mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

BigFloat &BigFloat::operator-=(const BigFloat &o) {
    if (o.precision() > precision())
        mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

BigFloat &BigFloat::operator*=(const BigFloat &o) {
    if (o.precision() > precision())
        mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

BigFloat &BigFloat::operator/=(const BigFloat &o) {
    if (o.precision() > precision())
        mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

BigFloat &BigFloat::operator*=(long k) {
    mpfr_mul_si(v_, v_, k, MPFR_RNDN);
    return *this;
}

BigFloat &BigFloat::operator/=(long k) {
    mpfr_div_si(v_, v_, k, MPFR_RNDN);
    return *this;
}

BigFloat BigFloat::operator-() const {
    BigFloat r(*this);
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
}

#define TWH_UNARY(name, fn)                          \
    BigFloat name(const BigFloat &x) {               \
        BigFloat r(x.precision());                   \
        fn(r.get(), x.get(), MPFR_RNDN);             \
        return r;                                    \
    }

TWH_UNARY(abs, mpfr_abs)
TWH_UNARY(sqrt, mpfr_sqrt)
TWH_UNARY(log, mpfr_log)
TWH_UNARY(exp, mpfr_exp)
TWH_UNARY(sin, mpfr_sin)
TWH_UNARY(cos, mpfr_cos)

#undef TWH_UNARY

BigFloat atan2(const BigFloat &y, const BigFloat &x) {
    BigFloat r(join(x, y));
    mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
    return r;
}

BigFloat pow(const BigFloat &x, const BigFloat &e) {
    BigFloat r(join(x, e));
    mpfr_pow(r.get(), x.get(), e.get(), MPFR_RNDN);
    return r;
}

BigFloat pow(const BigFloat &x, unsigned long e) {
    BigFloat r(x.precision());
    mpfr_pow_ui(r.get(), x.get(), e, MPFR_RNDN);
    return r;
}

BigFloat max(const BigFloat &a, const BigFloat &b) { return a < b ? b : a; }
BigFloat min(const BigFloat &a, const BigFloat &b) { return b < a ? b : a; }

BigFloat log_abs(const ExactInt &n, mpfr_prec_t prec) {
    if (n == 0)
        throw math_error(error_kind::domain, "log of zero");
    // mpfr_set_z may overflow the exponent range only for absurd sizes; MPFR's
    // default exponent range covers ~2^62 bits, so a direct conversion is fine
    BigFloat v(ExactInt(abs(n)), prec);
    return log(v);
}

BigFloat log_abs(const ExactRational &r, mpfr_prec_t prec) {
    return log_abs(ExactInt(r.get_num()), prec) - log_abs(ExactInt(r.get_den()), prec);
}

BigComplex &BigComplex::operator+=(const BigComplex &o) {
    re += o.re;
    im += o.im;
    return *this;
}

BigComplex &BigComplex::operator-=(const BigComplex &o) {
    re -= o.re;
    im -= o.im;
    return *this;
}

BigComplex &BigComplex::operator*=(const BigComplex &o) {
    BigFloat r = re * o.re - im * o.im;
    BigFloat i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

BigComplex &BigComplex::operator/=(const BigComplex &o) {
    BigFloat den = o.re * o.re + o.im * o.im;
    if (den.is_zero())
        throw math_error(error_kind::domain, "complex division by zero");
    BigFloat r = (re * o.re + im * o.im) / den;
    BigFloat i = (im * o.re - re * o.im) / den;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

BigFloat abs(const BigComplex &z) {
    BigFloat r(z.precision());
    mpfr_hypot(r.get(), z.re.get(), z.im.get(), MPFR_RNDN);
    return r;
}

BigComplex conj(const BigComplex &z) { return {z.re, -z.im}; }

BigComplex sqrt(const BigComplex &z) {
    const mpfr_prec_t prec = z.precision();
    if (z.im.is_zero()) {
        if (z.re.sign() >= 0)
            return {sqrt(z.re), BigFloat(0, prec)};
        return {BigFloat(0, prec), sqrt(-z.re)};
    }
    BigFloat m = abs(z);
    BigFloat r = sqrt((m + z.re) / 2);
    BigFloat i = z.im / (r * 2);
    return {r, i};
}

BigComplex exp(const BigComplex &z) {
    BigFloat m = exp(z.re);
    return {m * cos(z.im), m * sin(z.im)};
}

namespace {

bool settled(const BigFloat &diff, const BigFloat &scale, unsigned precision) {
    if (diff.is_zero())
        return true;
    if (scale.is_zero())
        return false;
    return diff.exponent() - scale.exponent() < -static_cast<long>(precision + 16);
}

} // namespace

BigFloat agm(const BigFloat &a0, const BigFloat &b0, unsigned precision) {
    if (a0.is_zero() || b0.is_zero())
        throw math_error(error_kind::domain, "agm of zero");
    if (a0.sign() != b0.sign())
        throw math_error(error_kind::domain, "real agm needs arguments of one sign");
    const mpfr_prec_t wp = std::max<mpfr_prec_t>(working_precision(precision), std::max(a0.precision(), b0.precision()));
    BigFloat a = a0.with_precision(wp), b = b0.with_precision(wp);
    const int s = a.sign();
    if (s < 0) {
        a = -a;
        b = -b;
    }
    for (unsigned it = 0; it < 8 * precision; ++it) {
        if (settled(abs(a - b), a, precision))
            return s < 0 ? -a : a;
        BigFloat next_a = (a + b) / 2;
        b = sqrt(a * b);
        a = std::move(next_a);
    }
    throw math_error(error_kind::precision, "agm did not converge");
}

BigComplex agm(const BigComplex &a0, const BigComplex &b0, unsigned precision) {
    const mpfr_prec_t wp = std::max<mpfr_prec_t>(working_precision(precision), std::max(a0.precision(), b0.precision()));
    BigComplex a{a0.re.with_precision(wp), a0.im.with_precision(wp)};
    BigComplex b{b0.re.with_precision(wp), b0.im.with_precision(wp)};
    if (abs(a).is_zero() || abs(b).is_zero())
        throw math_error(error_kind::domain, "agm of zero");
    for (unsigned it = 0; it < 8 * precision; ++it) {
        if (settled(abs(a - b), abs(a), precision))
            return a;
        BigComplex next_a = (a + b) / BigFloat(2, wp);
        BigComplex g = sqrt(a * b);
        // Re(g / next_a) >= 0  <=>  Re(g * conj(next_a)) >= 0
        BigComplex ratio = g * conj(next_a);
        if (ratio.re.sign() < 0 || (ratio.re.is_zero() && ratio.im.sign() < 0))
            g = -g;
        a = std::move(next_a);
        b = std::move(g);
    }
    throw math_error(error_kind::precision, "complex agm did not converge");
}

BigComplex carlson_rf(const BigComplex &x0, const BigComplex &y0, const BigComplex &z0, unsigned precision) {
    const mpfr_prec_t wp = std::max<mpfr_prec_t>(working_precision(precision),
                                                 std::max({x0.precision(), y0.precision(), z0.precision()}));
    auto lift = [wp](const BigComplex &c) { return BigComplex{c.re.with_precision(wp), c.im.with_precision(wp)}; };
    BigComplex x = lift(x0), y = lift(y0), z = lift(z0);
    const BigFloat three(3, wp), four(4, wp);
    BigComplex a0 = (x + y + z) / three;
    BigComplex an = a0;
    BigFloat spread = max(max(abs(a0 - x), abs(a0 - y)), abs(a0 - z));
    // Taylor tail after the loop is O(Q^8); stop once Q^8 < 2^-(precision+16)
    const BigFloat tol = BigFloat::exp2(-static_cast<long>((precision + 16) / 8 + 2), wp);
    BigFloat mul(1, wp);
    for (unsigned it = 0; it < 8 * precision; ++it) {
        if (spread < tol * mul * abs(an)) {
            BigComplex xx = (a0 - lift(x0)) / (an * mul);
            BigComplex yy = (a0 - lift(y0)) / (an * mul);
            BigComplex zz = -(xx + yy);
            BigComplex e2 = xx * yy - zz * zz;
            BigComplex e3 = xx * yy * zz;
            // DLMF 19.36.1 through degree 7
            BigComplex one{BigFloat(1, wp), BigFloat(0, wp)};
            BigComplex poly = one - e2 / BigFloat(10, wp) + e3 / BigFloat(14, wp) + e2 * e2 / BigFloat(24, wp) -
                              e2 * e3 * BigComplex(BigFloat(3, wp)) / BigFloat(44, wp) -
                              e2 * e2 * e2 * BigComplex(BigFloat(5, wp)) / BigFloat(208, wp) +
                              e3 * e3 * BigComplex(BigFloat(3, wp)) / BigFloat(104, wp) +
                              e2 * e2 * e3 / BigFloat(16, wp);
            return poly / sqrt(an);
        }
        BigComplex sx = sqrt(x), sy = sqrt(y), sz = sqrt(z);
        BigComplex lam = sx * sy + sy * sz + sz * sx;
        an = (an + lam) / four;
        x = (x + lam) / four;
        y = (y + lam) / four;
        z = (z + lam) / four;
        mul *= four;
    }
    throw math_error(error_kind::precision, "carlson_rf did not converge");
}

namespace {

BigFloat eval_cubic(const BigFloat &x, const BigFloat &c2, const BigFloat &c1, const BigFloat &c0) {
    return ((x + c2) * x + c1) * x + c0;
}

BigFloat bisect_root(BigFloat lo, BigFloat hi, const BigFloat &c2, const BigFloat &c1, const BigFloat &c0,
                     unsigned precision) {
    const mpfr_prec_t wp = lo.precision();
    int slo = eval_cubic(lo, c2, c1, c0).sign();
    for (int it = 0; it < 100000; ++it) {
        BigFloat mid = (lo + hi) / 2;
        BigFloat width = hi - lo;
        BigFloat scale = max(max(abs(lo), abs(hi)), BigFloat(1, wp));
        if (settled(width, scale, precision + 8) || mid == lo || mid == hi)
            return mid;
        int sm = eval_cubic(mid, c2, c1, c0).sign();
        if (sm == 0)
            return mid;
        if (sm == slo)
            lo = std::move(mid);
        else
            hi = std::move(mid);
    }
    throw math_error(error_kind::precision, "cubic root bisection did not converge");
}

} // namespace

CubicRoots cubic_roots(const ExactRational &c2q, const ExactRational &c1q, const ExactRational &c0q,
                       unsigned precision) {
    const mpfr_prec_t wp = working_precision(precision) + 32;
    ExactRational disc = c2q * c2q * c1q * c1q - 4 * c1q * c1q * c1q - 4 * c2q * c2q * c2q * c0q - 27 * c0q * c0q +
                         18 * c2q * c1q * c0q;
    if (disc == 0)
        throw math_error(error_kind::singular_curve, "cubic has a repeated root");
    BigFloat c2(c2q, wp), c1(c1q, wp), c0(c0q, wp);
    // Cauchy bound
    BigFloat bound = max(max(abs(c2), abs(c1)), abs(c0)) + BigFloat(1, wp);
    CubicRoots out;
    if (disc > 0) {
        // critical points (-c2 -+ sqrt(c2^2 - 3 c1)) / 3 are real and separate the roots
        BigFloat s = sqrt(c2 * c2 - c1 * 3);
        BigFloat lo_crit = (-c2 - s) / 3, hi_crit = (-c2 + s) / 3;
        out.real.push_back(bisect_root(hi_crit, bound, c2, c1, c0, precision));
        out.real.push_back(bisect_root(lo_crit, hi_crit, c2, c1, c0, precision));
        out.real.push_back(bisect_root(-bound, lo_crit, c2, c1, c0, precision));
        return out;
    }
    // one sign change on the whole line
    BigFloat e = bisect_root(-bound, bound, c2, c1, c0, precision);
    out.real.push_back(e);
    // x^2 + b x + c = cubic / (x - e)
    BigFloat b = c2 + e;
    BigFloat c = c1 + e * b;
    BigFloat d = c * 4 - b * b;  // > 0
    BigFloat re = -b / 2;
    BigFloat im = sqrt(abs(d)) / 2;
    out.complex_pair.push_back({re, im});
    out.complex_pair.push_back({re, -im});
    return out;
}

} // namespace twistheight
