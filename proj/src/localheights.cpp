#include "twistheight/localheights.hpp"

#include "twistheight/errors.hpp"

#include <algorithm>
#include <climits>
#include <set>
#include <sstream>

namespace twistheight {

const char *to_string(lattice_shape s) { return s == lattice_shape::rectangular ? "rectangular" : "rhombic"; }

const char *to_string(local_case c) {
    switch (c) {
    case local_case::good: return "good";
    case local_case::unbounded_denominator: return "unbounded_denominator";
    case local_case::multiplicative: return "multiplicative";
    case local_case::additive_psi3: return "additive_psi3";
    case local_case::additive_psi2: return "additive_psi2";
    }
    return "?";
}

const char *to_string(arch_method m) { return m == arch_method::theta ? "theta" : "tate"; }

namespace {

ExactRational rat(const ExactInt &n, long d) {
    ExactRational r(n, d);
    r.canonicalize();
    return r;
}

BigFloat two_pi(mpfr_prec_t wp) { return BigFloat::pi(wp) * 2; }

} // namespace

PeriodData periods(const WeierstrassModel &e, unsigned precision) {
    const mpfr_prec_t wp = working_precision(precision);
    PeriodData pd;
    pd.precision = precision;
    pd.roots = cubic_roots(rat(e.b2(), 4), rat(e.b4(), 2), rat(e.b6(), 4), precision);
    const BigFloat pi = BigFloat::pi(wp);
    const BigFloat zero(0, wp);
    if (e.discriminant() < 0) {
        const BigFloat &e1 = pd.roots.real.at(0);
        BigFloat b2(e.b2(), wp), b4(e.b4(), wp);
        BigFloat a = 3 * e1 + b2 / 4;
        BigFloat b = sqrt(3 * e1 * e1 + b2 / 2 * e1 + b4 / 2);
        BigFloat s = 2 * sqrt(b);
        pd.omega1 = 2 * pi / agm(s, sqrt(2 * b + a), precision);
        BigFloat im2 = pi / agm(s, sqrt(2 * b - a), precision);
        pd.omega2 = BigComplex(-pd.omega1 / 2, im2);
        pd.q = BigComplex(-exp(-(2 * pi * im2) / pd.omega1), zero);
        pd.shape = lattice_shape::rhombic;
    } else {
        const BigFloat &e1 = pd.roots.real.at(0), &e2 = pd.roots.real.at(1), &e3 = pd.roots.real.at(2);
        BigFloat s = sqrt(e1 - e3);
        pd.omega1 = pi / agm(s, sqrt(e1 - e2), precision);
        BigFloat im2 = pi / agm(s, sqrt(e2 - e3), precision);
        pd.omega2 = BigComplex(zero, im2);
        pd.q = BigComplex(exp(-(2 * pi * im2) / pd.omega1), zero);
        pd.shape = lattice_shape::rectangular;
    }
    return pd;
}

BigFloat omega_for_twist(const PeriodData &pd, int d_sign, int disc_sign) {
    if (d_sign == 0 || disc_sign == 0)
        throw math_error(error_kind::domain, "omega_for_twist needs nonzero signs");
    if (d_sign > 0)
        return pd.omega1;
    if (disc_sign > 0)
        return pd.omega2.im;
    return pd.omega2.im * 2;
}

namespace {

bool on_egg(const PeriodData &pd, const BigFloat &x) {
    if (pd.shape != lattice_shape::rectangular)
        return false;
    return x < (pd.roots.real[0] + pd.roots.real[1]) / 2;
}

// z in (0, omega1/2] with x(z) = x, for x on the identity component
BigFloat half_log(const PeriodData &pd, const BigFloat &x, unsigned precision) {
    BigComplex bx(x);
    BigComplex u1(x - pd.roots.real[0]), u2, u3;
    if (pd.shape == lattice_shape::rectangular) {
        u2 = BigComplex(x - pd.roots.real[1]);
        u3 = BigComplex(x - pd.roots.real[2]);
    } else {
        u2 = bx - pd.roots.complex_pair[0];
        u3 = bx - pd.roots.complex_pair[1];
    }
    // rounding can push x - e1 a hair below zero right at a root
    if (u1.re.sign() < 0)
        u1.re = BigFloat(0, u1.re.precision());
    return carlson_rf(u1, u2, u3, precision).re;
}

void require_real_affine(const WeierstrassModel &e, const CurvePoint &q, const char *what) {
    if (q.is_infinity())
        throw math_error(error_kind::domain, std::string(what) + " is undefined at the point at infinity");
    if (!e.contains(q.x(), q.y()))
        throw math_error(error_kind::point_not_on_curve, "point " + q.to_string() + " is not on " + e.to_string());
    if (is_two_torsion(e, q))
        throw math_error(error_kind::domain, std::string(what) + " is undefined for the 2-torsion point " + q.to_string());
}

ExactRational psi2_of(const WeierstrassModel &e, const CurvePoint &q) {
    return 2 * q.y() + ExactRational(e.a1()) * q.x() + ExactRational(e.a3());
}

} // namespace

BigFloat elliptic_log(const WeierstrassModel &e, const CurvePoint &q, const PeriodData &pd) {
    require_real_affine(e, q, "elliptic log");
    const mpfr_prec_t wp = working_precision(pd.precision);
    BigFloat x(q.x(), wp);
    if (on_egg(pd, x))
        throw math_error(error_kind::domain, "point lies on the bounded real component");
    BigFloat z = half_log(pd, x, pd.precision);
    if (sgn(psi2_of(e, q)) > 0)
        z = pd.omega1 - z;
    return z;
}

namespace {

struct ThetaTry {
    BigFloat value;
    long theta_exponent;
    bool near_half;  // u close to 1/2, where sin(4 pi u) cancels
};

ThetaTry theta_once(const WeierstrassModel &e, const CurvePoint &q, const PeriodData &pd) {
    const unsigned precision = pd.precision;
    const mpfr_prec_t wp = working_precision(precision);
    BigFloat x(q.x(), wp);
    // lambda(-Q) = lambda(Q) and theta(1 - u) = -theta(u), so the branch of z is irrelevant
    BigFloat u = half_log(pd, x, precision) / pd.omega1;
    BigFloat qr = pd.q.re;
    BigFloat aq = abs(qr);
    BigFloat cutoff = BigFloat::exp2(-static_cast<long>(precision + 16), wp);
    BigFloat theta(0, wp);
    BigFloat arg = two_pi(wp) * u;
    BigFloat qpow(1, wp);  // q^(n(n+1)/2)
    for (long n = 0;; ++n) {
        BigFloat term = qpow * sin(arg * (2 * n + 1));
        if (n % 2)
            theta -= term;
        else
            theta += term;
        if (abs(qpow) < cutoff)
            break;
        if (n > 64L * static_cast<long>(precision))
            throw math_error(error_kind::precision, "theta series did not converge");
        for (long k = 0; k < n + 1; ++k)
            qpow *= qr;
    }
    if (abs(theta) > BigFloat(1, wp) / (BigFloat(1, wp) - aq))
        throw math_error(error_kind::precision, "theta exceeds 1/(1-|q|); periods are inaccurate");
    bool near_half = u > BigFloat(1, wp) / 4;
    if (theta.is_zero())
        return {theta, LONG_MIN, near_half};
    ExactRational p2 = psi2_of(e, q);
    BigFloat half_psi2 = BigFloat(p2, wp) / 2;
    BigFloat lam = log(abs(BigFloat(e.discriminant(), wp) / qr)) / 16 +
                   log(abs(half_psi2 * half_psi2 * pd.omega1 / two_pi(wp))) / 4 - log(abs(theta)) / 2;
    return {lam, theta.exponent(), near_half};
}

BigFloat theta_affine(const WeierstrassModel &e, const CurvePoint &q, const PeriodData &pd, bool may_retry = true) {
    ThetaTry t = theta_once(e, q, pd);
    // sin near a multiple of pi loses about -log2|theta| bits; redo with those bits added
    if (t.near_half && t.theta_exponent < -16) {
        if (!may_retry || t.theta_exponent == LONG_MIN)
            throw math_error(error_kind::precision, "point too close to 2-torsion for the requested precision");
        long extra = -t.theta_exponent;
        unsigned hp = pd.precision + static_cast<unsigned>(extra) + 16;
        if (hp > 64 * pd.precision)
            throw math_error(error_kind::precision, "point too close to 2-torsion for the requested precision");
        PeriodData hpd = periods(e, hp);
        return theta_affine(e, q, hpd, false).with_precision(working_precision(pd.precision));
    }
    return t.value;
}

} // namespace

BigFloat arch_local_height_theta(const WeierstrassModel &e, const CurvePoint &q, const PeriodData &pd,
                                 unsigned precision) {
    require_real_affine(e, q, "archimedean height");
    PeriodData local;
    const PeriodData *use = &pd;
    if (pd.precision < precision) {
        local = periods(e, precision);
        use = &local;
    }
    const mpfr_prec_t wp = working_precision(use->precision);
    if (on_egg(*use, BigFloat(q.x(), wp))) {
        if (!e.is_short())
            throw math_error(error_kind::domain, "bounded-component points need a model with a1 = a3 = 0");
        CurvePoint q2 = double_point(e, q);
        BigFloat l2 = theta_affine(e, q2, *use);
        return (l2 + 2 * log_abs(psi2_of(e, q), wp)) / 4;
    }
    return theta_affine(e, q, *use);
}

BigFloat arch_local_height_tate(const WeierstrassModel &e, const CurvePoint &q, unsigned precision, bool auto_shift) {
    require_real_affine(e, q, "archimedean height");
    const mpfr_prec_t wp = working_precision(precision);
    ExactInt r = 0;
    if (auto_shift) {
        CubicRoots roots = cubic_roots(rat(e.b2(), 4), rat(e.b4(), 2), rat(e.b6(), 4), precision);
        const BigFloat &lowest = roots.real.back();
        if (lowest < BigFloat(1, wp))
            r = lowest.floor_int() - 1;
    }
    ShiftedModel s = shift_model(e, r);
    const WeierstrassModel &m = s.model;
    const BigFloat b2(m.b2(), wp), b4(m.b4(), wp), b6(m.b6(), wp), b8(m.b8(), wp);
    BigFloat x(q.x() - ExactRational(r), wp);
    if (x.is_zero())
        throw math_error(error_kind::hypothesis, "series precondition violated; use theta method");
    BigFloat sum = log(abs(x));
    BigFloat w = BigFloat(1, wp) / 4;
    // Terms are 4^-(i+1) log z; stop once 4^-n is 16 bits below the target.
    const long terms = static_cast<long>(precision + 16) / 2 + 9;
    for (long i = 0; i < terms; ++i) {
        BigFloat x2 = x * x;
        BigFloat num = x2 * x2 - b4 * x2 - 2 * b6 * x - b8;
        BigFloat z = num / (x2 * x2);
        if (z.sign() <= 0)
            throw math_error(error_kind::hypothesis, "series precondition violated; use theta method");
        sum += w * log(z);
        w /= 4;
        BigFloat den = ((4 * x + b2) * x + 2 * b4) * x + b6;
        if (den.is_zero())
            throw math_error(error_kind::hypothesis, "series precondition violated; use theta method");
        x = num / den;
    }
    return sum;
}

namespace {

long val_or_inf(const ExactRational &v, const ExactInt &p) { return v == 0 ? infinite_valuation : valuation(v, p); }

} // namespace

namespace {

// Is there an integral model with u = p? For p >= 5 the c4/c6 valuations
// decide it; at 2 and 3 we search r mod p^2, s mod p, t mod p^3.
bool reducible_at(const WeierstrassModel &e, const ExactInt &p) {
    auto vv = [&](const ExactInt &n) { return n == 0 ? infinite_valuation : static_cast<long>(valuation(n, p)); };
    if (vv(e.c4()) < 4 || vv(e.c6()) < 6)
        return false;
    if (p >= 5)
        return true;
    const ExactInt &a1 = e.a1(), &a2 = e.a2(), &a3 = e.a3(), &a4 = e.a4(), &a6 = e.a6();
    const ExactInt u2 = p * p, u3 = u2 * p, u4 = u2 * u2, u6 = u3 * u3;
    for (ExactInt r = 0; r < u2; ++r)
        for (ExactInt s = 0; s < p; ++s) {
            if ((a1 + 2 * s) % p != 0 || (a2 - s * a1 + 3 * r - s * s) % u2 != 0)
                continue;
            for (ExactInt t = 0; t < u3; ++t) {
                if ((a3 + r * a1 + 2 * t) % u3 != 0)
                    continue;
                if ((a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) % u4 != 0)
                    continue;
                if ((a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) % u6 != 0)
                    continue;
                return true;
            }
        }
    return false;
}

} // namespace

void require_minimal_at(const WeierstrassModel &e, const ExactInt &p) {
    long n = static_cast<long>(valuation(e.discriminant(), p));
    if (n < 12 || !reducible_at(e, p))
        return;
    std::ostringstream os;
    os << "model " << e.to_string() << " is not minimal at p = " << p << " (v_p(Delta) = " << n
       << "); supply a minimal model";
    throw math_error(error_kind::hypothesis, os.str());
}

LocalEntry nonarch_local_height(const WeierstrassModel &e, const CurvePoint &q, const ExactInt &p, unsigned precision) {
    if (q.is_infinity())
        throw math_error(error_kind::domain, "local height is undefined at the point at infinity");
    if (p < 2)
        throw math_error(error_kind::domain, "not a prime");
    require_minimal_at(e, p);
    const mpfr_prec_t wp = working_precision(precision);
    LocalEntry out;
    out.p = p;
    const ExactRational x = q.x();
    long vx = val_or_inf(x, p);
    DivisionPolyValues v = division_poly_values(e, q);
    out.A = val_or_inf(v.psi0, p);
    out.B = val_or_inf(v.psi2, p);
    out.C = val_or_inf(v.psi3, p);
    out.N = static_cast<long>(valuation(e.discriminant(), p));
    if (vx < 0) {
        out.kind = local_case::unbounded_denominator;
        out.coefficient = -vx;
    } else if (out.A <= 0 || out.B <= 0 || out.N == 0) {
        out.kind = local_case::good;
        out.coefficient = 0;
    } else if (e.c4() % p != 0) {
        out.kind = local_case::multiplicative;
        ExactRational n = std::min(ExactRational(out.B), ExactRational(out.N, 2));
        out.coefficient = -n * (out.N - n) / out.N;
    } else if (out.C >= 3 * out.B) {
        out.kind = local_case::additive_psi2;
        out.coefficient = ExactRational(-2 * out.B, 3);
    } else {
        out.kind = local_case::additive_psi3;
        out.coefficient = ExactRational(-out.C, 4);
    }
    out.coefficient.canonicalize();
    out.value = BigFloat(out.coefficient, wp) * log(BigFloat(p, wp));
    return out;
}

BigFloat LocalHeightBreakdown::total() const {
    BigFloat s = archimedean;
    for (const auto &entry : entries)
        s += entry.value;
    return s;
}

namespace {

// Removes every listed prime from n.
ExactInt strip(ExactInt n, const std::vector<ExactInt> &primes) {
    for (const auto &p : primes)
        while (n % p == 0)
            n /= p;
    return n;
}

ExactInt gcd3(const ExactInt &a, const ExactInt &b, const ExactInt &c) {
    ExactInt g = gcd(a, b);
    return gcd(g, c);
}

} // namespace

CanonicalHeight canonical_height(const WeierstrassModel &e, const CurvePoint &q, unsigned precision,
                                 const HeightOptions &opts) {
    return canonical_height(e, q, periods(e, precision), precision, opts);
}

CanonicalHeight canonical_height(const WeierstrassModel &e, const CurvePoint &q, const PeriodData &pd,
                                 unsigned precision, const HeightOptions &opts) {
    if (!e.is_short())
        throw math_error(error_kind::domain, "canonical height needs a model with a1 = a3 = 0");
    if (q.is_infinity())
        throw math_error(error_kind::domain, "canonical height of the point at infinity is 0 by definition; pass an affine point");
    const mpfr_prec_t wp = working_precision(precision);
    CanonicalHeight out;
    out.breakdown.precision = precision;
    out.breakdown.archimedean = BigFloat(0, wp);
    if (auto ord = torsion_order(e, q)) {
        out.breakdown.torsion = true;
        out.breakdown.torsion_order = ord;
        out.value = BigFloat(0, wp);
        return out;
    }

    if (opts.method == arch_method::tate) {
        out.breakdown.archimedean = arch_local_height_tate(e, q, precision);
        out.breakdown.method = arch_method::tate;
    } else {
        try {
            out.breakdown.archimedean = arch_local_height_theta(e, q, pd, precision);
            out.breakdown.method = arch_method::theta;
        } catch (const math_error &err) {
            if (opts.method || err.kind() != error_kind::precision)
                throw;
            out.breakdown.archimedean = arch_local_height_tate(e, q, precision);
            out.breakdown.method = arch_method::tate;
        }
    }

    Factorization fd = opts.discriminant_factors ? *opts.discriminant_factors
                                                 : factor(abs(e.discriminant()), opts.trial_bound, opts.rho_budget);
    if (abs(fd.value()) != abs(e.discriminant()))
        throw math_error(error_kind::domain, "supplied factorization does not match the discriminant");
    std::vector<ExactInt> disc_primes;
    for (const auto &pp : fd.factors)
        disc_primes.push_back(pp.prime);

    Factorization fdelta = factor(q.delta(), opts.trial_bound, opts.rho_budget);
    std::vector<ExactInt> delta_primes;
    for (const auto &pp : fdelta.factors)
        delta_primes.push_back(pp.prime);
    std::set<ExactInt> primes(disc_primes.begin(), disc_primes.end());
    primes.insert(delta_primes.begin(), delta_primes.end());
    ExactInt delta_rest = strip(fdelta.unfactored, disc_primes);
    for (const auto &p : disc_primes)
        if (fdelta.unfactored % p == 0)
            primes.insert(p);

    for (const auto &p : primes)
        out.breakdown.entries.push_back(nonarch_local_height(e, q, p, precision));

    // All primes of an unsplit delta cofactor fall under the denominator case, sum 2 log c.
    if (delta_rest != 1) {
        LocalEntry agg;
        agg.p = delta_rest;
        agg.aggregated = true;
        agg.kind = local_case::unbounded_denominator;
        agg.coefficient = 2;
        agg.value = 2 * log(BigFloat(delta_rest, wp));
        out.breakdown.entries.push_back(agg);
    }
    // An unsplit discriminant cofactor is harmless when it shares no prime with
    // the singular locus at q nor with c4, c6 (so minimality and the good case are certain).
    if (!fd.complete()) {
        ExactInt c = strip(strip(fd.unfactored, disc_primes), delta_primes);
        if (gcd(c, q.delta()) != 1)
            throw math_error(error_kind::precision, "could not factor the discriminant cofactor " + c.get_str());
        DivisionPolyValues v = division_poly_values(e, q);
        ExactInt psi0n(v.psi0.get_num()), psi2n(v.psi2.get_num());
        if (gcd3(c, psi0n, psi2n) != 1 || gcd3(c, e.c4(), e.c6()) != 1)
            throw math_error(error_kind::precision, "could not factor the discriminant cofactor " + c.get_str());
        LocalEntry agg;
        agg.p = c;
        agg.aggregated = true;
        agg.kind = local_case::good;
        agg.coefficient = 0;
        agg.value = BigFloat(0, wp);
        out.breakdown.entries.push_back(agg);
    }
    out.value = out.breakdown.total();
    return out;
}

BigFloat height_difference_bound(const WeierstrassModel &e, unsigned precision) {
    const mpfr_prec_t wp = working_precision(precision);
    ExactRational j = e.j_invariant();
    ExactInt jn(abs(j.get_num())), jd(j.get_den());
    BigFloat hj = jn == 0 ? BigFloat(0, wp) : log(BigFloat(jn > jd ? jn : jd, wp));
    BigFloat one(1, wp);
    BigFloat hinf_j = log(max(one, abs(BigFloat(j, wp))));
    BigFloat hinf_b2 = log(max(one, abs(BigFloat(rat(e.b2(), 12), wp))));
    BigFloat two_star = e.b2() == 0 ? one : BigFloat(2, wp);
    BigFloat mu = log(abs(BigFloat(e.discriminant(), wp))) / 12 + hinf_j / 12 + hinf_b2 / 2 + log(two_star) / 2;
    BigFloat lower = hj / 8 + mu + BigFloat::from_string("0.973", wp);
    BigFloat upper = mu + BigFloat::from_string("1.07", wp);
    return 2 * max(lower, upper);
}

NaiveLimit naive_limit_estimate(const WeierstrassModel &e, const CurvePoint &q, int doublings, unsigned precision) {
    if (doublings < 0 || doublings > 8)
        throw math_error(error_kind::domain, "naive limit supports 0 to 8 doublings");
    const mpfr_prec_t wp = working_precision(precision);
    NaiveLimit out;
    out.doublings = doublings;
    out.value = BigFloat(0, wp);
    out.error_bound = height_difference_bound(e, precision) / (1L << (2 * doublings));
    std::vector<CurvePoint> seen{q};
    CurvePoint cur = q;
    for (int i = 0; i < doublings; ++i) {
        cur = double_point(e, cur);
        if (cur.is_infinity() || std::find(seen.begin(), seen.end(), cur) != seen.end()) {
            out.torsion = true;
            return out;
        }
        seen.push_back(cur);
    }
    if (cur.is_infinity() || is_two_torsion(e, cur)) {
        out.torsion = true;
        return out;
    }
    out.value = naive_height(cur, precision) / (1L << (2 * doublings));
    return out;
}

} // namespace twistheight
