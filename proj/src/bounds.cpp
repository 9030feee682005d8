#include "twistheight/bounds.hpp"

#include "twistheight/errors.hpp"
#include "twistheight/families.hpp"

#include <algorithm>
#include <initializer_list>
#include <map>
#include <thread>

namespace twistheight {

const char *to_string(primitivity_verdict v) {
    switch (v) {
    case primitivity_verdict::primitive: return "primitive";
    case primitivity_verdict::torsion: return "torsion";
    case primitivity_verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

const char *to_string(prime_class c) {
    switch (c) {
    case prime_class::denominator: return "denominator";
    case prime_class::twist_only: return "twist_only";
    case prime_class::bad: return "bad";
    case prime_class::bad_twist: return "bad_twist";
    case prime_class::two: return "two";
    case prime_class::three: return "three";
    }
    return "?";
}

BigFloat LowerBoundReport::bound(const ExactInt &dv) const {
    if (dv == 0)
        throw math_error(error_kind::domain, "D = 0");
    return log(abs(BigFloat(dv, constant_part.precision()))) / 4 + constant_part;
}

BigFloat LowerBoundReport::error() const {
    return BigFloat::exp2(-static_cast<long>(precision) + 20, working_precision(precision));
}

namespace {

Factorization checked_disc_factors(const WeierstrassModel &e, unsigned long trial_bound) {
    if (!e.is_short())
        throw math_error(error_kind::domain, "the lower bound needs a model y^2 = x^3 + a2 x^2 + a4 x + a6");
    Factorization f = factor(abs(e.discriminant()), trial_bound);
    f.sign = sgn(e.discriminant());
    if (!f.complete())
        throw math_error(error_kind::precision,
                         "could not factor the discriminant; unfactored part " + f.unfactored.get_str());
    if (!is_sixth_power_free(f))
        throw math_error(error_kind::hypothesis, "discriminant " + to_string(f) + " is not 6th-power-free");
    return f;
}

SquareFreeVerdict checked_square_free(const ExactInt &d, unsigned long trial_bound, bool strict) {
    if (d == 0)
        throw math_error(error_kind::domain, "D = 0");
    SquareFreeVerdict v = square_free_test(abs(d), trial_bound);
    if (v.is_not_square_free())
        throw math_error(error_kind::hypothesis,
                         "D = " + d.get_str() + " is not square-free (" + v.witness.get_str() + "^2 divides it)");
    if (v.is_unknown() && strict)
        throw math_error(error_kind::hypothesis,
                         "square-freeness of D = " + d.get_str() + " is unknown (residual " + v.residual.get_str() + ")");
    return v;
}

} // namespace

LowerBoundReport lower_bound(const WeierstrassModel &e, int d_sign, unsigned precision, unsigned long trial_bound) {
    if (d_sign == 0)
        throw math_error(error_kind::domain, "D sign must be + or -");
    LowerBoundReport r;
    r.curve = e;
    r.d_sign = d_sign > 0 ? 1 : -1;
    r.precision = precision;
    r.disc_factors = checked_disc_factors(e, trial_bound);
    const mpfr_prec_t wp = working_precision(precision);
    PeriodData pd = periods(e, precision);
    r.abs_q = abs(pd.q.re);
    r.omega = omega_for_twist(pd, r.d_sign, sgn(e.discriminant()));
    BigFloat one(1, wp);
    r.q_term = (8 * log(one - r.abs_q) - log(r.abs_q)) / 16;
    r.omega_term = log(r.omega / (BigFloat::pi(wp) * 2)) / 4;
    BigFloat s(0, wp);
    for (const auto &pp : r.disc_factors.factors)
        if (pp.prime != 2)
            s += log(BigFloat(pp.prime, wp));
    r.prime_term = -(s * 7) / 16;
    r.two_term = -(BigFloat::log2(wp) * 5) / 12;
    r.constant_part = r.q_term + r.omega_term + r.prime_term + r.two_term;
    return r;
}

LowerBoundReport lower_bound(const WeierstrassModel &e, const ExactInt &d, unsigned precision,
                             unsigned long trial_bound, bool strict) {
    SquareFreeVerdict v = checked_square_free(d, trial_bound, strict);
    LowerBoundReport r = lower_bound(e, sgn(d), precision, trial_bound);
    r.d = d;
    r.d_verdict = v;
    return r;
}

namespace {

// Delta_D = Delta D^6 from the pieces.
Factorization twisted_disc_factors(const Factorization &base, const ExactInt &d, unsigned long trial_bound) {
    Factorization fd = factor(abs(d), trial_bound);
    std::map<ExactInt, PrimePower> merged;
    for (const auto &pp : base.factors)
        merged[pp.prime] = pp;
    for (const auto &pp : fd.factors) {
        auto [it, fresh] = merged.try_emplace(pp.prime, PrimePower{pp.prime, 0, pp.proven});
        it->second.exponent += 6 * pp.exponent;
        it->second.proven = it->second.proven && pp.proven;
    }
    Factorization out;
    out.sign = base.sign;
    for (auto &[p, pp] : merged)
        out.factors.push_back(pp);
    ExactInt u = fd.unfactored;
    out.unfactored = u * u * u * u * u * u;
    return out;
}

BigFloat relative_slack(const BigFloat &x, unsigned precision) {
    BigFloat one(1, x.precision());
    return BigFloat::exp2(-static_cast<long>(precision) + 20, x.precision()) * max(one, abs(x));
}

} // namespace

PrimitivityCertificate primitivity_check(const WeierstrassModel &base, const ExactInt &d, const CurvePoint &p,
                                         unsigned precision, const PrimitivityOptions &opts) {
    const mpfr_prec_t wp = working_precision(precision);
    PrimitivityCertificate c;
    c.d = d;
    c.precision = precision;
    SquareFreeVerdict v = checked_square_free(d, opts.trial_bound, opts.strict);
    if (v.is_unknown())
        c.notes.push_back("square-freeness of D not proven (residual " + v.residual.get_str() + "); assumed");
    c.curve = twist(base, d);
    if (!p.is_infinity() && !c.curve.contains(p.x(), p.y()))
        throw math_error(error_kind::point_not_on_curve, "point " + p.to_string() + " is not on " + c.curve.to_string());
    c.point = p;
    c.hhat = BigFloat(0, wp);
    c.hhat_upper = BigFloat(0, wp);
    c.lower_bound = BigFloat(0, wp);
    c.lower_bound_lower = BigFloat(0, wp);
    c.breakdown.archimedean = BigFloat(0, wp);
    c.breakdown.precision = precision;
    // torsion needs no lower bound, so report it before checking its hypotheses
    if (p.is_infinity()) {
        c.verdict = primitivity_verdict::torsion;
        c.notes.push_back("point at infinity");
        return c;
    }
    if (auto order = torsion_order(c.curve, p)) {
        c.verdict = primitivity_verdict::torsion;
        c.breakdown.torsion = true;
        c.breakdown.torsion_order = order;
        c.notes.push_back("torsion point of order " + std::to_string(*order));
        return c;
    }
    if (opts.base_report && opts.base_report->curve == base && opts.base_report->d_sign == sgn(d) &&
        opts.base_report->precision >= precision)
        c.bound_report = *opts.base_report;
    else
        c.bound_report = lower_bound(base, sgn(d), precision, opts.trial_bound);
    c.bound_report.d = d;
    c.bound_report.d_verdict = v;
    c.lower_bound = c.bound_report.bound(d);
    c.lower_bound_lower = c.lower_bound - c.bound_report.error() - relative_slack(c.lower_bound, precision);

    HeightOptions ho;
    ho.trial_bound = opts.trial_bound;
    ho.discriminant_factors = twisted_disc_factors(c.bound_report.disc_factors, d, opts.trial_bound);
    CanonicalHeight h = canonical_height(c.curve, p, precision, ho);
    c.breakdown = h.breakdown;
    c.hhat = h.value;
    c.hhat_upper = c.hhat + relative_slack(c.hhat, precision) * 16;
    if (c.lower_bound_lower.sign() <= 0) {
        c.verdict = primitivity_verdict::inconclusive;
        c.notes.push_back("lower bound is not positive for this D");
        return c;
    }
    BigFloat ratio = c.hhat_upper / c.lower_bound_lower;
    c.m_max = sqrt(ratio).floor_int().get_si();
    if (*c.m_max <= 1) {
        c.verdict = primitivity_verdict::primitive;
        c.notes.push_back("no R and |m| >= 2 with P = mR");
        c.notes.push_back("if rank E_D(Q) = 1 then E_D(Q) is generated by P");
    } else {
        c.verdict = primitivity_verdict::inconclusive;
        c.notes.push_back("hhat / lower bound >= 4; multiples up to m = " + std::to_string(*c.m_max) +
                          " are not excluded");
    }
    return c;
}

std::vector<PrimeBoundCheck> per_prime_bounds(const WeierstrassModel &base, const ExactInt &d, const CurvePoint &q,
                                              const LocalHeightBreakdown &h) {
    if (q.is_infinity() || q.beta() == 0)
        throw math_error(error_kind::domain, "per-prime bounds need a point that is not 2-torsion");
    std::vector<PrimeBoundCheck> out;
    auto push = [&](const LocalEntry &entry, prime_class cls, std::string statement, ExactRational lhs,
                    ExactRational bound) {
        lhs.canonicalize();
        bound.canonicalize();
        out.push_back(PrimeBoundCheck{entry.p, cls, std::move(statement), lhs, bound, lhs >= bound});
    };
    for (const auto &entry : h.entries) {
        const ExactInt &p = entry.p;
        const ExactRational lam = entry.coefficient;
        if (entry.aggregated) {
            if (entry.kind == local_case::unbounded_denominator)
                push(entry, prime_class::denominator, "sum over denominator primes = 2 log delta", lam, 2);
            continue;
        }
        if (q.delta() % p == 0) {
            ExactRational want = 2 * static_cast<long>(valuation(q.delta(), p));
            PrimeBoundCheck c{p, prime_class::denominator, "lambda_p = 2 v_p(delta) log p", lam, want, lam == want};
            out.push_back(c);
            continue;
        }
        long vb = static_cast<long>(valuation(q.beta(), p));
        long n = base.discriminant() % p == 0 ? static_cast<long>(valuation(base.discriminant(), p)) : 0;
        ExactRational with_beta = lam + ExactRational(vb, 2);
        ExactRational with_disc = with_beta + ExactRational(n, 16);
        bool p_divides_d = d % p == 0;
        if (p == 2) {
            push(entry, prime_class::two, "lambda + v(beta)/2 >= -2/3", with_beta, ExactRational(-2, 3));
            push(entry, prime_class::two, "lambda + v(beta)/2 + N/16 >= -5/12", with_disc, ExactRational(-5, 12));
        } else if (p == 3) {
            push(entry, prime_class::three, "lambda + v(beta)/2 + N/16 >= -7/16", with_disc, ExactRational(-7, 16));
        } else if (n == 0) {
            if (!p_divides_d)
                throw math_error(error_kind::domain, "entry for a prime dividing neither delta, Delta nor D");
            push(entry, prime_class::twist_only, "lambda >= -1", lam, -1);
            push(entry, prime_class::twist_only, "lambda + v(beta)/2 >= 0", with_beta, 0);
        } else if (!p_divides_d) {
            push(entry, prime_class::bad, "lambda + v(beta)/2 + N/16 >= -N/12", with_disc, ExactRational(-n, 12));
        } else {
            push(entry, prime_class::bad_twist, "lambda + v(beta)/2 + N/16 >= -7/16", with_disc,
                 ExactRational(-7, 16));
        }
    }
    return out;
}

BigFloat shifted_cubic_root(unsigned precision) {
    CubicRoots r = cubic_roots(-88, 2743, -27885, precision);
    if (r.real.size() != 1)
        throw math_error(error_kind::precision, "expected a single real root");
    return r.real[0];
}

BigFloat shifted_x_ratio(const BigFloat &t) {
    const mpfr_prec_t wp = t.precision();
    auto horner = [&](std::initializer_list<long> top_first) {
        BigFloat acc(0, wp);
        for (long c : top_first)
            acc = acc * t + BigFloat(c, wp);
        return acc;
    };
    BigFloat num = horner({1, 0, 2, 12, 30});
    BigFloat d = horner({1, 0, 4, 30, 5, 54, 245});
    return num / pow(d, BigFloat(ExactRational(2, 3), wp));
}

RatioSup shifted_x_ratio_sup(long t_lo, long t_hi, unsigned precision) {
    if (t_lo > t_hi)
        throw math_error(error_kind::domain, "empty range");
    const mpfr_prec_t wp = working_precision(precision);
    RatioSup out;
    bool first = true;
    for (long t = t_lo; t <= t_hi; ++t) {
        BigFloat r = shifted_x_ratio(BigFloat(t, wp));
        if (first || r > out.integer_sup) {
            out.integer_sup = r;
            out.integer_argmax = t;
            first = false;
        }
    }
    // real maximum: grid on the part of the range where the ratio is not close to 1, then golden section
    const long g_lo = std::max(t_lo, -64L), g_hi = std::min(t_hi, 64L);
    out.sup = out.integer_sup;
    out.argmax = BigFloat(out.integer_argmax, wp);
    const long steps_per_unit = 64;
    for (long k = g_lo * steps_per_unit; k <= g_hi * steps_per_unit; ++k) {
        BigFloat t = BigFloat(k, wp) / steps_per_unit;
        BigFloat r = shifted_x_ratio(t);
        if (r > out.sup) {
            out.sup = r;
            out.argmax = t;
        }
    }
    BigFloat step = BigFloat(1, wp) / steps_per_unit;
    BigFloat a = max(out.argmax - step, BigFloat(t_lo, wp)), b = min(out.argmax + step, BigFloat(t_hi, wp));
    const BigFloat inv_phi = (sqrt(BigFloat(5, wp)) - BigFloat(1, wp)) / 2;
    BigFloat c = b - (b - a) * inv_phi, dd = a + (b - a) * inv_phi;
    BigFloat fc = shifted_x_ratio(c), fd = shifted_x_ratio(dd);
    BigFloat tol = BigFloat::exp2(-static_cast<long>(precision) / 2, wp);
    while (b - a > tol) {
        if (fc > fd) {
            b = dd;
            dd = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = shifted_x_ratio(c);
        } else {
            a = c;
            c = dd;
            fc = fd;
            dd = a + (b - a) * inv_phi;
            fd = shifted_x_ratio(dd);
        }
    }
    BigFloat mid = (a + b) / 2;
    BigFloat fm = shifted_x_ratio(mid);
    if (fm > out.sup) {
        out.sup = fm;
        out.argmax = mid;
    }
    return out;
}

BigFloat family_upper_constant(unsigned precision) {
    // four decimals do not depend on the working precision, so compute once
    static const ExactRational rounded = [] {
        RatioSup s = shifted_x_ratio_sup(-10000, 10000, 64);
        BigFloat scaled = log(s.sup) * 10000;
        ExactInt up = scaled.floor_int() + 1;
        ExactRational r(up, 10000);
        r.canonicalize();
        return r;
    }();
    return BigFloat(rounded, working_precision(precision));
}

FamilyUpperBound family_upper_bound(const ExactInt &t, unsigned precision, unsigned long trial_bound) {
    const mpfr_prec_t wp = working_precision(precision);
    TwistFamily fam = degree_six_family();
    FamilyUpperBound out;
    out.t = t;
    out.d = fam.D(t);
    SquareFreeVerdict v = square_free_test(out.d, trial_bound);
    if (v.is_not_square_free())
        throw math_error(error_kind::hypothesis,
                         "D(" + t.get_str() + ") = " + out.d.get_str() + " is not square-free; the bound needs it");
    out.square_free_verified = v.is_square_free();
    BigFloat l = log(BigFloat(out.d, wp));
    BigFloat u = family_upper_constant(precision);
    out.archimedean = l * 5 / 3 + u;
    out.finite = -l;
    out.total = l * 2 / 3 + u;
    return out;
}

ThresholdResult threshold_scan(long abs_lo, long abs_hi, unsigned precision, unsigned threads) {
    if (abs_lo < 0 || abs_lo > abs_hi)
        throw math_error(error_kind::domain, "threshold scan needs 0 <= abs_lo <= abs_hi");
    const mpfr_prec_t wp = working_precision(precision);
    ThresholdResult out;
    out.lower_constant = lower_bound(WeierstrassModel::make_short(2, 163, 2205), 1, precision).constant_part;
    out.upper_constant = family_upper_constant(precision);
    std::vector<long> ts;
    for (long a = abs_hi; a >= abs_lo; --a)
        if (a != 0)
            ts.push_back(-a);
    for (long a = abs_lo; a <= abs_hi; ++a)
        ts.push_back(a);
    out.points.resize(ts.size());
    TwistFamily fam = degree_six_family();

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            ThresholdPoint &pt = out.points[i];
            pt.t = ts[i];
            BigFloat l = log(BigFloat(fam.D(ExactInt(ts[i])), wp));
            BigFloat den = l / 4 + out.lower_constant;
            if (den.sign() > 0)
                pt.ratio = (l * 2 / 3 + out.upper_constant) / den;
        }
    };
    unsigned n = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, ts.size() / 64)));
    std::vector<std::thread> pool;
    std::size_t chunk = (ts.size() + n - 1) / n;
    for (unsigned w = 0; w < n; ++w) {
        std::size_t b = w * chunk, e = std::min(ts.size(), b + chunk);
        if (b < e)
            pool.emplace_back(work, b, e);
    }
    for (auto &th : pool)
        th.join();

    BigFloat four(4, wp);
    for (const auto &pt : out.points)
        if (!pt.ratio)
            ++out.excluded;
    // walk inwards from the outer ends while the ratio stays below 4
    for (auto it = out.points.rbegin(); it != out.points.rend() && it->t > 0; ++it) {
        if (!it->ratio || !(*it->ratio < four))
            break;
        out.positive = it->t;
    }
    for (auto it = out.points.begin(); it != out.points.end() && it->t < 0; ++it) {
        if (!it->ratio || !(*it->ratio < four))
            break;
        out.negative = -it->t;
    }
    return out;
}

} // namespace twistheight
