#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "twistheight/bounds.hpp"
#include "twistheight/errors.hpp"
#include "twistheight/families.hpp"

#include <cmath>
#include <functional>

using namespace twistheight;

namespace {

WeierstrassModel e163() { return WeierstrassModel::make_short(2, 163, 2205); }

double d(const BigFloat &x) { return x.to_double(); }

error_kind kind_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const math_error &e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return error_kind::domain;
}

// Rational x with 2R = P for some R on E(Q)? Integer roots of the monic quartic
// obtained from x(2R) = alpha / delta^2 with x = X / delta^2, then a square test.
bool halvable(const WeierstrassModel &e, const CurvePoint &p) {
    const ExactInt a = p.alpha(), dl = p.delta() * p.delta();
    const ExactInt b2 = e.b2(), b4 = e.b4(), b6 = e.b6(), b8 = e.b8();
    const ExactInt d2 = dl * dl;
    IntPolynomial quartic(std::vector<ExactInt>{
        -(b8 * d2 + b6 * a * dl) * d2,
        -(2 * b6 * d2 + 2 * b4 * a * dl) * dl,
        -(b4 * d2 + b2 * a * dl),
        -4 * a,
        1,
    });
    for (const ExactInt &X : integer_roots(quartic)) {
        ExactRational x(X, dl);
        x.canonicalize();
        ExactRational rhs = x * x * x + e.a2() * x * x + e.a4() * x + e.a6();
        if (rhs < 0)
            continue;
        ExactInt num = rhs.get_num(), den = rhs.get_den();
        if (num == 0 || (sqrt(num) * sqrt(num) == num && sqrt(den) * sqrt(den) == den))
            return true;
    }
    return false;
}

// sum of log p over odd p | n by plain trial division
double odd_prime_log_sum(ExactInt n) {
    n = abs(n);
    double s = 0;
    for (long p = 2; ExactInt(p) * p <= n; ++p)
        if (n % p == 0) {
            if (p != 2)
                s += std::log(static_cast<double>(p));
            while (n % p == 0)
                n /= p;
        }
    if (n > 2)
        s += std::log(n.get_d());
    return s;
}

} // namespace

TEST_CASE("lower-bound constant for the degree-six family curve") {
    LowerBoundReport r = lower_bound(e163(), 1);
    CHECK(std::fabs(d(r.constant_part) - (-3.5472)) < 5e-4);
    CHECK(std::fabs(d(r.prime_term) + 7.0 / 16 * odd_prime_log_sum(e163().discriminant())) < 1e-12);
    CHECK(std::fabs(d(r.two_term) + 5.0 / 12 * std::log(2.0)) < 1e-15);
    double q = d(r.abs_q);
    CHECK(std::fabs(d(r.q_term) - (8 * std::log1p(-q) - std::log(q)) / 16) < 1e-12);
    CHECK(std::fabs(d(r.omega_term) - std::log(d(r.omega) / (2 * M_PI)) / 4) < 1e-12);
    CHECK(d(abs(r.constant_part - (r.q_term + r.omega_term + r.prime_term + r.two_term))) < 1e-30);
    CHECK(d(r.error()) < 1e-30);

    LowerBoundReport one = lower_bound(e163(), ExactInt(1));
    CHECK(one.bound(1) == one.constant_part);
    REQUIRE(one.d_verdict);
    CHECK(one.d_verdict->is_square_free());

    // both signs use the same finite part; the lattice part changes
    LowerBoundReport neg = lower_bound(e163(), -1);
    CHECK(neg.prime_term == r.prime_term);
    CHECK(std::isfinite(d(neg.constant_part)));
}

TEST_CASE("lower-bound hypotheses are enforced") {
    // Delta = -2^16 3^3: 2^6 divides it
    CHECK(kind_of([] { lower_bound(WeierstrassModel::make_short(0, 0, 64), 1); }) == error_kind::hypothesis);
    CHECK(kind_of([] { lower_bound(WeierstrassModel::make(1, 0, 0, -1, 0), 1); }) == error_kind::domain);
    CHECK(kind_of([] { lower_bound(e163(), ExactInt(12)); }) == error_kind::hypothesis);
    CHECK(kind_of([] { lower_bound(e163(), ExactInt(0)); }) == error_kind::domain);
    CHECK(kind_of([] { lower_bound(e163(), 0); }) == error_kind::domain);
}

TEST_CASE("lower bound holds below the heights of family points") {
    TwistFamily fam = degree_six_family();
    LowerBoundReport r = lower_bound(e163(), 1);
    int checked = 0;
    for (long t = -50; t <= 50; ++t) {
        FamilyInstance in = instantiate(fam, t);
        if (!in.square_free.is_square_free())
            continue;
        CanonicalHeight h = canonical_height(in.curve, in.point);
        BigFloat lb = r.bound(in.D);
        FamilyUpperBound ub = family_upper_bound(t);
        INFO("t = " << t);
        CHECK(h.value > lb);
        CHECK(h.value < ub.total);
        CHECK(d(abs(ub.archimedean + ub.finite - ub.total)) < 1e-30);
        CHECK(h.breakdown.archimedean < ub.archimedean);
        // the finite places sum to at most -log D, read off the breakdown
        BigFloat finite = h.value - h.breakdown.archimedean;
        CHECK(finite <= ub.finite + BigFloat::exp2(-100, finite.precision()));
        ++checked;
    }
    CHECK(checked > 50);
}

TEST_CASE("per-prime inequalities hold on family points") {
    TwistFamily fam = degree_six_family();
    int seen_two = 0, seen_bad = 0, seen_twist = 0;
    for (long t = -30; t <= 30; ++t) {
        FamilyInstance in = instantiate(fam, t);
        if (!in.square_free.is_square_free())
            continue;
        CanonicalHeight h = canonical_height(in.curve, in.point);
        for (const PrimeBoundCheck &c : per_prime_bounds(e163(), in.D, in.point, h.breakdown)) {
            INFO("t = " << t << " p = " << c.p << " " << c.statement);
            CHECK(c.holds);
            CHECK(c.holds == (c.lhs >= c.bound));
            seen_two += c.cls == prime_class::two;
            seen_bad += c.cls == prime_class::bad;
            seen_twist += c.cls == prime_class::twist_only || c.cls == prime_class::bad_twist;
        }
    }
    CHECK(seen_two > 0);
    CHECK(seen_bad > 0);
    CHECK(seen_twist > 0);
}

TEST_CASE("per-prime inequalities on multiples exercise the denominator class") {
    WeierstrassModel e = twist(e163(), 339);
    CurvePoint p = CurvePoint::from_affine(e, ExactRational(5085), ExactRational(574605));
    int denominators = 0;
    for (long m = 2; m <= 4; ++m) {
        CurvePoint q = multiply(e, p, m);
        CanonicalHeight h = canonical_height(e, q);
        for (const PrimeBoundCheck &c : per_prime_bounds(e163(), 339, q, h.breakdown)) {
            INFO("m = " << m << " p = " << c.p << " " << c.statement);
            CHECK(c.holds);
            denominators += c.cls == prime_class::denominator;
        }
    }
    CHECK(denominators > 0);
}

TEST_CASE("primitivity at t = 2216") {
    TwistFamily fam = degree_six_family();
    FamilyInstance in = instantiate(fam, 2216);
    REQUIRE(in.square_free.is_square_free());
    PrimitivityCertificate c = primitivity_check(e163(), in.D, in.point);
    CHECK(c.verdict == primitivity_verdict::primitive);
    REQUIRE(c.m_max);
    CHECK(*c.m_max == 1);
    CHECK(c.hhat_upper / c.lower_bound_lower < BigFloat(4, c.hhat.precision()));
    CHECK(c.hhat_upper > c.hhat);
    CHECK(c.lower_bound_lower < c.lower_bound);
    CHECK_FALSE(halvable(in.curve, in.point));

    PrimitivityCertificate hi = primitivity_check(e163(), in.D, in.point, 256);
    CHECK(hi.verdict == primitivity_verdict::primitive);
    CHECK(d(abs(hi.hhat - c.hhat)) < 1e-33);
    CHECK(d(abs(hi.lower_bound - c.lower_bound)) < 1e-33);
}

TEST_CASE("primitivity at t = 1 is inconclusive") {
    FamilyInstance in = instantiate(degree_six_family(), 1);
    PrimitivityCertificate c = primitivity_check(e163(), in.D, in.point);
    CHECK(c.verdict == primitivity_verdict::inconclusive);
    CHECK_FALSE(c.m_max);
    CHECK(std::fabs(d(c.hhat) - 2.8924246791451442778) < 1e-15);
    CHECK(c.lower_bound.sign() < 0);
}

TEST_CASE("primitivity reports torsion and rejects bad input") {
    // y^2 = x^3 - 43x + 166 is the twist of itself by 1 and has (3, 8) of order 7
    WeierstrassModel e = WeierstrassModel::make_short(0, -43, 166);
    CurvePoint p = CurvePoint::from_affine(e, ExactRational(3), ExactRational(8));
    PrimitivityCertificate c = primitivity_check(e, 1, p);
    CHECK(c.verdict == primitivity_verdict::torsion);

    CHECK(primitivity_check(e163(), 339, CurvePoint::infinity()).verdict == primitivity_verdict::torsion);
    CHECK(kind_of([] {
              WeierstrassModel e339 = twist(e163(), 339);
              primitivity_check(e163(), 3,
                                CurvePoint::from_affine(e339, ExactRational(5085), ExactRational(574605)));
          }) == error_kind::point_not_on_curve);
    CHECK(kind_of([] { primitivity_check(e163(), 245, CurvePoint::infinity()); }) == error_kind::hypothesis);
}

TEST_CASE("the doubling-free multiples of a point are not primitive") {
    WeierstrassModel e = twist(e163(), 339);
    CurvePoint p = CurvePoint::from_affine(e, ExactRational(5085), ExactRational(574605));
    CurvePoint q = multiply(e, p, 2);
    CHECK(halvable(e, q));
    CHECK_FALSE(halvable(e, p));
    PrimitivityCertificate c = primitivity_check(e163(), 339, q);
    CHECK(c.verdict != primitivity_verdict::primitive);
}

TEST_CASE("shifted model constants") {
    // Newton in double on x^3 - 88x^2 + 2743x - 27885
    double x = 20;
    for (int i = 0; i < 50; ++i)
        x -= (((x - 88) * x + 2743) * x - 27885) / ((3 * x - 176) * x + 2743);
    BigFloat r = shifted_cubic_root();
    CHECK(std::fabs(d(r) - x) < 1e-12);
    CHECK(std::fabs(d(r) - 20.551662898467332) < 1e-12);

    TwistFamily fam = degree_six_family();
    for (long t = -20; t <= 20; ++t) {
        double dt = fam.D(ExactInt(t)).get_d();
        double want = (fam.F(ExactInt(t)).get_d() + 30) / std::cbrt(dt * dt);
        CHECK(std::fabs(d(shifted_x_ratio(BigFloat(t, 160))) - want) < 1e-12 * want);
    }

    RatioSup s = shifted_x_ratio_sup(-10000, 10000);
    CHECK(std::fabs(d(s.sup) - 3.3793204) < 1e-4);
    CHECK(std::fabs(d(s.argmax) + 2.29471) < 1e-3);
    CHECK(s.integer_sup <= s.sup);
    // a dense double scan never beats the reported supremum
    for (double t = -10; t <= 10; t += 1e-3) {
        double D = t * t * t * t * t * t + 4 * t * t * t * t + 30 * t * t * t + 5 * t * t + 54 * t + 245;
        double v = (t * t * t * t + 2 * t * t + 12 * t + 30) / std::cbrt(D * D);
        REQUIRE(v <= d(s.sup) + 1e-12);
    }
    BigFloat u = family_upper_constant();
    CHECK(u == BigFloat(ExactRational(12177, 10000), u.precision()));
    CHECK(u > log(s.sup));
}

TEST_CASE("family upper bound needs square-free D") {
    CHECK(kind_of([] { family_upper_bound(0); }) == error_kind::hypothesis);
    FamilyUpperBound b = family_upper_bound(2216);
    CHECK(b.square_free_verified);
    CHECK(b.d == degree_six_family().D(ExactInt(2216)));
}

TEST_CASE("threshold for the family") {
    ThresholdResult r = threshold_scan(2100, 2400, default_precision, 4);
    REQUIRE(r.positive);
    REQUIRE(r.negative);
    CHECK(*r.positive == 2216);
    CHECK(*r.negative == 2216);
    CHECK(r.excluded == 0);
    REQUIRE(r.points.size() == 2 * 301);
    for (std::size_t i = 1; i < r.points.size(); ++i)
        CHECK(r.points[i - 1].t < r.points[i].t);
    auto ratio_at = [&](long t) {
        for (const auto &p : r.points)
            if (p.t == t)
                return d(*p.ratio);
        FAIL("t missing");
        return 0.0;
    };
    CHECK(ratio_at(2215) >= 4);
    CHECK(ratio_at(-2215) >= 4);
    CHECK(ratio_at(2216) < 4);
    CHECK(ratio_at(-2216) < 4);
    CHECK(std::fabs(ratio_at(2100) - 4.0135) < 1e-3);
    CHECK(ratio_at(-2100) >= 4);

    ThresholdResult serial = threshold_scan(2100, 2400, default_precision, 1);
    CHECK(serial.positive == r.positive);
    for (std::size_t i = 0; i < r.points.size(); ++i)
        CHECK(*serial.points[i].ratio == *r.points[i].ratio);

    ThresholdResult small = threshold_scan(0, 3, default_precision, 2);
    CHECK(small.points.size() == 7);
    CHECK(small.excluded > 0);
    CHECK_FALSE(small.positive);
}
