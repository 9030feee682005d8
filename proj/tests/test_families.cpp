#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "twistheight/errors.hpp"
#include "twistheight/families.hpp"

#include <functional>
#include <random>

using namespace twistheight;

namespace {

error_kind kind_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const math_error &e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return error_kind::domain;
}

bool valid_ab(long a, long b) {
    if (b == 0)
        return false;
    IntPolynomial f{b, a, 0, 1};
    return discriminant(f) != 0 && integer_roots(f).empty();
}

} // namespace

TEST_CASE("degree-six family data") {
    TwistFamily fam = degree_six_family();
    CHECK(fam.f1 == IntPolynomial{2205, 163, 2, 1});
    CHECK(fam.D == IntPolynomial{245, 54, 5, 30, 4, 0, 1});
    CHECK(fam.m == 4);
    CHECK(fam.base_curve() == WeierstrassModel::make_short(2, 163, 2205));
    CHECK(fam.D(ExactInt(0)) == 245);
    CHECK(fam.D(ExactInt(1)) == 339);
    CHECK(fam.D(ExactInt(2216)) == ExactInt("118418318864586065829"));
    CHECK(ExactInt(3) * 7 * 5861 * ExactInt("962116970650109") == fam.D(ExactInt(2216)));
}

TEST_CASE("general construction agrees with the closed form") {
    int tried = 0;
    for (long a = -10; a <= 10; ++a)
        for (long b = -10; b <= 10; ++b) {
            if (!valid_ab(a, b))
                continue;
            IntPolynomial f{b, a, 0, 1};
            IntPolynomial F{0, 4 * b, 2 * a, 0, 1};
            TwistFamily general = construct_family(f, F);
            TwistFamily closed = closed_form_family(a, b);
            CHECK(general == closed);
            ExactInt disc_f = discriminant(f);
            CHECK(disc_f == -4 * ExactInt(a) * a * a - 27 * ExactInt(b) * b);
            CHECK(discriminant(closed.f1) == ExactInt(b) * b * disc_f * disc_f * disc_f);
            CHECK(closed.base_curve().discriminant() == 16 * discriminant(closed.f1));
            ++tried;
        }
    CHECK(tried > 300);
}

TEST_CASE("the point satisfies the twisted equation identically") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> coef(-6, 6);
    int built = 0;
    while (built < 25) {
        IntPolynomial f{coef(rng), coef(rng), coef(rng), 1};
        if (discriminant(f) == 0 || !integer_roots(f).empty())
            continue;
        // F = integral of 4f plus a constant
        IntPolynomial F(std::vector<ExactInt>{coef(rng), 4 * f.coeff(0), 2 * f.coeff(1), ExactInt(4) * f.coeff(2) / 3, 1});
        if (4 * f.coeff(2) % 3 != 0)
            continue;
        TwistFamily fam;
        try {
            fam = construct_family(f, F);
        } catch (const math_error &) {
            continue;  // degenerate f1
        }
        ++built;
        // (D^2 f)^2 = D^3 f1(F), i.e. f1(F) = D f^2
        CHECK(fam.f1.compose(fam.F) == fam.D * fam.f * fam.f);
        CHECK(fam.D.degree() == 6);
        for (long t = -5; t <= 5; ++t) {
            ExactInt tt(t);
            if (fam.D(tt) == 0)
                continue;
            FamilyInstance in = instantiate(fam, tt);
            CHECK(in.curve.contains(in.point.x(), in.point.y()));
        }
    }
}

TEST_CASE("D is positive on the real line for the degree-six family") {
    TwistFamily fam = degree_six_family();
    for (long t = -3000; t <= 3000; ++t)
        REQUIRE(fam.D(ExactInt(t)) > 0);
    // rational points near the minimum, scaled: 64^6 D(k/64) = sum c_i k^i 64^(6-i)
    for (long k = -400; k <= 400; ++k) {
        ExactInt s = 0, p64 = 1;
        for (int i = 6; i >= 0; --i) {
            ExactInt ki = 1;
            for (int j = 0; j < i; ++j)
                ki *= k;
            s += fam.D.coeff(i) * ki * p64;
            p64 *= 64;
        }
        REQUIRE(s > 0);
    }
}

TEST_CASE("bad inputs are hypothesis errors") {
    CHECK(kind_of([] { construct_family(IntPolynomial{-1, 0, 0, 1}, IntPolynomial{0, -4, 0, 0, 1}); }) ==
          error_kind::hypothesis);  // reducible
    CHECK(kind_of([] { construct_family(IntPolynomial{0, 0, 0, 1}, IntPolynomial{0, 0, 0, 0, 1}); }) ==
          error_kind::hypothesis);  // repeated root
    CHECK(kind_of([] { construct_family(IntPolynomial{3, 1, 0, 1}, IntPolynomial{0, 12, 2, 0, 2}); }) ==
          error_kind::hypothesis);  // F' not a multiple of f
    CHECK(kind_of([] { construct_family(IntPolynomial{3, 1, 0, 2}, IntPolynomial{0, 12, 2, 0, 1}); }) ==
          error_kind::hypothesis);  // not monic
    CHECK(kind_of([] { construct_family(IntPolynomial{3, 1, 0, 1}, IntPolynomial{0, 0, 1}); }) ==
          error_kind::hypothesis);  // F' = 2t
    CHECK(kind_of([] { closed_form_family(1, 0); }) == error_kind::hypothesis);
    CHECK(kind_of([] { closed_form_family(-1, 0); }) == error_kind::hypothesis);
    CHECK(kind_of([] { closed_form_family(-3, 2); }) == error_kind::hypothesis);  // (t - 1)^2 (t + 2)
}

TEST_CASE("lower-bound hypotheses for the degree-six family") {
    LowerBoundHypotheses h = uniform_bound_hypotheses(degree_six_family());
    CHECK(h.applicable());
    CHECK(h.b_odd.value());
    CHECK(h.coprime.value());
    CHECK(h.disc_f_square_free.value());  // -247 = -13 * 19

    LowerBoundHypotheses g = uniform_bound_hypotheses(closed_form_family(2, 2));
    CHECK_FALSE(g.b_odd.value());
    CHECK_FALSE(g.coprime.value());
}

TEST_CASE("instances") {
    TwistFamily fam = degree_six_family();
    FamilyInstance one = instantiate(fam, 1);
    CHECK(one.D == 339);
    CHECK(one.square_free.is_square_free());
    CHECK(one.point == CurvePoint::from_affine(one.curve, ExactRational(5085), ExactRational(574605)));
    CHECK(one.curve == twist(fam.base_curve(), 339));

    FamilyInstance zero = instantiate(fam, 0);
    CHECK(zero.square_free.is_not_square_free());
    CHECK(zero.square_free.witness == 7);
}

TEST_CASE("scan skips non-square-free D and orders by t") {
    TwistFamily fam = degree_six_family();
    ScanOptions opts;
    opts.threads = 1;
    auto zero = scan(fam, 0, 0, opts);
    REQUIRE(zero.size() == 1);
    CHECK_FALSE(zero[0].certificate);
    CHECK(zero[0].skip_reason.find("245 not square-free") != std::string::npos);

    auto one = scan(fam, 1, 1, opts);
    REQUIRE(one.size() == 1);
    REQUIRE(one[0].certificate);
    CHECK(one[0].certificate->verdict == primitivity_verdict::inconclusive);

    auto serial = scan(fam, -6, 6, opts);
    opts.threads = 5;
    auto parallel = scan(fam, -6, 6, opts);
    REQUIRE(serial.size() == 13);
    REQUIRE(parallel.size() == serial.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].instance.t == -6 + static_cast<long>(i));
        CHECK(parallel[i].instance.t == serial[i].instance.t);
        CHECK(parallel[i].skip_reason == serial[i].skip_reason);
        REQUIRE(parallel[i].certificate.has_value() == serial[i].certificate.has_value());
        if (serial[i].certificate) {
            CHECK(parallel[i].certificate->verdict == serial[i].certificate->verdict);
            CHECK(parallel[i].certificate->hhat == serial[i].certificate->hhat);
        }
    }
    CHECK(kind_of([&] { scan(fam, 3, 2); }) == error_kind::domain);

    int certified = 0;
    for (const auto &e : scan(fam, 2216, 2220)) {
        if (!e.instance.square_free.is_square_free()) {
            CHECK_FALSE(e.certificate);
            continue;
        }
        REQUIRE(e.certificate);
        CHECK(e.certificate->verdict == primitivity_verdict::primitive);
        CHECK(e.certificate->lower_bound.sign() > 0);
        CHECK(e.certificate->hhat < 4 * e.certificate->lower_bound);
        ++certified;
    }
    CHECK(certified >= 2);

    // Delta = 16 * 64 * disc(f)^3 is divisible by 2^6: every certificate attempt fails, and is recorded
    TwistFamily bad = closed_form_family(1, 8);
    CHECK_FALSE(uniform_bound_hypotheses(bad).applicable());
    int recorded = 0;
    for (const auto &e : scan(bad, 1, 6)) {
        CHECK_FALSE(e.certificate);
        if (e.instance.square_free.is_square_free()) {
            CHECK(e.skip_reason.find("error (hypothesis)") != std::string::npos);
            ++recorded;
        }
    }
    CHECK(recorded > 0);
}
