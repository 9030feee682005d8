#pragma once

// Weierstrass models over Q with integral coefficients, exact point
// arithmetic, division polynomials and quadratic twists.

#include "twistheight/bigfloat.hpp"
#include "twistheight/exactmath.hpp"
#include "twistheight/polynomial.hpp"

#include <array>
#include <optional>
#include <string>

namespace twistheight {

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with the usual b/c quantities.
/// Always nonsingular: construction fails with error_kind::singular_curve.
class WeierstrassModel {
public:
    static WeierstrassModel make(ExactInt a1, ExactInt a2, ExactInt a3, ExactInt a4, ExactInt a6);
    static WeierstrassModel make_short(ExactInt a2, ExactInt a4, ExactInt a6) { return make(0, a2, 0, a4, a6); }

    const ExactInt &a1() const { return a1_; }
    const ExactInt &a2() const { return a2_; }
    const ExactInt &a3() const { return a3_; }
    const ExactInt &a4() const { return a4_; }
    const ExactInt &a6() const { return a6_; }
    const ExactInt &b2() const { return b2_; }
    const ExactInt &b4() const { return b4_; }
    const ExactInt &b6() const { return b6_; }
    const ExactInt &b8() const { return b8_; }
    const ExactInt &c4() const { return c4_; }
    const ExactInt &c6() const { return c6_; }
    const ExactInt &discriminant() const { return disc_; }

    /// a1 = a3 = 0
    bool is_short() const { return is_short_; }
    std::array<ExactInt, 5> coefficients() const { return {a1_, a2_, a3_, a4_, a6_}; }

    bool contains(const ExactRational &x, const ExactRational &y) const;
    /// j = c4^3 / Delta
    ExactRational j_invariant() const;
    /// 4x^3 + b2 x^2 + 2 b4 x + b6, the cubic whose roots are the 2-torsion x-coordinates
    IntPolynomial two_torsion_cubic() const;

    bool operator==(const WeierstrassModel &o) const { return coefficients() == o.coefficients(); }

    /// "[a1,a2,a3,a4,a6]"
    std::string to_string() const;

private:
    WeierstrassModel() = default;

    ExactInt a1_, a2_, a3_, a4_, a6_;
    ExactInt b2_, b4_, b6_, b8_, c4_, c6_, disc_;
    bool is_short_ = false;
};

/// A point (alpha/delta^2, beta/delta^3) with delta > 0 and
/// gcd(alpha, delta) = gcd(beta, delta) = 1, or the point at infinity.
/// Points do not remember their curve; constructors validate against one.
class CurvePoint {
public:
    static CurvePoint infinity() { return CurvePoint(); }
    /// Throws error_kind::point_not_on_curve.
    static CurvePoint from_affine(const WeierstrassModel &e, const ExactRational &x, const ExactRational &y);
    static CurvePoint from_canonical(const WeierstrassModel &e, const ExactInt &alpha, const ExactInt &beta,
                                     const ExactInt &delta);

    bool is_infinity() const { return infinity_; }
    const ExactInt &alpha() const { return alpha_; }
    const ExactInt &beta() const { return beta_; }
    const ExactInt &delta() const { return delta_; }
    ExactRational x() const;
    ExactRational y() const;
    bool is_integral() const { return !infinity_ && delta_ == 1; }

    bool operator==(const CurvePoint &o) const = default;

    /// "O" or "[alpha,beta,delta]"
    std::string to_string() const;

private:
    CurvePoint() = default;

    bool infinity_ = true;
    ExactInt alpha_ = 0, beta_ = 0, delta_ = 1;
};

/// E_D : y^2 = x^3 + a2 D x^2 + a4 D^2 x + a6 D^3. E must be short form, D != 0.
/// Square-freeness of D is the caller's business (see square_free_test).
WeierstrassModel twist(const WeierstrassModel &e, const ExactInt &d);

/// 2-torsion test: affine with psi_2 = 2y + a1 x + a3 = 0.
bool is_two_torsion(const WeierstrassModel &e, const CurvePoint &p);

// Chord-tangent law on short-form models. Inputs are checked to lie on e.
CurvePoint negate(const WeierstrassModel &e, const CurvePoint &p);
CurvePoint add(const WeierstrassModel &e, const CurvePoint &p, const CurvePoint &q);
CurvePoint double_point(const WeierstrassModel &e, const CurvePoint &p);
CurvePoint multiply(const WeierstrassModel &e, const CurvePoint &p, long m);

/// Order of p if p is torsion, else nullopt. Over Q every torsion order is at
/// most 12, and on an integral short model torsion points are integral, so
/// this is exact.
std::optional<long> torsion_order(const WeierstrassModel &e, const CurvePoint &p);

struct DivisionPolyValues {
    ExactRational psi0;   // 3x^2 + 2a2 x + a4 - a1 y
    ExactRational psi2;   // 2y + a1 x + a3
    ExactRational psi2a;  // 4x^3 + b2 x^2 + 2b4 x + b6
    ExactRational psi3;   // 3x^4 + b2 x^3 + 3b4 x^2 + 3b6 x + b8
};

DivisionPolyValues division_poly_values(const WeierstrassModel &e, const CurvePoint &q);

struct KlIdentity {
    ExactRational k;
    ExactRational l;
    ExactRational residual;  // -16 k psi3 + 4 l psi2a + Delta, always 0
};

/// Evaluates k, l at q on a short-form model and the residual of
/// -16 k psi3 + 4 l psi2a = -Delta. For a twist E_D the model's own
/// coefficients are a_i D^(i/2) and its discriminant is Delta D^6.
KlIdentity kl_identity_check(const WeierstrassModel &e_d, const CurvePoint &q);

/// The same residual as a polynomial in x; the zero polynomial for every short-form model.
IntPolynomial kl_identity_residual_polynomial(const WeierstrassModel &e_d);

/// max(log|n|, log|d|) for x = n/d; 0 at infinity.
BigFloat naive_height(const CurvePoint &q, unsigned precision = default_precision);

/// Model obtained by the substitution x -> x + r (old x = new x + r), with the
/// induced point bijection. The discriminant is unchanged.
struct ShiftedModel {
    WeierstrassModel model;
    ExactInt r;

    CurvePoint map(const CurvePoint &p) const;
    CurvePoint unmap(const WeierstrassModel &original, const CurvePoint &p) const;
};

ShiftedModel shift_model(const WeierstrassModel &e, const ExactInt &r);

} // namespace twistheight
