#pragma once

// Uniform lower bound for quadratic twists, the upper bound for the
// degree-six family, and primitivity certificates built from both.

#include "twistheight/bigfloat.hpp"
#include "twistheight/curve.hpp"
#include "twistheight/exactmath.hpp"
#include "twistheight/localheights.hpp"

#include <optional>
#include <string>
#include <vector>

namespace twistheight {

/// For E: y^2 = x^3 + a2 x^2 + a4 x + a6 with 6th-power-free discriminant and
/// square-free D, every non-2-torsion P on E_D has ĥ(P) > (1/4) log|D| + constant_part.
struct LowerBoundReport {
    WeierstrassModel curve = WeierstrassModel::make_short(0, 0, 1);
    int d_sign = 1;
    std::optional<ExactInt> d;
    std::optional<SquareFreeVerdict> d_verdict;
    Factorization disc_factors;
    BigFloat abs_q;
    BigFloat omega;
    BigFloat q_term;      // (1/16) log((1 - |q|)^8 / |q|)
    BigFloat omega_term;  // (1/4) log(omega / 2 pi)
    BigFloat prime_term;  // -(7/16) sum of log p over odd p | Delta
    BigFloat two_term;    // -(5/12) log 2
    BigFloat constant_part;
    unsigned precision = default_precision;

    BigFloat bound(const ExactInt &d) const;
    /// Absolute error bound on constant_part and bound().
    BigFloat error() const;
};

/// Sign-only query: the constant for every square-free D of that sign.
LowerBoundReport lower_bound(const WeierstrassModel &e, int d_sign, unsigned precision = default_precision,
                             unsigned long trial_bound = default_trial_bound);
/// With a concrete D, which must be square-free. An unknown verdict is accepted
/// (and recorded) unless strict.
LowerBoundReport lower_bound(const WeierstrassModel &e, const ExactInt &d, unsigned precision = default_precision,
                             unsigned long trial_bound = default_trial_bound, bool strict = false);

enum class primitivity_verdict { primitive, torsion, inconclusive };

const char *to_string(primitivity_verdict v);

struct PrimitivityCertificate {
    primitivity_verdict verdict = primitivity_verdict::inconclusive;
    ExactInt d;
    WeierstrassModel curve = WeierstrassModel::make_short(0, 0, 1);  // E_D
    CurvePoint point = CurvePoint::infinity();
    BigFloat hhat;
    BigFloat lower_bound;
    /// hhat rounded up and lower_bound rounded down by their error bounds
    BigFloat hhat_upper;
    BigFloat lower_bound_lower;
    /// floor(sqrt(hhat_upper / lower_bound_lower)); unset when the bound is not positive
    std::optional<long> m_max;
    LowerBoundReport bound_report;
    LocalHeightBreakdown breakdown;
    std::vector<std::string> notes;
    unsigned precision = default_precision;
};

struct PrimitivityOptions {
    unsigned long trial_bound = default_trial_bound;
    bool strict = false;
    /// Reuse a sign-matched report for the base curve instead of recomputing it.
    std::optional<LowerBoundReport> base_report;
};

/// P must lie on twist(base, d). Primitive means there is no R and |m| >= 2 with P = mR.
PrimitivityCertificate primitivity_check(const WeierstrassModel &base, const ExactInt &d, const CurvePoint &p,
                                         unsigned precision = default_precision, const PrimitivityOptions &opts = {});

/// Per-prime inequality used in the lower bound, evaluated from a breakdown
/// entry. lhs and bound are coefficients of log p.
enum class prime_class { denominator, twist_only, bad, bad_twist, two, three };

const char *to_string(prime_class c);

struct PrimeBoundCheck {
    ExactInt p;
    prime_class cls = prime_class::bad;
    std::string statement;
    ExactRational lhs;
    ExactRational bound;
    bool holds = false;
};

/// One or two checks per entry of `h`, which must be the breakdown of q on twist(base, d).
std::vector<PrimeBoundCheck> per_prime_bounds(const WeierstrassModel &base, const ExactInt &d, const CurvePoint &q,
                                              const LocalHeightBreakdown &h);

// The degree-six family y^2 = x^3 + 2D x^2 + 163 D^2 x + 2205 D^3,
// D(t) = t^6 + 4t^4 + 30t^3 + 5t^2 + 54t + 245, P = (D (t^4 + 2t^2 + 12t), D^2 (t^3 + t + 3)).

/// Real root of x^3 - 88x^2 + 2743x - 27885 (the cubic after x -> x - 30).
BigFloat shifted_cubic_root(unsigned precision = default_precision);

/// (t^4 + 2t^2 + 12t + 30) / D(t)^(2/3), i.e. x(P') / D^(5/3) on the shifted model.
BigFloat shifted_x_ratio(const BigFloat &t);

struct RatioSup {
    BigFloat sup;            // over real t in [t_lo, t_hi]
    BigFloat argmax;
    BigFloat integer_sup;    // over integer t in [t_lo, t_hi]
    long integer_argmax = 0;
};

RatioSup shifted_x_ratio_sup(long t_lo, long t_hi, unsigned precision = default_precision);

/// log of the real supremum, rounded up to four decimals.
BigFloat family_upper_constant(unsigned precision = default_precision);

struct FamilyUpperBound {
    ExactInt t;
    ExactInt d;
    BigFloat archimedean;  // (5/3) log D + upper constant
    BigFloat finite;       // -log D
    BigFloat total;        // (2/3) log D + upper constant
    bool square_free_verified = false;
};

/// Throws error_kind::hypothesis when D(t) is not square-free.
FamilyUpperBound family_upper_bound(const ExactInt &t, unsigned precision = default_precision,
                                    unsigned long trial_bound = default_trial_bound);

struct ThresholdPoint {
    long t = 0;
    /// unset when (1/4) log D(t) + constant <= 0
    std::optional<BigFloat> ratio;
};

struct ThresholdResult {
    BigFloat lower_constant;
    BigFloat upper_constant;
    std::vector<ThresholdPoint> points;  // ordered by t
    /// smallest T in range with ratio < 4 for every t >= T (resp. t <= -T) in range
    std::optional<long> positive;
    std::optional<long> negative;
    std::size_t excluded = 0;
};

/// Ratio ((2/3) L + upper) / ((1/4) L + lower), L = log D(t), over t and -t
/// for abs_lo <= |t| <= abs_hi. Runs on `threads` workers; results are merged by t.
ThresholdResult threshold_scan(long abs_lo, long abs_hi, unsigned precision = default_precision,
                               unsigned threads = 0);

} // namespace twistheight
