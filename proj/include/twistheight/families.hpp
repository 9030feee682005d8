#pragma once

// Quadratic-twist families with an explicit point.
//
// Given a monic irreducible cubic f with root a and F with F' = m f, let f1 be
// the characteristic polynomial of F(a). Then D(t) = f1(F(t)) / f(t)^2 is a
// polynomial, and (D F(t), D^2 f(t)) lies on the twist of y^2 = f1(x) by D(t).

#include "twistheight/bounds.hpp"
#include "twistheight/curve.hpp"
#include "twistheight/exactmath.hpp"
#include "twistheight/polynomial.hpp"

#include <optional>
#include <string>
#include <vector>

namespace twistheight {

struct TwistFamily {
    IntPolynomial f;
    IntPolynomial F;
    IntPolynomial f1;
    IntPolynomial D;
    ExactInt m;
    /// Set when the family came from f = t^3 + A t + B, F = t^4 + 2A t^2 + 4B t.
    std::optional<std::pair<ExactInt, ExactInt>> ab;

    /// y^2 = f1(x)
    WeierstrassModel base_curve() const;
    IntPolynomial point_x() const { return D * F; }
    IntPolynomial point_y() const { return D * D * f; }

    bool operator==(const TwistFamily &o) const {
        return f == o.f && F == o.F && f1 == o.f1 && D == o.D && m == o.m;
    }
};

/// Throws error_kind::hypothesis when f is not a monic cubic with nonzero
/// discriminant, f is reducible, F' is not an integer multiple of f, or f1 is
/// inseparable.
TwistFamily construct_family(const IntPolynomial &f, const IntPolynomial &F);

/// Closed form for f = t^3 + A t + B, F = t^4 + 2A t^2 + 4B t:
/// f1 = x^3 + 2A^2 x^2 + A(A^3 + 18B^2) x + B^2(2A^3 + 27B^2),
/// D = t^6 + 4A t^4 + 10B t^3 + 5A^2 t^2 + 18AB t + 2A^3 + 27B^2.
TwistFamily closed_form_family(const ExactInt &A, const ExactInt &B);

/// f = t^3 + t + 3, F = t^4 + 2t^2 + 12t, so f1 = x^3 + 2x^2 + 163x + 2205.
TwistFamily degree_six_family();

/// Conditions under which the uniform lower bound applies to every square-free
/// twist of y^2 = f1(x): the base discriminant must be 6th-power-free. For
/// (A, B) families the sufficient conditions B odd, gcd(A, B) = 1 and disc(f)
/// square-free are reported as well.
struct LowerBoundHypotheses {
    bool sixth_power_free = false;
    bool factorization_complete = false;
    std::optional<bool> b_odd;
    std::optional<bool> coprime;
    std::optional<bool> disc_f_square_free;

    bool applicable() const { return factorization_complete && sixth_power_free; }
};

LowerBoundHypotheses uniform_bound_hypotheses(const TwistFamily &fam, unsigned long trial_bound = default_trial_bound);

struct FamilyInstance {
    ExactInt t;
    ExactInt D;
    SquareFreeVerdict square_free;
    WeierstrassModel curve;
    CurvePoint point;
};

/// E_{D(t)} and its point. Throws error_kind::domain when D(t) = 0.
FamilyInstance instantiate(const TwistFamily &fam, const ExactInt &t, unsigned long trial_bound = default_trial_bound);

struct ScanOptions {
    unsigned precision = default_precision;
    unsigned long trial_bound = default_trial_bound;
    /// Certify t whose D(t) has unknown square-freeness instead of skipping them.
    bool allow_unknown = false;
    unsigned threads = 0;
};

struct ScanEntry {
    FamilyInstance instance;
    std::optional<PrimitivityCertificate> certificate;
    std::string skip_reason;  // empty when certified
};

/// Primitivity certificates for t_lo <= t <= t_hi, ordered by t. D(t) = 0 is
/// left out; non-square-free D(t) and per-instance errors become entries with a
/// skip reason.
std::vector<ScanEntry> scan(const TwistFamily &fam, long t_lo, long t_hi, const ScanOptions &opts = {});

} // namespace twistheight
