#pragma once

// Periods, local heights at every place, and their sum.
//
// Heights use the doubled normalization: h(x) = log max(|n|, |d|) and
// ĥ(P) = lim h(2^n P) / 4^n, so a good prime contributes
// max(0, -v_p(x)) log p.

#include "twistheight/bigfloat.hpp"
#include "twistheight/curve.hpp"
#include "twistheight/exactmath.hpp"

#include <optional>
#include <string>
#include <vector>

namespace twistheight {

enum class lattice_shape { rectangular, rhombic };

const char *to_string(lattice_shape s);

/// Period lattice of a real model. omega1 is the real period, omega2 has
/// positive imaginary part and Re(omega2/omega1) is 0 (rectangular, Delta > 0)
/// or -1/2 (rhombic, Delta < 0). q = exp(2 pi i omega2/omega1) is real.
struct PeriodData {
    BigFloat omega1;
    BigComplex omega2;
    BigComplex q;
    lattice_shape shape = lattice_shape::rectangular;
    /// roots of x^3 + (b2/4) x^2 + (b4/2) x + b6/4
    CubicRoots roots;
    unsigned precision = default_precision;
};

PeriodData periods(const WeierstrassModel &e, unsigned precision = default_precision);

/// omega1 for D > 0, Im(omega2) for D < 0 and Delta > 0, 2 Im(omega2) for D < 0 and Delta < 0.
BigFloat omega_for_twist(const PeriodData &pd, int d_sign, int disc_sign);

/// Real elliptic logarithm z in [0, omega1) with x(z) = x(Q); branch fixed by the sign of 2y + a1 x + a3.
/// Points on the egg component (Delta > 0, x <= e2) are rejected.
BigFloat elliptic_log(const WeierstrassModel &e, const CurvePoint &q, const PeriodData &pd);

enum class local_case { good, unbounded_denominator, multiplicative, additive_psi3, additive_psi2 };

const char *to_string(local_case c);

/// One finite place. value = coefficient * log p. An aggregated entry stands
/// for all primes of an unfactored composite p at once; its valuations are unset.
struct LocalEntry {
    ExactInt p;
    bool aggregated = false;
    local_case kind = local_case::good;
    long A = 0, B = 0, C = 0, N = 0;
    ExactRational coefficient;
    BigFloat value;
};

/// Valuations of zero are reported as this.
inline constexpr long infinite_valuation = 1L << 40;

/// Throws error_kind::hypothesis unless the model is minimal at p.
void require_minimal_at(const WeierstrassModel &e, const ExactInt &p);

LocalEntry nonarch_local_height(const WeierstrassModel &e, const CurvePoint &q, const ExactInt &p,
                                unsigned precision = default_precision);

/// Theta-series evaluation. Rejects infinity and 2-torsion. Egg-component
/// points are handled through 2Q (short models only).
BigFloat arch_local_height_theta(const WeierstrassModel &e, const CurvePoint &q, const PeriodData &pd,
                                 unsigned precision = default_precision);

/// Tate's series log|x| + sum 4^-(i+1) log z(2^i Q). With auto_shift the model
/// is first translated so every real root of the cubic is at least 1, which
/// keeps z positive along the orbit. Throws error_kind::hypothesis
/// ("series precondition violated; use theta method") when some z <= 0.
BigFloat arch_local_height_tate(const WeierstrassModel &e, const CurvePoint &q, unsigned precision = default_precision,
                                bool auto_shift = true);

enum class arch_method { theta, tate };

const char *to_string(arch_method m);

struct LocalHeightBreakdown {
    BigFloat archimedean;
    arch_method method = arch_method::theta;
    std::vector<LocalEntry> entries;
    bool torsion = false;
    std::optional<long> torsion_order;
    unsigned precision = default_precision;

    BigFloat total() const;
};

struct HeightOptions {
    unsigned long trial_bound = default_trial_bound;
    unsigned long rho_budget = default_rho_budget;
    /// Forces one archimedean method; otherwise theta, then Tate if theta fails.
    std::optional<arch_method> method;
    /// Factorization of the model's discriminant, if already known.
    std::optional<Factorization> discriminant_factors;
};

struct CanonicalHeight {
    BigFloat value;
    LocalHeightBreakdown breakdown;
};

/// Sum of local heights on a short model that is minimal at every prime.
/// Torsion points get value 0 and the torsion flag.
CanonicalHeight canonical_height(const WeierstrassModel &e, const CurvePoint &q, unsigned precision = default_precision,
                                 const HeightOptions &opts = {});
CanonicalHeight canonical_height(const WeierstrassModel &e, const CurvePoint &q, const PeriodData &pd,
                                 unsigned precision = default_precision, const HeightOptions &opts = {});

/// C with |ĥ(P) - h(x(P))| <= C for every P, from Silverman's explicit bounds (doubled).
BigFloat height_difference_bound(const WeierstrassModel &e, unsigned precision = default_precision);

struct NaiveLimit {
    bool torsion = false;
    int doublings = 0;
    BigFloat value;
    /// height_difference_bound / 4^doublings
    BigFloat error_bound;
};

/// h(2^n Q) / 4^n with exact doubling, 0 <= n <= 8.
NaiveLimit naive_limit_estimate(const WeierstrassModel &e, const CurvePoint &q, int doublings,
                                unsigned precision = default_precision);

} // namespace twistheight
