#pragma once

// Exact integer helpers: valuations, factoring, square-freeness.
//
// ExactInt / ExactRational are GMP's mpz_class / mpq_class. mpq_class keeps
// itself canonical (gcd(num, den) = 1, den > 0) as long as every value we
// build goes through canonicalize(), which the helpers below do.

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace twistheight {

using ExactInt = mpz_class;
using ExactRational = mpq_class;

inline constexpr unsigned long default_trial_bound = 1000000;
inline constexpr unsigned long default_rho_budget = 1ul << 22;

/// Largest e with p^e | n. Throws math_error(domain) for n = 0 or p < 2.
unsigned long valuation(const ExactInt &n, const ExactInt &p);

/// v_p of a nonzero rational (may be negative).
long valuation(const ExactRational &r, const ExactInt &p);

/// Deterministic primality for n < 3.3e24 (Miller-Rabin with the first 13
/// prime bases). Returns false for anything larger, prime or not.
bool is_proven_prime(const ExactInt &n);

/// Baillie-PSW style probable prime test (GMP).
bool is_probable_prime(const ExactInt &n);

struct PrimePower {
    ExactInt prime;
    unsigned long exponent = 0;
    bool proven = true;   // false when the prime is only a probable prime

    bool operator==(const PrimePower &) const = default;
};

struct Factorization {
    int sign = 1;
    std::vector<PrimePower> factors;  // ascending by prime
    ExactInt unfactored = 1;          // composite cofactor the budget could not split

    bool complete() const { return unfactored == 1; }
    bool proven() const;
    unsigned long max_exponent() const;
    ExactInt value() const;
};

/// Trial division up to `trial_bound`, then perfect-power extraction and
/// Pollard-Brent rho with at most `rho_budget` iterations per split.
Factorization factor(const ExactInt &n,
                     unsigned long trial_bound = default_trial_bound,
                     unsigned long rho_budget = default_rho_budget);

/// Primes dividing n found by trial division alone; `residual` receives the
/// unfactored part. Primes are returned with multiplicity in PrimePower.
std::vector<PrimePower> trial_factor(const ExactInt &n, unsigned long trial_bound, ExactInt &residual);

struct SquareFreeVerdict {
    enum class kind { square_free, not_square_free, unknown };

    kind verdict = kind::unknown;
    ExactInt witness = 0;   // p with p^2 | n when not_square_free
    ExactInt residual = 1;  // unfactored residual when unknown

    bool is_square_free() const { return verdict == kind::square_free; }
    bool is_not_square_free() const { return verdict == kind::not_square_free; }
    bool is_unknown() const { return verdict == kind::unknown; }
};

const char *to_string(SquareFreeVerdict::kind k) noexcept;

/// Trial division by primes <= trial_bound, then a bounded rho on the
/// residual. Definite verdicts only when every prime factor is proven; an
/// unsplit composite residual gives `unknown`.
SquareFreeVerdict square_free_test(const ExactInt &n, unsigned long trial_bound = default_trial_bound);

/// True when no prime appears to the 6th power. Requires a complete factorization.
bool is_sixth_power_free(const Factorization &f);

/// "2^4 * 3^2 * 13^3 * 19^3" (with a leading "-" for negative values).
std::string to_string(const Factorization &f);

/// Primes <= bound. Sieves are cached per bound and shared between threads.
std::shared_ptr<const std::vector<unsigned long>> small_primes(unsigned long bound);

} // namespace twistheight
