#include "twistheight/exactmath.hpp"

#include "twistheight/errors.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace twistheight {

const char *to_string(error_kind kind) noexcept {
    switch (kind) {
    case error_kind::domain: return "domain";
    case error_kind::inexact_division: return "inexact_division";
    case error_kind::singular_curve: return "singular_curve";
    case error_kind::point_not_on_curve: return "point_not_on_curve";
    case error_kind::hypothesis: return "hypothesis";
    case error_kind::precision: return "precision";
    }
    return "unknown";
}

unsigned long valuation(const ExactInt &n, const ExactInt &p) {
    if (n == 0)
        throw math_error(error_kind::domain, "valuation of zero undefined");
    if (p < 2)
        throw math_error(error_kind::domain, "valuation base must be >= 2");
    ExactInt rest;
    return mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
}

long valuation(const ExactRational &r, const ExactInt &p) {
    if (r == 0)
        throw math_error(error_kind::domain, "valuation of zero undefined");
    long up = static_cast<long>(valuation(ExactInt(r.get_num()), p));
    long down = static_cast<long>(valuation(ExactInt(r.get_den()), p));
    return up - down;
}

namespace {

// n - 1 = d * 2^s; returns true if n is a strong probable prime to base a.
bool strong_probable_prime(const ExactInt &n, unsigned long a) {
    ExactInt n1 = n - 1;
    ExactInt d = n1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    ExactInt x;
    ExactInt base = a;
    mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n1)
        return true;
    for (unsigned long r = 1; r < s; ++r) {
        mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
        if (x == n1)
            return true;
        if (x == 1)
            return false;
    }
    return false;
}

// Deterministic bound for bases 2..41 (Sorenson-Webster).
const ExactInt &mr_deterministic_limit() {
    static const ExactInt limit("3317044064679887385961981");
    return limit;
}

} // namespace

bool is_proven_prime(const ExactInt &n) {
    if (n < 2)
        return false;
    static constexpr unsigned long bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
    for (unsigned long b : bases) {
        if (n == b)
            return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), b))
            return false;
    }
    if (n >= mr_deterministic_limit())
        return false;
    for (unsigned long b : bases)
        if (!strong_probable_prime(n, b))
            return false;
    return true;
}

bool is_probable_prime(const ExactInt &n) {
    if (n < 2)
        return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

std::shared_ptr<const std::vector<unsigned long>> small_primes(unsigned long bound) {
    static std::mutex mutex;
    static std::map<unsigned long, std::shared_ptr<const std::vector<unsigned long>>> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(bound); it != cache.end())
        return it->second;
    std::vector<bool> composite(bound + 1, false);
    auto primes = std::make_shared<std::vector<unsigned long>>();
    for (unsigned long i = 2; i <= bound; ++i) {
        if (composite[i])
            continue;
        primes->push_back(i);
        for (unsigned long j = i * i; j <= bound; j += i)
            composite[j] = true;
    }
    cache.emplace(bound, primes);
    return primes;
}

std::vector<PrimePower> trial_factor(const ExactInt &n, unsigned long trial_bound, ExactInt &residual) {
    if (n == 0)
        throw math_error(error_kind::domain, "cannot factor zero");
    residual = abs(n);
    std::vector<PrimePower> out;
    auto primes = small_primes(trial_bound);
    ExactInt pz;
    for (unsigned long p : *primes) {
        if (residual == 1)
            break;
        if (residual < static_cast<double>(p) * static_cast<double>(p) && mpz_fits_ulong_p(residual.get_mpz_t())) {
            // residual has no factor <= sqrt(residual): it is prime
            out.push_back({residual, 1, true});
            residual = 1;
            break;
        }
        if (!mpz_divisible_ui_p(residual.get_mpz_t(), p))
            continue;
        pz = p;
        unsigned long e = mpz_remove(residual.get_mpz_t(), residual.get_mpz_t(), pz.get_mpz_t());
        out.push_back({pz, e, true});
    }
    return out;
}

namespace {

// Pollard-Brent rho. Returns a nontrivial factor or 0.
ExactInt rho_split(const ExactInt &n, unsigned long budget) {
    if (mpz_even_p(n.get_mpz_t()))
        return 2;
    for (unsigned long c = 1; c < 20; ++c) {
        ExactInt y = 2, x, q = 1, g = 1, ys, t;
        unsigned long r = 1, spent = 0;
        const unsigned long m = 128;
        while (g == 1 && spent < budget) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) {
                y = (y * y + c) % n;
            }
            unsigned long k = 0;
            while (k < r && g == 1) {
                ys = y;
                unsigned long lim = std::min(m, r - k);
                for (unsigned long i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    t = abs(x - y);
                    q = (q * t) % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += lim;
                spent += lim;
            }
            r *= 2;
        }
        if (g == n) {
            // backtrack one step at a time
            do {
                ys = (ys * ys + c) % n;
                t = abs(x - ys);
                mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != 1 && g != n)
            return g;
        if (spent >= budget)
            break;
    }
    return 0;
}

// Largest k with n = s^k, s > 1; returns 1 when n is not a perfect power.
unsigned long perfect_power(const ExactInt &n, ExactInt &root) {
    if (!mpz_perfect_power_p(n.get_mpz_t()) || n < 4) {
        root = n;
        return 1;
    }
    unsigned long bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    for (unsigned long k = bits; k >= 2; --k) {
        if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0 && root > 1)
            return k;
    }
    root = n;
    return 1;
}

void split_into(const ExactInt &n, unsigned long multiplicity, unsigned long trial_bound, unsigned long budget,
                std::vector<PrimePower> &out, ExactInt &unfactored) {
    if (n == 1)
        return;
    double b = static_cast<double>(trial_bound);
    if (n < b * b) {
        out.push_back({n, multiplicity, true});
        return;
    }
    if (is_proven_prime(n)) {
        out.push_back({n, multiplicity, true});
        return;
    }
    ExactInt root;
    if (unsigned long k = perfect_power(n, root); k > 1) {
        split_into(root, multiplicity * k, trial_bound, budget, out, unfactored);
        return;
    }
    if (is_probable_prime(n)) {
        out.push_back({n, multiplicity, false});
        return;
    }
    ExactInt g = rho_split(n, budget);
    if (g == 0) {
        ExactInt power;
        mpz_pow_ui(power.get_mpz_t(), n.get_mpz_t(), multiplicity);
        unfactored *= power;
        return;
    }
    split_into(g, multiplicity, trial_bound, budget, out, unfactored);
    split_into(ExactInt(n / g), multiplicity, trial_bound, budget, out, unfactored);
}

} // namespace

bool Factorization::proven() const {
    return complete() && std::all_of(factors.begin(), factors.end(), [](const PrimePower &p) { return p.proven; });
}

unsigned long Factorization::max_exponent() const {
    unsigned long e = 0;
    for (const auto &pp : factors)
        e = std::max(e, pp.exponent);
    return e;
}

ExactInt Factorization::value() const {
    ExactInt v = unfactored;
    ExactInt pk;
    for (const auto &pp : factors) {
        mpz_pow_ui(pk.get_mpz_t(), pp.prime.get_mpz_t(), pp.exponent);
        v *= pk;
    }
    return sign < 0 ? ExactInt(-v) : v;
}

Factorization factor(const ExactInt &n, unsigned long trial_bound, unsigned long rho_budget) {
    if (trial_bound < 2)
        throw math_error(error_kind::domain, "trial bound must be >= 2");
    Factorization f;
    f.sign = n < 0 ? -1 : 1;
    ExactInt residual;
    f.factors = trial_factor(n, trial_bound, residual);
    std::vector<PrimePower> rest;
    split_into(residual, 1, trial_bound, rho_budget, rest, f.unfactored);
    for (auto &pp : rest) {
        auto it = std::find_if(f.factors.begin(), f.factors.end(),
                               [&](const PrimePower &q) { return q.prime == pp.prime; });
        if (it != f.factors.end())
            it->exponent += pp.exponent;
        else
            f.factors.push_back(pp);
    }
    std::sort(f.factors.begin(), f.factors.end(),
              [](const PrimePower &a, const PrimePower &b) { return a.prime < b.prime; });
    return f;
}

const char *to_string(SquareFreeVerdict::kind k) noexcept {
    switch (k) {
    case SquareFreeVerdict::kind::square_free: return "square_free";
    case SquareFreeVerdict::kind::not_square_free: return "not_square_free";
    case SquareFreeVerdict::kind::unknown: return "unknown";
    }
    return "unknown";
}

SquareFreeVerdict square_free_test(const ExactInt &n, unsigned long trial_bound) {
    if (n == 0)
        throw math_error(error_kind::domain, "square-free test of zero undefined");
    if (trial_bound < 2)
        throw math_error(error_kind::domain, "trial bound must be >= 2");
    SquareFreeVerdict v;
    Factorization f = factor(n, trial_bound, default_rho_budget);
    for (const auto &pp : f.factors) {
        // p^2 | n is a fact about the integer p, whether or not p was proven prime
        if (pp.exponent >= 2) {
            v.verdict = SquareFreeVerdict::kind::not_square_free;
            v.witness = pp.prime;
            return v;
        }
    }
    if (!f.complete()) {
        // an unsplit residual that is a perfect power s^k, k >= 2
        ExactInt root;
        if (perfect_power(f.unfactored, root) > 1) {
            v.verdict = SquareFreeVerdict::kind::not_square_free;
            v.witness = root;
            return v;
        }
    }
    if (f.proven()) {
        v.verdict = SquareFreeVerdict::kind::square_free;
        return v;
    }
    v.verdict = SquareFreeVerdict::kind::unknown;
    v.residual = f.unfactored;
    for (const auto &pp : f.factors)
        if (!pp.proven)
            v.residual *= pp.prime;
    return v;
}

bool is_sixth_power_free(const Factorization &f) {
    if (!f.complete())
        throw math_error(error_kind::precision, "6th-power-freeness needs a complete factorization");
    return f.max_exponent() < 6;
}

std::string to_string(const Factorization &f) {
    std::ostringstream os;
    if (f.sign < 0)
        os << "-";
    bool first = true;
    for (const auto &pp : f.factors) {
        if (!first)
            os << " * ";
        first = false;
        os << pp.prime;
        if (pp.exponent > 1)
            os << "^" << pp.exponent;
    }
    if (!f.complete()) {
        if (!first)
            os << " * ";
        os << "(" << f.unfactored << ")";
        first = false;
    }
    if (first)
        os << "1";
    return os.str();
}

} // namespace twistheight
