#include "twistheight/families.hpp"

#include "twistheight/errors.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <thread>

namespace twistheight {

WeierstrassModel TwistFamily::base_curve() const {
    return WeierstrassModel::make_short(f1.coeff(2), f1.coeff(1), f1.coeff(0));
}

namespace {

[[noreturn]] void bad_family(const std::string &msg) { throw math_error(error_kind::hypothesis, msg); }

} // namespace

TwistFamily construct_family(const IntPolynomial &f, const IntPolynomial &F) {
    if (f.degree() != 3 || !f.is_monic())
        bad_family("f must be a monic cubic, got " + f.to_string());
    if (discriminant(f) == 0)
        bad_family("f has a repeated root: " + f.to_string());
    if (!integer_roots(f).empty())
        bad_family("f is reducible over Q: " + f.to_string());
    IntPolynomial dF = F.derivative();
    if (dF.degree() != 3)
        bad_family("F' is not a multiple of f (F = " + F.to_string() + ")");
    ExactInt m = dF.leading();
    if (!(dF == m * f))
        bad_family("F' is not a multiple of f (F' = " + dF.to_string() + ")");

    TwistFamily fam;
    fam.f = f;
    fam.F = F;
    fam.m = m;
    fam.f1 = char_poly_of_image(f, F);
    if (discriminant(fam.f1) == 0)
        bad_family("degenerate family: f1 = " + fam.f1.to_string() + " has a repeated root");
    fam.D = exact_divide(fam.f1.compose(F), f * f);
    return fam;
}

TwistFamily closed_form_family(const ExactInt &A, const ExactInt &B) {
    IntPolynomial f(std::vector<ExactInt>{B, A, 0, 1});
    if (discriminant(f) == 0)
        bad_family("t^3 + At + B has a repeated root");
    if (!integer_roots(f).empty())
        bad_family("f is reducible over Q: " + f.to_string());
    if (B == 0)
        bad_family("degenerate family: B = 0 makes f1 inseparable");
    TwistFamily fam;
    fam.f = f;
    fam.F = IntPolynomial(std::vector<ExactInt>{0, 4 * B, 2 * A, 0, 1});
    fam.m = 4;
    const ExactInt A2 = A * A, A3 = A2 * A, B2 = B * B;
    fam.f1 = IntPolynomial(std::vector<ExactInt>{B2 * (2 * A3 + 27 * B2), A * (A3 + 18 * B2), 2 * A2, 1});
    fam.D = IntPolynomial(std::vector<ExactInt>{2 * A3 + 27 * B2, 18 * A * B, 5 * A2, 10 * B, 4 * A, 0, 1});
    fam.ab = std::make_pair(A, B);
    return fam;
}

TwistFamily degree_six_family() {
    TwistFamily fam = construct_family(IntPolynomial{3, 1, 0, 1}, IntPolynomial{0, 12, 2, 0, 1});
    fam.ab = std::make_pair(ExactInt(1), ExactInt(3));
    return fam;
}

LowerBoundHypotheses uniform_bound_hypotheses(const TwistFamily &fam, unsigned long trial_bound) {
    LowerBoundHypotheses h;
    Factorization fd = factor(abs(fam.base_curve().discriminant()), trial_bound);
    h.factorization_complete = fd.complete();
    h.sixth_power_free = h.factorization_complete && is_sixth_power_free(fd);
    if (fam.ab) {
        const auto &[A, B] = *fam.ab;
        h.b_odd = B % 2 != 0;
        h.coprime = gcd(A, B) == 1;
        h.disc_f_square_free = square_free_test(abs(discriminant(fam.f)), trial_bound).is_square_free();
    }
    return h;
}

FamilyInstance instantiate(const TwistFamily &fam, const ExactInt &t, unsigned long trial_bound) {
    ExactInt d = fam.D(t);
    if (d == 0)
        throw math_error(error_kind::domain, "D(" + t.get_str() + ") = 0");
    WeierstrassModel curve = twist(fam.base_curve(), d);
    ExactInt x = d * fam.F(t), y = d * d * fam.f(t);
    CurvePoint point = CurvePoint::from_affine(curve, ExactRational(x), ExactRational(y));
    return FamilyInstance{t, d, square_free_test(abs(d), trial_bound), curve, point};
}

std::vector<ScanEntry> scan(const TwistFamily &fam, long t_lo, long t_hi, const ScanOptions &opts) {
    if (t_lo > t_hi)
        throw math_error(error_kind::domain, "empty t range");
    const WeierstrassModel base = fam.base_curve();
    const std::size_t n = static_cast<std::size_t>(t_hi - t_lo) + 1;
    std::vector<std::optional<ScanEntry>> slots(n);

    // one lower-bound report per sign, computed lazily
    std::map<int, LowerBoundReport> reports;
    std::mutex reports_mutex;
    auto report_for = [&](int sign) {
        std::lock_guard<std::mutex> lock(reports_mutex);
        auto it = reports.find(sign);
        if (it == reports.end())
            it = reports.emplace(sign, lower_bound(base, sign, opts.precision, opts.trial_bound)).first;
        return it->second;
    };

    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&](std::size_t i) {
        try {
            ExactInt t(t_lo + static_cast<long>(i));
            if (fam.D(t) == 0)
                return;
            ScanEntry entry{instantiate(fam, t, opts.trial_bound), std::nullopt, {}};
            const SquareFreeVerdict &v = entry.instance.square_free;
            if (v.is_not_square_free()) {
                entry.skip_reason =
                    entry.instance.D.get_str() + " not square-free (" + v.witness.get_str() + "^2 divides it)";
            } else if (v.is_unknown() && !opts.allow_unknown) {
                entry.skip_reason = "square-freeness of " + entry.instance.D.get_str() + " unknown";
            } else {
                try {
                    PrimitivityOptions po;
                    po.trial_bound = opts.trial_bound;
                    po.base_report = report_for(sgn(entry.instance.D));
                    entry.certificate =
                        primitivity_check(base, entry.instance.D, entry.instance.point, opts.precision, po);
                } catch (const math_error &e) {
                    entry.skip_reason = std::string("error (") + to_string(e.kind()) + "): " + e.what();
                }
            }
            slots[i] = std::move(entry);
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
        }
    };
    unsigned workers = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    // interleave so that the expensive large |t| are spread out
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers)
                work(i);
        });
    for (auto &th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);

    std::vector<ScanEntry> out;
    for (auto &s : slots)
        if (s)
            out.push_back(std::move(*s));
    return out;
}

} // namespace twistheight
