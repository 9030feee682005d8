#include "twistheight/serialize.hpp"

#include "twistheight/errors.hpp"

#include <cstdio>

namespace twistheight {

Json to_json(const ExactInt &n) { return n.get_str(); }

Json to_json(const ExactRational &r) {
    ExactRational c = r;
    c.canonicalize();
    return c.get_str();
}

ExactInt int_from_json(const Json &j) {
    try {
        if (j.is_number_integer())
            return ExactInt(std::to_string(j.get<long long>()));
        if (j.is_string())
            return ExactInt(j.get<std::string>());
    } catch (const std::invalid_argument &) {
    }
    throw math_error(error_kind::domain, "expected an integer, got " + j.dump());
}

namespace {

std::string short_error(const BigFloat &e) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1e", e.to_double());
    return buf;
}

std::optional<long> valuation_json(long v) {
    if (v >= infinite_valuation)
        return std::nullopt;
    return v;
}

Json opt(const std::optional<long> &v) { return v ? Json(*v) : Json(nullptr); }

} // namespace

Json numeric_json(const BigFloat &x, unsigned precision, const BigFloat &error) {
    return Json{{"value", x.to_string_for(precision)}, {"error", short_error(error)}};
}

Json numeric_json(const BigFloat &x, unsigned precision) {
    BigFloat one(1, x.precision());
    BigFloat err = BigFloat::exp2(-static_cast<long>(precision) + 16, x.precision()) * max(one, abs(x));
    return numeric_json(x, precision, err);
}

Json to_json(const WeierstrassModel &e) {
    Json j = Json::array();
    for (const auto &a : e.coefficients())
        j.push_back(to_json(a));
    return j;
}

WeierstrassModel model_from_json(const Json &j) {
    if (!j.is_array() || (j.size() != 5 && j.size() != 3))
        throw math_error(error_kind::domain, "a curve is [a1,a2,a3,a4,a6] or [a2,a4,a6]");
    if (j.size() == 3)
        return WeierstrassModel::make_short(int_from_json(j[0]), int_from_json(j[1]), int_from_json(j[2]));
    return WeierstrassModel::make(int_from_json(j[0]), int_from_json(j[1]), int_from_json(j[2]), int_from_json(j[3]),
                                  int_from_json(j[4]));
}

Json to_json(const CurvePoint &p) {
    if (p.is_infinity())
        return "O";
    return Json::array({to_json(p.alpha()), to_json(p.beta()), to_json(p.delta())});
}

CurvePoint point_from_json(const Json &j, const WeierstrassModel &e) {
    if (j.is_string() && j.get<std::string>() == "O")
        return CurvePoint::infinity();
    if (!j.is_array() || j.size() != 3)
        throw math_error(error_kind::domain, "a point is [alpha,beta,delta] or \"O\"");
    return CurvePoint::from_canonical(e, int_from_json(j[0]), int_from_json(j[1]), int_from_json(j[2]));
}

Json to_json(const IntPolynomial &f) {
    Json j = Json::array();
    for (int i = 0; i <= std::max(f.degree(), 0); ++i)
        j.push_back(to_json(f.coeff(i)));
    return j;
}

IntPolynomial polynomial_from_json(const Json &j) {
    if (!j.is_array() || j.empty())
        throw math_error(error_kind::domain, "a polynomial is a nonempty coefficient list");
    std::vector<ExactInt> c;
    for (const auto &x : j)
        c.push_back(int_from_json(x));
    return IntPolynomial(c);
}

Json to_json(const Factorization &f) {
    Json factors = Json::array();
    for (const auto &pp : f.factors)
        factors.push_back(Json{{"p", to_json(pp.prime)}, {"e", pp.exponent}, {"proven", pp.proven}});
    return Json{{"sign", f.sign},
                {"factors", factors},
                {"unfactored", to_json(f.unfactored)},
                {"text", to_string(f)}};
}

Json to_json(const SquareFreeVerdict &v) {
    Json j{{"verdict", to_string(v.verdict)}};
    if (v.is_not_square_free())
        j["witness"] = to_json(v.witness);
    if (v.is_unknown())
        j["residual"] = to_json(v.residual);
    return j;
}

Json to_json(const PeriodData &pd) {
    const unsigned p = pd.precision;
    Json roots = Json::array();
    for (const auto &r : pd.roots.real)
        roots.push_back(numeric_json(r, p));
    return Json{{"shape", to_string(pd.shape)},
                {"omega1", numeric_json(pd.omega1, p)},
                {"omega2", Json{{"re", numeric_json(pd.omega2.re, p)}, {"im", numeric_json(pd.omega2.im, p)}}},
                {"q", Json{{"re", numeric_json(pd.q.re, p)}, {"im", numeric_json(pd.q.im, p)}}},
                {"real_roots", roots},
                {"precision", p}};
}

Json to_json(const LocalEntry &e, unsigned precision) {
    Json j{{"place", to_json(e.p)}, {"value", numeric_json(e.value, precision)}, {"coefficient", to_json(e.coefficient)},
           {"case", to_string(e.kind)}};
    if (e.aggregated) {
        j["aggregated"] = true;
        return j;
    }
    j["A"] = opt(valuation_json(e.A));
    j["B"] = opt(valuation_json(e.B));
    j["C"] = opt(valuation_json(e.C));
    j["N"] = opt(valuation_json(e.N));
    return j;
}

Json to_json(const LocalHeightBreakdown &b) {
    Json places = Json::array();
    for (const auto &e : b.entries)
        places.push_back(to_json(e, b.precision));
    Json j{{"archimedean", numeric_json(b.archimedean, b.precision)},
           {"method", to_string(b.method)},
           {"places", places},
           {"torsion", b.torsion}};
    j["torsion_order"] = opt(b.torsion_order);
    j["precision"] = b.precision;
    return j;
}

Json to_json(const WeierstrassModel &e, const CurvePoint &p, const CanonicalHeight &h) {
    return Json{{"curve", to_json(e)},
                {"point", to_json(p)},
                {"height", numeric_json(h.value, h.breakdown.precision)},
                {"breakdown", to_json(h.breakdown)}};
}

Json to_json(const LowerBoundReport &r) {
    const unsigned p = r.precision;
    const BigFloat err = r.error();
    Json j{{"curve", to_json(r.curve)}, {"d_sign", r.d_sign}};
    j["d"] = r.d ? to_json(*r.d) : Json(nullptr);
    j["d_square_free"] = r.d_verdict ? to_json(*r.d_verdict) : Json(nullptr);
    j["discriminant"] = to_json(r.disc_factors);
    j["abs_q"] = numeric_json(r.abs_q, p);
    j["omega"] = numeric_json(r.omega, p);
    j["q_term"] = numeric_json(r.q_term, p);
    j["omega_term"] = numeric_json(r.omega_term, p);
    j["prime_term"] = numeric_json(r.prime_term, p);
    j["two_term"] = numeric_json(r.two_term, p);
    j["constant"] = numeric_json(r.constant_part, p, err);
    j["bound"] = r.d ? numeric_json(r.bound(*r.d), p, err) : Json(nullptr);
    j["precision"] = p;
    return j;
}

Json to_json(const PrimitivityCertificate &c) {
    const unsigned p = c.precision;
    Json j{{"verdict", to_string(c.verdict)},
           {"d", to_json(c.d)},
           {"curve", to_json(c.curve)},
           {"point", to_json(c.point)},
           {"hhat", numeric_json(c.hhat, p)},
           {"lower_bound", numeric_json(c.lower_bound, p)},
           {"hhat_upper", c.hhat_upper.to_string_for(p)},
           {"lower_bound_lower", c.lower_bound_lower.to_string_for(p)}};
    j["m_max"] = opt(c.m_max);
    j["bound_report"] = c.verdict == primitivity_verdict::torsion ? Json(nullptr) : to_json(c.bound_report);
    j["breakdown"] = to_json(c.breakdown);
    j["notes"] = c.notes;
    j["precision"] = p;
    return j;
}

Json to_json(const PrimeBoundCheck &c) {
    return Json{{"p", to_json(c.p)},       {"class", to_string(c.cls)}, {"statement", c.statement},
                {"lhs", to_json(c.lhs)},   {"bound", to_json(c.bound)}, {"holds", c.holds}};
}

Json to_json(const TwistFamily &fam) {
    Json j{{"f", to_json(fam.f)}, {"F", to_json(fam.F)}, {"f1", to_json(fam.f1)}, {"D", to_json(fam.D)},
           {"m", to_json(fam.m)}};
    if (fam.ab)
        j["ab"] = Json::array({to_json(fam.ab->first), to_json(fam.ab->second)});
    return j;
}

TwistFamily family_from_json(const Json &j) {
    TwistFamily fam = construct_family(polynomial_from_json(j.at("f")), polynomial_from_json(j.at("F")));
    if (j.contains("f1") && !(polynomial_from_json(j["f1"]) == fam.f1))
        throw math_error(error_kind::hypothesis, "stored f1 does not match f and F");
    if (j.contains("D") && !(polynomial_from_json(j["D"]) == fam.D))
        throw math_error(error_kind::hypothesis, "stored D does not match f and F");
    if (j.contains("m") && int_from_json(j["m"]) != fam.m)
        throw math_error(error_kind::hypothesis, "stored m does not match F' / f");
    if (j.contains("ab"))
        fam.ab = std::make_pair(int_from_json(j["ab"].at(0)), int_from_json(j["ab"].at(1)));
    return fam;
}

Json to_json(const FamilyInstance &in) {
    return Json{{"t", to_json(in.t)},
                {"D", to_json(in.D)},
                {"square_free", to_json(in.square_free)},
                {"curve", to_json(in.curve)},
                {"point", to_json(in.point)}};
}

Json to_json(const ScanEntry &s) {
    Json j = to_json(s.instance);
    j["certificate"] = s.certificate ? to_json(*s.certificate) : Json(nullptr);
    j["skipped"] = s.skip_reason.empty() ? Json(nullptr) : Json(s.skip_reason);
    return j;
}

Json to_json(const FamilyUpperBound &b, unsigned precision) {
    return Json{{"t", to_json(b.t)},
                {"D", to_json(b.d)},
                {"archimedean", numeric_json(b.archimedean, precision)},
                {"finite", numeric_json(b.finite, precision)},
                {"total", numeric_json(b.total, precision)},
                {"square_free_verified", b.square_free_verified}};
}

Json to_json(const ThresholdResult &r, unsigned precision) {
    Json pts = Json::array();
    for (const auto &pt : r.points)
        pts.push_back(Json{{"t", pt.t}, {"ratio", pt.ratio ? Json(pt.ratio->to_string(12)) : Json(nullptr)}});
    Json j{{"lower_constant", numeric_json(r.lower_constant, precision)},
           {"upper_constant", numeric_json(r.upper_constant, precision)}};
    j["positive"] = opt(r.positive);
    j["negative"] = opt(r.negative);
    j["excluded"] = r.excluded;
    j["points"] = pts;
    return j;
}

} // namespace twistheight
