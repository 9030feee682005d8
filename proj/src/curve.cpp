#include "twistheight/curve.hpp"

#include "twistheight/errors.hpp"

#include <sstream>

namespace twistheight {

WeierstrassModel WeierstrassModel::make(ExactInt a1, ExactInt a2, ExactInt a3, ExactInt a4, ExactInt a6) {
    WeierstrassModel e;
    e.a1_ = std::move(a1);
    e.a2_ = std::move(a2);
    e.a3_ = std::move(a3);
    e.a4_ = std::move(a4);
    e.a6_ = std::move(a6);
    const ExactInt &A1 = e.a1_, &A2 = e.a2_, &A3 = e.a3_, &A4 = e.a4_, &A6 = e.a6_;
    e.b2_ = A1 * A1 + 4 * A2;
    e.b4_ = 2 * A4 + A1 * A3;
    e.b6_ = A3 * A3 + 4 * A6;
    e.b8_ = A1 * A1 * A6 + 4 * A2 * A6 - A1 * A3 * A4 + A2 * A3 * A3 - A4 * A4;
    const ExactInt &b2 = e.b2_, &b4 = e.b4_, &b6 = e.b6_, &b8 = e.b8_;
    e.c4_ = b2 * b2 - 24 * b4;
    e.c6_ = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6;
    e.disc_ = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
    e.is_short_ = A1 == 0 && A3 == 0;
    if (e.disc_ == 0)
        throw math_error(error_kind::singular_curve, "singular curve " + e.to_string() + " (discriminant 0)");
    return e;
}

bool WeierstrassModel::contains(const ExactRational &x, const ExactRational &y) const {
    ExactRational lhs = y * y + ExactRational(a1_) * x * y + ExactRational(a3_) * y;
    ExactRational rhs = ((x + ExactRational(a2_)) * x + ExactRational(a4_)) * x + ExactRational(a6_);
    return lhs == rhs;
}

ExactRational WeierstrassModel::j_invariant() const {
    ExactRational j(c4_ * c4_ * c4_, disc_);
    j.canonicalize();
    return j;
}

IntPolynomial WeierstrassModel::two_torsion_cubic() const {
    return IntPolynomial(std::vector<ExactInt>{b6_, 2 * b4_, b2_, 4});
}

std::string WeierstrassModel::to_string() const {
    std::ostringstream os;
    os << "[" << a1_ << "," << a2_ << "," << a3_ << "," << a4_ << "," << a6_ << "]";
    return os.str();
}

CurvePoint CurvePoint::from_affine(const WeierstrassModel &e, const ExactRational &x0, const ExactRational &y0) {
    ExactRational x = x0, y = y0;
    x.canonicalize();
    y.canonicalize();
    if (!e.contains(x, y)) {
        std::ostringstream os;
        os << "point (" << x << ", " << y << ") is not on " << e.to_string();
        throw math_error(error_kind::point_not_on_curve, os.str());
    }
    CurvePoint p;
    p.infinity_ = false;
    ExactInt den(x.get_den());
    if (!mpz_perfect_square_p(den.get_mpz_t()))
        throw math_error(error_kind::point_not_on_curve, "x denominator is not a square; model not integral?");
    mpz_sqrt(p.delta_.get_mpz_t(), den.get_mpz_t());
    p.alpha_ = x.get_num();
    ExactRational b = y * ExactRational(p.delta_ * p.delta_ * p.delta_);
    b.canonicalize();
    if (b.get_den() != 1)
        throw math_error(error_kind::point_not_on_curve, "y denominator is not delta^3; model not integral?");
    p.beta_ = b.get_num();
    return p;
}

CurvePoint CurvePoint::from_canonical(const WeierstrassModel &e, const ExactInt &alpha, const ExactInt &beta,
                                      const ExactInt &delta) {
    if (delta <= 0)
        throw math_error(error_kind::point_not_on_curve, "delta must be positive");
    ExactRational x(alpha, delta * delta), y(beta, delta * delta * delta);
    CurvePoint p = from_affine(e, x, y);
    if (p.delta_ != delta)
        throw math_error(error_kind::point_not_on_curve, "point is not in lowest terms");
    return p;
}

ExactRational CurvePoint::x() const {
    if (infinity_)
        throw math_error(error_kind::domain, "point at infinity has no x-coordinate");
    ExactRational r(alpha_, delta_ * delta_);
    r.canonicalize();
    return r;
}

ExactRational CurvePoint::y() const {
    if (infinity_)
        throw math_error(error_kind::domain, "point at infinity has no y-coordinate");
    ExactRational r(beta_, delta_ * delta_ * delta_);
    r.canonicalize();
    return r;
}

std::string CurvePoint::to_string() const {
    if (infinity_)
        return "O";
    std::ostringstream os;
    os << "[" << alpha_ << "," << beta_ << "," << delta_ << "]";
    return os.str();
}

WeierstrassModel twist(const WeierstrassModel &e, const ExactInt &d) {
    if (!e.is_short())
        throw math_error(error_kind::domain, "twist needs a model with a1 = a3 = 0");
    if (d == 0)
        throw math_error(error_kind::domain, "twist by D = 0");
    return WeierstrassModel::make_short(e.a2() * d, e.a4() * d * d, e.a6() * d * d * d);
}

bool is_two_torsion(const WeierstrassModel &e, const CurvePoint &p) {
    if (p.is_infinity())
        return false;
    if (e.is_short())
        return p.beta() == 0;
    return 2 * p.y() + ExactRational(e.a1()) * p.x() + ExactRational(e.a3()) == 0;
}

namespace {

void require_short(const WeierstrassModel &e) {
    if (!e.is_short())
        throw math_error(error_kind::domain, "group law is implemented for a1 = a3 = 0 only");
}

void require_on(const WeierstrassModel &e, const CurvePoint &p) {
    if (!p.is_infinity() && !e.contains(p.x(), p.y()))
        throw math_error(error_kind::point_not_on_curve, "point " + p.to_string() + " is not on " + e.to_string());
}

} // namespace

CurvePoint negate(const WeierstrassModel &e, const CurvePoint &p) {
    require_short(e);
    require_on(e, p);
    if (p.is_infinity())
        return p;
    return CurvePoint::from_affine(e, p.x(), -p.y());
}

CurvePoint add(const WeierstrassModel &e, const CurvePoint &p, const CurvePoint &q) {
    require_short(e);
    require_on(e, p);
    require_on(e, q);
    if (p.is_infinity())
        return q;
    if (q.is_infinity())
        return p;
    const ExactRational x1 = p.x(), y1 = p.y(), x2 = q.x(), y2 = q.y();
    const ExactRational a2(e.a2()), a4(e.a4());
    ExactRational slope;
    if (x1 == x2) {
        if (y1 != y2 || y1 == 0)
            return CurvePoint::infinity();
        slope = (3 * x1 * x1 + 2 * a2 * x1 + a4) / (2 * y1);
    } else {
        slope = (y2 - y1) / (x2 - x1);
    }
    ExactRational x3 = slope * slope - a2 - x1 - x2;
    ExactRational y3 = -(y1 + slope * (x3 - x1));
    return CurvePoint::from_affine(e, x3, y3);
}

CurvePoint double_point(const WeierstrassModel &e, const CurvePoint &p) { return add(e, p, p); }

CurvePoint multiply(const WeierstrassModel &e, const CurvePoint &p, long m) {
    CurvePoint base = m < 0 ? negate(e, p) : p;
    unsigned long k = m < 0 ? static_cast<unsigned long>(-m) : static_cast<unsigned long>(m);
    CurvePoint acc = CurvePoint::infinity();
    while (k) {
        if (k & 1)
            acc = add(e, acc, base);
        k >>= 1;
        if (k)
            base = double_point(e, base);
    }
    return acc;
}

std::optional<long> torsion_order(const WeierstrassModel &e, const CurvePoint &p) {
    require_short(e);
    require_on(e, p);
    CurvePoint acc = p;
    for (long m = 1; m <= 12; ++m) {
        if (acc.is_infinity())
            return m;
        if (!acc.is_integral())
            return std::nullopt;
        acc = add(e, acc, p);
    }
    return std::nullopt;
}

DivisionPolyValues division_poly_values(const WeierstrassModel &e, const CurvePoint &q) {
    if (q.is_infinity())
        throw math_error(error_kind::domain, "division polynomials are evaluated at affine points");
    const ExactRational x = q.x(), y = q.y();
    const ExactRational a1(e.a1()), a2(e.a2()), a3(e.a3()), a4(e.a4());
    const ExactRational b2(e.b2()), b4(e.b4()), b6(e.b6()), b8(e.b8());
    DivisionPolyValues v;
    v.psi0 = 3 * x * x + 2 * a2 * x + a4 - a1 * y;
    v.psi2 = 2 * y + a1 * x + a3;
    v.psi2a = ((4 * x + b2) * x + 2 * b4) * x + b6;
    v.psi3 = (((3 * x + b2) * x + 3 * b4) * x + 3 * b6) * x + b8;
    return v;
}

namespace {

// k and l as polynomials in x
std::pair<IntPolynomial, IntPolynomial> kl_polys(const WeierstrassModel &e) {
    const ExactInt &a2 = e.a2(), &a4 = e.a4(), &a6 = e.a6();
    IntPolynomial k(std::vector<ExactInt>{4 * a4 - a2 * a2, 2 * a2, 3});
    IntPolynomial l(std::vector<ExactInt>{27 * a6 - 2 * a2 * a4, 21 * a4 - 4 * a2 * a2, 9 * a2, 9});
    return {k, l};
}

} // namespace

KlIdentity kl_identity_check(const WeierstrassModel &e_d, const CurvePoint &q) {
    require_short(e_d);
    auto [kp, lp] = kl_polys(e_d);
    DivisionPolyValues v = division_poly_values(e_d, q);
    KlIdentity out;
    out.k = kp(q.x());
    out.l = lp(q.x());
    out.residual = -16 * out.k * v.psi3 + 4 * out.l * v.psi2a + ExactRational(e_d.discriminant());
    out.residual.canonicalize();
    return out;
}

IntPolynomial kl_identity_residual_polynomial(const WeierstrassModel &e_d) {
    require_short(e_d);
    auto [kp, lp] = kl_polys(e_d);
    IntPolynomial psi2a = e_d.two_torsion_cubic();
    IntPolynomial psi3(std::vector<ExactInt>{e_d.b8(), 3 * e_d.b6(), 3 * e_d.b4(), e_d.b2(), 3});
    return ExactInt(-16) * kp * psi3 + ExactInt(4) * lp * psi2a + IntPolynomial::constant(e_d.discriminant());
}

BigFloat naive_height(const CurvePoint &q, unsigned precision) {
    const mpfr_prec_t wp = working_precision(precision);
    if (q.is_infinity())
        return BigFloat(0, wp);
    ExactRational x = q.x();
    ExactInt n(abs(x.get_num())), d(x.get_den());
    ExactInt m = n > d ? n : d;
    return log_abs(m, wp);
}

CurvePoint ShiftedModel::map(const CurvePoint &p) const {
    if (p.is_infinity())
        return p;
    return CurvePoint::from_affine(model, p.x() - ExactRational(r), p.y());
}

CurvePoint ShiftedModel::unmap(const WeierstrassModel &original, const CurvePoint &p) const {
    if (p.is_infinity())
        return p;
    return CurvePoint::from_affine(original, p.x() + ExactRational(r), p.y());
}

ShiftedModel shift_model(const WeierstrassModel &e, const ExactInt &r) {
    const ExactInt &a1 = e.a1(), &a2 = e.a2(), &a3 = e.a3(), &a4 = e.a4(), &a6 = e.a6();
    WeierstrassModel m = WeierstrassModel::make(a1, a2 + 3 * r, a3 + r * a1, a4 + 2 * r * a2 + 3 * r * r,
                                                a6 + r * a4 + r * r * a2 + r * r * r);
    return {m, r};
}

} // namespace twistheight
