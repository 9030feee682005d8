#include "twistheight/polynomial.hpp"

#include "twistheight/errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace twistheight {

IntPolynomial::IntPolynomial(std::vector<ExactInt> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

IntPolynomial::IntPolynomial(std::initializer_list<long> coeffs) {
    for (long c : coeffs)
        coeffs_.emplace_back(c);
    normalize();
}

IntPolynomial IntPolynomial::constant(const ExactInt &c) { return IntPolynomial(std::vector<ExactInt>{c}); }

IntPolynomial IntPolynomial::monomial(const ExactInt &c, std::size_t degree) {
    std::vector<ExactInt> v(degree + 1, 0);
    v[degree] = c;
    return IntPolynomial(std::move(v));
}

void IntPolynomial::normalize() {
    while (!coeffs_.empty() && coeffs_.back() == 0)
        coeffs_.pop_back();
}

ExactInt IntPolynomial::coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : ExactInt(0); }

const ExactInt &IntPolynomial::leading() const {
    if (coeffs_.empty())
        throw math_error(error_kind::domain, "zero polynomial has no leading coefficient");
    return coeffs_.back();
}

ExactInt IntPolynomial::operator()(const ExactInt &t) const {
    ExactInt acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * t + *it;
    return acc;
}

ExactRational IntPolynomial::operator()(const ExactRational &t) const {
    ExactRational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * t + ExactRational(*it);
    acc.canonicalize();
    return acc;
}

IntPolynomial IntPolynomial::derivative() const {
    std::vector<ExactInt> d;
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
        d.push_back(coeffs_[i] * static_cast<unsigned long>(i));
    return IntPolynomial(std::move(d));
}

IntPolynomial IntPolynomial::compose(const IntPolynomial &inner) const {
    IntPolynomial acc;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc *= inner;
        acc += constant(*it);
    }
    return acc;
}

IntPolynomial &IntPolynomial::operator+=(const IntPolynomial &o) {
    if (o.coeffs_.size() > coeffs_.size())
        coeffs_.resize(o.coeffs_.size(), 0);
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i)
        coeffs_[i] += o.coeffs_[i];
    normalize();
    return *this;
}

IntPolynomial &IntPolynomial::operator-=(const IntPolynomial &o) {
    if (o.coeffs_.size() > coeffs_.size())
        coeffs_.resize(o.coeffs_.size(), 0);
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i)
        coeffs_[i] -= o.coeffs_[i];
    normalize();
    return *this;
}

IntPolynomial &IntPolynomial::operator*=(const IntPolynomial &o) {
    if (is_zero() || o.is_zero()) {
        coeffs_.clear();
        return *this;
    }
    std::vector<ExactInt> out(coeffs_.size() + o.coeffs_.size() - 1, 0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0)
            continue;
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
            out[i + j] += coeffs_[i] * o.coeffs_[j];
    }
    coeffs_ = std::move(out);
    normalize();
    return *this;
}

IntPolynomial &IntPolynomial::operator*=(const ExactInt &c) {
    for (auto &x : coeffs_)
        x *= c;
    normalize();
    return *this;
}

IntPolynomial IntPolynomial::operator-() const {
    IntPolynomial r = *this;
    for (auto &x : r.coeffs_)
        x = -x;
    return r;
}

std::string IntPolynomial::to_string(const char *var) const {
    if (coeffs_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
        const ExactInt &c = coeffs_[k];
        if (c == 0)
            continue;
        ExactInt mag = abs(c);
        if (first) {
            if (c < 0)
                os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        if (mag != 1 || k == 0)
            os << mag;
        if (k >= 1)
            os << var;
        if (k >= 2)
            os << "^" << k;
    }
    return os.str();
}

std::string IntPolynomial::to_csv() const {
    if (coeffs_.empty())
        return "0";
    std::ostringstream os;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        os << (i ? "," : "") << coeffs_[i];
    return os.str();
}

IntPolynomial IntPolynomial::from_csv(const std::string &csv) {
    std::vector<ExactInt> v;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
        if (item.empty())
            throw math_error(error_kind::domain, "empty coefficient in '" + csv + "'");
        ExactInt c;
        if (c.set_str(item[0] == '+' ? item.substr(1) : item, 10) != 0)
            throw math_error(error_kind::domain, "bad integer coefficient '" + item + "'");
        v.push_back(c);
    }
    return IntPolynomial(std::move(v));
}

IntPolynomial exact_divide(const IntPolynomial &a, const IntPolynomial &b) {
    if (b.is_zero())
        throw math_error(error_kind::domain, "division by the zero polynomial");
    std::vector<ExactInt> rem = a.coefficients();
    const int db = b.degree();
    const ExactInt &lc = b.leading();
    if (a.degree() < db) {
        if (a.is_zero())
            return {};
        throw math_error(error_kind::inexact_division, "inexact polynomial division, remainder " + a.to_string());
    }
    std::vector<ExactInt> quot(a.degree() - db + 1, 0);
    for (int k = a.degree(); k >= db; --k) {
        const ExactInt &top = rem[k];
        if (top == 0)
            continue;
        if (!mpz_divisible_p(top.get_mpz_t(), lc.get_mpz_t())) {
            IntPolynomial r(rem);
            throw math_error(error_kind::inexact_division,
                             "inexact polynomial division, remainder " + r.to_string());
        }
        ExactInt q;
        mpz_divexact(q.get_mpz_t(), top.get_mpz_t(), lc.get_mpz_t());
        quot[k - db] = q;
        for (int j = 0; j <= db; ++j)
            rem[k - db + j] -= q * b.coeff(j);
    }
    IntPolynomial r(rem);
    if (!r.is_zero())
        throw math_error(error_kind::inexact_division, "inexact polynomial division, remainder " + r.to_string());
    return IntPolynomial(std::move(quot));
}

ExactInt determinant(std::vector<std::vector<ExactInt>> m) {
    const std::size_t n = m.size();
    if (n == 0)
        return 1;
    int sign = 1;
    ExactInt prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && m[swap_row][k] == 0)
                ++swap_row;
            if (swap_row == n)
                return 0;
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                ExactInt v = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

ExactInt resultant(const IntPolynomial &a, const IntPolynomial &b) {
    if (a.is_zero() || b.is_zero())
        throw math_error(error_kind::domain, "resultant of the zero polynomial");
    const int m = a.degree(), n = b.degree();
    if (m == 0 && n == 0)
        return 1;
    const std::size_t size = static_cast<std::size_t>(m + n);
    std::vector<std::vector<ExactInt>> s(size, std::vector<ExactInt>(size, 0));
    // rows 0..n-1 hold shifted coefficients of a, rows n..n+m-1 those of b
    for (int r = 0; r < n; ++r)
        for (int i = 0; i <= m; ++i)
            s[r][r + i] = a.coeff(m - i);
    for (int r = 0; r < m; ++r)
        for (int i = 0; i <= n; ++i)
            s[n + r][r + i] = b.coeff(n - i);
    return determinant(std::move(s));
}

ExactInt discriminant(const IntPolynomial &a) {
    const int d = a.degree();
    if (d < 1)
        throw math_error(error_kind::domain, "discriminant needs degree >= 1");
    if (d == 1)
        return 1;
    ExactInt r = resultant(a, a.derivative());
    ExactInt out;
    mpz_divexact(out.get_mpz_t(), r.get_mpz_t(), a.leading().get_mpz_t());
    if ((d * (d - 1) / 2) % 2 == 1)
        out = -out;
    return out;
}

namespace {

// g mod f for monic f
IntPolynomial reduce_mod_monic(IntPolynomial g, const IntPolynomial &f) {
    const int n = f.degree();
    std::vector<ExactInt> c = g.coefficients();
    for (int k = static_cast<int>(c.size()) - 1; k >= n; --k) {
        if (c[k] == 0)
            continue;
        ExactInt top = c[k];
        for (int j = 0; j <= n; ++j)
            c[k - n + j] -= top * f.coeff(j);
    }
    return IntPolynomial(std::move(c));
}

} // namespace

IntPolynomial char_poly_of_image(const IntPolynomial &f, const IntPolynomial &g) {
    if (!f.is_monic() || f.degree() < 1)
        throw math_error(error_kind::domain, "characteristic polynomial needs a monic modulus");
    const std::size_t n = static_cast<std::size_t>(f.degree());
    // column j = g * alpha^j reduced mod f
    std::vector<std::vector<ExactInt>> a(n, std::vector<ExactInt>(n, 0));
    IntPolynomial col = reduce_mod_monic(g, f);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i)
            a[i][j] = col.coeff(i);
        col = reduce_mod_monic(col * IntPolynomial::variable(), f);
    }
    // Faddeev-LeVerrier; all divisions are exact over Z
    std::vector<ExactInt> c(n + 1, 0);
    c[n] = 1;
    std::vector<std::vector<ExactInt>> mk(n, std::vector<ExactInt>(n, 0));
    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<std::vector<ExactInt>> next(n, std::vector<ExactInt>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                ExactInt acc = 0;
                for (std::size_t l = 0; l < n; ++l)
                    acc += a[i][l] * mk[l][j];
                next[i][j] = acc;
            }
        for (std::size_t i = 0; i < n; ++i)
            next[i][i] += c[n - k + 1];
        ExactInt trace = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l)
                trace += a[i][l] * next[l][i];
        ExactInt ck;
        ExactInt kk = static_cast<unsigned long>(k);
        mpz_divexact(ck.get_mpz_t(), trace.get_mpz_t(), kk.get_mpz_t());
        c[n - k] = -ck;
        mk = std::move(next);
    }
    return IntPolynomial(std::move(c));
}

namespace {

int sign_at(const IntPolynomial &p, const ExactInt &x) { return sgn(p(x)); }

// Integers n such that every real root of p lies in [n, n+1] for some listed n.
std::vector<ExactInt> root_cells(const IntPolynomial &p) {
    if (p.degree() < 1)
        return {};
    if (p.degree() == 1) {
        ExactInt q;
        ExactInt num = -p.coeff(0);
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), p.coeff(1).get_mpz_t());
        return {q};
    }
    // Cauchy bound: |root| < 1 + max |c_i / c_d|
    ExactInt bound = 0;
    for (int i = 0; i < p.degree(); ++i) {
        ExactInt q;
        ExactInt a = abs(p.coeff(i));
        ExactInt l = abs(p.leading());
        mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), l.get_mpz_t());
        bound = std::max(bound, q);
    }
    bound += 1;

    std::vector<ExactInt> critical = root_cells(p.derivative());
    std::vector<ExactInt> out = critical;
    std::vector<ExactInt> breaks{-bound};
    for (const auto &c : critical) {
        breaks.push_back(c);
        breaks.push_back(c + 1);
    }
    breaks.push_back(bound);
    std::sort(breaks.begin(), breaks.end());
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        ExactInt lo = breaks[i], hi = breaks[i + 1];
        if (lo >= hi)
            continue;
        int slo = sign_at(p, lo), shi = sign_at(p, hi);
        if (slo == 0 || shi == 0) {
            out.push_back(slo == 0 ? lo : hi);
            continue;
        }
        if (slo == shi)
            continue;
        while (hi - lo > 1) {
            ExactInt mid = (lo + hi) / 2;
            int sm = sign_at(p, mid);
            if (sm == 0) {
                lo = mid;
                break;
            }
            if (sm == slo)
                lo = mid;
            else
                hi = mid;
        }
        out.push_back(lo);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace

std::vector<ExactInt> integer_roots(const IntPolynomial &p) {
    if (p.is_zero())
        throw math_error(error_kind::domain, "integer roots of the zero polynomial");
    std::set<ExactInt> roots;
    for (const auto &n : root_cells(p)) {
        if (p(n) == 0)
            roots.insert(n);
        ExactInt n1 = n + 1;
        if (p(n1) == 0)
            roots.insert(n1);
    }
    return {roots.begin(), roots.end()};
}

} // namespace twistheight
