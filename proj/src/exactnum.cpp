#include "earac/exactnum.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "mpfr_util.hpp"

namespace earac {

namespace {

// sign of a + b*sqrt2
int sign_q2(const Rational& a, const Rational& b) {
    const int sa = sgn(a);
    const int sb = sgn(b);
    if (sa == 0) return sb;
    if (sb == 0 || sa == sb) return sa;
    // Opposite signs: compare magnitudes via a^2 vs 2 b^2.
    const Rational diff = a * a - 2 * b * b;
    return sa * sgn(diff);
}

// sign of (c1 + c2 sqrt2) + (c3 + c6 sqrt2) sqrt3
int exact_sign(const ExactValue& v) {
    const int sp = sign_q2(v.c1(), v.c2());
    const int sq = sign_q2(v.c3(), v.c6());
    if (sq == 0) return sp;
    if (sp == 0 || sp == sq) return sq;
    // P^2 - 3 Q^2 stays in Q[sqrt2].
    const Rational r = v.c1() * v.c1() + 2 * v.c2() * v.c2() - 3 * v.c3() * v.c3() - 6 * v.c6() * v.c6();
    const Rational s = 2 * v.c1() * v.c2() - 6 * v.c3() * v.c6();
    return sp * sign_q2(r, s);
}

// Sign from a double-precision enclosure, or 2 when the enclosure is
// inconclusive.
int interval_sign(const ExactValue& v) {
    const double t[4] = {
        v.c1().get_d(),
        v.c2().get_d() * std::sqrt(2.0),
        v.c3().get_d() * std::sqrt(3.0),
        v.c6().get_d() * std::sqrt(6.0),
    };
    double sum = 0.0;
    double mag = 0.0;
    for (double x : t) {
        if (!std::isfinite(x)) return 2;
        sum += x;
        mag += std::fabs(x);
    }
    const double err = 16.0 * std::numeric_limits<double>::epsilon() * mag + std::numeric_limits<double>::denorm_min();
    if (sum > err) return 1;
    if (sum < -err) return -1;
    return 2;
}

void eval_big(const ExactValue& v, detail::BigFloat& out) {
    const mpfr_prec_t prec = mpfr_get_prec(out.get());
    detail::BigFloat term(prec);
    detail::BigFloat root(prec);
    mpfr_set_q(out.get(), v.c1().get_mpq_t(), MPFR_RNDN);
    const std::pair<const Rational*, unsigned long> parts[3] = {{&v.c2(), 2}, {&v.c3(), 3}, {&v.c6(), 6}};
    for (const auto& [coef, radicand] : parts) {
        if (*coef == 0) continue;
        mpfr_sqrt_ui(root.get(), radicand, MPFR_RNDN);
        mpfr_mul_q(term.get(), root.get(), coef->get_mpq_t(), MPFR_RNDN);
        mpfr_add(out.get(), out.get(), term.get(), MPFR_RNDN);
    }
}

std::string render_rational(const Rational& q) { return q.get_str(); }

void skip_ws(std::string_view s, size_t& i) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

bool read_digits(std::string_view s, size_t& i, mpz_class& out) {
    const size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) return false;
    out.set_str(std::string(s.substr(start, i - start)), 10);
    return true;
}

[[noreturn]] void bad_parse(std::string_view text, const char* why) {
    throw std::invalid_argument("cannot parse exact value '" + std::string(text) + "': " + why);
}

}  // namespace

Rational make_rational(long num, long den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

ExactValue::ExactValue(long integer) : c1_(integer) {}

ExactValue::ExactValue(Rational c1, Rational c2, Rational c3, Rational c6)
    : c1_(std::move(c1)), c2_(std::move(c2)), c3_(std::move(c3)), c6_(std::move(c6)) {
    c1_.canonicalize();
    c2_.canonicalize();
    c3_.canonicalize();
    c6_.canonicalize();
}

ExactValue ExactValue::sqrt2() { return ExactValue(0, 1, 0, 0); }
ExactValue ExactValue::sqrt3() { return ExactValue(0, 0, 1, 0); }
ExactValue ExactValue::sqrt6() { return ExactValue(0, 0, 0, 1); }
ExactValue ExactValue::ratio(long num, long den) { return ExactValue(make_rational(num, den)); }

bool ExactValue::is_zero() const { return c1_ == 0 && c2_ == 0 && c3_ == 0 && c6_ == 0; }
bool ExactValue::is_rational() const { return c2_ == 0 && c3_ == 0 && c6_ == 0; }

int ExactValue::sign() const {
    if (is_zero()) return 0;
    const int s = interval_sign(*this);
    return s != 2 ? s : exact_sign(*this);
}

ExactValue ExactValue::operator-() const { return ExactValue(-c1_, -c2_, -c3_, -c6_); }

ExactValue& ExactValue::operator+=(const ExactValue& o) {
    c1_ += o.c1_;
    c2_ += o.c2_;
    c3_ += o.c3_;
    c6_ += o.c6_;
    return *this;
}

ExactValue& ExactValue::operator-=(const ExactValue& o) {
    c1_ -= o.c1_;
    c2_ -= o.c2_;
    c3_ -= o.c3_;
    c6_ -= o.c6_;
    return *this;
}

// sqrt2*sqrt3 = sqrt6, sqrt2*sqrt6 = 2 sqrt3, sqrt3*sqrt6 = 3 sqrt2.
ExactValue& ExactValue::operator*=(const ExactValue& o) {
    const Rational& a1 = c1_;
    const Rational& a2 = c2_;
    const Rational& a3 = c3_;
    const Rational& a6 = c6_;
    Rational r1 = a1 * o.c1_ + 2 * a2 * o.c2_ + 3 * a3 * o.c3_ + 6 * a6 * o.c6_;
    Rational r2 = a1 * o.c2_ + a2 * o.c1_ + 3 * (a3 * o.c6_ + a6 * o.c3_);
    Rational r3 = a1 * o.c3_ + a3 * o.c1_ + 2 * (a2 * o.c6_ + a6 * o.c2_);
    Rational r6 = a1 * o.c6_ + a6 * o.c1_ + a2 * o.c3_ + a3 * o.c2_;
    c1_ = std::move(r1);
    c2_ = std::move(r2);
    c3_ = std::move(r3);
    c6_ = std::move(r6);
    return *this;
}

ExactValue& ExactValue::operator*=(const Rational& s) {
    c1_ *= s;
    c2_ *= s;
    c3_ *= s;
    c6_ *= s;
    return *this;
}

bool operator==(const ExactValue& a, const ExactValue& b) {
    return a.c1_ == b.c1_ && a.c2_ == b.c2_ && a.c3_ == b.c3_ && a.c6_ == b.c6_;
}

std::strong_ordering operator<=>(const ExactValue& a, const ExactValue& b) { return compare(a, b); }

std::strong_ordering compare(const ExactValue& x, const ExactValue& y) {
    if (x == y) return std::strong_ordering::equal;
    const int s = (x - y).sign();
    return s > 0 ? std::strong_ordering::greater : std::strong_ordering::less;
}

double ExactValue::to_double() const {
    detail::BigFloat v(256);
    eval_big(*this, v);
    return v.to_double();
}

std::string ExactValue::to_decimal(int significant_digits) const {
    detail::BigFloat v(std::max<mpfr_prec_t>(256, static_cast<mpfr_prec_t>(significant_digits) * 4 + 64));
    eval_big(*this, v);
    return v.to_string(significant_digits);
}

std::string ExactValue::str() const {
    std::string out;
    const std::pair<const Rational*, const char*> terms[4] = {
        {&c1_, ""}, {&c2_, "sqrt2"}, {&c3_, "sqrt3"}, {&c6_, "sqrt6"}};
    for (const auto& [coef, radical] : terms) {
        if (*coef == 0) continue;
        const bool negative = *coef < 0;
        const Rational mag = abs(*coef);
        if (out.empty()) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        if (*radical == '\0') {
            out += render_rational(mag);
        } else if (mag == 1) {
            out += radical;
        } else {
            out += render_rational(mag);
            out += "*";
            out += radical;
        }
    }
    return out.empty() ? "0" : out;
}

ExactValue ExactValue::parse(std::string_view text) {
    Rational acc[4] = {0, 0, 0, 0};
    size_t i = 0;
    bool first = true;
    skip_ws(text, i);
    if (i == text.size()) bad_parse(text, "empty");
    while (true) {
        skip_ws(text, i);
        if (i == text.size()) break;
        int sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
            skip_ws(text, i);
        } else if (!first) {
            bad_parse(text, "expected '+' or '-' between terms");
        }
        first = false;

        Rational coef = 1;
        bool have_coef = false;
        mpz_class num;
        if (read_digits(text, i, num)) {
            have_coef = true;
            mpz_class den = 1;
            skip_ws(text, i);
            if (i < text.size() && text[i] == '/') {
                ++i;
                skip_ws(text, i);
                if (!read_digits(text, i, den)) bad_parse(text, "missing denominator");
                if (den == 0) bad_parse(text, "zero denominator");
            }
            coef = Rational(num, den);
            coef.canonicalize();
            skip_ws(text, i);
        }
        bool star = false;
        if (i < text.size() && text[i] == '*') {
            if (!have_coef) bad_parse(text, "'*' without coefficient");
            star = true;
            ++i;
            skip_ws(text, i);
        }
        int slot = 0;
        if (text.substr(i, 4) == "sqrt") {
            i += 4;
            if (i >= text.size()) bad_parse(text, "truncated radical");
            switch (text[i]) {
                case '2': slot = 1; break;
                case '3': slot = 2; break;
                case '6': slot = 3; break;
                default: bad_parse(text, "only sqrt2, sqrt3 and sqrt6 are supported");
            }
            ++i;
        } else if (star || !have_coef) {
            bad_parse(text, "expected a radical");
        }
        acc[slot] += sign * coef;
    }
    return ExactValue(acc[0], acc[1], acc[2], acc[3]);
}

ExactValue delta(int k, int j) {
    if (k < 0 || j < 0) throw std::invalid_argument("delta: negative primitive count");
    mpz_class den = 1;
    mpz_class p2, p3;
    mpz_ui_pow_ui(p2.get_mpz_t(), 2, static_cast<unsigned long>(k / 2));
    mpz_ui_pow_ui(p3.get_mpz_t(), 3, static_cast<unsigned long>(j / 2));
    den = p2 * p3;
    Rational base(1, den);
    base.canonicalize();
    const bool k_odd = k % 2 == 1;
    const bool j_odd = j % 2 == 1;
    // 1/sqrt2 = sqrt2/2, 1/sqrt3 = sqrt3/3, 1/sqrt6 = sqrt6/6
    if (k_odd && j_odd) return ExactValue(0, 0, 0, base / 6);
    if (k_odd) return ExactValue(0, base / 2, 0, 0);
    if (j_odd) return ExactValue(0, 0, base / 3, 0);
    return ExactValue(base);
}

bool inverse_sqrt_in_ring(long n, ExactValue& out) {
    if (n <= 0) throw std::invalid_argument("inverse_sqrt_in_ring: n must be positive");
    // n = s^2 * d with d square-free
    long d = 1;
    long s = 1;
    long rest = n;
    for (long p = 2; p * p <= rest; ++p) {
        int e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        for (int t = 0; t < e / 2; ++t) s *= p;
        if (e % 2 == 1) d *= p;
    }
    d *= rest;
    // 1/(s sqrt d) = sqrt d / (s d)
    const Rational scale = make_rational(1, s * d);
    switch (d) {
        case 1: out = ExactValue(scale); return true;
        case 2: out = ExactValue(0, scale, 0, 0); return true;
        case 3: out = ExactValue(0, 0, scale, 0); return true;
        case 6: out = ExactValue(0, 0, 0, scale); return true;
        default: return false;
    }
}

ExactValue half_one_plus(const ExactValue& advantage) { return (ExactValue(1) + advantage) * Rational(1, 2); }

std::ostream& operator<<(std::ostream& os, const ExactValue& v) { return os << v.str(); }

}  // namespace earac
