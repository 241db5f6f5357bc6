#pragma once

// Exact arithmetic in Q[sqrt2, sqrt3].
//
// Every value is c1 + c2*sqrt2 + c3*sqrt3 + c6*sqrt6 with rational
// coefficients. The basis {1, sqrt2, sqrt3, sqrt6} is linearly independent
// over Q, so the coefficient tuple is a unique representation and equality
// is coefficient-wise. Coefficients are GMP rationals kept in canonical form
// (positive denominator, reduced), so nothing ever overflows or rounds.

#include <compare>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace earac {

using Rational = mpq_class;

// num/den reduced to canonical form; throws std::invalid_argument on den == 0.
Rational make_rational(long num, long den = 1);

class ExactValue {
public:
    ExactValue() = default;
    ExactValue(long integer);  // NOLINT(google-explicit-constructor)
    explicit ExactValue(Rational c1, Rational c2 = 0, Rational c3 = 0, Rational c6 = 0);

    static ExactValue sqrt2();
    static ExactValue sqrt3();
    static ExactValue sqrt6();
    static ExactValue ratio(long num, long den);

    const Rational& c1() const { return c1_; }
    const Rational& c2() const { return c2_; }
    const Rational& c3() const { return c3_; }
    const Rational& c6() const { return c6_; }

    bool is_zero() const;
    bool is_rational() const;

    // Exact sign: -1, 0 or +1.
    int sign() const;

    ExactValue operator-() const;
    ExactValue& operator+=(const ExactValue& o);
    ExactValue& operator-=(const ExactValue& o);
    ExactValue& operator*=(const ExactValue& o);
    ExactValue& operator*=(const Rational& s);

    friend ExactValue operator+(ExactValue a, const ExactValue& b) { return a += b; }
    friend ExactValue operator-(ExactValue a, const ExactValue& b) { return a -= b; }
    friend ExactValue operator*(ExactValue a, const ExactValue& b) { return a *= b; }
    friend ExactValue operator*(ExactValue a, const Rational& s) { return a *= s; }
    friend ExactValue operator*(const Rational& s, ExactValue a) { return a *= s; }

    friend bool operator==(const ExactValue& a, const ExactValue& b);
    friend std::strong_ordering operator<=>(const ExactValue& a, const ExactValue& b);

    // Nearest double (computed at 256-bit precision, then rounded once).
    double to_double() const;

    // Decimal string with the given number of significant digits.
    std::string to_decimal(int significant_digits = 15) const;

    // Renders "a/b + c/d*sqrt2 + e/f*sqrt3 + g/h*sqrt6"; zero terms are
    // dropped, unit radical coefficients are written bare ("sqrt6"), and zero
    // itself renders as "0".
    std::string str() const;

    // Inverse of str(). Accepts any term order, repeated terms (summed),
    // optional '*', bare radicals and arbitrary whitespace.
    // Throws std::invalid_argument on malformed input.
    static ExactValue parse(std::string_view text);

private:
    Rational c1_{0}, c2_{0}, c3_{0}, c6_{0};
};

// Exact total order. A double-precision interval decides most cases; when
// the interval straddles zero the sign of x - y is settled algebraically.
std::strong_ordering compare(const ExactValue& x, const ExactValue& y);

// Advantage 2^(-k/2) * 3^(-j/2) of a bit routed through k (2,1) and j (3,1)
// primitives. Throws std::invalid_argument on negative counts.
ExactValue delta(int k, int j);

// 1/sqrt(n) when it lies in the ring, i.e. when the square-free part of n is
// one of 1, 2, 3, 6. Returns false otherwise.
bool inverse_sqrt_in_ring(long n, ExactValue& out);

ExactValue half_one_plus(const ExactValue& advantage);  // (1 + d) / 2

std::ostream& operator<<(std::ostream& os, const ExactValue& v);

}  // namespace earac
