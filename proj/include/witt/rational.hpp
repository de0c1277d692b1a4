#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace witt {

using BigInt = boost::multiprecision::cpp_int;

// Arbitrary-precision rational, canonical form maintained by the backend
// (gcd-reduced, positive denominator, zero is 0/1).
using Rat = boost::multiprecision::cpp_rational;

struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

inline Rat make_rat(const BigInt& num, const BigInt& den) {
    if (den == 0) throw error("rational with zero denominator");
    return Rat(num) / Rat(den);
}

inline bool is_integer(const Rat& r) { return denominator(r) == 1; }

inline std::string rat_str(const Rat& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

// Element of the real quadratic field Q(sqrt(19)): a + b*sqrt(19).
// Equality is component-wise; the field has no zero divisors since 19 is
// not a rational square.
struct QuadRat {
    Rat a;
    Rat b;

    QuadRat() = default;
    QuadRat(Rat ra) : a(std::move(ra)) {}  // NOLINT(google-explicit-constructor)
    QuadRat(int n) : a(n) {}               // NOLINT(google-explicit-constructor)
    QuadRat(Rat ra, Rat rb) : a(std::move(ra)), b(std::move(rb)) {}

    static QuadRat sqrt19() { return QuadRat(Rat(0), Rat(1)); }

    bool is_zero() const { return a == 0 && b == 0; }
    bool is_rational() const { return b == 0; }

    QuadRat conjugate() const { return QuadRat(a, -b); }

    // a^2 - 19 b^2; zero only for the zero element.
    Rat norm() const { return a * a - Rat(19) * b * b; }

    QuadRat inverse() const {
        Rat n = norm();
        if (n == 0) throw error("division by zero in Q(sqrt19)");
        return QuadRat(a / n, -b / n);
    }

    friend QuadRat operator+(const QuadRat& x, const QuadRat& y) {
        return QuadRat(x.a + y.a, x.b + y.b);
    }
    friend QuadRat operator-(const QuadRat& x, const QuadRat& y) {
        return QuadRat(x.a - y.a, x.b - y.b);
    }
    friend QuadRat operator-(const QuadRat& x) { return QuadRat(-x.a, -x.b); }
    friend QuadRat operator*(const QuadRat& x, const QuadRat& y) {
        return QuadRat(x.a * y.a + Rat(19) * x.b * y.b, x.a * y.b + x.b * y.a);
    }
    friend QuadRat operator/(const QuadRat& x, const QuadRat& y) {
        return x * y.inverse();
    }
    QuadRat& operator+=(const QuadRat& y) { *this = *this + y; return *this; }
    QuadRat& operator-=(const QuadRat& y) { *this = *this - y; return *this; }
    QuadRat& operator*=(const QuadRat& y) { *this = *this * y; return *this; }

    friend bool operator==(const QuadRat& x, const QuadRat& y) {
        return x.a == y.a && x.b == y.b;
    }
    friend bool operator!=(const QuadRat& x, const QuadRat& y) { return !(x == y); }
    // Lexicographic order on components; used only for deterministic
    // containers, not for the field order.
    friend bool operator<(const QuadRat& x, const QuadRat& y) {
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    }
};

inline QuadRat quadrat_of(int num, int den = 1) { return QuadRat(make_rat(num, den)); }

}  // namespace witt
