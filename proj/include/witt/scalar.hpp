#pragma once

#include "witt/rational.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <utility>
#include <vector>

namespace witt {

// Polynomial in the formal weight parameter (written L in literals) with
// coefficients in Q(sqrt19).  Canonical form: no trailing zero coefficient;
// the zero polynomial has an empty coefficient sequence and degree() == -1.
//
// The type is a ring: division is defined only by nonzero degree-0 elements,
// so case splits on the weight parameter stay with the caller.
class Scalar {
  public:
    Scalar() = default;
    Scalar(int n) : coeff_{QuadRat(n)} { trim(); }          // NOLINT
    Scalar(const Rat& r) : coeff_{QuadRat(r)} { trim(); }   // NOLINT
    Scalar(const QuadRat& q) : coeff_{q} { trim(); }        // NOLINT

    static Scalar lambda() {
        Scalar s;
        s.coeff_ = {QuadRat(0), QuadRat(1)};
        return s;
    }
    static Scalar monomial(const QuadRat& c, int deg) {
        Scalar s;
        if (c.is_zero()) return s;
        s.coeff_.assign(static_cast<size_t>(deg) + 1, QuadRat(0));
        s.coeff_[static_cast<size_t>(deg)] = c;
        return s;
    }

    // -1 stands in for the degree of the zero polynomial.
    int degree() const { return static_cast<int>(coeff_.size()) - 1; }
    bool is_zero() const { return coeff_.empty(); }
    bool is_constant() const { return coeff_.size() <= 1; }

    const QuadRat& coeff(int deg) const {
        static const QuadRat kZero;
        if (deg < 0 || deg >= static_cast<int>(coeff_.size())) return kZero;
        return coeff_[static_cast<size_t>(deg)];
    }
    QuadRat constant_value() const {
        if (!is_constant()) throw error("scalar is not constant: " + to_string());
        return coeff(0);
    }
    QuadRat leading_coeff() const {
        if (is_zero()) return QuadRat(0);
        return coeff_.back();
    }

    QuadRat evaluate(const QuadRat& x) const {
        QuadRat acc(0);
        for (auto it = coeff_.rbegin(); it != coeff_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    friend Scalar operator+(const Scalar& x, const Scalar& y) {
        Scalar r;
        r.coeff_.resize(std::max(x.coeff_.size(), y.coeff_.size()), QuadRat(0));
        for (size_t i = 0; i < r.coeff_.size(); ++i) {
            if (i < x.coeff_.size()) r.coeff_[i] += x.coeff_[i];
            if (i < y.coeff_.size()) r.coeff_[i] += y.coeff_[i];
        }
        r.trim();
        return r;
    }
    friend Scalar operator-(const Scalar& x, const Scalar& y) { return x + (-y); }
    friend Scalar operator-(const Scalar& x) {
        Scalar r = x;
        for (auto& c : r.coeff_) c = -c;
        return r;
    }
    friend Scalar operator*(const Scalar& x, const Scalar& y) {
        Scalar r;
        if (x.is_zero() || y.is_zero()) return r;
        r.coeff_.assign(x.coeff_.size() + y.coeff_.size() - 1, QuadRat(0));
        for (size_t i = 0; i < x.coeff_.size(); ++i)
            for (size_t j = 0; j < y.coeff_.size(); ++j)
                r.coeff_[i + j] += x.coeff_[i] * y.coeff_[j];
        r.trim();
        return r;
    }
    Scalar& operator+=(const Scalar& y) { *this = *this + y; return *this; }
    Scalar& operator-=(const Scalar& y) { *this = *this - y; return *this; }
    Scalar& operator*=(const Scalar& y) { *this = *this * y; return *this; }

    // Division by a nonzero constant only.
    friend Scalar operator/(const Scalar& x, const Scalar& y) {
        if (!y.is_constant())
            throw error("division by a weight-dependent scalar: " + y.to_string());
        QuadRat c = y.constant_value();
        if (c.is_zero()) throw error("division by zero scalar");
        Scalar r = x;
        QuadRat inv = c.inverse();
        for (auto& e : r.coeff_) e = e * inv;
        return r;
    }

    friend bool operator==(const Scalar& x, const Scalar& y) { return x.coeff_ == y.coeff_; }
    friend bool operator!=(const Scalar& x, const Scalar& y) { return !(x == y); }
    friend bool operator<(const Scalar& x, const Scalar& y) {  // deterministic container order
        if (x.coeff_.size() != y.coeff_.size()) return x.coeff_.size() < y.coeff_.size();
        for (size_t i = x.coeff_.size(); i-- > 0;) {
            if (x.coeff_[i] != y.coeff_[i]) return x.coeff_[i] < y.coeff_[i];
        }
        return false;
    }

    std::string to_string() const;
    static Scalar parse(const std::string& text);

  private:
    void trim() {
        while (!coeff_.empty() && coeff_.back().is_zero()) coeff_.pop_back();
    }
    std::vector<QuadRat> coeff_;
};

// The ring keeps values canonical at all times; exposed for symmetry with
// the other kernel operations and as an explicit idempotence point.
inline Scalar normalize(const Scalar& s) { return s; }

inline Scalar operator*(const QuadRat& c, const Scalar& s) { return Scalar(c) * s; }
inline Scalar operator*(int c, const Scalar& s) { return Scalar(c) * s; }

// ---------------------------------------------------------------------------
// Canonical literal grammar.
//
//   scalar  := term (('+'|'-') term)*
//   term    := coeff | coeff mono | mono            (mono with implicit 1)
//   coeff   := rat | rat 'r19'                      (the r19 suffix marks the
//   mono    := 'L' | 'L^' posint                     sqrt(19) component)
//   rat     := ['-'] digits ['/' digits]
//
// A coefficient directly in front of a monomial is joined with '*', e.g.
// "3*L^2-1", "1/2r19*L", "5/2+1/2r19".  Printing is whitespace-free,
// descending in degree, rational component before the r19 component, and a
// plain +/-1 rational coefficient of a monomial is folded into the sign.

inline std::string Scalar::to_string() const {
    if (is_zero()) return "0";
    std::string out;
    auto append_term = [&out](const std::string& body, bool negative) {
        if (out.empty()) {
            if (negative) out += "-";
        } else {
            out += negative ? "-" : "+";
        }
        out += body;
    };
    auto mono_str = [](int deg) -> std::string {
        if (deg == 0) return "";
        if (deg == 1) return "L";
        return "L^" + std::to_string(deg);
    };
    for (int deg = degree(); deg >= 0; --deg) {
        const QuadRat& q = coeff(deg);
        if (q.a != 0) {
            Rat mag = q.a < 0 ? Rat(-q.a) : q.a;
            std::string body;
            if (deg == 0) {
                body = rat_str(mag);
            } else if (mag == 1) {
                body = mono_str(deg);
            } else {
                body = rat_str(mag) + "*" + mono_str(deg);
            }
            append_term(body, q.a < 0);
        }
        if (q.b != 0) {
            Rat mag = q.b < 0 ? Rat(-q.b) : q.b;
            std::string body = rat_str(mag) + "r19";
            if (deg > 0) body += "*" + mono_str(deg);
            append_term(body, q.b < 0);
        }
    }
    return out;
}

namespace detail {

struct LiteralCursor {
    const std::string& s;
    size_t pos = 0;
    bool done() const { return pos >= s.size(); }
    char peek() const { return done() ? '\0' : s[pos]; }
    bool eat(char c) {
        if (peek() == c) { ++pos; return true; }
        return false;
    }
    [[noreturn]] void fail(const std::string& why) const {
        throw error("bad scalar literal '" + s + "' at position " + std::to_string(pos) +
                    ": " + why);
    }
    BigInt digits() {
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected digits");
        size_t start = pos;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
        return BigInt(s.substr(start, pos - start));
    }
};

}  // namespace detail

inline Scalar Scalar::parse(const std::string& text) {
    detail::LiteralCursor cur{text};
    if (cur.done()) cur.fail("empty literal");
    Scalar result;
    bool first = true;
    while (!cur.done()) {
        bool negative = false;
        if (cur.eat('+')) {
            negative = false;
        } else if (cur.eat('-')) {
            negative = true;
        } else if (!first) {
            cur.fail("expected '+' or '-' between terms");
        }
        first = false;

        Rat mag(1);
        bool have_coeff = false;
        if (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
            BigInt num = cur.digits();
            BigInt den = 1;
            if (cur.eat('/')) den = cur.digits();
            mag = make_rat(num, den);
            have_coeff = true;
        }
        bool is_r19 = false;
        if (cur.peek() == 'r') {
            ++cur.pos;
            if (!(cur.eat('1') && cur.eat('9'))) cur.fail("expected r19 suffix");
            is_r19 = true;
        }
        int deg = 0;
        bool have_mono = false;
        if ((have_coeff || is_r19) && cur.peek() == '*') {
            ++cur.pos;
            if (cur.peek() != 'L') cur.fail("expected L after '*'");
        }
        if (cur.peek() == 'L') {
            ++cur.pos;
            have_mono = true;
            deg = 1;
            if (cur.eat('^')) {
                BigInt e = cur.digits();
                if (e > 64) cur.fail("exponent too large");
                deg = static_cast<int>(e);
            }
        }
        if (!have_coeff && !is_r19 && !have_mono) cur.fail("expected a term");
        if (negative) mag = -mag;
        QuadRat c = is_r19 ? QuadRat(Rat(0), mag) : QuadRat(mag);
        result += Scalar::monomial(c, deg);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Univariate polynomial division and gcd over the coefficient field; used to
// keep ratio data reduced (e.g. intertwiner scalings).  This is plain Euclid,
// not a factorization facility.

inline std::pair<Scalar, Scalar> poly_divmod(const Scalar& a, const Scalar& b) {
    if (b.is_zero()) throw error("polynomial division by zero");
    Scalar rem = a;
    Scalar quot;
    QuadRat lead_inv = b.leading_coeff().inverse();
    while (!rem.is_zero() && rem.degree() >= b.degree()) {
        int d = rem.degree() - b.degree();
        QuadRat c = rem.leading_coeff() * lead_inv;
        Scalar t = Scalar::monomial(c, d);
        quot += t;
        rem -= t * b;
    }
    return {quot, rem};
}

inline Scalar poly_gcd(Scalar a, Scalar b) {
    while (!b.is_zero()) {
        Scalar r = poly_divmod(a, b).second;
        a = b;
        b = r;
    }
    if (a.is_zero()) return a;
    return a / Scalar(a.leading_coeff());  // monic
}

}  // namespace witt
