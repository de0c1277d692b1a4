#pragma once

#include "witt/scalar.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace witt {

// Basis element d_i of the Witt algebra, i >= -1, with [d_i, d_j] = (j-i) d_{i+j}.
struct Generator {
    int index;
    explicit Generator(int i) : index(i) {
        if (i < -1) throw error("generator index below -1");
    }
};

// PBW monomial: generator indices in non-decreasing order, d_{-1} smallest.
// With this order the d_{-1} factors of any monomial sit leftmost, which makes
// the Whittaker reduction below a basis projection.
struct PBWMonomial {
    std::vector<int> indices;

    bool operator==(const PBWMonomial&) const = default;
    bool operator<(const PBWMonomial& o) const {
        if (indices.size() != o.indices.size()) return indices.size() < o.indices.size();
        return indices < o.indices;
    }

    int length() const { return static_cast<int>(indices.size()); }
    bool contains_lowering() const { return !indices.empty() && indices.front() == -1; }

    PBWMonomial without_lowering() const {
        PBWMonomial m;
        for (int i : indices)
            if (i != -1) m.indices.push_back(i);
        return m;
    }

    std::string to_string() const {
        if (indices.empty()) return "1";
        std::string out;
        for (size_t t = 0; t < indices.size();) {
            size_t run = t;
            while (run < indices.size() && indices[run] == indices[t]) ++run;
            if (!out.empty()) out += "*";
            out += "d(" + std::to_string(indices[t]) + ")";
            if (run - t > 1) out += "^" + std::to_string(run - t);
            t = run;
        }
        return out;
    }
};

namespace detail {

// Rewrites d_i d_j -> d_j d_i + (j-i) d_{i+j} for adjacent inversions until the
// word is sorted.  Each correction term is strictly shorter, so the rewriting
// terminates; the normal form is strategy-independent (tested).  The strategy
// picks which adjacent inversion to resolve next.
using RewriteStrategy = std::function<size_t(const std::vector<size_t>&)>;

inline void reduce_word(std::vector<int> word, Rat coeff,
                        std::map<std::vector<int>, Rat>& out,
                        const RewriteStrategy& pick) {
    for (;;) {
        std::vector<size_t> inversions;
        for (size_t t = 0; t + 1 < word.size(); ++t)
            if (word[t] > word[t + 1]) inversions.push_back(t);
        if (inversions.empty()) break;
        size_t t = pick(inversions);
        int i = word[t];
        int j = word[t + 1];
        std::vector<int> shorter;
        shorter.reserve(word.size() - 1);
        shorter.insert(shorter.end(), word.begin(), word.begin() + static_cast<long>(t));
        shorter.push_back(i + j);
        shorter.insert(shorter.end(), word.begin() + static_cast<long>(t) + 2, word.end());
        reduce_word(std::move(shorter), coeff * Rat(j - i), out, pick);
        std::swap(word[t], word[t + 1]);
    }
    auto [it, inserted] = out.emplace(std::move(word), coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0) out.erase(it);
    }
}

inline size_t first_inversion(const std::vector<size_t>& inversions) { return inversions[0]; }

}  // namespace detail

// Element of U(W) in PBW normal form: ascending-index monomials with Scalar
// coefficients, no zero terms.
class UEAElement {
  public:
    UEAElement() = default;

    static UEAElement one() { return from_word({}, Scalar(1)); }
    static UEAElement generator(int index) {
        return from_word({Generator(index)}, Scalar(1));
    }
    static UEAElement from_word(const std::vector<Generator>& word, const Scalar& coeff,
                                const detail::RewriteStrategy& pick = detail::first_inversion) {
        std::vector<int> w;
        w.reserve(word.size());
        for (const Generator& g : word) w.push_back(g.index);
        std::map<std::vector<int>, Rat> reduced;
        detail::reduce_word(std::move(w), Rat(1), reduced, pick);
        UEAElement u;
        for (auto& [mono, c] : reduced) u.add_term(PBWMonomial{mono}, Scalar(c) * coeff);
        return u;
    }

    const std::map<PBWMonomial, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(PBWMonomial m, const Scalar& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.emplace(std::move(m), c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend UEAElement operator+(const UEAElement& x, const UEAElement& y) {
        UEAElement r = x;
        for (const auto& [m, c] : y.terms_) r.add_term(m, c);
        return r;
    }
    friend UEAElement operator-(const UEAElement& x, const UEAElement& y) {
        UEAElement r = x;
        for (const auto& [m, c] : y.terms_) r.add_term(m, -c);
        return r;
    }
    friend UEAElement operator*(const Scalar& c, const UEAElement& x) {
        UEAElement r;
        for (const auto& [m, v] : x.terms_) r.add_term(m, c * v);
        return r;
    }
    friend UEAElement operator*(const UEAElement& x, const UEAElement& y) {
        UEAElement r;
        for (const auto& [mx, cx] : x.terms_) {
            for (const auto& [my, cy] : y.terms_) {
                std::vector<int> word = mx.indices;
                word.insert(word.end(), my.indices.begin(), my.indices.end());
                std::map<std::vector<int>, Rat> reduced;
                detail::reduce_word(std::move(word), Rat(1), reduced, detail::first_inversion);
                Scalar c = cx * cy;
                for (auto& [mono, rc] : reduced) r.add_term(PBWMonomial{mono}, Scalar(rc) * c);
            }
        }
        return r;
    }

    bool operator==(const UEAElement&) const = default;

    bool contains_lowering() const {
        for (const auto& [m, c] : terms_)
            if (m.contains_lowering()) return true;
        return false;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [m, c] : terms_) {
            std::string cs = c.to_string();
            std::string body;
            if (m.indices.empty()) {
                body = cs;
            } else if (cs == "1") {
                body = m.to_string();
            } else if (cs == "-1") {
                body = "-" + m.to_string();
            } else {
                bool composite = cs.find_first_of("+-", 1) != std::string::npos;
                body = (composite ? "(" + cs + ")" : cs) + "*" + m.to_string();
            }
            if (!out.empty() && body[0] != '-') out += "+";
            out += body;
        }
        return out;
    }

  private:
    std::map<PBWMonomial, Scalar> terms_;
};

inline UEAElement pbw_normal_form(const std::vector<Generator>& word, const Scalar& coeff) {
    return UEAElement::from_word(word, coeff);
}

// z = -d_1 d_{-1} + d_0^2 - d_0, the Casimir element of the sl_2 copy
// spanned by d_{-1}, d_0, d_1.
inline UEAElement casimir() {
    UEAElement z = Scalar(-1) * UEAElement::from_word({Generator(1), Generator(-1)}, Scalar(1));
    z = z + UEAElement::from_word({Generator(0), Generator(0)}, Scalar(1));
    z = z - UEAElement::generator(0);
    return z;
}

// Coordinates of v_1 * u in the right module Q'_1 induced from the
// one-dimensional C[d_{-1}]-module with v_1 * d_{-1} = v_1.  PBW freeness
// makes these coordinates decide equality in Q'_1.
struct Q1Coords {
    std::map<PBWMonomial, Scalar> terms;

    bool is_zero() const { return terms.empty(); }
    bool operator==(const Q1Coords&) const = default;

    std::string to_string() const {
        if (terms.empty()) return "0";
        std::string out;
        for (const auto& [m, c] : terms) {
            std::string cs = c.to_string();
            std::string body = (m.indices.empty()) ? cs : cs + "*" + m.to_string();
            if (!out.empty() && body[0] != '-') out += "+";
            out += body;
        }
        return out;
    }
};

// Writes u in PBW order (all d_{-1} factors leftmost) and sends d_{-1} to 1.
inline Q1Coords whittaker_reduce(const UEAElement& u) {
    Q1Coords q;
    for (const auto& [m, c] : u.terms()) {
        PBWMonomial reduced = m.without_lowering();
        auto [it, inserted] = q.terms.emplace(std::move(reduced), c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) q.terms.erase(it);
        }
    }
    return q;
}

// ---------------------------------------------------------------------------
// Element literal used by the CLI, e.g. "-1*d(1)*d(-1)+d(0)*d(0)-d(0)".
// Terms are products of scalar literals and d(<index>) factors (optionally
// with ^<exp>), joined by '*'.

inline UEAElement parse_uea(const std::string& text) {
    if (text.empty()) throw error("empty element literal");
    std::vector<std::pair<std::string, bool>> terms;  // body, negative
    size_t start = 0;
    int depth = 0;
    bool neg = false;
    if (text[0] == '-') { neg = true; start = 1; }
    else if (text[0] == '+') { start = 1; }
    size_t pos = start;
    auto flush = [&](size_t end) {
        if (end <= start) throw error("empty term in element literal: " + text);
        terms.emplace_back(text.substr(start, end - start), neg);
    };
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if ((c == '+' || c == '-') && depth == 0) {
            flush(pos);
            neg = (c == '-');
            start = pos + 1;
        }
    }
    flush(pos);

    UEAElement sum;
    for (const auto& [body, negative] : terms) {
        UEAElement term = UEAElement::one();
        size_t f = 0;
        while (f < body.size()) {
            size_t next = body.find('*', f);
            // '*' inside d(...) cannot occur; scalar literals contain no '*'.
            std::string factor = body.substr(f, next == std::string::npos ? next : next - f);
            if (factor.empty()) throw error("empty factor in element literal: " + text);
            if (factor[0] == 'd') {
                size_t close = factor.find(')');
                if (factor.size() < 4 || factor[1] != '(' || close == std::string::npos)
                    throw error("bad generator factor '" + factor + "'");
                int index = std::stoi(factor.substr(2, close - 2));
                long exp = 1;
                if (close + 1 < factor.size()) {
                    if (factor[close + 1] != '^') throw error("bad generator factor '" + factor + "'");
                    exp = std::stol(factor.substr(close + 2));
                    if (exp < 0) throw error("negative exponent in element literal");
                }
                for (long e = 0; e < exp; ++e) term = term * UEAElement::generator(index);
            } else {
                term = Scalar::parse(factor) * term;
            }
            if (next == std::string::npos) break;
            f = next + 1;
        }
        if (negative) term = Scalar(-1) * term;
        sum = sum + term;
    }
    return sum;
}

}  // namespace witt
