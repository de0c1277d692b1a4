#pragma once

#include "witt/gmod.hpp"
#include "witt/linalg.hpp"
#include "witt/uea.hpp"

#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace witt {

inline Rat binomial(int n, int k) {
    if (k < 0 || k > n) return Rat(0);
    Rat acc(1);
    for (int t = 0; t < k; ++t) acc = acc * Rat(n - t) / Rat(t + 1);
    return acc;
}

// ---------------------------------------------------------------------------
// Elements of D (x) U(b): Weyl part in x^a d^b normal order via [d, x] = 1,
// Borel part in ascending PBW order.

struct WeylKey {
    int x_exp = 0;
    int d_exp = 0;
    PBWMonomial borel;

    bool operator==(const WeylKey&) const = default;
    bool operator<(const WeylKey& o) const {
        if (x_exp != o.x_exp) return x_exp < o.x_exp;
        if (d_exp != o.d_exp) return d_exp < o.d_exp;
        return borel < o.borel;
    }

    std::string to_string() const {
        std::string out;
        auto pow = [](const std::string& sym, int e) -> std::string {
            if (e == 0) return "";
            if (e == 1) return sym;
            return sym + "^" + std::to_string(e);
        };
        std::string weyl = pow("x", x_exp);
        std::string del = pow("del", d_exp);
        if (!weyl.empty() && !del.empty()) weyl += "*";
        weyl += del;
        if (weyl.empty()) weyl = "1";
        out = weyl + "(x)" + borel.to_string();
        return out;
    }
};

class WeylTensorElement {
  public:
    WeylTensorElement() = default;

    static WeylTensorElement term(int x_exp, int d_exp, PBWMonomial borel, const Scalar& c) {
        WeylTensorElement e;
        e.add(WeylKey{x_exp, d_exp, std::move(borel)}, c);
        return e;
    }
    static WeylTensorElement one() { return term(0, 0, {}, Scalar(1)); }

    const std::map<WeylKey, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(WeylKey key, const Scalar& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.emplace(std::move(key), c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend WeylTensorElement operator+(const WeylTensorElement& x, const WeylTensorElement& y) {
        WeylTensorElement r = x;
        for (const auto& [k, c] : y.terms_) r.add(k, c);
        return r;
    }
    friend WeylTensorElement operator-(const WeylTensorElement& x, const WeylTensorElement& y) {
        WeylTensorElement r = x;
        for (const auto& [k, c] : y.terms_) r.add(k, -c);
        return r;
    }
    friend WeylTensorElement operator*(const Scalar& c, const WeylTensorElement& x) {
        WeylTensorElement r;
        for (const auto& [k, v] : x.terms_) r.add(k, c * v);
        return r;
    }

    // (x^{a1} d^{b1} (x) m1)(x^{a2} d^{b2} (x) m2): the Weyl part reorders by
    // d^b x^a = sum_k k! C(b,k) C(a,k) x^{a-k} d^{b-k}, the Borel part is a
    // PBW product.
    friend WeylTensorElement operator*(const WeylTensorElement& x, const WeylTensorElement& y) {
        WeylTensorElement r;
        for (const auto& [kx, cx] : x.terms_) {
            for (const auto& [ky, cy] : y.terms_) {
                std::vector<int> word = kx.borel.indices;
                word.insert(word.end(), ky.borel.indices.begin(), ky.borel.indices.end());
                std::map<std::vector<int>, Rat> borel;
                detail::reduce_word(std::move(word), Rat(1), borel, detail::first_inversion);
                Scalar c = cx * cy;
                int kmax = std::min(kx.d_exp, ky.x_exp);
                for (int k = 0; k <= kmax; ++k) {
                    Rat weyl = binomial(kx.d_exp, k) * binomial(ky.x_exp, k);
                    for (int t = 0; t < k; ++t) weyl *= Rat(t + 1);
                    for (const auto& [mono, bc] : borel)
                        r.add(WeylKey{kx.x_exp + ky.x_exp - k, kx.d_exp + ky.d_exp - k,
                                      PBWMonomial{mono}},
                              Scalar(weyl * bc) * c);
                }
            }
        }
        return r;
    }

    bool operator==(const WeylTensorElement&) const = default;

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [k, c] : terms_) {
            std::string body = c.to_string() + "*" + k.to_string();
            if (!out.empty()) out += " + ";
            out += body;
        }
        return out;
    }

  private:
    std::map<WeylKey, Scalar> terms_;
};

// phi(d_m) in D (x) U(b):
//   d_{-1} -> del (x) 1
//   d_m    -> x^{m+1} del (x) 1 + sum_{r=0}^{m} C(m+1, r+1) x^{m-r} (x) d_r.
inline WeylTensorElement phi(int m) {
    if (m < -1) throw error("phi is defined for indices >= -1");
    if (m == -1) return WeylTensorElement::term(0, 1, {}, Scalar(1));
    WeylTensorElement e = WeylTensorElement::term(m + 1, 1, {}, Scalar(1));
    for (int r = 0; r <= m; ++r)
        e = e + WeylTensorElement::term(m - r, 0, PBWMonomial{{r}}, Scalar(binomial(m + 1, r + 1)));
    return e;
}

struct PhiReport {
    std::vector<std::pair<std::pair<int, int>, std::string>> violations;
    bool empty() const { return violations.empty(); }
};

// Verifies phi(d_i) phi(d_j) - phi(d_j) phi(d_i) = (j-i) phi(d_{i+j})
// exactly for -1 <= i < j <= i_max.
inline PhiReport phi_homomorphism_check(int i_max) {
    PhiReport report;
    for (int i = -1; i <= i_max; ++i) {
        for (int j = i + 1; j <= i_max; ++j) {
            WeylTensorElement residual =
                phi(i) * phi(j) - phi(j) * phi(i) - Scalar(j - i) * phi(i + j);
            if (!residual.is_zero())
                report.violations.push_back({{i, j}, residual.to_string()});
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Weyl-algebra modules: C[x] (basis x^a, 0 <= a <= A) and the torsion module
// S = C[x^{+-1}]/C[x] (basis x^{-a}, 1 <= a <= A).

struct DModule {
    enum class Kind { poly, torsion };
    Kind kind = Kind::poly;
    int bound = 0;

    static DModule poly(int a) { return {Kind::poly, a}; }
    static DModule torsion(int a) { return {Kind::torsion, a}; }

    int dim() const { return kind == Kind::poly ? bound + 1 : bound; }
    int degree_of(int idx) const { return kind == Kind::poly ? idx : -(idx + 1); }
    std::string basis_name(int idx) const {
        return "x^" + std::to_string(degree_of(idx));
    }

    // Single-term operators; nullopt = image leaves the window, empty map =
    // structural zero.
    std::optional<std::map<int, QuadRat>> apply_x(int idx) const {
        if (kind == Kind::poly) {
            if (idx + 1 > bound) return std::nullopt;
            return std::map<int, QuadRat>{{idx + 1, QuadRat(1)}};
        }
        if (idx == 0) return std::map<int, QuadRat>{};  // x * x^{-1} = 0 in S
        return std::map<int, QuadRat>{{idx - 1, QuadRat(1)}};
    }
    std::optional<std::map<int, QuadRat>> apply_del(int idx) const {
        if (kind == Kind::poly) {
            if (idx == 0) return std::map<int, QuadRat>{};
            return std::map<int, QuadRat>{{idx - 1, QuadRat(idx)}};
        }
        if (idx + 1 >= bound) return std::nullopt;
        return std::map<int, QuadRat>{{idx + 1, QuadRat(-(idx + 1))}};
    }
};

// ---------------------------------------------------------------------------
// Borel-subalgebra modules with a top nonzero generator index l:
// d_i V = 0 structurally for i > l.  Finite matrices or a banded two-sided
// window; near a band edge a column whose true image leaves the window is
// undefined, with the band offsets inferred from the given matrices.

class BModule {
  public:
    int l = 0;
    bool banded = false;
    int band = 0;

    static BModule from_matrices(int l, std::vector<Matrix<Scalar>> ops, bool banded_window) {
        BModule v;
        v.l = l;
        v.banded = banded_window;
        if (ops.size() != static_cast<size_t>(l + 1))
            throw error("bmod needs matrices for d0..dl");
        v.dim_ = ops.empty() ? 0 : ops[0].cols;
        if (banded_window) {
            if (v.dim_ % 2 == 0) throw error("banded bmod needs odd dimension 2B+1");
            v.band = (v.dim_ - 1) / 2;
        }
        for (int i = 0; i <= l; ++i) {
            const Matrix<Scalar>& m = ops[static_cast<size_t>(i)];
            if (m.rows != v.dim_ || m.cols != v.dim_) throw error("bmod matrix size mismatch");
            // Band inference: offsets that occur anywhere in this operator.
            int max_up = 0;
            int min_down = 0;
            for (int r = 0; r < m.rows; ++r)
                for (int c = 0; c < m.cols; ++c)
                    if (!m.at(r, c).is_zero()) {
                        max_up = std::max(max_up, r - c);
                        min_down = std::min(min_down, r - c);
                    }
            std::vector<std::optional<SparseVec<QuadRat>>> cols(static_cast<size_t>(v.dim_));
            for (int c = 0; c < v.dim_; ++c) {
                if (banded_window && (c + max_up > v.dim_ - 1 || c + min_down < 0)) continue;
                SparseVec<QuadRat> img;
                for (int r = 0; r < m.rows; ++r)
                    if (!m.at(r, c).is_zero()) img[r] = m.at(r, c).constant_value();
                cols[static_cast<size_t>(c)] = std::move(img);
            }
            v.ops_.push_back(std::move(cols));
        }
        v.validate();
        return v;
    }

    static BModule weight_line(const QuadRat& lambda) {
        Matrix<Scalar> d0(1, 1);
        d0.at(0, 0) = Scalar(lambda);
        return from_matrices(0, {d0}, false);
    }

    int dim() const { return dim_; }

    std::optional<SparseVec<QuadRat>> action(int i, int col) const {
        if (i < 0) throw error("bmod action index must be >= 0");
        if (i > l) return SparseVec<QuadRat>{};  // structurally zero
        return ops_[static_cast<size_t>(i)][static_cast<size_t>(col)];
    }

    std::string basis_name(int idx) const {
        if (!banded) return "v" + std::to_string(idx);
        return "s^" + std::to_string(idx - band);
    }

    std::string to_text() const;
    static BModule parse(std::istream& in);

  private:
    // Exact bracket validation [d_i, d_j] = (j-i) d_{i+j} wherever both
    // compositions are defined (d_{i+j} = 0 when i + j > l).
    void validate() const {
        for (int i = 0; i <= l; ++i) {
            for (int j = i + 1; j <= l; ++j) {
                for (int c = 0; c < dim_; ++c) {
                    auto compose = [&](int outer, int inner) -> std::optional<SparseVec<QuadRat>> {
                        auto first = action(inner, c);
                        if (!first) return std::nullopt;
                        SparseVec<QuadRat> acc;
                        for (const auto& [r, v] : *first) {
                            auto second = action(outer, r);
                            if (!second) return std::nullopt;
                            for (const auto& [r2, v2] : *second) {
                                auto [it, ins] = acc.emplace(r2, QuadRat(0));
                                it->second += v * v2;
                                if (it->second.is_zero()) acc.erase(it);
                            }
                        }
                        return acc;
                    };
                    auto ij = compose(i, j);
                    auto ji = compose(j, i);
                    auto target = (i + j <= l) ? action(i + j, c)
                                               : std::optional<SparseVec<QuadRat>>{SparseVec<QuadRat>{}};
                    if (!ij || !ji || !target) continue;
                    SparseVec<QuadRat> residual = *ij;
                    for (const auto& [r, v] : *ji) {
                        auto [it, ins] = residual.emplace(r, QuadRat(0));
                        it->second -= v;
                        if (it->second.is_zero()) residual.erase(it);
                    }
                    for (const auto& [r, v] : *target) {
                        auto [it, ins] = residual.emplace(r, QuadRat(0));
                        it->second -= QuadRat(j - i) * v;
                        if (it->second.is_zero()) residual.erase(it);
                    }
                    if (!residual.empty())
                        throw error("bmod data violates [d_i, d_j] = (j-i) d_{i+j} at (i=" +
                                    std::to_string(i) + ", j=" + std::to_string(j) +
                                    ", column=" + std::to_string(c) + ")");
                }
            }
        }
    }

    int dim_ = 0;
    std::vector<std::vector<std::optional<SparseVec<QuadRat>>>> ops_;
};

// File format: header "bmod dim <n> l <k>" or "bmod band <B> l <k>", then for
// each generator up to l a line "d<i>" followed by n rows of scalar literals.
inline BModule BModule::parse(std::istream& in) {
    std::string word;
    if (!(in >> word) || word != "bmod") throw error("bmod file must start with 'bmod'");
    std::string mode;
    int size_arg = 0;
    int l = 0;
    if (!(in >> mode >> size_arg)) throw error("bmod header is malformed");
    if (!(in >> word) || word != "l" || !(in >> l)) throw error("bmod header is malformed");
    bool banded = (mode == "band");
    if (!banded && mode != "dim") throw error("bmod mode must be 'dim' or 'band'");
    int n = banded ? 2 * size_arg + 1 : size_arg;

    std::vector<Matrix<Scalar>> ops;
    for (int i = 0; i <= l; ++i) {
        if (!(in >> word) || word != "d" + std::to_string(i))
            throw error("bmod expects generator block d" + std::to_string(i));
        Matrix<Scalar> m(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                std::string lit;
                if (!(in >> lit)) throw error("bmod matrix is truncated");
                m.at(r, c) = Scalar::parse(lit);
            }
        ops.push_back(std::move(m));
    }
    return from_matrices(l, std::move(ops), banded);
}

inline std::string BModule::to_text() const {
    std::string out = banded ? "bmod band " + std::to_string(band) : "bmod dim " + std::to_string(dim_);
    out += " l " + std::to_string(l) + "\n";
    for (int i = 0; i <= l; ++i) {
        out += "d" + std::to_string(i) + "\n";
        for (int r = 0; r < dim_; ++r) {
            for (int c = 0; c < dim_; ++c) {
                QuadRat v(0);
                auto col = ops_[static_cast<size_t>(i)][static_cast<size_t>(c)];
                if (col) {
                    auto it = col->find(r);
                    if (it != col->end()) v = it->second;
                }
                out += Scalar(v).to_string();
                out += (c + 1 == dim_) ? "\n" : " ";
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// T(P, V): the W-module on P (x) V through phi,
//   d_m (p (x) v) = (x^{m+1} del p) (x) v
//                 + sum_{r=0}^{m} C(m+1, r+1) (x^{m-r} p) (x) (d_r v).
// Cells are pairs (P basis, V basis); an action is stored only when every
// contribution stays inside both windows.

class TensorModule {
  public:
    TensorModule(DModule p, BModule v, int gen_bound)
        : p_(p), v_(std::move(v)), gen_bound_(gen_bound) {
        const int pd = p_.dim();
        const int vd = v_.dim();
        actions_.assign(static_cast<size_t>(gen_bound_ + 2), {});
        for (auto& row : actions_) row.assign(static_cast<size_t>(pd * vd), std::nullopt);
        for (int m = -1; m <= gen_bound_; ++m)
            for (int a = 0; a < pd; ++a)
                for (int n = 0; n < vd; ++n) build_action(m, a, n);
    }

    int dim() const { return p_.dim() * v_.dim(); }
    int gen_bound() const { return gen_bound_; }
    int cell(int p_idx, int v_idx) const { return p_idx * v_.dim() + v_idx; }
    std::pair<int, int> split(int idx) const { return {idx / v_.dim(), idx % v_.dim()}; }

    const DModule& weyl_module() const { return p_; }
    const BModule& borel_module() const { return v_; }

    std::string basis_id(int idx) const {
        auto [a, n] = split(idx);
        return p_.basis_name(a) + "(x)" + v_.basis_name(n);
    }

    const std::optional<Vec>& action(int k, int idx) const {
        static const std::optional<Vec> kNone;
        if (k < -1 || k > gen_bound_) return kNone;
        return actions_[static_cast<size_t>(k + 1)][static_cast<size_t>(idx)];
    }

    std::optional<Vec> act(int k, const Vec& v) const {
        Vec out;
        for (const auto& [idx, c] : v) {
            const std::optional<Vec>& img = action(k, idx);
            if (!img) return std::nullopt;
            vec_add_scaled(out, *img, c);
        }
        return out;
    }

    // d_0 acts diagonally on every cell.
    bool is_weight_module() const {
        for (int idx = 0; idx < dim(); ++idx) {
            const std::optional<Vec>& d0 = action(0, idx);
            if (!d0) continue;
            for (const auto& [t, c] : *d0)
                if (t != idx) return false;
        }
        return true;
    }

    std::vector<QuadRat> d0_spectrum() const {
        if (!is_weight_module()) throw error("d0 spectrum needs a weight module");
        std::vector<QuadRat> eigen;
        for (int idx = 0; idx < dim(); ++idx) {
            const std::optional<Vec>& d0 = action(0, idx);
            if (!d0) continue;
            QuadRat value(0);
            auto it = d0->find(idx);
            if (it != d0->end()) value = it->second.constant_value();
            eigen.push_back(value);
        }
        return eigen;
    }

  private:
    void build_action(int m, int a, int n) {
        Vec out;
        // (x^{m+1} del p) (x) v
        std::map<int, QuadRat> pterm;
        {
            auto d = p_.apply_del(a);
            if (!d) return;
            pterm = *d;
            for (int t = 0; t < m + 1; ++t) {
                std::map<int, QuadRat> next;
                for (const auto& [idx, c] : pterm) {
                    auto x = p_.apply_x(idx);
                    if (!x) return;
                    for (const auto& [idx2, c2] : *x) next[idx2] += c * c2;
                }
                pterm = std::move(next);
            }
        }
        for (const auto& [idx, c] : pterm)
            if (!c.is_zero()) out[cell(idx, n)] = Scalar(c);
        // sum_r C(m+1, r+1) (x^{m-r} p) (x) (d_r v)
        for (int r = 0; r <= m; ++r) {
            Rat binom = binomial(m + 1, r + 1);
            if (binom == 0) continue;
            auto dv = v_.action(r, n);
            if (!dv) return;
            if (dv->empty()) continue;
            std::map<int, QuadRat> xp{{a, QuadRat(1)}};
            for (int t = 0; t < m - r; ++t) {
                std::map<int, QuadRat> next;
                for (const auto& [idx, c] : xp) {
                    auto x = p_.apply_x(idx);
                    if (!x) return;
                    for (const auto& [idx2, c2] : *x) next[idx2] += c * c2;
                }
                xp = std::move(next);
            }
            for (const auto& [pidx, pc] : xp)
                for (const auto& [vidx, vc] : *dv) {
                    Scalar add = Scalar(Rat(binom)) * Scalar(pc * vc);
                    if (add.is_zero()) continue;
                    auto [it, ins] = out.emplace(cell(pidx, vidx), Scalar(0));
                    it->second += add;
                    if (it->second.is_zero()) out.erase(it);
                }
        }
        actions_[static_cast<size_t>(m + 1)][static_cast<size_t>(cell(a, n))] = std::move(out);
    }

    DModule p_;
    BModule v_;
    int gen_bound_;
    std::vector<std::vector<std::optional<Vec>>> actions_;
};

inline TensorModule build_tensor_module(const DModule& p, const BModule& v, int gen_bound) {
    return TensorModule(p, v, gen_bound);
}

// ---------------------------------------------------------------------------
// Simplicity probe: closure of a seed cell under all stored generators,
// restricted to the safe interior.  Full interior reach is a signal, not a
// proof: the report says whether any proper invariant subspace was visible
// in the window.

struct ProbeReport {
    int interior_cells = 0;
    int covered_cells = 0;
    bool fixed_point = false;
    std::vector<std::string> missed;

    bool full_interior_reach() const {
        return interior_cells > 0 && covered_cells == interior_cells;
    }
};

inline ProbeReport simplicity_probe(const TensorModule& t, int seed_idx, int budget) {
    SparseEliminator<QuadRat> span(t.dim());
    std::vector<Vec> frontier;
    Vec seed{{seed_idx, Scalar(1)}};
    auto to_sparse = [](const Vec& v) {
        SparseVec<QuadRat> s;
        for (const auto& [idx, c] : v) s[idx] = c.constant_value();
        return s;
    };
    ProbeReport report;
    report.fixed_point = true;
    if (span.add_row(to_sparse(seed))) frontier.push_back(seed);
    for (int round = 0; round < budget && !frontier.empty(); ++round) {
        std::vector<Vec> next;
        for (const Vec& v : frontier)
            for (int k = -1; k <= t.gen_bound(); ++k) {
                std::optional<Vec> img = t.act(k, v);
                if (!img || img->empty()) continue;
                if (span.add_row(to_sparse(*img))) next.push_back(std::move(*img));
            }
        frontier = std::move(next);
        if (round == budget - 1 && !frontier.empty()) report.fixed_point = false;
    }
    for (int idx = 0; idx < t.dim(); ++idx) {
        bool interior = true;
        for (int k = -1; k <= t.gen_bound(); ++k)
            if (!t.action(k, idx)) interior = false;
        if (!interior) continue;
        ++report.interior_cells;
        SparseVec<QuadRat> unit{{idx, QuadRat(1)}};
        span.reduce(unit);
        if (unit.empty()) ++report.covered_cells;
        else report.missed.push_back(t.basis_id(idx));
    }
    return report;
}

}  // namespace witt
