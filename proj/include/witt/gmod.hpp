#pragma once

#include "witt/linalg.hpp"
#include "witt/scalar.hpp"
#include "witt/uea.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace witt {

struct window_error : error {
    explicit window_error(const std::string& what) : error(what) {}
};

// Sparse vector in a module's basis coordinates; no stored zero entries.
using Vec = std::map<int, Scalar>;

inline void vec_add_scaled(Vec& target, const Vec& source, const Scalar& factor) {
    if (factor.is_zero()) return;
    for (const auto& [idx, c] : source) {
        auto [it, inserted] = target.emplace(idx, Scalar(0));
        it->second += factor * c;
        if (it->second.is_zero()) target.erase(it);
    }
}

inline Vec vec_scaled(const Vec& v, const Scalar& factor) {
    Vec r;
    vec_add_scaled(r, v, factor);
    return r;
}

// ---------------------------------------------------------------------------
// Truncated weight-graded module over the Witt algebra.
//
// Basis vectors carry integer offsets from a common base weight; the window
// is the stored offset interval.  An action entry (k, basis vector) is either
// a stored vector (possibly zero, when the target is structurally zero) or
// absent, meaning the true image leaves the window.  Checkers quantify only
// over fully representable data, so truncation never silently becomes zero.
//
// Values are immutable after finalize(); all queries are pure.

class GradedModule {
  public:
    struct BasisVec {
        std::string id;
        int offset;
    };

    const std::string& name() const { return name_; }
    const Scalar& base() const { return base_; }
    int window_min() const { return n_min_; }
    int window_max() const { return n_max_; }
    int gen_bound() const { return gen_bound_; }
    std::optional<int> support_min() const { return support_min_; }
    std::optional<int> support_max() const { return support_max_; }
    bool weight_semisimple() const { return weight_semisimple_; }

    int dim() const { return static_cast<int>(basis_.size()); }
    const BasisVec& basis(int idx) const { return basis_[static_cast<size_t>(idx)]; }
    const std::string& basis_id(int idx) const { return basis_[static_cast<size_t>(idx)].id; }
    int offset_of(int idx) const { return basis_[static_cast<size_t>(idx)].offset; }
    Scalar weight_label(int idx) const { return base_ + Scalar(offset_of(idx)); }

    int index_of(const std::string& id) const {
        auto it = id_index_.find(id);
        if (it == id_index_.end()) throw error("unknown basis id '" + id + "' in " + name_);
        return it->second;
    }

    const std::vector<int>& piece(int offset) const {
        static const std::vector<int> kEmpty;
        auto it = pieces_.find(offset);
        return it == pieces_.end() ? kEmpty : it->second;
    }
    int piece_dim(int offset) const { return static_cast<int>(piece(offset).size()); }

    // Piece dimension when it is knowable: inside the window it is stored,
    // outside the true support it is zero, otherwise unknown.
    std::optional<int> known_piece_dim(int offset) const {
        if (offset >= n_min_ && offset <= n_max_) return piece_dim(offset);
        if (support_min_ && offset < *support_min_) return 0;
        if (support_max_ && offset > *support_max_) return 0;
        return std::nullopt;
    }

    bool action_defined(int k, int idx) const { return action(k, idx).has_value(); }
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

    Vec act_or_throw(int k, const Vec& v) const {
        for (const auto& [idx, c] : v) {
            if (!action_defined(k, idx))
                throw window_error("action of d(" + std::to_string(k) + ") leaves the window of " +
                                   name_ + " at weight " +
                                   (weight_label(idx) + Scalar(k)).to_string());
        }
        return *act(k, v);
    }

    std::string to_dump() const;

    friend class GradedModuleBuilder;

  private:
    std::string name_;
    Scalar base_;
    int n_min_ = 0;
    int n_max_ = 0;
    int gen_bound_ = 0;
    std::optional<int> support_min_;
    std::optional<int> support_max_;
    bool weight_semisimple_ = false;
    std::vector<BasisVec> basis_;
    std::map<std::string, int> id_index_;
    std::map<int, std::vector<int>> pieces_;
    std::vector<std::vector<std::optional<Vec>>> actions_;  // [k+1][idx]
};

class GradedModuleBuilder {
  public:
    GradedModuleBuilder(std::string name, Scalar base, int n_min, int n_max, int gen_bound)
        : m_() {
        if (n_min > n_max) throw error("empty window for module " + name);
        if (gen_bound < 1) throw error("generator bound must be at least 1");
        m_.name_ = std::move(name);
        m_.base_ = std::move(base);
        m_.n_min_ = n_min;
        m_.n_max_ = n_max;
        m_.gen_bound_ = gen_bound;
        m_.actions_.assign(static_cast<size_t>(gen_bound + 2), {});
    }

    GradedModuleBuilder& support(std::optional<int> min, std::optional<int> max) {
        m_.support_min_ = min;
        m_.support_max_ = max;
        return *this;
    }

    int add_basis(const std::string& id, int offset) {
        if (offset < m_.n_min_ || offset > m_.n_max_)
            throw error("basis offset outside window in " + m_.name_);
        if (m_.id_index_.count(id)) throw error("duplicate basis id '" + id + "'");
        int idx = static_cast<int>(m_.basis_.size());
        m_.basis_.push_back({id, offset});
        m_.id_index_[id] = idx;
        m_.pieces_[offset].push_back(idx);
        for (auto& row : m_.actions_) row.emplace_back(std::nullopt);
        return idx;
    }

    void set_action(int k, int idx, Vec image) {
        if (k < -1 || k > m_.gen_bound_) throw error("generator outside stored range");
        int source_offset = m_.offset_of(idx);
        for (const auto& [t, c] : image) {
            if (m_.offset_of(t) != source_offset + k)
                throw error("weight-incoherent action entry in " + m_.name_);
        }
        m_.actions_[static_cast<size_t>(k + 1)][static_cast<size_t>(idx)] = std::move(image);
    }

    GradedModule finalize() {
        m_.weight_semisimple_ = true;
        for (int idx = 0; idx < m_.dim(); ++idx) {
            const std::optional<Vec>& d0 = m_.action(0, idx);
            Vec expected;
            expected[idx] = m_.base_ + Scalar(m_.offset_of(idx));
            if (expected[idx].is_zero()) expected.clear();
            if (!d0 || *d0 != expected) m_.weight_semisimple_ = false;
        }
        return std::move(m_);
    }

  private:
    GradedModule m_;
};

inline std::string GradedModule::to_dump() const {
    std::string out = "module " + name_ + " window " + std::to_string(n_min_) + " " +
                      std::to_string(n_max_) + " gen " + std::to_string(gen_bound_) + "\n";
    for (const BasisVec& b : basis_)
        out += "basis " + b.id + " " + (base_ + Scalar(b.offset)).to_string() + "\n";
    for (int k = -1; k <= gen_bound_; ++k) {
        for (int idx = 0; idx < dim(); ++idx) {
            const std::optional<Vec>& img = action(k, idx);
            if (!img) continue;
            out += "act " + std::to_string(k) + " " + basis_id(idx) + " =";
            bool first = true;
            for (const auto& [t, c] : *img) {
                out += first ? " " : ",";
                out += basis_id(t) + ":" + c.to_string();
                first = false;
            }
            out += "\n";
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Commutator residual check: for every basis vector v and pair i < j with all
// of d_i d_j v, d_j d_i v and d_{i+j} v representable, assert
//   d_i(d_j v) - d_j(d_i v) = (j-i) d_{i+j} v
// exactly.  Violations are data, not errors.

struct Residual {
    int i;
    int j;
    int basis_index;
    std::string basis_id;
    Vec residual;
};

struct ResidualReport {
    std::vector<Residual> violations;

    bool empty() const { return violations.empty(); }

    std::string to_string() const {
        if (violations.empty()) return "ok: no residuals\n";
        std::string out;
        for (const Residual& r : violations) {
            out += "residual at (i=" + std::to_string(r.i) + ", j=" + std::to_string(r.j) +
                   ", basis=" + r.basis_id + "):";
            for (const auto& [idx, c] : r.residual)
                out += " [" + std::to_string(idx) + "]:" + c.to_string();
            out += "\n";
        }
        return out;
    }
};

template <class Space>
ResidualReport check_commutators(const Space& m) {
    ResidualReport report;
    const int g = m.gen_bound();
    for (int idx = 0; idx < m.dim(); ++idx) {
        for (int i = -1; i <= g; ++i) {
            for (int j = i + 1; j <= g; ++j) {
                if (i + j > g) continue;
                const std::optional<Vec>& dj = m.action(j, idx);
                if (!dj) continue;
                std::optional<Vec> di_dj = m.act(i, *dj);
                if (!di_dj) continue;
                const std::optional<Vec>& di = m.action(i, idx);
                if (!di) continue;
                std::optional<Vec> dj_di = m.act(j, *di);
                if (!dj_di) continue;
                const std::optional<Vec>& dij = m.action(i + j, idx);
                if (!dij) continue;
                Vec residual = *di_dj;
                vec_add_scaled(residual, *dj_di, Scalar(-1));
                vec_add_scaled(residual, *dij, Scalar(i - j));
                if (!residual.empty())
                    report.violations.push_back({i, j, idx, m.basis_id(idx), std::move(residual)});
            }
        }
    }
    return report;
}

inline ResidualReport check_module_axioms(const GradedModule& m) { return check_commutators(m); }

// Applies a PBW element through the stored generator actions, rightmost
// factor first.  Throws window_error when an intermediate image is not
// representable.
inline Vec act(const UEAElement& u, const GradedModule& m, const Vec& v) {
    Vec out;
    for (const auto& [mono, coeff] : u.terms()) {
        Vec cur = v;
        for (auto it = mono.indices.rbegin(); it != mono.indices.rend(); ++it)
            cur = m.act_or_throw(*it, cur);
        vec_add_scaled(out, cur, coeff);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Maximal vectors: per graded piece, the joint kernel of d_1 and d_2.  Pieces
// where d_1 or d_2 is not representable are skipped (window too shallow
// there).  Symbolic entries are supported for pieces of dimension <= 2 via
// vanishing-minor analysis; larger pieces require constant entries.

inline std::vector<std::pair<Scalar, Vec>> maximal_vectors(const GradedModule& m) {
    if (!m.weight_semisimple())
        throw error("maximal_vectors requires a weight-semisimple module");
    std::vector<std::pair<Scalar, Vec>> found;
    for (int n = m.window_min(); n <= m.window_max(); ++n) {
        const std::vector<int>& piece = m.piece(n);
        if (piece.empty()) continue;
        bool all_defined = true;
        for (int idx : piece)
            for (int k : {1, 2})
                if (!m.action_defined(k, idx)) all_defined = false;
        if (!all_defined) continue;

        const int dim = static_cast<int>(piece.size());
        // Stack the d_1 and d_2 matrices restricted to this piece.
        std::vector<std::vector<Scalar>> rows;
        for (int k : {1, 2}) {
            std::set<int> targets;
            for (int idx : piece)
                for (const auto& [t, c] : *m.action(k, idx)) targets.insert(t);
            for (int t : targets) {
                std::vector<Scalar> row(static_cast<size_t>(dim), Scalar(0));
                for (int c = 0; c < dim; ++c) {
                    const Vec& img = *m.action(k, piece[static_cast<size_t>(c)]);
                    auto it = img.find(t);
                    if (it != img.end()) row[static_cast<size_t>(c)] = it->second;
                }
                rows.push_back(std::move(row));
            }
        }
        Scalar weight = m.base() + Scalar(n);
        auto emit = [&](const std::vector<Scalar>& coords) {
            Vec v;
            for (int c = 0; c < dim; ++c)
                if (!coords[static_cast<size_t>(c)].is_zero())
                    v[piece[static_cast<size_t>(c)]] = coords[static_cast<size_t>(c)];
            found.emplace_back(weight, std::move(v));
        };

        bool all_const = true;
        for (const auto& row : rows)
            for (const Scalar& e : row)
                if (!e.is_constant()) all_const = false;

        if (rows.empty()) {
            // No raising action lands anywhere: the whole piece is maximal.
            for (int c = 0; c < dim; ++c) {
                std::vector<Scalar> coords(static_cast<size_t>(dim), Scalar(0));
                coords[static_cast<size_t>(c)] = Scalar(1);
                emit(coords);
            }
        } else if (all_const) {
            Matrix<QuadRat> mat(static_cast<int>(rows.size()), dim);
            for (size_t r = 0; r < rows.size(); ++r)
                for (int c = 0; c < dim; ++c)
                    mat.at(static_cast<int>(r), c) = rows[r][static_cast<size_t>(c)].constant_value();
            for (const auto& null_vec : nullspace(mat)) {
                std::vector<Scalar> coords;
                coords.reserve(static_cast<size_t>(dim));
                for (const QuadRat& q : null_vec) coords.emplace_back(q);
                emit(coords);
            }
        } else if (dim == 1) {
            bool all_zero = true;
            for (const auto& row : rows)
                if (!row[0].is_zero()) all_zero = false;
            if (all_zero) emit({Scalar(1)});
        } else if (dim == 2) {
            // Kernel is nonzero iff every 2x2 minor vanishes identically.
            bool minors_vanish = true;
            for (size_t r = 0; r < rows.size() && minors_vanish; ++r)
                for (size_t s = r + 1; s < rows.size() && minors_vanish; ++s)
                    if (!(rows[r][0] * rows[s][1] - rows[r][1] * rows[s][0]).is_zero())
                        minors_vanish = false;
            if (minors_vanish) {
                const std::vector<Scalar>* pivot_row = nullptr;
                for (const auto& row : rows)
                    if (!row[0].is_zero() || !row[1].is_zero()) { pivot_row = &row; break; }
                if (!pivot_row) {
                    emit({Scalar(1), Scalar(0)});
                    emit({Scalar(0), Scalar(1)});
                } else {
                    emit({(*pivot_row)[1], -(*pivot_row)[0]});
                }
            }
        } else {
            throw error("symbolic maximal-vector search supports pieces of dimension <= 2");
        }
    }
    return found;
}

// ---------------------------------------------------------------------------
// Restricted dual: dual basis per piece, weight negated, action matrices are
// negated transposes.  The dual window mirrors the input window.

inline GradedModule restricted_dual(const GradedModule& m) {
    GradedModuleBuilder b(m.name() + "*", -m.base(), -m.window_max(), -m.window_min(),
                          m.gen_bound());
    std::optional<int> smin;
    std::optional<int> smax;
    if (m.support_max()) smin = -*m.support_max();
    if (m.support_min()) smax = -*m.support_min();
    b.support(smin, smax);

    std::vector<int> dual_of(static_cast<size_t>(m.dim()), -1);
    for (int n = m.window_max(); n >= m.window_min(); --n)
        for (int idx : m.piece(n))
            dual_of[static_cast<size_t>(idx)] = b.add_basis(m.basis_id(idx) + "*", -n);

    for (int k = -1; k <= m.gen_bound(); ++k) {
        for (int s = 0; s < m.dim(); ++s) {
            int n = m.offset_of(s);  // phi_s lives at dual offset -n
            // Contributions come from input vectors at offset n-k.
            std::optional<int> source_dim = m.known_piece_dim(n - k);
            if (!source_dim) continue;  // source piece unknowable: leave undefined
            Vec img;
            bool ok = true;
            for (int v : m.piece(n - k)) {
                const std::optional<Vec>& av = m.action(k, v);
                if (!av) { ok = false; break; }
                auto it = av->find(s);
                if (it != av->end())
                    img[dual_of[static_cast<size_t>(v)]] = -it->second;
            }
            if (ok) b.set_action(k, dual_of[static_cast<size_t>(s)], std::move(img));
        }
    }
    return b.finalize();
}

// ---------------------------------------------------------------------------
// Graded isomorphism search for weight-semisimple modules with 1-dimensional
// pieces: fix scale 1 on the extremal piece, propagate along d_{-1} (or d_1
// for raising-direction modules) and verify all stored generators by
// cross-multiplication, so no scalar division is needed.

struct GradedIso {
    int offset_shift;  // M offset n corresponds to N offset n + offset_shift
    std::map<int, std::pair<Scalar, Scalar>> scalings;  // M offset -> (num, den)
};

namespace detail {

// Scalar coefficient of the 1-dimensional action piece -> piece map; empty
// image means structural zero.
inline std::optional<Scalar> line_coeff(const GradedModule& m, int k, int offset) {
    const std::vector<int>& piece = m.piece(offset);
    if (piece.size() != 1) return std::nullopt;
    const std::optional<Vec>& img = m.action(k, piece[0]);
    if (!img) return std::nullopt;
    if (img->empty()) return Scalar(0);
    return img->begin()->second;
}

}  // namespace detail

inline std::optional<GradedIso> find_iso(const GradedModule& m, const GradedModule& n) {
    if (!m.weight_semisimple() || !n.weight_semisimple())
        throw error("find_iso requires weight-semisimple modules");
    for (int off = m.window_min(); off <= m.window_max(); ++off)
        if (m.piece_dim(off) > 1) throw error("find_iso requires 1-dimensional pieces");
    for (int off = n.window_min(); off <= n.window_max(); ++off)
        if (n.piece_dim(off) > 1) throw error("find_iso requires 1-dimensional pieces");

    Scalar diff = m.base() - n.base();
    if (!diff.is_constant()) return std::nullopt;
    QuadRat d = diff.constant_value();
    if (!d.is_rational() || !is_integer(d.a)) return std::nullopt;
    if (d.a > 1000000 || d.a < -1000000) return std::nullopt;
    const int shift = static_cast<int>(d.a);  // N offset = M offset + shift

    // Weight supports must agree wherever both sides are knowable.
    int lo = std::min(m.window_min(), n.window_min() - shift) - 1;
    int hi = std::max(m.window_max(), n.window_max() - shift) + 1;
    std::vector<int> common;  // offsets (in M terms) with 1-dimensional pieces on both sides
    for (int off = lo; off <= hi; ++off) {
        std::optional<int> dm = m.known_piece_dim(off);
        std::optional<int> dn = n.known_piece_dim(off + shift);
        if (dm && dn && *dm != *dn) return std::nullopt;
        if (dm && dn && *dm == 1) common.push_back(off);
    }
    if (common.empty()) return std::nullopt;

    // Propagate scalings from one extremal piece along a connecting generator.
    auto propagate = [&](int gen, bool from_top) -> std::optional<GradedIso> {
        GradedIso iso;
        iso.offset_shift = shift;
        std::vector<int> order = common;
        if (from_top) std::reverse(order.begin(), order.end());
        iso.scalings[order[0]] = {Scalar(1), Scalar(1)};
        for (size_t t = 0; t + 1 < order.size(); ++t) {
            int cur = order[t];
            int next = order[t + 1];
            if (next != cur + gen) return std::nullopt;  // gap: cannot propagate
            std::optional<Scalar> am = detail::line_coeff(m, gen, cur);
            std::optional<Scalar> an = detail::line_coeff(n, gen, cur + shift);
            if (!am || !an) return std::nullopt;
            if (am->is_zero() || an->is_zero()) return std::nullopt;
            const auto& [num, den] = iso.scalings[cur];
            Scalar nn = num * *an;
            Scalar nd = den * *am;
            Scalar g = poly_gcd(nn, nd);
            if (!g.is_zero() && g.degree() > 0) {
                nn = poly_divmod(nn, g).first;
                nd = poly_divmod(nd, g).first;
            }
            iso.scalings[next] = {nn, nd};
        }
        return iso;
    };

    std::optional<GradedIso> iso = propagate(-1, /*from_top=*/true);
    if (!iso) iso = propagate(1, /*from_top=*/false);
    if (!iso) return std::nullopt;

    // Verify the intertwining relation c_{n+k} a_M = c_n a_N for every stored
    // generator on every comparable piece, cross-multiplied.
    for (int k = -1; k <= std::min(m.gen_bound(), n.gen_bound()); ++k) {
        for (int off : common) {
            std::optional<Scalar> am = detail::line_coeff(m, k, off);
            std::optional<Scalar> an = detail::line_coeff(n, k, off + shift);
            if (!am || !an) continue;
            std::optional<int> tm = m.known_piece_dim(off + k);
            std::optional<int> tn = n.known_piece_dim(off + k + shift);
            if (tm && *tm == 0 && tn && *tn == 0) {
                // Both targets structurally vanish; coefficients are zero.
                continue;
            }
            auto it = iso->scalings.find(off + k);
            auto is = iso->scalings.find(off);
            if (it == iso->scalings.end() || is == iso->scalings.end()) {
                // Target piece not part of the matched support; demand both
                // coefficients vanish together.
                if (am->is_zero() != an->is_zero()) return std::nullopt;
                continue;
            }
            const auto& [num_t, den_t] = it->second;
            const auto& [num_s, den_s] = is->second;
            if (num_t * *am * den_s != num_s * *an * den_t) return std::nullopt;
        }
    }
    return iso;
}

// ---------------------------------------------------------------------------
// Submodule reach: closure of a seed vector under all stored generator
// actions.  A piece is interior when every generator image from it is
// representable; dimensions are reported only there.  Symbolic modules are
// handled generically (a polynomial coefficient that is not the zero
// polynomial counts as nonzero) and require 1-dimensional pieces.

struct ReachReport {
    std::map<int, int> interior_dims;  // offset -> spanned dimension
    bool fixed_point = true;
};

inline bool piece_is_interior(const GradedModule& m, int offset) {
    for (int idx : m.piece(offset))
        for (int k = -1; k <= m.gen_bound(); ++k)
            if (!m.action_defined(k, idx)) return false;
    return true;
}

inline ReachReport reach(const GradedModule& m, const Vec& seed, int budget) {
    bool symbolic = false;
    for (int idx = 0; idx < m.dim(); ++idx)
        for (int k = -1; k <= m.gen_bound(); ++k)
            if (m.action(k, idx))
                for (const auto& [t, c] : *m.action(k, idx))
                    if (!c.is_constant()) symbolic = true;

    ReachReport report;
    std::map<int, int> spanned;  // offset -> dimension of closure in that piece

    if (symbolic) {
        for (int off = m.window_min(); off <= m.window_max(); ++off)
            if (m.piece_dim(off) > 1)
                throw error("symbolic reach requires 1-dimensional pieces");
        std::set<int> reached;
        for (const auto& [idx, c] : seed)
            if (!c.is_zero()) reached.insert(m.offset_of(idx));
        for (int round = 0; round < budget; ++round) {
            std::set<int> next = reached;
            for (int off : reached) {
                int idx = m.piece(off).empty() ? -1 : m.piece(off)[0];
                if (idx < 0) continue;
                for (int k = -1; k <= m.gen_bound(); ++k) {
                    const std::optional<Vec>& img = m.action(k, idx);
                    if (img && !img->empty()) next.insert(off + k);
                }
            }
            if (next == reached) break;
            reached = std::move(next);
            if (round == budget - 1) report.fixed_point = false;
        }
        for (int off : reached) spanned[off] = 1;
    } else {
        // Exact span over the constant field.  The seed is split into
        // homogeneous components (legitimate for weight-semisimple modules,
        // required otherwise), so every generated vector stays homogeneous.
        std::map<int, Vec> components;
        for (const auto& [idx, c] : seed) components[m.offset_of(idx)][idx] = c;
        if (components.size() > 1 && !m.weight_semisimple())
            throw error("reach seed must be homogeneous for non-weight modules");

        SparseEliminator<QuadRat> span(m.dim());
        std::vector<Vec> frontier;
        auto to_sparse = [](const Vec& v) {
            SparseVec<QuadRat> s;
            for (const auto& [idx, c] : v) s[idx] = c.constant_value();
            return s;
        };
        for (auto& [off, v] : components)
            if (span.add_row(to_sparse(v))) frontier.push_back(v);
        for (int round = 0; round < budget && !frontier.empty(); ++round) {
            std::vector<Vec> next;
            for (const Vec& v : frontier) {
                for (int k = -1; k <= m.gen_bound(); ++k) {
                    std::optional<Vec> img = m.act(k, v);
                    if (!img || img->empty()) continue;
                    if (span.add_row(to_sparse(*img))) next.push_back(std::move(*img));
                }
            }
            frontier = std::move(next);
            if (round == budget - 1 && !frontier.empty()) report.fixed_point = false;
        }
        // Spanning vectors are homogeneous and pieces have disjoint index
        // sets, so pivot rows stay homogeneous: per-piece dimension is the
        // pivot count inside that piece.
        for (int off = m.window_min(); off <= m.window_max(); ++off) spanned[off] = 0;
        for (int col : span.pivot_columns()) ++spanned[m.offset_of(col)];
    }

    for (int off = m.window_min(); off <= m.window_max(); ++off) {
        if (!piece_is_interior(m, off)) continue;
        auto it = spanned.find(off);
        report.interior_dims[off] = (it == spanned.end()) ? 0 : it->second;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Degree-zero homomorphism data and intertwiner verification.

using HomData = std::vector<Vec>;  // image of each source basis vector

inline std::optional<Vec> hom_apply(const HomData& h, const Vec& v) {
    Vec out;
    for (const auto& [idx, c] : v) {
        if (idx < 0 || idx >= static_cast<int>(h.size())) return std::nullopt;
        vec_add_scaled(out, h[static_cast<size_t>(idx)], c);
    }
    return out;
}

// Checks h(d_k v) = d_k h(v) on every representable pair; violations are data.
inline ResidualReport check_intertwiner(const GradedModule& from, const GradedModule& to,
                                        const HomData& h) {
    if (static_cast<int>(h.size()) != from.dim())
        throw error("hom data size does not match source module");
    ResidualReport report;
    for (int idx = 0; idx < from.dim(); ++idx) {
        for (int k = -1; k <= std::min(from.gen_bound(), to.gen_bound()); ++k) {
            const std::optional<Vec>& dkv = from.action(k, idx);
            if (!dkv) continue;
            std::optional<Vec> lhs = hom_apply(h, *dkv);
            std::optional<Vec> rhs = to.act(k, h[static_cast<size_t>(idx)]);
            if (!lhs || !rhs) continue;
            Vec residual = *lhs;
            vec_add_scaled(residual, *rhs, Scalar(-1));
            if (!residual.empty())
                report.violations.push_back({k, k, idx, from.basis_id(idx), std::move(residual)});
        }
    }
    return report;
}

// Direct sum with N's offsets re-expressed against M's base; basis ids are
// suffixed to stay unique.
inline GradedModule direct_sum(const GradedModule& m, const GradedModule& n,
                               const std::string& name) {
    Scalar diff = n.base() - m.base();
    if (!diff.is_constant()) throw error("direct_sum: bases differ symbolically");
    QuadRat d = diff.constant_value();
    if (!d.is_rational() || !is_integer(d.a)) throw error("direct_sum: bases not on one lattice");
    int shift = static_cast<int>(d.a);

    int n_min = std::min(m.window_min(), n.window_min() + shift);
    int n_max = std::max(m.window_max(), n.window_max() + shift);
    int g = std::min(m.gen_bound(), n.gen_bound());
    GradedModuleBuilder b(name, m.base(), n_min, n_max, g);
    std::optional<int> smin;
    std::optional<int> smax;
    if (m.support_min() && n.support_min())
        smin = std::min(*m.support_min(), *n.support_min() + shift);
    if (m.support_max() && n.support_max())
        smax = std::max(*m.support_max(), *n.support_max() + shift);
    b.support(smin, smax);

    std::vector<int> m_map(static_cast<size_t>(m.dim()));
    std::vector<int> n_map(static_cast<size_t>(n.dim()));
    for (int i = 0; i < m.dim(); ++i) m_map[static_cast<size_t>(i)] = b.add_basis(m.basis_id(i) + "@1", m.offset_of(i));
    for (int i = 0; i < n.dim(); ++i) n_map[static_cast<size_t>(i)] = b.add_basis(n.basis_id(i) + "@2", n.offset_of(i) + shift);
    auto copy_actions = [&](const GradedModule& src, const std::vector<int>& map) {
        for (int k = -1; k <= g; ++k)
            for (int i = 0; i < src.dim(); ++i) {
                const std::optional<Vec>& img = src.action(k, i);
                if (!img) continue;
                Vec out;
                for (const auto& [t, c] : *img) out[map[static_cast<size_t>(t)]] = c;
                b.set_action(k, map[static_cast<size_t>(i)], std::move(out));
            }
    };
    copy_actions(m, m_map);
    copy_actions(n, n_map);
    return b.finalize();
}

}  // namespace witt
