#pragma once

#include "witt/gmod.hpp"
#include "witt/standard.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace witt {

// ---------------------------------------------------------------------------
// Ext^1 between truncated graded modules by exact cocycle linear algebra.
//
// For an extension 0 -> sub -> K -> top -> 0 the unknowns are the entries of
// c(d_k)(b) in the sub piece at weight(b) + k, -1 <= k <= G, subject to
//   (j-i) c(d_{i+j})(b) = d_i c(d_j)(b) + c(d_i)(d_j b)
//                       - d_j c(d_i)(b) - c(d_j)(d_i b)
// for every in-window triple; coboundaries are c_psi(d_k) = d_k psi - psi d_k
// over weight-preserving psi.  Constraints touching out-of-window terms are
// dropped, so a single window gives an upper bound; the stabilization flag
// (equal dimension at window + 2) is the contract.

struct ExtOptions {
    bool weight_only = false;  // additionally impose c(d_0) = 0
};

struct CocycleRep {
    // (k, top basis index) -> image vector in sub coordinates.  An entry is
    // present for every representable coordinate; absent entries are outside
    // the window.
    std::map<std::pair<int, int>, Vec> maps;
};

struct ExtSolveResult {
    int cocycle_dim = 0;
    int coboundary_rank = 0;
    int ext_dim = 0;
    std::vector<CocycleRep> representatives;  // completes the coboundary span
    std::vector<SparseVec<QuadRat>> cocycle_basis;
    std::vector<SparseVec<QuadRat>> coboundary_vectors;
    std::map<std::pair<int, int>, std::vector<int>> unknown_ids;  // (k, t) -> per-sub-basis id
    std::vector<int> unknown_sub_index;                           // unknown id -> sub basis idx
};

namespace detail {

enum class TargetState { in_window, structural_zero, undefined };

inline TargetState target_state(const GradedModule& m, int offset) {
    if (offset >= m.window_min() && offset <= m.window_max()) return TargetState::in_window;
    if (m.support_min() && offset < *m.support_min()) return TargetState::structural_zero;
    if (m.support_max() && offset > *m.support_max()) return TargetState::structural_zero;
    return TargetState::undefined;
}

inline QuadRat scalar_const(const Scalar& s) {
    if (!s.is_constant())
        throw error("ext solver requires numeric weights; pick a numeric lambda");
    return s.constant_value();
}

}  // namespace detail

inline ExtSolveResult ext_solve(const GradedModule& top, const GradedModule& sub,
                                const ExtOptions& opts = {}) {
    Scalar shift_scalar = top.base() - sub.base();
    QuadRat shift_q = detail::scalar_const(shift_scalar);
    const bool aligned = shift_q.is_rational() && is_integer(shift_q.a) &&
                         shift_q.a >= -1000000 && shift_q.a <= 1000000;
    const int shift = aligned ? static_cast<int>(shift_q.a) : 0;
    const int g = std::min(top.gen_bound(), sub.gen_bound());

    ExtSolveResult result;
    if (aligned) {
        for (int k = -1; k <= g; ++k) {
            for (int t = 0; t < top.dim(); ++t) {
                int m = top.offset_of(t) + k + shift;
                if (detail::target_state(sub, m) != detail::TargetState::in_window) continue;
                std::vector<int>& ids = result.unknown_ids[{k, t}];
                for (int s : sub.piece(m)) {
                    ids.push_back(static_cast<int>(result.unknown_sub_index.size()));
                    result.unknown_sub_index.push_back(s);
                }
            }
        }
    }
    const int n_unknowns = static_cast<int>(result.unknown_sub_index.size());

    // c(d_k)(t) as a list of (unknown id, sub basis index); nullopt when the
    // target is out of the window.
    auto cvalue = [&](int k, int t) -> std::optional<std::vector<std::pair<int, int>>> {
        int m = top.offset_of(t) + k + shift;
        detail::TargetState st = detail::target_state(sub, m);
        if (st == detail::TargetState::undefined) return std::nullopt;
        std::vector<std::pair<int, int>> out;
        if (st == detail::TargetState::in_window) {
            auto it = result.unknown_ids.find({k, t});
            if (it != result.unknown_ids.end()) {
                const std::vector<int>& piece = sub.piece(m);
                for (size_t p = 0; p < piece.size(); ++p)
                    out.emplace_back(it->second[p], piece[p]);
            }
        }
        return out;
    };

    SparseEliminator<QuadRat> cocycles(n_unknowns);

    auto add_constraint_rows = [&](const std::map<int, SparseVec<QuadRat>>& rows) {
        for (const auto& [s, row] : rows)
            if (!row.empty()) cocycles.add_row(row);
    };

    for (int t = 0; t < top.dim() && aligned; ++t) {
        for (int i = -1; i <= g; ++i) {
            for (int j = i + 1; j <= g; ++j) {
                if (i + j > g) continue;
                std::map<int, SparseVec<QuadRat>> rows;  // sub basis idx -> linear form
                bool ok = true;
                auto add_unknown = [&](int sub_idx, int unknown, const QuadRat& c) {
                    SparseVec<QuadRat>& row = rows[sub_idx];
                    auto [it, inserted] = row.emplace(unknown, QuadRat(0));
                    it->second += c;
                    if (it->second.is_zero()) row.erase(it);
                };

                // (j - i) c(d_{i+j})(t)
                auto lhs = cvalue(i + j, t);
                if (!lhs) continue;
                for (const auto& [u, s] : *lhs) add_unknown(s, u, QuadRat(j - i));

                // - d_i c(d_j)(t) and + d_j c(d_i)(t)
                auto module_term = [&](int outer, int inner, int sgn) {
                    auto cv = cvalue(inner, t);
                    if (!cv) { ok = false; return; }
                    for (const auto& [u, s] : *cv) {
                        const std::optional<Vec>& img = sub.action(outer, s);
                        if (!img) { ok = false; return; }
                        for (const auto& [s2, c] : *img)
                            add_unknown(s2, u, QuadRat(sgn) * (-detail::scalar_const(c)));
                    }
                };
                // - c(d_i)(d_j t) and + c(d_j)(d_i t)
                auto cochain_term = [&](int outer, int inner, int sgn) {
                    const std::optional<Vec>& img = top.action(outer, t);
                    if (!img) { ok = false; return; }
                    for (const auto& [t2, a] : *img) {
                        auto cv = cvalue(inner, t2);
                        if (!cv) { ok = false; return; }
                        QuadRat av = detail::scalar_const(a);
                        for (const auto& [u, s] : *cv)
                            add_unknown(s, u, QuadRat(sgn) * (-av));
                    }
                };
                module_term(i, j, +1);
                if (ok) cochain_term(j, i, +1);
                if (ok) module_term(j, i, -1);
                if (ok) cochain_term(i, j, -1);
                if (!ok) continue;
                add_constraint_rows(rows);
            }
        }
    }

    if (opts.weight_only) {
        for (const auto& [key, ids] : result.unknown_ids) {
            if (key.first != 0) continue;
            for (int u : ids) cocycles.add_row({{u, QuadRat(1)}});
        }
    }

    result.cocycle_dim = n_unknowns - cocycles.rank();
    result.cocycle_basis = cocycles.nullspace_basis();

    // Coboundaries over weight-preserving psi: one generator per aligned
    // (top basis, sub basis) pair.  A psi touching an unrepresentable term is
    // dropped; the stabilization flag guards the undercount.
    SparseEliminator<QuadRat> cob(n_unknowns);
    for (int t = 0; t < top.dim() && aligned; ++t) {
        int m = top.offset_of(t) + shift;
        if (detail::target_state(sub, m) != detail::TargetState::in_window) continue;
        for (int s : sub.piece(m)) {
            SparseVec<QuadRat> vec;
            bool valid = true;
            // d_k psi(t) contributions at coordinates (k, t, *).
            for (int k = -1; k <= g && valid; ++k) {
                auto it = result.unknown_ids.find({k, t});
                bool have_coords = it != result.unknown_ids.end() && !it->second.empty();
                const std::optional<Vec>& img = sub.action(k, s);
                if (!img) {
                    if (have_coords) valid = false;
                    continue;
                }
                if (!have_coords) continue;
                int target_piece_offset = top.offset_of(t) + k + shift;
                const std::vector<int>& piece = sub.piece(target_piece_offset);
                for (const auto& [s2, c] : *img) {
                    for (size_t p = 0; p < piece.size(); ++p) {
                        if (piece[p] != s2) continue;
                        QuadRat cv = detail::scalar_const(c);
                        auto [vit, ins] = vec.emplace(it->second[p], QuadRat(0));
                        vit->second += cv;
                        if (vit->second.is_zero()) vec.erase(vit);
                    }
                }
            }
            // -psi(d_k t') contributions at coordinates (k, t', s) whenever
            // d_k t' has a component on t.
            for (int k = -1; k <= g && valid; ++k) {
                for (int t2 = 0; t2 < top.dim() && valid; ++t2) {
                    auto it = result.unknown_ids.find({k, t2});
                    if (it == result.unknown_ids.end() || it->second.empty()) continue;
                    const std::optional<Vec>& img = top.action(k, t2);
                    if (!img) { valid = false; break; }
                    auto at = img->find(t);
                    if (at == img->end()) continue;
                    QuadRat a = detail::scalar_const(at->second);
                    int target_piece_offset = top.offset_of(t2) + k + shift;
                    const std::vector<int>& piece = sub.piece(target_piece_offset);
                    for (size_t p = 0; p < piece.size(); ++p) {
                        if (piece[p] != s) continue;
                        auto [vit, ins] = vec.emplace(it->second[p], QuadRat(0));
                        vit->second -= a;
                        if (vit->second.is_zero()) vec.erase(vit);
                    }
                }
            }
            if (valid && !vec.empty()) {
                result.coboundary_vectors.push_back(vec);
                cob.add_row(vec);
            }
        }
    }
    result.coboundary_rank = cob.rank();
    result.ext_dim = result.cocycle_dim - result.coboundary_rank;

    // Representatives: cocycle basis vectors that extend the coboundary span.
    auto to_rep = [&](const SparseVec<QuadRat>& v) {
        CocycleRep rep;
        for (const auto& [key, ids] : result.unknown_ids) {
            Vec& target = rep.maps[key];
            for (int u : ids) {
                auto it = v.find(u);
                if (it != v.end() && !it->second.is_zero())
                    target[result.unknown_sub_index[static_cast<size_t>(u)]] = Scalar(it->second);
            }
        }
        return rep;
    };
    {
        SparseEliminator<QuadRat> span(n_unknowns);
        for (const auto& v : result.coboundary_vectors) span.add_row(v);
        for (const auto& v : result.cocycle_basis)
            if (span.add_row(v)) result.representatives.push_back(to_rep(v));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Stabilized Ext computation on module specifications.

struct ExtProblem {
    ModuleSpec top;
    ModuleSpec sub;
    bool weight_only = false;
    int gen_bound = 8;
    int window = 12;
};

struct ExtResult {
    int cocycle_dim = 0;
    int coboundary_rank = 0;
    int ext_dim = 0;
    bool stabilized = false;
    std::vector<CocycleRep> representatives;
};

inline ExtResult ext_dim(const ExtProblem& p) {
    GradedModule top0 = materialize(p.top, p.window, p.gen_bound);
    GradedModule sub0 = materialize(p.sub, p.window, p.gen_bound);
    ExtSolveResult base = ext_solve(top0, sub0, {p.weight_only});
    GradedModule top1 = materialize(p.top, p.window + 2, p.gen_bound);
    GradedModule sub1 = materialize(p.sub, p.window + 2, p.gen_bound);
    ExtSolveResult wider = ext_solve(top1, sub1, {p.weight_only});
    ExtResult r;
    r.cocycle_dim = base.cocycle_dim;
    r.coboundary_rank = base.coboundary_rank;
    r.ext_dim = base.ext_dim;
    r.stabilized = (base.ext_dim == wider.ext_dim);
    r.representatives = std::move(base.representatives);
    return r;
}

// Materializes an extension module from a representative cocycle:
// K = sub (+) top with d_k(t) twisted by c(d_k)(t).
inline GradedModule materialize_extension(const GradedModule& top, const GradedModule& sub,
                                          const CocycleRep& rep, const std::string& name) {
    Scalar shift_scalar = top.base() - sub.base();
    QuadRat shift_q = detail::scalar_const(shift_scalar);
    if (!shift_q.is_rational() || !is_integer(shift_q.a))
        throw error("extension construction needs aligned weight lattices");
    int shift = static_cast<int>(shift_q.a);

    int n_min = std::min(sub.window_min(), top.window_min() + shift);
    int n_max = std::max(sub.window_max(), top.window_max() + shift);
    int g = std::min(top.gen_bound(), sub.gen_bound());
    GradedModuleBuilder b(name, sub.base(), n_min, n_max, g);
    std::vector<int> sub_map(static_cast<size_t>(sub.dim()));
    std::vector<int> top_map(static_cast<size_t>(top.dim()));
    for (int i = 0; i < sub.dim(); ++i)
        sub_map[static_cast<size_t>(i)] = b.add_basis(sub.basis_id(i) + "@s", sub.offset_of(i));
    for (int i = 0; i < top.dim(); ++i)
        top_map[static_cast<size_t>(i)] = b.add_basis(top.basis_id(i) + "@t", top.offset_of(i) + shift);

    for (int k = -1; k <= g; ++k) {
        for (int i = 0; i < sub.dim(); ++i) {
            const std::optional<Vec>& img = sub.action(k, i);
            if (!img) continue;
            Vec out;
            for (const auto& [t, c] : *img) out[sub_map[static_cast<size_t>(t)]] = c;
            b.set_action(k, sub_map[static_cast<size_t>(i)], std::move(out));
        }
        for (int i = 0; i < top.dim(); ++i) {
            const std::optional<Vec>& img = top.action(k, i);
            if (!img) continue;
            int m = top.offset_of(i) + k + shift;
            detail::TargetState st = detail::target_state(sub, m);
            Vec out;
            if (st == detail::TargetState::in_window) {
                auto it = rep.maps.find({k, i});
                if (it == rep.maps.end()) continue;  // unrepresentable coordinate
                for (const auto& [s, c] : it->second) out[sub_map[static_cast<size_t>(s)]] = c;
            } else if (st == detail::TargetState::undefined) {
                continue;
            }
            for (const auto& [t, c] : *img) out[top_map[static_cast<size_t>(t)]] = c;
            b.set_action(k, top_map[static_cast<size_t>(i)], std::move(out));
        }
    }
    return b.finalize();
}

// ---------------------------------------------------------------------------
// Closed-form transcriptions of the extension tables.

namespace detail {

inline bool qr_equal(const QuadRat& x, int a_num, int a_den, bool plus_root) {
    QuadRat target = QuadRat(make_rat(a_num, a_den)) +
                     (plus_root ? QuadRat::sqrt19() : -QuadRat::sqrt19()) * QuadRat(make_rat(1, 2));
    return x == target;
}

// (lambda, mu) = ((5 +- sqrt19)/2, (-7 +- sqrt19)/2) with matching signs.
inline bool is_root19_pair(const QuadRat& lambda, const QuadRat& mu) {
    return (qr_equal(lambda, 5, 2, true) && qr_equal(mu, -7, 2, true)) ||
           (qr_equal(lambda, 5, 2, false) && qr_equal(mu, -7, 2, false));
}

inline bool diff_in(const QuadRat& lambda, const QuadRat& mu, std::initializer_list<int> set) {
    QuadRat d = lambda - mu;
    if (!d.is_rational() || !is_integer(d.a)) return false;
    for (int v : set)
        if (d.a == v) return true;
    return false;
}

inline bool pair_is(const QuadRat& lambda, const QuadRat& mu, int l, int m) {
    return lambda == QuadRat(l) && mu == QuadRat(m);
}

}  // namespace detail

// dim Ext^1 between simple modules: top L(mu), sub L(lambda).
inline int ext_simple_closed(const Scalar& mu_s, const Scalar& lambda_s) {
    QuadRat mu = mu_s.constant_value();
    QuadRat lambda = lambda_s.constant_value();
    if (detail::diff_in(lambda, mu, {2, 3, 4}) && !(lambda * mu).is_zero()) return 1;
    if (detail::pair_is(lambda, mu, 0, -1) || detail::pair_is(lambda, mu, 0, -2) ||
        detail::pair_is(lambda, mu, -1, 0) || detail::pair_is(lambda, mu, 4, -1))
        return 1;
    if (detail::is_root19_pair(lambda, mu)) return 1;
    return 0;
}

// dim Ext^1 between Verma modules in the weight category: top Delta(mu),
// sub Delta(lambda).
inline int ext_verma_closed(const Scalar& mu_s, const Scalar& lambda_s) {
    QuadRat mu = mu_s.constant_value();
    QuadRat lambda = lambda_s.constant_value();
    if (detail::diff_in(lambda, mu, {2, 3, 4})) return 1;
    if (detail::pair_is(lambda, mu, 0, -1) || detail::pair_is(lambda, mu, 0, -5) ||
        detail::pair_is(lambda, mu, 4, -1))
        return 1;
    if (detail::is_root19_pair(lambda, mu)) return 1;
    return 0;
}

// dim Ext^1_{U(W)}(F_lambda, F_mu), including the 2-dimensional entry.
inline int ext_ff_closed(const Scalar& lambda_s, const Scalar& mu_s) {
    QuadRat lambda = lambda_s.constant_value();
    QuadRat mu = mu_s.constant_value();
    if (detail::pair_is(lambda, mu, 0, -1)) return 2;
    if (detail::diff_in(lambda, mu, {0, 2, 3, 4})) return 1;
    if (detail::pair_is(lambda, mu, 0, -5) || detail::pair_is(lambda, mu, 4, -1)) return 1;
    if (detail::is_root19_pair(lambda, mu)) return 1;
    return 0;
}

// ---------------------------------------------------------------------------
// Borel relative cohomology H^1(b, h; Hom(C_lambda, L(0))): unknowns
// omega(d_j) supported only where lambda + j = 0, omega(d_0) = 0, subject to
//   (j-k) omega(d_{k+j}) = [d_k, omega(d_j)] - [d_j, omega(d_k)]
// for 0 <= k < j <= bound; the coboundary space vanishes for weight reasons.

inline int borel_h1_dim(const Scalar& lambda_s, int bound) {
    if (bound < 1) throw error("borel_h1_dim needs a positive bound");
    QuadRat lambda = lambda_s.constant_value();
    // unknown x_j = omega(d_j), 1 <= j <= bound; id j-1
    SparseEliminator<QuadRat> system(bound);
    for (int j = 1; j <= bound; ++j) {
        QuadRat w = lambda + QuadRat(j);
        if (!w.is_zero()) system.add_row({{j - 1, QuadRat(1)}});
    }
    for (int k = 0; k < bound; ++k) {
        for (int j = k + 1; j <= bound; ++j) {
            SparseVec<QuadRat> row;
            auto add = [&row](int unknown, const QuadRat& c) {
                if (c.is_zero()) return;
                auto [it, ins] = row.emplace(unknown, QuadRat(0));
                it->second += c;
                if (it->second.is_zero()) row.erase(it);
            };
            if (k + j <= bound) add(k + j - 1, QuadRat(j - k));
            // [d_k, omega(d_j)] = -lambda omega(d_j) when k = 0, else 0.
            if (k == 0) add(j - 1, lambda);
            if (!row.empty()) system.add_row(row);
        }
    }
    return bound - system.rank();
}

}  // namespace witt
