#pragma once

#include "witt/gmod.hpp"
#include "witt/standard.hpp"
#include "witt/uea.hpp"

#include <set>
#include <string>
#include <vector>

namespace witt {

// ---------------------------------------------------------------------------
// The subalgebra H_1 = { u in U(b) : u (d_{-1} - 1) in (d_{-1} - 1) U(W) }.
// Membership reduces to v_1 * u (d_{-1} - 1) = 0 in Q'_1, which PBW freeness
// decides exactly at any degree.

inline UEAElement lowering_minus_one() {
    return UEAElement::generator(-1) - UEAElement::one();
}

inline bool h1_member(const UEAElement& u) {
    if (u.contains_lowering()) throw error("not an element of U(b)");
    return whittaker_reduce(u * lowering_minus_one()).is_zero();
}

// Exact basis of H_1 intersected with the span of U(b) monomials of PBW
// length <= deg_bound in d_0 ... d_{deg_bound+2}.  Membership is linear in
// the PBW coefficients, so the answer is a nullspace over that finite
// monomial basis.  The generator-index cap is a reviewed approximation: the
// reduction of u (d_{-1} - 1) cannot cancel monomials of higher index than
// those present in u.
inline std::vector<UEAElement> h1_basis(int deg_bound) {
    if (deg_bound < 0) throw error("h1_basis needs deg_bound >= 0");
    const int index_cap = deg_bound + 2;

    std::vector<PBWMonomial> monomials;
    std::vector<int> stack;
    auto enumerate = [&](auto&& self, int min_index, int remaining) -> void {
        monomials.push_back(PBWMonomial{stack});
        if (remaining == 0) return;
        for (int i = min_index; i <= index_cap; ++i) {
            stack.push_back(i);
            self(self, i, remaining - 1);
            stack.pop_back();
        }
    };
    enumerate(enumerate, 0, deg_bound);

    // Coordinates of the reduced images live in the Q'_1 monomial space.
    std::map<PBWMonomial, SparseVec<QuadRat>> equations;  // image monomial -> row
    const UEAElement ideal_gen = lowering_minus_one();
    for (size_t col = 0; col < monomials.size(); ++col) {
        UEAElement u = UEAElement::from_word({}, Scalar(1));
        {
            std::vector<Generator> word;
            for (int i : monomials[col].indices) word.emplace_back(i);
            u = pbw_normal_form(word, Scalar(1));
        }
        Q1Coords image = whittaker_reduce(u * ideal_gen);
        for (const auto& [mono, c] : image.terms)
            equations[mono][static_cast<int>(col)] = c.constant_value();
    }

    SparseEliminator<QuadRat> system(static_cast<int>(monomials.size()));
    for (const auto& [mono, row] : equations) system.add_row(row);

    std::vector<UEAElement> basis;
    for (const auto& v : system.nullspace_basis()) {
        UEAElement u;
        for (const auto& [col, c] : v)
            u.add_term(monomials[static_cast<size_t>(col)], Scalar(c));
        basis.push_back(std::move(u));
    }
    return basis;
}

// ---------------------------------------------------------------------------
// The functor Gamma(M) = M / (d_{-1} - 1) M on truncated modules.  The image
// span uses every basis vector whose d_{-1} image is representable, so the
// reported dimension is an upper bound at one window; the stabilization flag
// (equal dimension at window + 2) is the contract.

struct GammaQuotient {
    int dim = 0;
    std::vector<int> free_columns;            // coset representative basis vectors
    SparseEliminator<QuadRat> image;           // reduced span of (d_{-1} - 1) M

    explicit GammaQuotient(int cols) : image(cols) {}

    // Quotient coordinates of a vector, expressed over free_columns.
    SparseVec<QuadRat> project(const Vec& v) const {
        SparseVec<QuadRat> s;
        for (const auto& [idx, c] : v) s[idx] = c.constant_value();
        image.reduce(s);
        return s;
    }
};

inline GammaQuotient gamma_quotient(const GradedModule& m) {
    GammaQuotient q(m.dim());
    for (int idx = 0; idx < m.dim(); ++idx) {
        const std::optional<Vec>& img = m.action(-1, idx);
        if (!img) continue;
        Vec w = *img;
        vec_add_scaled(w, Vec{{idx, Scalar(1)}}, Scalar(-1));
        SparseVec<QuadRat> row;
        for (const auto& [i, c] : w) row[i] = c.constant_value();
        q.image.add_row(std::move(row));
    }
    std::set<int> pivots;
    for (int c : q.image.pivot_columns()) pivots.insert(c);
    for (int c = 0; c < m.dim(); ++c)
        if (!pivots.count(c)) q.free_columns.push_back(c);
    q.dim = static_cast<int>(q.free_columns.size());
    return q;
}

struct GammaSpace {
    int source_window = 0;
    int dim = 0;
    bool stabilized = false;
    std::vector<Vec> representatives;
};

inline GammaSpace gamma(const ModuleSpec& spec, int window, int gen_bound = 4) {
    GradedModule base = materialize(spec, window, gen_bound);
    GammaQuotient q0 = gamma_quotient(base);
    GammaQuotient q1 = gamma_quotient(materialize(spec, window + 2, gen_bound));
    GammaSpace g;
    g.source_window = window;
    g.dim = q0.dim;
    g.stabilized = (q0.dim == q1.dim);
    for (int c : q0.free_columns) g.representatives.push_back(Vec{{c, Scalar(1)}});
    return g;
}

inline GammaSpace gamma(const GradedModule& base, const GradedModule& wider) {
    GammaQuotient q0 = gamma_quotient(base);
    GammaQuotient q1 = gamma_quotient(wider);
    GammaSpace g;
    g.source_window = base.window_max() - base.window_min();
    g.dim = q0.dim;
    g.stabilized = (q0.dim == q1.dim);
    for (int c : q0.free_columns) g.representatives.push_back(Vec{{c, Scalar(1)}});
    return g;
}

// ---------------------------------------------------------------------------
// Exactness of Gamma on a short exact sequence 0 -> N -> M -> L -> 0.

struct GammaExactnessReport {
    int dim_sub = 0;
    int dim_mid = 0;
    int dim_quot = 0;
    bool alpha_injective = false;
    bool beta_surjective = false;
    bool middle_exact = false;

    bool exact() const { return alpha_injective && beta_surjective && middle_exact; }

    std::string to_string() const {
        std::string out = "Gamma dims: (" + std::to_string(dim_sub) + ", " +
                          std::to_string(dim_mid) + ", " + std::to_string(dim_quot) + ")\n";
        out += std::string("Gamma(alpha) injective: ") + (alpha_injective ? "yes" : "no") + "\n";
        out += std::string("Gamma(beta) surjective: ") + (beta_surjective ? "yes" : "no") + "\n";
        out += std::string("ker Gamma(beta) = im Gamma(alpha): ") +
               (middle_exact ? "yes" : "no") + "\n";
        return out;
    }
};

inline GammaExactnessReport gamma_exactness(const GradedModule& sub, const GradedModule& mid,
                                            const GradedModule& quot, const HomData& alpha,
                                            const HomData& beta) {
    if (!check_intertwiner(sub, mid, alpha).empty() ||
        !check_intertwiner(mid, quot, beta).empty())
        throw error("gamma_exactness: maps are not intertwiners");
    for (int idx = 0; idx < sub.dim(); ++idx) {
        std::optional<Vec> comp = hom_apply(beta, alpha[static_cast<size_t>(idx)]);
        if (!comp || !comp->empty()) throw error("gamma_exactness: beta o alpha != 0");
    }

    GammaQuotient qn = gamma_quotient(sub);
    GammaQuotient qm = gamma_quotient(mid);
    GammaQuotient ql = gamma_quotient(quot);

    GammaExactnessReport report;
    report.dim_sub = qn.dim;
    report.dim_mid = qm.dim;
    report.dim_quot = ql.dim;

    SparseEliminator<QuadRat> image_alpha(mid.dim());
    int rank_alpha = 0;
    for (int c : qn.free_columns) {
        std::optional<Vec> img = hom_apply(alpha, Vec{{c, Scalar(1)}});
        if (!img) continue;
        if (image_alpha.add_row(qm.project(*img))) ++rank_alpha;
    }
    report.alpha_injective = (rank_alpha == qn.dim);

    SparseEliminator<QuadRat> image_beta(quot.dim());
    int rank_beta = 0;
    bool composite_zero = true;
    for (int c : qm.free_columns) {
        std::optional<Vec> img = hom_apply(beta, Vec{{c, Scalar(1)}});
        if (!img) continue;
        if (image_beta.add_row(ql.project(*img))) ++rank_beta;
    }
    for (int c : qn.free_columns) {
        std::optional<Vec> img = hom_apply(alpha, Vec{{c, Scalar(1)}});
        if (!img) continue;
        std::optional<Vec> through = hom_apply(beta, *img);
        if (!through) continue;
        if (!ql.project(*through).empty()) composite_zero = false;
    }
    report.beta_surjective = (rank_beta == ql.dim);
    report.middle_exact = composite_zero && (rank_alpha + rank_beta == qm.dim);
    return report;
}

}  // namespace witt
