#pragma once

#include "witt/ext.hpp"
#include "witt/linalg.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace witt {

// ---------------------------------------------------------------------------
// Weighted directed multigraph on a weight lattice: vertex labels are
// base + offset, arrow multiplicities are Ext^1 dimensions.

struct QuiverGraph {
    Scalar base;
    std::vector<int> offsets;                       // ascending, distinct
    std::map<std::pair<int, int>, int> arrows;      // (src, dst) offsets -> multiplicity

    bool has_vertex(int off) const {
        return std::binary_search(offsets.begin(), offsets.end(), off);
    }
    int arrow_multiplicity(int src, int dst) const {
        auto it = arrows.find({src, dst});
        return it == arrows.end() ? 0 : it->second;
    }
    Scalar label(int off) const { return base + Scalar(off); }
};

enum class QuiverMode { closed, solver };

// Vertices base + n for |n| <= half_width; one arrow mu -> lambda per
// dimension of Ext^1(L(mu), L(lambda)), from the closed table or from the
// cocycle solver on the corresponding simple modules.
inline QuiverGraph build_block_quiver(const Scalar& base, int half_width, QuiverMode mode,
                                      int window = 12, int gen_bound = 8) {
    if (half_width < 0) throw error("half_width must be nonnegative");
    if (mode == QuiverMode::solver && !base.is_constant())
        throw error("solver mode requires a numeric block base");
    QuiverGraph q;
    q.base = base;
    for (int n = -half_width; n <= half_width; ++n) q.offsets.push_back(n);
    for (int a = -half_width; a <= half_width; ++a) {
        for (int b = -half_width; b <= half_width; ++b) {
            Scalar mu = base + Scalar(a);
            Scalar lambda = base + Scalar(b);
            int dim = 0;
            if (mode == QuiverMode::closed) {
                dim = ext_simple_closed(mu, lambda);
            } else {
                ExtProblem p;
                p.top = ModuleSpec{ModuleSpec::Kind::simple, mu, {}, nullptr};
                p.sub = ModuleSpec{ModuleSpec::Kind::simple, lambda, {}, nullptr};
                p.weight_only = true;
                p.window = window;
                p.gen_bound = gen_bound;
                dim = ext_dim(p).ext_dim;
            }
            if (dim > 0) q.arrows[{a, b}] = dim;
        }
    }
    return q;
}

// Connected components of the underlying undirected graph.
inline std::vector<std::vector<int>> components(const QuiverGraph& q) {
    std::map<int, int> comp;
    int next = 0;
    for (int v : q.offsets) comp[v] = -1;
    std::vector<std::vector<int>> out;
    for (int v : q.offsets) {
        if (comp[v] >= 0) continue;
        std::vector<int> stack{v};
        comp[v] = next;
        std::vector<int> members;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            members.push_back(u);
            for (const auto& [edge, mult] : q.arrows) {
                int other = -1;
                if (edge.first == u) other = edge.second;
                else if (edge.second == u) other = edge.first;
                else continue;
                if (comp[other] < 0) {
                    comp[other] = next;
                    stack.push_back(other);
                }
            }
        }
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
        ++next;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Undirected multigraphs for catalog matching.

struct SmallGraph {
    int n = 0;
    std::map<std::pair<int, int>, int> edges;  // i < j -> multiplicity
    std::string name;

    void add_edge(int a, int b, int mult = 1) {
        if (a == b) throw error("loops are not supported in diagram graphs");
        if (a > b) std::swap(a, b);
        edges[{a, b}] += mult;
    }
    int multiplicity(int a, int b) const {
        if (a > b) std::swap(a, b);
        auto it = edges.find({a, b});
        return it == edges.end() ? 0 : it->second;
    }
    std::vector<int> degrees() const {
        std::vector<int> deg(static_cast<size_t>(n), 0);
        for (const auto& [e, m] : edges) {
            deg[static_cast<size_t>(e.first)] += m;
            deg[static_cast<size_t>(e.second)] += m;
        }
        return deg;
    }
};

inline SmallGraph underlying_graph(const QuiverGraph& q) {
    SmallGraph g;
    g.n = static_cast<int>(q.offsets.size());
    std::map<int, int> index;
    for (size_t i = 0; i < q.offsets.size(); ++i) index[q.offsets[i]] = static_cast<int>(i);
    for (const auto& [edge, mult] : q.arrows)
        g.add_edge(index.at(edge.first), index.at(edge.second), mult);
    return g;
}

// Exact isomorphism by degree-pruned backtracking; diagram-sized inputs only.
inline bool graphs_isomorphic(const SmallGraph& a, const SmallGraph& b) {
    if (a.n != b.n) return false;
    std::vector<int> da = a.degrees();
    std::vector<int> db = b.degrees();
    {
        std::vector<int> sa = da;
        std::vector<int> sb = db;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) return false;
    }
    std::vector<int> map(static_cast<size_t>(a.n), -1);
    std::vector<bool> used(static_cast<size_t>(b.n), false);
    auto backtrack = [&](auto&& self, int v) -> bool {
        if (v == a.n) return true;
        for (int w = 0; w < b.n; ++w) {
            if (used[static_cast<size_t>(w)]) continue;
            if (da[static_cast<size_t>(v)] != db[static_cast<size_t>(w)]) continue;
            bool ok = true;
            for (int u = 0; u < v && ok; ++u)
                if (a.multiplicity(u, v) != b.multiplicity(map[static_cast<size_t>(u)], w)) ok = false;
            if (!ok) continue;
            map[static_cast<size_t>(v)] = w;
            used[static_cast<size_t>(w)] = true;
            if (self(self, v + 1)) return true;
            used[static_cast<size_t>(w)] = false;
            map[static_cast<size_t>(v)] = -1;
        }
        return false;
    };
    return backtrack(backtrack, 0);
}

namespace detail {

inline SmallGraph path_graph(int n, const std::string& name) {
    SmallGraph g;
    g.n = n;
    g.name = name;
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

inline SmallGraph cycle_graph(int n, const std::string& name) {
    SmallGraph g = path_graph(n, name);
    if (n == 2) g.add_edge(0, 1);  // double edge
    else g.add_edge(n - 1, 0);
    return g;
}

inline SmallGraph star_legs(const std::vector<int>& legs, const std::string& name) {
    SmallGraph g;
    g.name = name;
    g.n = 1;
    for (int len : legs) g.n += len;
    int next = 1;
    for (int len : legs) {
        int prev = 0;
        for (int t = 0; t < len; ++t) {
            g.add_edge(prev, next);
            prev = next;
            ++next;
        }
    }
    return g;
}

// D~_n has n+1 vertices: a spine with two pendant forks at each end.
inline SmallGraph affine_d(int n) {
    SmallGraph g;
    g.name = "~D" + std::to_string(n);
    g.n = n + 1;
    int spine = n - 3;  // >= 1 for n >= 4
    // spine vertices 0..spine-1
    for (int i = 0; i + 1 < spine; ++i) g.add_edge(i, i + 1);
    g.add_edge(spine, 0);
    g.add_edge(spine + 1, 0);
    g.add_edge(spine + 2, spine - 1);
    g.add_edge(spine + 3, spine - 1);
    return g;
}

}  // namespace detail

// Simply-laced Dynkin and affine diagrams with at most max_vertices vertices.
inline std::vector<SmallGraph> dynkin_affine_catalog(int max_vertices = 10) {
    std::vector<SmallGraph> catalog;
    for (int n = 1; n <= max_vertices; ++n)
        catalog.push_back(detail::path_graph(n, "A" + std::to_string(n)));
    for (int n = 4; n <= max_vertices; ++n)
        catalog.push_back(detail::star_legs({1, 1, n - 3}, "D" + std::to_string(n)));
    if (max_vertices >= 6) catalog.push_back(detail::star_legs({1, 2, 2}, "E6"));
    if (max_vertices >= 7) catalog.push_back(detail::star_legs({1, 2, 3}, "E7"));
    if (max_vertices >= 8) catalog.push_back(detail::star_legs({1, 2, 4}, "E8"));
    for (int n = 1; n + 1 <= max_vertices; ++n)
        catalog.push_back(detail::cycle_graph(n + 1, "~A" + std::to_string(n)));
    for (int n = 4; n + 1 <= max_vertices; ++n) catalog.push_back(detail::affine_d(n));
    if (max_vertices >= 7) catalog.push_back(detail::star_legs({2, 2, 2}, "~E6"));
    if (max_vertices >= 8) catalog.push_back(detail::star_legs({1, 3, 3}, "~E7"));
    if (max_vertices >= 9) catalog.push_back(detail::star_legs({1, 2, 5}, "~E8"));
    return catalog;
}

// ---------------------------------------------------------------------------
// Exact classification of a connected underlying graph by the definiteness of
// its Tits matrix 2I - A: positive definite = Dynkin, positive semidefinite =
// affine, indefinite = wild.  Naming is a best-effort catalog match and never
// feeds back into the classification.

enum class GraphClassTag { finite, affine, wild };

struct GraphClass {
    GraphClassTag tag;
    std::string name;  // empty when no catalog match applies
    int corank = 0;
};

inline GraphClass classify_small_graph(const SmallGraph& g) {
    Matrix<Rat> tits(g.n, g.n);
    for (int i = 0; i < g.n; ++i) tits.at(i, i) = Rat(2);
    for (const auto& [e, m] : g.edges) {
        tits.at(e.first, e.second) -= Rat(m);
        tits.at(e.second, e.first) -= Rat(m);
    }
    DefinitenessResult d = definiteness(tits);
    GraphClass out{GraphClassTag::wild, "", 0};
    if (d.kind == DefinitenessKind::positive_definite) out.tag = GraphClassTag::finite;
    else if (d.kind == DefinitenessKind::positive_semidefinite) out.tag = GraphClassTag::affine;
    out.corank = d.corank;
    if (out.tag != GraphClassTag::wild && g.n <= 10) {
        for (const SmallGraph& candidate : dynkin_affine_catalog(10)) {
            bool affine_name = candidate.name[0] == '~';
            if (affine_name != (out.tag == GraphClassTag::affine)) continue;
            if (graphs_isomorphic(g, candidate)) {
                out.name = candidate.name;
                break;
            }
        }
    }
    return out;
}

inline GraphClass classify_underlying_graph(const QuiverGraph& q) {
    if (components(q).size() != 1)
        throw error("classify_underlying_graph requires a connected graph");
    return classify_small_graph(underlying_graph(q));
}

// ---------------------------------------------------------------------------
// Wild-witness search.  A witness is a subquiver (vertex subset plus arrow
// subset) in which no two arrows can be concatenated and whose underlying
// graph is wild.  The preferred shape is the five-vertex pattern
//   {m, m-1, m-2, m-3, m-4} with arrows m-3 -> m, m-3 -> m-1, m-4 -> m,
//   m-4 -> m-1, m-4 -> m-2
// (a 4-cycle with a pendant edge); anchors are scanned downward starting two
// steps below the window top, so the anchor's shortest outgoing arrow target
// is still representable in the ambient quiver.

struct WildWitness {
    std::vector<int> vertex_offsets;
    std::map<std::pair<int, int>, int> arrows;
};

inline bool no_concatenation(const std::map<std::pair<int, int>, int>& arrows) {
    for (const auto& [e1, m1] : arrows)
        for (const auto& [e2, m2] : arrows)
            if (e1.second == e2.first) return false;
    return true;
}

inline QuiverGraph witness_subquiver(const QuiverGraph& q, const WildWitness& w) {
    QuiverGraph sub;
    sub.base = q.base;
    sub.offsets = w.vertex_offsets;
    sub.arrows = w.arrows;
    return sub;
}

inline bool witness_is_valid(const QuiverGraph& q, const WildWitness& w) {
    for (const auto& [e, m] : w.arrows)
        if (q.arrow_multiplicity(e.first, e.second) < m) return false;
    if (!no_concatenation(w.arrows)) return false;
    QuiverGraph sub = witness_subquiver(q, w);
    if (components(sub).size() != 1) return false;
    return classify_underlying_graph(sub).tag == GraphClassTag::wild;
}

inline std::optional<WildWitness> wild_witness(const QuiverGraph& q) {
    if (q.offsets.empty()) return std::nullopt;
    const int top = q.offsets.back();
    const int bottom = q.offsets.front();

    // Preferred anchors: top-2 downward, then the two skipped top anchors.
    std::vector<int> anchors;
    for (int a = top - 2; a >= bottom + 4; --a) anchors.push_back(a);
    if (top - 1 >= bottom + 4) anchors.push_back(top - 1);
    if (top >= bottom + 4) anchors.push_back(top);
    for (int a : anchors) {
        bool vertices_present = true;
        for (int d = 0; d <= 4; ++d)
            if (!q.has_vertex(a - d)) vertices_present = false;
        if (!vertices_present) continue;
        const std::vector<std::pair<int, int>> pattern = {
            {a - 3, a}, {a - 3, a - 1}, {a - 4, a}, {a - 4, a - 1}, {a - 4, a - 2}};
        bool arrows_present = true;
        for (const auto& e : pattern)
            if (q.arrow_multiplicity(e.first, e.second) < 1) arrows_present = false;
        if (!arrows_present) continue;
        WildWitness w;
        for (int d = 4; d >= 0; --d) w.vertex_offsets.push_back(a - d);
        for (const auto& e : pattern) w.arrows[e] = 1;
        if (witness_is_valid(q, w)) return w;
    }

    // General search: vertex subsets of size <= 8 in ascending lexicographic
    // order, then arrow subsets of the induced arrows in ascending bitmask
    // order.
    const int nv = static_cast<int>(q.offsets.size());
    std::vector<int> subset;
    std::optional<WildWitness> found;
    auto try_subset = [&](const std::vector<int>& verts) -> std::optional<WildWitness> {
        std::vector<std::pair<int, int>> induced;  // one entry per arrow copy
        for (const auto& [e, m] : q.arrows) {
            bool src_in = std::binary_search(verts.begin(), verts.end(), e.first);
            bool dst_in = std::binary_search(verts.begin(), verts.end(), e.second);
            if (src_in && dst_in)
                for (int copy = 0; copy < m; ++copy) induced.push_back(e);
        }
        if (induced.size() + 1 < verts.size() || induced.size() > 18) return std::nullopt;
        const size_t total = size_t{1} << induced.size();
        for (size_t mask = 1; mask < total; ++mask) {
            WildWitness w;
            w.vertex_offsets = verts;
            for (size_t bit = 0; bit < induced.size(); ++bit)
                if (mask & (size_t{1} << bit)) ++w.arrows[induced[bit]];
            if (!no_concatenation(w.arrows)) continue;
            QuiverGraph sub = witness_subquiver(q, w);
            if (components(sub).size() != 1) continue;
            if (classify_underlying_graph(sub).tag == GraphClassTag::wild) return w;
        }
        return std::nullopt;
    };
    auto enumerate = [&](auto&& self, int start) -> void {
        if (found) return;
        if (subset.size() >= 5 && subset.size() <= 8) {
            std::optional<WildWitness> w = try_subset(subset);
            if (w) { found = w; return; }
        }
        if (subset.size() == 8) return;
        for (int i = start; i < nv; ++i) {
            subset.push_back(q.offsets[static_cast<size_t>(i)]);
            self(self, i + 1);
            subset.pop_back();
            if (found) return;
        }
    };
    enumerate(enumerate, 0);
    return found;
}

// ---------------------------------------------------------------------------
// Deterministic DOT emission: vertices as canonical scalar literals in offset
// order, arrow multiplicities as edge labels.

inline std::string emit_dot(const QuiverGraph& q) {
    std::string out = "digraph block {\n";
    out += "  node [shape=ellipse];\n";
    for (int off : q.offsets) out += "  \"" + q.label(off).to_string() + "\";\n";
    for (const auto& [e, m] : q.arrows)
        out += "  \"" + q.label(e.first).to_string() + "\" -> \"" + q.label(e.second).to_string() +
               "\" [label=\"" + std::to_string(m) + "\"];\n";
    out += "}\n";
    return out;
}

// Tab-separated adjacency dump: one line per arrow.
inline std::string emit_tsv(const QuiverGraph& q) {
    std::string out = "mu\tlambda\tdim\n";
    for (const auto& [e, m] : q.arrows)
        out += q.label(e.first).to_string() + "\t" + q.label(e.second).to_string() + "\t" +
               std::to_string(m) + "\n";
    return out;
}

}  // namespace witt
