#pragma once

#include "witt/gmod.hpp"

#include <memory>
#include <string>
#include <vector>

namespace witt {

// ---------------------------------------------------------------------------
// Verma module Delta(lambda): basis e_{lambda-i}, 0 <= i <= depth, with
//   d_k e_{lambda-i} = ((k+1) lambda + k - i) e_{lambda-i+k},
// and e_{lambda-i+k} = 0 when k > i.  lambda may be symbolic.

inline GradedModule verma(const Scalar& lambda, int depth, int gen_bound = 8) {
    GradedModuleBuilder b("Delta(" + lambda.to_string() + ")", lambda, -depth, 0, gen_bound);
    b.support(std::nullopt, 0);
    for (int i = 0; i <= depth; ++i) b.add_basis("e" + std::to_string(-i), -i);
    for (int k = -1; k <= gen_bound; ++k) {
        for (int i = 0; i <= depth; ++i) {
            Scalar coeff = Scalar(k + 1) * lambda + Scalar(k - i);
            int target = -i + k;
            Vec img;
            if (target > 0 || coeff.is_zero()) {
                // above the highest weight: structurally zero
            } else if (target < -depth) {
                continue;  // leaves the window: leave undefined
            } else {
                img[i - k] = coeff;  // basis index of offset target is -target
            }
            b.set_action(k, i, std::move(img));
        }
    }
    return b.finalize();
}

// Feigin-Fuchs module F_lambda: basis f_j, j >= 0, weight of f_j is
// j - lambda, with d_i f_j = (j - (i+1) lambda) f_{i+j}.
inline GradedModule feigin_fuchs(const Scalar& lambda, int depth, int gen_bound = 8) {
    GradedModuleBuilder b("F(" + lambda.to_string() + ")", -lambda, 0, depth, gen_bound);
    b.support(0, std::nullopt);
    for (int j = 0; j <= depth; ++j) b.add_basis("f" + std::to_string(j), j);
    for (int k = -1; k <= gen_bound; ++k) {
        for (int j = 0; j <= depth; ++j) {
            Scalar coeff = Scalar(j) - Scalar(k + 1) * lambda;
            int target = j + k;
            Vec img;
            if (target < 0 || coeff.is_zero()) {
                // f_m = 0 for m < 0
            } else if (target > depth) {
                continue;
            } else {
                img[target] = coeff;
            }
            b.set_action(k, j, std::move(img));
        }
    }
    return b.finalize();
}

// One-dimensional trivial module L(0).
inline GradedModule trivial_module(int gen_bound = 8) {
    GradedModuleBuilder b("L(0)", Scalar(0), 0, 0, gen_bound);
    b.support(0, 0);
    b.add_basis("e0", 0);
    for (int k = -1; k <= gen_bound; ++k) b.set_action(k, 0, Vec{});
    return b.finalize();
}

// L(lambda) for a constant lambda: Delta(lambda) when lambda != 0, the
// trivial module otherwise.  Symbolic lambda is rejected (the case split is
// undecidable).
inline GradedModule simple_module(const Scalar& lambda, int depth, int gen_bound = 8) {
    if (!lambda.is_constant())
        throw error("simple_module requires a constant weight (got " + lambda.to_string() + ")");
    if (lambda.is_zero()) return trivial_module(gen_bound);
    return verma(lambda, depth, gen_bound);
}

// ---------------------------------------------------------------------------
// The uniserial structure of Delta(0):
//   0 -> Delta(-1) --alpha--> Delta(0) --beta--> L(0) -> 0
// alpha is normalized by sending the generator of Delta(-1) to e_{-1} and
// propagating along d_{-1} (which fixes alpha(e_{-1-i}) = (i+1) e_{-1-i}).

struct Delta0Resolution {
    GradedModule sub;       // Delta(-1), depth window
    GradedModule mid;       // Delta(0), depth+1 window
    GradedModule quotient;  // L(0)
    HomData alpha;          // Delta(-1) -> Delta(0)
    HomData beta;           // Delta(0) -> L(0)
};

inline Delta0Resolution delta0_resolution(int depth, int gen_bound = 8) {
    Delta0Resolution r{verma(Scalar(-1), depth, gen_bound), verma(Scalar(0), depth + 1, gen_bound),
                       trivial_module(gen_bound), {}, {}};
    r.alpha.resize(static_cast<size_t>(r.sub.dim()));
    for (int i = 0; i <= depth; ++i) {
        // e_{-1-i} in Delta(-1) sits at offset -i; its image in Delta(0) is at
        // offset -(i+1), whose basis index there is i+1.
        r.alpha[static_cast<size_t>(i)] = Vec{{i + 1, Scalar(i + 1)}};
    }
    r.beta.resize(static_cast<size_t>(r.mid.dim()));
    r.beta[0] = Vec{{0, Scalar(1)}};
    return r;
}

// ---------------------------------------------------------------------------
// The eight extension families of Feigin-Fuchs modules.  Each is a module
// with layers F_mu (basis f) and F_lambda (basis f'), delta = lambda - mu:
//   d_i f_j  = (j - (i+1) mu) f_{i+j}
//   d_i f'_j = (j - (i+1) lambda) f'_{i+j} + corr(i, j) f_{i+j-delta}
// with f_j = f'_j = 0 for j < 0.  Printed factorial ratios are read as
// falling factorials, so every correction is polynomial in i, j, lambda.

struct FamilyId {
    int id = 1;           // 1..8
    bool prime = false;   // family 2 variant selector
    int sign = +1;        // family 8 sign selector

    std::string to_string() const {
        std::string s = "E" + std::to_string(id);
        if (id == 2) s += prime ? "'" : "";
        if (id == 8) s += (sign > 0 ? "+" : "-");
        return s;
    }
};

namespace detail {

// x (x-1) ... (x-m+1) as an integer, for integer x.
inline Scalar falling(int x, int m) {
    Rat acc(1);
    for (int t = 0; t < m; ++t) acc *= Rat(x - t);
    return Scalar(acc);
}

struct FamilyData {
    Scalar lambda;
    Scalar mu;
    int delta;
};

inline FamilyData family_data(const FamilyId& f, const Scalar& lambda) {
    const QuadRat half(make_rat(1, 2));
    const QuadRat root = QuadRat::sqrt19();
    switch (f.id) {
        case 1:
            return {lambda, lambda, 0};
        case 2:
            if (!lambda.is_zero()) throw error("family 2 fixes lambda = 0");
            return {Scalar(0), Scalar(-1), 1};
        case 3:
            return {lambda, lambda - Scalar(2), 2};
        case 4:
            return {lambda, lambda - Scalar(3), 3};
        case 5:
            return {lambda, lambda - Scalar(4), 4};
        case 6:
            if (!lambda.is_zero()) throw error("family 6 fixes lambda = 0");
            return {Scalar(0), Scalar(-5), 5};
        case 7:
            if (lambda != Scalar(4)) throw error("family 7 fixes lambda = 4");
            return {Scalar(4), Scalar(-1), 5};
        case 8: {
            QuadRat lam = (QuadRat(5) + (f.sign > 0 ? root : -root)) * half;
            QuadRat mu = (QuadRat(-7) + (f.sign > 0 ? root : -root)) * half;
            if (lambda != Scalar(lam)) throw error("family 8 fixes lambda = (5 +- sqrt19)/2");
            return {Scalar(lam), Scalar(mu), 6};
        }
        default:
            throw error("family id must be 1..8");
    }
}

inline Scalar family_correction(const FamilyId& f, const Scalar& lambda, int i, int j) {
    const Scalar J(j);
    switch (f.id) {
        case 1:
            return Scalar(i + 1);
        case 2:
            return f.prime ? Scalar((i + 1) * i) : Scalar(i + 1) * J;
        case 3:
            return falling(i + 1, 3) + Scalar(2) * falling(i + 1, 2) * J;
        case 4:
            return falling(i + 1, 3) * J + falling(i + 1, 2) * falling(j, 2);
        case 5:
            return falling(i + 1, 5) * lambda + falling(i + 1, 4) * J -
                   Scalar(6) * falling(i + 1, 3) * falling(j, 2) -
                   Scalar(4) * falling(i + 1, 2) * falling(j, 3);
        case 6:
            return Scalar(2) * falling(i + 1, 5) * J -
                   Scalar(5) * falling(i + 1, 4) * falling(j, 2) +
                   Scalar(10) * falling(i + 1, 3) * falling(j, 3) +
                   Scalar(5) * falling(i + 1, 2) * falling(j, 4);
        case 7:
            return Scalar(12) * falling(i + 1, 6) + Scalar(22) * falling(i + 1, 5) * J +
                   Scalar(5) * falling(i + 1, 4) * falling(j, 2) -
                   Scalar(10) * falling(i + 1, 3) * falling(j, 3) -
                   Scalar(5) * falling(i + 1, 2) * falling(j, 4);
        case 8: {
            const QuadRat root = QuadRat::sqrt19();
            QuadRat s19 = f.sign > 0 ? root : -root;
            QuadRat c7 = (QuadRat(22) + QuadRat(5) * s19) / QuadRat(4);
            QuadRat c6 = (QuadRat(31) + QuadRat(7) * s19) / QuadRat(2);
            QuadRat c5 = (QuadRat(25) + QuadRat(7) * s19) / QuadRat(2);
            return Scalar(c7) * falling(i + 1, 7) - Scalar(c6) * falling(i + 1, 6) * J -
                   Scalar(c5) * falling(i + 1, 5) * falling(j, 2) -
                   Scalar(5) * falling(i + 1, 4) * falling(j, 3) +
                   Scalar(5) * falling(i + 1, 3) * falling(j, 4) +
                   Scalar(2) * falling(i + 1, 2) * falling(j, 5);
        }
        default:
            throw error("family id must be 1..8");
    }
}

}  // namespace detail

// The correction cocycle value corr(i, j) of a family, exposed for the
// solver cross-validation.
inline Scalar ext_family_correction(const FamilyId& f, const Scalar& lambda, int i, int j) {
    detail::family_data(f, lambda);  // validates the family/lambda pairing
    return detail::family_correction(f, lambda, i, j);
}

inline GradedModule ext_family(const FamilyId& f, const Scalar& lambda, int depth,
                               int gen_bound = 8) {
    detail::FamilyData data = detail::family_data(f, lambda);
    const int delta = data.delta;
    GradedModuleBuilder b(f.to_string() + "(" + lambda.to_string() + ")", -data.lambda, 0,
                          depth + delta, gen_bound);
    b.support(0, std::nullopt);

    // f'_j at offset j (F_lambda layer), f_m at offset m + delta (F_mu layer).
    std::vector<int> top_idx(static_cast<size_t>(depth + 1));
    std::vector<int> sub_idx(static_cast<size_t>(depth + 1));
    for (int n = 0; n <= depth + delta; ++n) {
        if (n <= depth) top_idx[static_cast<size_t>(n)] = b.add_basis("fp" + std::to_string(n), n);
        if (n >= delta && n - delta <= depth)
            sub_idx[static_cast<size_t>(n - delta)] = b.add_basis("f" + std::to_string(n - delta), n);
    }

    for (int k = -1; k <= gen_bound; ++k) {
        for (int m = 0; m <= depth; ++m) {
            Scalar coeff = Scalar(m) - Scalar(k + 1) * data.mu;
            int target = m + k;
            Vec img;
            bool defined = true;
            if (!coeff.is_zero() && target >= 0) {
                if (target > depth) defined = false;
                else img[sub_idx[static_cast<size_t>(target)]] = coeff;
            }
            if (defined) b.set_action(k, sub_idx[static_cast<size_t>(m)], std::move(img));
        }
        for (int j = 0; j <= depth; ++j) {
            Scalar main = Scalar(j) - Scalar(k + 1) * data.lambda;
            Scalar corr = detail::family_correction(f, lambda, k, j);
            Vec img;
            bool defined = true;
            if (!main.is_zero() && j + k >= 0) {
                if (j + k > depth) defined = false;
                else img[top_idx[static_cast<size_t>(j + k)]] = main;
            }
            if (!corr.is_zero() && j + k - delta >= 0) {
                if (j + k - delta > depth) defined = false;
                else vec_add_scaled(img, Vec{{sub_idx[static_cast<size_t>(j + k - delta)], Scalar(1)}}, corr);
            }
            if (defined) b.set_action(k, top_idx[static_cast<size_t>(j)], std::move(img));
        }
    }
    return b.finalize();
}

// ---------------------------------------------------------------------------
// Exact scan of the Verma simplicity equations
//   i (i - 1 - 2 lambda) = 0,   i (i - 1) (3 lambda - i + 2) = 0
// over 1 <= i <= max_i; returns every solution pair (lambda, i).

inline std::vector<std::pair<Scalar, int>> verma_simplicity_scan(int max_i) {
    std::vector<std::pair<Scalar, int>> solutions;
    for (int i = 1; i <= max_i; ++i) {
        Rat lam = make_rat(i - 1, 2);  // unique root of the first equation
        Rat second = Rat(i) * Rat(i - 1) * (Rat(3) * lam - Rat(i) + Rat(2));
        if (second == 0) solutions.emplace_back(Scalar(lam), i);
    }
    return solutions;
}

// ---------------------------------------------------------------------------
// Textual module specifications, shared by the CLI and by the operations
// that need to re-materialize a module at several window depths:
//   verma:<scalar>   ff:<scalar>   simple:<scalar>   trivial
//   family:<id>[:plain|:prime][:plus|:minus][:lambda=<scalar>]
//   dual(<spec>)

struct ModuleSpec {
    enum class Kind { verma, feigin_fuchs, simple, trivial, family, dual };

    Kind kind = Kind::trivial;
    Scalar lambda;
    FamilyId family;
    std::shared_ptr<ModuleSpec> inner;

    static ModuleSpec parse(const std::string& text);
    std::string to_string() const;
};

inline ModuleSpec ModuleSpec::parse(const std::string& text) {
    ModuleSpec spec;
    if (text.rfind("dual(", 0) == 0 && text.back() == ')') {
        spec.kind = Kind::dual;
        spec.inner = std::make_shared<ModuleSpec>(parse(text.substr(5, text.size() - 6)));
        return spec;
    }
    std::vector<std::string> parts;
    size_t start = 0;
    while (start <= text.size()) {
        size_t colon = text.find(':', start);
        if (colon == std::string::npos) {
            parts.push_back(text.substr(start));
            break;
        }
        parts.push_back(text.substr(start, colon - start));
        start = colon + 1;
    }
    const std::string& head = parts[0];
    auto arg_scalar = [&](size_t idx) {
        if (parts.size() <= idx) throw error("module spec '" + text + "' needs a weight");
        return Scalar::parse(parts[idx]);
    };
    if (head == "verma") {
        spec.kind = Kind::verma;
        spec.lambda = arg_scalar(1);
    } else if (head == "ff") {
        spec.kind = Kind::feigin_fuchs;
        spec.lambda = arg_scalar(1);
    } else if (head == "simple") {
        spec.kind = Kind::simple;
        spec.lambda = arg_scalar(1);
    } else if (head == "trivial") {
        spec.kind = Kind::trivial;
    } else if (head == "family") {
        spec.kind = Kind::family;
        if (parts.size() < 2) throw error("family spec needs an id");
        spec.family.id = std::stoi(parts[1]);
        bool lambda_given = false;
        for (size_t p = 2; p < parts.size(); ++p) {
            const std::string& opt = parts[p];
            if (opt == "plain") spec.family.prime = false;
            else if (opt == "prime") spec.family.prime = true;
            else if (opt == "plus") spec.family.sign = +1;
            else if (opt == "minus") spec.family.sign = -1;
            else if (opt.rfind("lambda=", 0) == 0) {
                spec.lambda = Scalar::parse(opt.substr(7));
                lambda_given = true;
            } else {
                throw error("unknown family option '" + opt + "'");
            }
        }
        if (!lambda_given) {
            // Families with a fixed weight default to it.
            const QuadRat half(make_rat(1, 2));
            switch (spec.family.id) {
                case 2: case 6: spec.lambda = Scalar(0); break;
                case 7: spec.lambda = Scalar(4); break;
                case 8:
                    spec.lambda = Scalar((QuadRat(5) +
                                          (spec.family.sign > 0 ? QuadRat::sqrt19()
                                                                : -QuadRat::sqrt19())) * half);
                    break;
                default: spec.lambda = Scalar::lambda(); break;
            }
        }
    } else {
        throw error("unknown module spec '" + text + "'");
    }
    return spec;
}

inline std::string ModuleSpec::to_string() const {
    switch (kind) {
        case Kind::verma: return "verma:" + lambda.to_string();
        case Kind::feigin_fuchs: return "ff:" + lambda.to_string();
        case Kind::simple: return "simple:" + lambda.to_string();
        case Kind::trivial: return "trivial";
        case Kind::family: {
            std::string s = "family:" + std::to_string(family.id);
            if (family.id == 2) s += family.prime ? ":prime" : ":plain";
            if (family.id == 8) s += family.sign > 0 ? ":plus" : ":minus";
            s += ":lambda=" + lambda.to_string();
            return s;
        }
        case Kind::dual: return "dual(" + inner->to_string() + ")";
    }
    throw error("unreachable");
}

inline GradedModule materialize(const ModuleSpec& spec, int depth, int gen_bound = 8) {
    switch (spec.kind) {
        case ModuleSpec::Kind::verma: return verma(spec.lambda, depth, gen_bound);
        case ModuleSpec::Kind::feigin_fuchs: return feigin_fuchs(spec.lambda, depth, gen_bound);
        case ModuleSpec::Kind::simple: return simple_module(spec.lambda, depth, gen_bound);
        case ModuleSpec::Kind::trivial: return trivial_module(gen_bound);
        case ModuleSpec::Kind::family:
            return ext_family(spec.family, spec.lambda, depth, gen_bound);
        case ModuleSpec::Kind::dual:
            return restricted_dual(materialize(*spec.inner, depth, gen_bound));
    }
    throw error("unreachable");
}

}  // namespace witt
