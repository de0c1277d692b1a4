#pragma once

#include "witt/rational.hpp"
#include "witt/scalar.hpp"

#include <map>
#include <vector>

namespace witt {

// Dense row-major matrix over an exact coefficient type (Rat, QuadRat or
// Scalar for symbolic entries).
template <class F>
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<F> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, F()) {}

    F& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    const F& at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
};

namespace detail {
inline bool field_zero(const Rat& x) { return x == 0; }
inline bool field_zero(const QuadRat& x) { return x.is_zero(); }
inline Rat field_inv(const Rat& x) { return Rat(1) / x; }
inline QuadRat field_inv(const QuadRat& x) { return x.inverse(); }
}  // namespace detail

// Gauss-Jordan elimination; returns the pivot column of each pivot row.
template <class F>
std::vector<int> reduce_to_rref(Matrix<F>& m) {
    std::vector<int> pivot_cols;
    int row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        int pr = -1;
        for (int r = row; r < m.rows; ++r)
            if (!detail::field_zero(m.at(r, col))) { pr = r; break; }
        if (pr < 0) continue;
        if (pr != row)
            for (int c = 0; c < m.cols; ++c) std::swap(m.at(pr, c), m.at(row, c));
        F inv = detail::field_inv(m.at(row, col));
        for (int c = col; c < m.cols; ++c) m.at(row, c) = m.at(row, c) * inv;
        for (int r = 0; r < m.rows; ++r) {
            if (r == row || detail::field_zero(m.at(r, col))) continue;
            F factor = m.at(r, col);
            for (int c = col; c < m.cols; ++c)
                m.at(r, c) = m.at(r, c) - factor * m.at(row, c);
        }
        pivot_cols.push_back(col);
        ++row;
    }
    return pivot_cols;
}

template <class F>
int rank(Matrix<F> m) {
    return static_cast<int>(reduce_to_rref(m).size());
}

// Exact basis of the right nullspace.  An empty (0 x n) matrix yields the
// standard basis; rank + nullity = cols by construction.
template <class F>
std::vector<std::vector<F>> nullspace(Matrix<F> m) {
    std::vector<int> pivots = reduce_to_rref(m);
    std::vector<bool> is_pivot(static_cast<size_t>(m.cols), false);
    for (int c : pivots) is_pivot[static_cast<size_t>(c)] = true;
    std::vector<std::vector<F>> basis;
    for (int free = 0; free < m.cols; ++free) {
        if (is_pivot[static_cast<size_t>(free)]) continue;
        std::vector<F> v(static_cast<size_t>(m.cols), F());
        v[static_cast<size_t>(free)] = F(1);
        for (size_t i = 0; i < pivots.size(); ++i)
            v[static_cast<size_t>(pivots[i])] = -m.at(static_cast<int>(i), free);
        basis.push_back(std::move(v));
    }
    return basis;
}

// ---------------------------------------------------------------------------
// Exact definiteness of a symmetric rational matrix via congruence
// (recursive Schur complements).  "indefinite" means the form takes a
// negative value; positive_semidefinite carries the corank.

enum class DefinitenessKind { positive_definite, positive_semidefinite, indefinite };

struct DefinitenessResult {
    DefinitenessKind kind;
    int corank = 0;

    bool operator==(const DefinitenessResult&) const = default;
};

inline DefinitenessResult definiteness(const Matrix<Rat>& m) {
    if (m.rows != m.cols) throw error("definiteness: matrix is not square");
    for (int i = 0; i < m.rows; ++i)
        for (int j = i + 1; j < m.cols; ++j)
            if (m.at(i, j) != m.at(j, i)) throw error("definiteness: matrix is not symmetric");

    Matrix<Rat> a = m;
    std::vector<int> live;
    for (int i = 0; i < m.rows; ++i) live.push_back(i);
    int corank = 0;
    while (!live.empty()) {
        int pivot = -1;
        for (int i : live)
            if (a.at(i, i) != 0) { pivot = i; break; }
        if (pivot < 0) {
            // All remaining diagonal entries vanish; a nonzero off-diagonal
            // entry b gives a 2x2 principal block with eigenvalues +-b.
            bool all_zero = true;
            for (size_t x = 0; x < live.size() && all_zero; ++x)
                for (size_t y = x + 1; y < live.size() && all_zero; ++y)
                    if (a.at(live[x], live[y]) != 0) all_zero = false;
            if (!all_zero) return {DefinitenessKind::indefinite, 0};
            corank += static_cast<int>(live.size());
            break;
        }
        Rat d = a.at(pivot, pivot);
        if (d < 0) return {DefinitenessKind::indefinite, 0};
        std::vector<int> rest;
        for (int i : live)
            if (i != pivot) rest.push_back(i);
        for (int i : rest)
            for (int j : rest)
                a.at(i, j) -= a.at(i, pivot) * a.at(pivot, j) / d;
        live = std::move(rest);
    }
    if (corank > 0) return {DefinitenessKind::positive_semidefinite, corank};
    return {DefinitenessKind::positive_definite, 0};
}

// ---------------------------------------------------------------------------
// Sparse exact elimination for the cocycle systems, whose rows touch only a
// handful of unknowns each.

template <class F>
using SparseVec = std::map<int, F>;

template <class F>
class SparseEliminator {
  public:
    explicit SparseEliminator(int cols) : cols_(cols) {}

    // Reduces v against the current pivots; if a nonzero remainder is left it
    // becomes a new pivot row.  Returns true when the row was independent.
    bool add_row(SparseVec<F> v) {
        reduce(v);
        if (v.empty()) return false;
        int col = v.begin()->first;
        F inv = detail::field_inv(v.begin()->second);
        for (auto& [c, val] : v) val = val * inv;
        // Back-substitute into existing rows so pivots stay fully reduced.
        for (auto& [pc, row] : pivots_) {
            auto it = row.find(col);
            if (it == row.end()) continue;
            F factor = it->second;
            axpy(row, v, factor);
        }
        pivots_.emplace(col, std::move(v));
        return true;
    }

    // Pivot rows are kept mutually reduced (no pivot column appears in
    // another pivot row), so one elimination per hit column suffices.
    void reduce(SparseVec<F>& v) const {
        std::vector<std::pair<int, F>> hits;
        for (const auto& [c, val] : v)
            if (pivots_.count(c)) hits.emplace_back(c, val);
        for (const auto& [c, factor] : hits) {
            v.erase(c);
            axpy_skip(v, pivots_.at(c), factor, c);
        }
    }

    int rank() const { return static_cast<int>(pivots_.size()); }
    int cols() const { return cols_; }

    std::vector<int> pivot_columns() const {
        std::vector<int> cols;
        cols.reserve(pivots_.size());
        for (const auto& [c, row] : pivots_) cols.push_back(c);
        return cols;
    }

    std::vector<SparseVec<F>> nullspace_basis() const {
        std::vector<SparseVec<F>> basis;
        for (int free = 0; free < cols_; ++free) {
            if (pivots_.count(free)) continue;
            SparseVec<F> v;
            v[free] = F(1);
            for (const auto& [pc, row] : pivots_) {
                auto it = row.find(free);
                if (it != row.end()) v[pc] = -it->second;
            }
            basis.push_back(std::move(v));
        }
        return basis;
    }

  private:
    // target -= factor * source
    static void axpy(SparseVec<F>& target, const SparseVec<F>& source, const F& factor) {
        for (const auto& [c, val] : source) {
            auto [it, inserted] = target.emplace(c, F());
            it->second = it->second - factor * val;
            if (detail::field_zero(it->second)) target.erase(it);
        }
    }
    static void axpy_skip(SparseVec<F>& target, const SparseVec<F>& source, const F& factor,
                          int skip_col) {
        for (const auto& [c, val] : source) {
            if (c == skip_col) continue;
            auto [it, inserted] = target.emplace(c, F());
            it->second = it->second - factor * val;
            if (detail::field_zero(it->second)) target.erase(it);
        }
    }

    int cols_;
    std::map<int, SparseVec<F>> pivots_;  // pivot column -> reduced row
};

}  // namespace witt
