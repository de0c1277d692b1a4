#include "witt/linalg.hpp"
#include "witt/scalar.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace witt;

namespace {

Scalar L() { return Scalar::lambda(); }

std::mt19937 rng(20240711);

QuadRat random_quadrat() {
    std::uniform_int_distribution<int> num(-6, 6);
    std::uniform_int_distribution<int> den(1, 4);
    std::uniform_int_distribution<int> coin(0, 3);
    QuadRat q(make_rat(num(rng), den(rng)));
    if (coin(rng) == 0) q = q + QuadRat(Rat(0), make_rat(num(rng), den(rng)));
    return q;
}

Scalar random_scalar() {
    std::uniform_int_distribution<int> deg(0, 3);
    Scalar s;
    int d = deg(rng);
    for (int k = 0; k <= d; ++k) s += Scalar::monomial(random_quadrat(), k);
    return s;
}

}  // namespace

TEST_CASE("rational and quadratic field basics") {
    REQUIRE(make_rat(2, 4) == make_rat(1, 2));
    REQUIRE(make_rat(2, -4) == make_rat(-1, 2));
    REQUIRE(rat_str(make_rat(-3, 6)) == "-1/2");

    QuadRat r = QuadRat::sqrt19();
    REQUIRE(r * r == QuadRat(19));
    QuadRat x(make_rat(5, 2), make_rat(1, 2));
    REQUIRE(x * x.inverse() == QuadRat(1));
    REQUIRE((x - x).is_zero());
}

TEST_CASE("scalar normalization examples") {
    // (2/4 + 0*r19) reduces
    REQUIRE(Scalar(make_rat(2, 4)) == Scalar(make_rat(1, 2)));
    // L - L has an empty coefficient sequence
    Scalar z = L() - L();
    REQUIRE(z.is_zero());
    REQUIRE(z.degree() == -1);
    REQUIRE(normalize(z) == z);
    // sqrt19 * sqrt19 = 19
    REQUIRE(Scalar(QuadRat::sqrt19()) * Scalar(QuadRat::sqrt19()) == Scalar(19));
}

TEST_CASE("scalar ring axioms on random inputs") {
    for (int trial = 0; trial < 200; ++trial) {
        Scalar a = random_scalar();
        Scalar b = random_scalar();
        Scalar c = random_scalar();
        REQUIRE((a + b) + c == a + (b + c));
        REQUIRE((a * b) * c == a * (b * c));
        REQUIRE(a * (b + c) == a * b + a * c);
        REQUIRE(a * b == b * a);
        REQUIRE(a - a == Scalar(0));
    }
}

TEST_CASE("scalar literals round-trip") {
    const char* cases[] = {"0",       "1",          "-1",        "5/2+1/2r19", "3*L^2-1",
                           "L-3",     "-L",         "L^2+L",     "1r19",       "-7/2-1/2r19",
                           "1/3",     "2*L^3-1r19*L"};
    for (const char* text : cases) {
        Scalar s = Scalar::parse(text);
        REQUIRE(s.to_string() == text);
        REQUIRE(Scalar::parse(s.to_string()) == s);
    }
    // parsing is tolerant of implicit-1 monomials
    REQUIRE(Scalar::parse("L") == L());
    REQUIRE(Scalar::parse("1*L") == L());
    REQUIRE(Scalar::parse("L^2") == L() * L());
    REQUIRE_THROWS_AS(Scalar::parse(""), error);
    REQUIRE_THROWS_AS(Scalar::parse("x"), error);
    REQUIRE_THROWS_AS(Scalar::parse("1//2"), error);

    // evaluation and canonical printing agree
    Scalar s = Scalar::parse("3*L^2-1");
    REQUIRE(s.evaluate(QuadRat(2)) == QuadRat(11));
}

TEST_CASE("scalar division is restricted to nonzero constants") {
    Scalar s = L() * L() + Scalar(2) * L();
    REQUIRE(s / Scalar(2) == Scalar(make_rat(1, 2)) * L() * L() + L());
    REQUIRE_THROWS_AS(s / L(), error);
    REQUIRE_THROWS_AS(s / Scalar(0), error);
}

TEST_CASE("polynomial division and gcd") {
    Scalar a = (L() - Scalar(1)) * (L() + Scalar(2));
    Scalar b = (L() - Scalar(1)) * Scalar(3);
    auto [q, r] = poly_divmod(a, b);
    REQUIRE(r.is_zero());
    REQUIRE(q * b == a);
    REQUIRE(poly_gcd(a, b) == L() - Scalar(1));
}

TEST_CASE("nullspace basics") {
    // 1x2 matrix [1, -1] -> basis {(1, 1)}
    Matrix<QuadRat> m(1, 2);
    m.at(0, 0) = QuadRat(1);
    m.at(0, 1) = QuadRat(-1);
    auto basis = nullspace(m);
    REQUIRE(basis.size() == 1);
    REQUIRE(basis[0][0] == basis[0][1]);
    REQUIRE(!basis[0][0].is_zero());

    // identity -> empty basis
    Matrix<QuadRat> id(2, 2);
    id.at(0, 0) = QuadRat(1);
    id.at(1, 1) = QuadRat(1);
    REQUIRE(nullspace(id).empty());

    // empty matrix -> identity-sized basis
    Matrix<QuadRat> empty(0, 3);
    REQUIRE(nullspace(empty).size() == 3);
}

TEST_CASE("rank-nullity with exact re-multiplication on random matrices") {
    std::uniform_int_distribution<int> dim(1, 6);
    for (int trial = 0; trial < 60; ++trial) {
        int rows = dim(rng);
        int cols = dim(rng);
        Matrix<QuadRat> m(rows, cols);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) m.at(r, c) = random_quadrat();
        auto basis = nullspace(m);
        REQUIRE(rank(m) + static_cast<int>(basis.size()) == cols);
        for (const auto& v : basis) {
            for (int r = 0; r < rows; ++r) {
                QuadRat acc(0);
                for (int c = 0; c < cols; ++c) acc += m.at(r, c) * v[static_cast<size_t>(c)];
                REQUIRE(acc.is_zero());
            }
        }
    }
}

TEST_CASE("sparse eliminator agrees with dense rank") {
    std::uniform_int_distribution<int> dim(1, 7);
    std::uniform_int_distribution<int> entry(-3, 3);
    for (int trial = 0; trial < 60; ++trial) {
        int rows = dim(rng);
        int cols = dim(rng);
        Matrix<QuadRat> m(rows, cols);
        SparseEliminator<QuadRat> elim(cols);
        for (int r = 0; r < rows; ++r) {
            SparseVec<QuadRat> row;
            for (int c = 0; c < cols; ++c) {
                QuadRat v(entry(rng));
                m.at(r, c) = v;
                if (!v.is_zero()) row[c] = v;
            }
            elim.add_row(row);
        }
        REQUIRE(elim.rank() == rank(m));
        REQUIRE(static_cast<int>(elim.nullspace_basis().size()) == cols - elim.rank());
        for (const auto& v : elim.nullspace_basis()) {
            for (int r = 0; r < rows; ++r) {
                QuadRat acc(0);
                for (const auto& [c, val] : v) acc += m.at(r, c) * val;
                REQUIRE(acc.is_zero());
            }
        }
    }
}

namespace {

Matrix<Rat> tits_of_path(int n) {
    Matrix<Rat> m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Rat(2);
    for (int i = 0; i + 1 < n; ++i) {
        m.at(i, i + 1) = Rat(-1);
        m.at(i + 1, i) = Rat(-1);
    }
    return m;
}

}  // namespace

TEST_CASE("definiteness classification") {
    // 2I - A for the path A4 -> positive definite
    REQUIRE(definiteness(tits_of_path(4)).kind == DefinitenessKind::positive_definite);

    // 2I - A for the 4-cycle -> positive semidefinite with corank 1
    Matrix<Rat> cycle = tits_of_path(4);
    cycle.at(0, 3) = Rat(-1);
    cycle.at(3, 0) = Rat(-1);
    DefinitenessResult affine = definiteness(cycle);
    REQUIRE(affine.kind == DefinitenessKind::positive_semidefinite);
    REQUIRE(affine.corank == 1);

    // 4-cycle plus pendant vertex -> indefinite.
    // Oracle: the leading principal minors of 2I - A in this vertex order are
    // 2, 3, 4, 4, and det = -4 by cofactor expansion, so the form is not
    // positive semidefinite; exact elimination must agree.
    Matrix<Rat> wild(5, 5);
    for (int i = 0; i < 5; ++i) wild.at(i, i) = Rat(2);
    auto edge = [&](int a, int b) {
        wild.at(a, b) = Rat(-1);
        wild.at(b, a) = Rat(-1);
    };
    edge(0, 1);
    edge(1, 2);
    edge(2, 3);
    edge(3, 0);
    edge(2, 4);
    REQUIRE(definiteness(wild).kind == DefinitenessKind::indefinite);

    // zero matrix: positive semidefinite of full corank
    Matrix<Rat> zero(3, 3);
    DefinitenessResult z = definiteness(zero);
    REQUIRE(z.kind == DefinitenessKind::positive_semidefinite);
    REQUIRE(z.corank == 3);

    Matrix<Rat> nonsym(2, 2);
    nonsym.at(0, 1) = Rat(1);
    REQUIRE_THROWS_AS(definiteness(nonsym), error);
}

TEST_CASE("definiteness smoke-tested against lattice sign sampling") {
    std::uniform_int_distribution<int> entry(-2, 2);
    std::uniform_int_distribution<int> dim(1, 4);
    for (int trial = 0; trial < 40; ++trial) {
        int n = dim(rng);
        Matrix<Rat> m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                Rat v(entry(rng));
                m.at(i, j) = v;
                m.at(j, i) = v;
            }
        DefinitenessResult d = definiteness(m);
        // Sample x^T m x over a small lattice; a negative value refutes
        // semidefiniteness, a zero value on nonzero x refutes definiteness.
        bool saw_negative = false;
        bool saw_zero_on_nonzero = false;
        std::vector<int> x(static_cast<size_t>(n), -2);
        for (;;) {
            bool nonzero = false;
            for (int v : x) nonzero |= (v != 0);
            if (nonzero) {
                Rat form(0);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) form += m.at(i, j) * Rat(x[i]) * Rat(x[j]);
                if (form < 0) saw_negative = true;
                else if (form == 0) saw_zero_on_nonzero = true;
            }
            int pos = 0;
            while (pos < n && x[static_cast<size_t>(pos)] == 2) {
                x[static_cast<size_t>(pos)] = -2;
                ++pos;
            }
            if (pos == n) break;
            ++x[static_cast<size_t>(pos)];
        }
        if (d.kind == DefinitenessKind::positive_definite) {
            REQUIRE(!saw_negative);
            REQUIRE(!saw_zero_on_nonzero);
        } else if (d.kind == DefinitenessKind::positive_semidefinite) {
            REQUIRE(!saw_negative);
        } else {
            REQUIRE(saw_negative);  // indefinite forms on small lattices show a witness here
        }
    }
}
