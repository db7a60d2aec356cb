#include <doctest.h>

#include <vector>

#include "helpers.hpp"
#include "mdsr/matrix.hpp"
#include "mdsr/rng.hpp"

using mdsr::Errc;
using mdsr::Matrix;
using mdsr::PrimeField;
using mdsr::Symbol;
using testutil::thrown_code;

namespace {

Matrix random_matrix(mdsr::Rng& rng, const PrimeField& f, std::size_t r,
                     std::size_t c) {
    Matrix m(f, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.set(i, j, rng.uniform(f));
    return m;
}

Matrix random_full_rank(mdsr::Rng& rng, const PrimeField& f, std::size_t n) {
    while (true) {
        Matrix m = random_matrix(rng, f, n, n);
        if (rank(m) == n) return m;
    }
}

}  // namespace

TEST_CASE("matrix construction validates shape and reduces entries") {
    const PrimeField f(5);
    const Matrix z(f, 2, 3);
    CHECK(z.rows() == 2);
    CHECK(z.cols() == 3);
    CHECK(z.entries() == std::vector<Symbol>(6, 0));

    CHECK(Matrix::from_rows(f, {{-1}}).at(0, 0) == 4);
    CHECK(Matrix::from_rows(f, {{7, 12}}).entries() == std::vector<Symbol>{2, 2});

    CHECK(thrown_code([&] { Matrix(f, 0, 3); }) == Errc::dimension_mismatch);
    CHECK(thrown_code([&] {
              Matrix(f, 2, 2, std::vector<Symbol>{1, 2, 3});
          }) == Errc::dimension_mismatch);
}

TEST_CASE("permutation matrices from 1-based maps") {
    const PrimeField f(5);
    CHECK(Matrix::permutation(f, {1, 2, 3}) == Matrix::identity(f, 3));
    CHECK(Matrix::permutation(f, {2, 1}) == Matrix::from_rows(f, {{0, 1}, {1, 0}}));

    CHECK(thrown_code([&] { Matrix::permutation(f, {1, 1}); }) ==
          Errc::not_a_permutation);
    CHECK(thrown_code([&] { Matrix::permutation(f, {0, 2}); }) ==
          Errc::not_a_permutation);
    CHECK(thrown_code([&] { Matrix::permutation(f, {2, 3}); }) ==
          Errc::not_a_permutation);
}

TEST_CASE("products") {
    const PrimeField f(5);
    mdsr::Rng rng(11);
    const Matrix a = random_matrix(rng, f, 3, 3);
    CHECK(matmul(Matrix::identity(f, 3), a) == a);
    CHECK(matmul(Matrix::from_rows(f, {{1, 0}}),
                 Matrix::from_rows(f, {{0, 1}, {1, 0}})) ==
          Matrix::from_rows(f, {{0, 1}}));

    const Matrix b = random_matrix(rng, f, 3, 4);
    const Matrix c = random_matrix(rng, f, 4, 2);
    CHECK(matmul(matmul(a, b), c) == matmul(a, matmul(b, c)));

    CHECK(thrown_code([&] { matmul(b, a); }) == Errc::dimension_mismatch);
    CHECK(thrown_code([&] {
              matmul(a, Matrix::identity(PrimeField(7), 3));
          }) == Errc::field_mismatch);

    CHECK(scale(2, Matrix::identity(f, 2)) ==
          Matrix::from_rows(f, {{2, 0}, {0, 2}}));
    CHECK(matpow(Matrix::from_rows(f, {{0, 1}, {1, 0}}), 2) ==
          Matrix::identity(f, 2));
    CHECK(matpow(a, 0) == Matrix::identity(f, 3));
}

TEST_CASE("rank") {
    const PrimeField f7(7);
    CHECK(rank(Matrix::identity(f7, 4)) == 4);
    CHECK(rank(Matrix(f7, 3, 3)) == 0);
    CHECK(rank(Matrix::from_rows(f7, {{1, 2}, {2, 4}})) == 1);

    mdsr::Rng rng(23);
    for (int t = 0; t < 20; ++t) {
        const Matrix a = random_matrix(rng, f7, 3, 5);
        CHECK(rank(a) == rank(a.transposed()));
    }
}

TEST_CASE("determinants") {
    const PrimeField f5(5);
    CHECK(det(Matrix::identity(f5, 3)).value == 1);
    CHECK(det(Matrix::from_rows(f5, {{0, 1}, {1, 0}})).value == 4);
    CHECK(det(Matrix::from_rows(f5, {{0, 1}, {1, 0}})).modulus == 5);
    CHECK(thrown_code([&] { det(Matrix(f5, 2, 3)); }) == Errc::not_square);

    const PrimeField f(97);
    mdsr::Rng rng(31);
    for (int t = 0; t < 20; ++t) {
        const Matrix a = random_matrix(rng, f, 4, 4);
        const Matrix b = random_matrix(rng, f, 4, 4);
        CHECK(det(matmul(a, b)) == det(a) * det(b));
    }
}

TEST_CASE("solving square systems") {
    const PrimeField f7(7);
    const Matrix b = Matrix::from_rows(f7, {{4}, {3}});
    CHECK(solve(Matrix::identity(f7, 2), b) == b);
    CHECK(solve(Matrix::from_rows(f7, {{2, 0}, {0, 3}}), b) ==
          Matrix::from_rows(f7, {{2}, {1}}));

    mdsr::Rng rng(47);
    for (int t = 0; t < 20; ++t) {
        const Matrix a = random_full_rank(rng, f7, 4);
        const Matrix x = random_matrix(rng, f7, 4, 2);
        CHECK(solve(a, matmul(a, x)) == x);
        CHECK(matmul(a, inverse(a)) == Matrix::identity(f7, 4));
    }

    const Matrix sing = Matrix::from_rows(f7, {{1, 2}, {2, 4}});
    CHECK(thrown_code([&] { solve(sing, b); }) == Errc::singular);
    CHECK(thrown_code([&] { inverse(sing); }) == Errc::singular);
}

TEST_CASE("particular solutions of rank-deficient systems") {
    const PrimeField f(7);
    // rank-1 system: consistent right side has a solution with free vars 0
    const Matrix a = Matrix::from_rows(f, {{1, 2}, {2, 4}});
    const Matrix x = solve_any(a, Matrix::from_rows(f, {{1}, {2}}));
    CHECK(matmul(a, x) == Matrix::from_rows(f, {{1}, {2}}));
    CHECK(x.at(1, 0) == 0);

    CHECK(thrown_code([&] {
              solve_any(a, Matrix::from_rows(f, {{1}, {3}}));
          }) == Errc::singular);
}

TEST_CASE("nullspace bases") {
    const PrimeField f(7);
    const Matrix a = Matrix::from_rows(f, {{1, 2}, {2, 4}});
    const auto basis = nullspace_basis(a);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0] == std::vector<Symbol>{5, 1});

    CHECK(nullspace_basis(Matrix::identity(f, 3)).empty());
    CHECK(nullspace_basis(Matrix(f, 2, 3)).size() == 3);
}

TEST_CASE("stacking") {
    const PrimeField f(5);
    const Matrix a = Matrix::from_rows(f, {{1, 2}});
    const Matrix b = Matrix::from_rows(f, {{3, 4}});
    CHECK(stack(a, b) == Matrix::from_rows(f, {{1, 2}, {3, 4}}));
    CHECK(stack(std::vector<Matrix>{a, b, a}).rows() == 3);
    CHECK(thrown_code([&] { stack(a, Matrix(f, 1, 3)); }) ==
          Errc::dimension_mismatch);
}

TEST_CASE("kronecker products") {
    const PrimeField f(5);
    const Matrix e1 = Matrix::from_rows(f, {{1, 0}});
    CHECK(kron(e1, e1) == Matrix::from_rows(f, {{1, 0, 0, 0}}));
    CHECK(kron(Matrix::identity(f, 2), Matrix::identity(f, 2)) ==
          Matrix::identity(f, 4));

    mdsr::Rng rng(59);
    for (int t = 0; t < 10; ++t) {
        const Matrix a = random_matrix(rng, f, 2, 3);
        const Matrix b = random_matrix(rng, f, 3, 2);
        const Matrix c = random_matrix(rng, f, 3, 2);
        const Matrix d = random_matrix(rng, f, 2, 3);
        CHECK(matmul(kron(a, b), kron(c, d)) ==
              kron(matmul(a, c), matmul(b, d)));
    }
    CHECK(kron(std::vector<Matrix>{e1, e1, e1}).cols() == 8);
}

TEST_CASE("row span comparisons") {
    const PrimeField f(5);
    const Matrix e1 = Matrix::from_rows(f, {{1, 0}});
    const Matrix e2 = Matrix::from_rows(f, {{0, 1}});

    CHECK(rowspan_equal(e1, e1));
    CHECK_FALSE(rowspan_equal(e1, e2));
    CHECK(rowspan_equal(e1, Matrix::from_rows(f, {{2, 0}})));

    CHECK(rowspan_independent(e1, e2));
    CHECK_FALSE(rowspan_independent(e1, Matrix::from_rows(f, {{3, 0}})));
    CHECK(rowspan_independent(Matrix::from_rows(f, {{1, 4}}),
                              Matrix::from_rows(f, {{1, 1}})));

    CHECK(thrown_code([&] { rowspan_equal(e1, Matrix(f, 1, 3)); }) ==
          Errc::dimension_mismatch);
}

TEST_CASE("left multiplication by a full-rank matrix preserves the row span") {
    const PrimeField f(11);
    mdsr::Rng rng(61);
    for (int t = 0; t < 20; ++t) {
        const Matrix a = random_matrix(rng, f, 2, 4);
        const Matrix s = random_full_rank(rng, f, 2);
        CHECK(rowspan_equal(a, matmul(s, a)));
    }
}

TEST_CASE("kronecker factors pass span equality and independence through") {
    const PrimeField f(11);
    mdsr::Rng rng(67);
    for (int t = 0; t < 10; ++t) {
        // same spans factor-wise => same span of the product
        const Matrix a1 = random_matrix(rng, f, 2, 3);
        const Matrix a2 = random_matrix(rng, f, 2, 3);
        const Matrix q1 = matmul(random_full_rank(rng, f, 2), a1);
        const Matrix q2 = matmul(random_full_rank(rng, f, 2), a2);
        CHECK(rowspan_equal(kron(a1, a2), kron(q1, q2)));
    }

    // independence in one slot forces independence of the products
    const Matrix e1 = Matrix::from_rows(f, {{1, 0}});
    const Matrix e2 = Matrix::from_rows(f, {{0, 1}});
    const Matrix u = Matrix::from_rows(f, {{1, 1}, {2, 7}});
    CHECK(rowspan_independent(kron(e1, u), kron(e2, u)));
    CHECK(rowspan_independent(kron(u, e1), kron(u, e2)));
}

TEST_CASE("eigenvalue scans") {
    const PrimeField f(5);

    const auto full = eigen_scan(Matrix::identity(f, 2));
    REQUIRE(full.size() == 1);
    CHECK(full[0].value == 1);
    CHECK(full[0].space == Matrix::identity(f, 2));

    const auto swap_pairs = eigen_scan(Matrix::from_rows(f, {{0, 1}, {1, 0}}));
    REQUIRE(swap_pairs.size() == 2);
    CHECK(swap_pairs[0].value == 1);
    CHECK(swap_pairs[0].space == Matrix::from_rows(f, {{1}, {1}}));
    CHECK(swap_pairs[1].value == 4);
    CHECK(swap_pairs[1].space == Matrix::from_rows(f, {{1}, {4}}));

    // defective: a 2-dim Jordan block has a 1-dim eigenspace
    const auto jordan = eigen_scan(Matrix::from_rows(f, {{1, 1}, {0, 1}}));
    REQUIRE(jordan.size() == 1);
    CHECK(jordan[0].value == 1);
    CHECK(jordan[0].space == Matrix::from_rows(f, {{1}, {0}}));

    CHECK(thrown_code([&] { eigen_scan(Matrix::identity(f, 2), 3); }) ==
          Errc::scan_bound_exceeded);
    CHECK(thrown_code([&] { eigen_scan(Matrix(f, 2, 3)); }) == Errc::not_square);
}
