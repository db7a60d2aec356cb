#pragma once

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "mdsr/field.hpp"

namespace mdsr {

/// Dense row-major matrix over F_q. A value type: every operation returns
/// a fresh matrix, nothing here mutates shared state.
class Matrix {
public:
    /// Zero matrix. Dimensions must be positive.
    Matrix(PrimeField field, std::size_t rows, std::size_t cols);

    Matrix(PrimeField field, std::size_t rows, std::size_t cols,
           std::vector<Symbol> entries);

    static Matrix identity(PrimeField field, std::size_t n);

    /// Row m of the result is e(map[m]); map is 1-based, a permutation of
    /// 1..map.size(). NotAPermutation otherwise.
    static Matrix permutation(PrimeField field, const std::vector<std::size_t>& map);

    /// Test/demo convenience: rows given as integer lists, reduced mod q.
    static Matrix from_rows(PrimeField field,
                            std::initializer_list<std::initializer_list<int>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const PrimeField& field() const { return field_; }

    Symbol at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, Symbol v) { entries_[r * cols_ + c] = v; }

    const std::vector<Symbol>& entries() const { return entries_; }

    Matrix row(std::size_t r) const;
    Matrix transposed() const;

    bool operator==(const Matrix& other) const = default;

private:
    PrimeField field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Symbol> entries_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix scale(Symbol lambda, const Matrix& a);

/// A stacked on top of B (column counts must agree).
Matrix stack(const Matrix& a, const Matrix& b);
Matrix stack(const std::vector<Matrix>& blocks);

/// Kronecker product, (a.rows*b.rows) x (a.cols*b.cols).
Matrix kron(const Matrix& a, const Matrix& b);
Matrix kron(const std::vector<Matrix>& factors);

Matrix matpow(const Matrix& a, std::uint64_t e);

std::size_t rank(const Matrix& a);

FieldElement det(const Matrix& a);

/// Solves A x = b for square full-rank A (b may have several columns).
Matrix solve(const Matrix& a, const Matrix& b);

Matrix inverse(const Matrix& a);

/// Any particular solution of A x = b (free variables set to 0).
/// Singular when the system is inconsistent.
Matrix solve_any(const Matrix& a, const Matrix& b);

/// Columns form a basis of the right nullspace; empty vector when A is
/// injective. Each basis column is normalized from the RREF.
std::vector<std::vector<Symbol>> nullspace_basis(const Matrix& a);

/// rank(A) == rank(B) == rank([A; B])
bool rowspan_equal(const Matrix& a, const Matrix& b);

/// rank([A; B]) == rank(A) + rank(B)
bool rowspan_independent(const Matrix& a, const Matrix& b);

struct Eigenpair {
    Symbol value;
    Matrix space;  // columns are a basis of the eigenspace
};

/// Brute-force scan of all q candidate eigenvalues; for each one with a
/// nontrivial nullspace of (A - lambda I), returns a basis of that space.
/// Columns are scaled so the first nonzero entry is 1.
/// ScanBoundExceeded when q > scan_bound.
std::vector<Eigenpair> eigen_scan(const Matrix& a, std::uint32_t scan_bound = 4096);

}  // namespace mdsr
