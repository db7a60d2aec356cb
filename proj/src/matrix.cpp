#include "mdsr/matrix.hpp"

#include <algorithm>
#include <string>

#include "mdsr/errors.hpp"

namespace mdsr {

namespace {

void check_fields(const Matrix& a, const Matrix& b) {
    if (!(a.field() == b.field())) {
        raise(Errc::field_mismatch, "matrices live over different fields");
    }
}

struct RrefResult {
    std::vector<std::size_t> pivots;  // pivot columns, ascending
    std::size_t swaps = 0;
    Symbol pivot_product = 1;  // product of pivot values before normalization
};

/// Gauss-Jordan on a row-major buffer. Pivots are searched only in the
/// first `lim` columns; the pivot row is always the lowest-index row with
/// a nonzero entry, which keeps every downstream result deterministic.
RrefResult rref_in_place(const PrimeField& f, std::vector<Symbol>& a,
                         std::size_t rows, std::size_t cols, std::size_t lim) {
    RrefResult res;
    std::size_t r = 0;
    for (std::size_t c = 0; c < lim && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p * cols + c] == 0) ++p;
        if (p == rows) continue;
        if (p != r) {
            for (std::size_t j = 0; j < cols; ++j) {
                std::swap(a[p * cols + j], a[r * cols + j]);
            }
            ++res.swaps;
        }
        const Symbol piv = a[r * cols + c];
        res.pivot_product = f.mul(res.pivot_product, piv);
        const Symbol piv_inv = f.inv(piv);
        for (std::size_t j = c; j < cols; ++j) {
            a[r * cols + j] = f.mul(a[r * cols + j], piv_inv);
        }
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r) continue;
            const Symbol factor = a[i * cols + c];
            if (factor == 0) continue;
            for (std::size_t j = c; j < cols; ++j) {
                a[i * cols + j] =
                    f.sub(a[i * cols + j], f.mul(factor, a[r * cols + j]));
            }
        }
        res.pivots.push_back(c);
        ++r;
    }
    return res;
}

}  // namespace

Matrix::Matrix(PrimeField field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), entries_(rows * cols, 0) {
    if (rows == 0 || cols == 0) {
        raise(Errc::dimension_mismatch, "matrix dimensions must be positive");
    }
}

Matrix::Matrix(PrimeField field, std::size_t rows, std::size_t cols,
               std::vector<Symbol> entries)
    : field_(field), rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows == 0 || cols == 0) {
        raise(Errc::dimension_mismatch, "matrix dimensions must be positive");
    }
    if (entries_.size() != rows * cols) {
        raise(Errc::dimension_mismatch, "entry count does not match dimensions");
    }
    for (Symbol& v : entries_) v = field_.reduce(v);
}

Matrix Matrix::identity(PrimeField field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

Matrix Matrix::permutation(PrimeField field, const std::vector<std::size_t>& map) {
    const std::size_t n = map.size();
    if (n == 0) raise(Errc::dimension_mismatch, "empty permutation");
    std::vector<bool> seen(n, false);
    for (std::size_t v : map) {
        if (v < 1 || v > n || seen[v - 1]) {
            raise(Errc::not_a_permutation,
                  "map is not a permutation of 1.." + std::to_string(n));
        }
        seen[v - 1] = true;
    }
    Matrix m(field, n, n);
    for (std::size_t r = 0; r < n; ++r) m.set(r, map[r] - 1, 1);
    return m;
}

Matrix Matrix::from_rows(PrimeField field,
                         std::initializer_list<std::initializer_list<int>> rows) {
    const std::size_t nr = rows.size();
    if (nr == 0) raise(Errc::dimension_mismatch, "no rows given");
    const std::size_t nc = rows.begin()->size();
    Matrix m(field, nr, nc);
    const auto q = static_cast<long long>(field.modulus());
    std::size_t r = 0;
    for (const auto& row : rows) {
        if (row.size() != nc) {
            raise(Errc::dimension_mismatch, "ragged row list");
        }
        std::size_t c = 0;
        for (int v : row) {
            const long long red = ((static_cast<long long>(v) % q) + q) % q;
            m.set(r, c, static_cast<Symbol>(red));
            ++c;
        }
        ++r;
    }
    return m;
}

Matrix Matrix::row(std::size_t r) const {
    if (r >= rows_) raise(Errc::index_out_of_range, "row index out of range");
    Matrix m(field_, 1, cols_);
    for (std::size_t c = 0; c < cols_; ++c) m.set(0, c, at(r, c));
    return m;
}

Matrix Matrix::transposed() const {
    Matrix m(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) m.set(c, r, at(r, c));
    }
    return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    check_fields(a, b);
    if (a.cols() != b.rows()) {
        raise(Errc::dimension_mismatch, "inner dimensions disagree");
    }
    const PrimeField& f = a.field();
    const auto q = static_cast<std::uint64_t>(f.modulus());
    Matrix out(f, a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            std::uint64_t acc = 0;
            for (std::size_t t = 0; t < a.cols(); ++t) {
                acc += static_cast<std::uint64_t>(a.at(i, t)) * b.at(t, j);
                // q^2 < 2^32, so 2^32 summands fit in 64 bits; fold early
                // anyway to stay far from the edge.
                if (acc >= (std::uint64_t{1} << 62)) acc %= q;
            }
            out.set(i, j, static_cast<Symbol>(acc % q));
        }
    }
    return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) { return matmul(a, b); }

Matrix operator+(const Matrix& a, const Matrix& b) {
    check_fields(a, b);
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        raise(Errc::dimension_mismatch, "shapes disagree");
    }
    const PrimeField& f = a.field();
    Matrix out(f, a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            out.set(i, j, f.add(a.at(i, j), b.at(i, j)));
        }
    }
    return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    check_fields(a, b);
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        raise(Errc::dimension_mismatch, "shapes disagree");
    }
    const PrimeField& f = a.field();
    Matrix out(f, a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            out.set(i, j, f.sub(a.at(i, j), b.at(i, j)));
        }
    }
    return out;
}

Matrix scale(Symbol lambda, const Matrix& a) {
    const PrimeField& f = a.field();
    const Symbol l = f.reduce(lambda);
    Matrix out(f, a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            out.set(i, j, f.mul(l, a.at(i, j)));
        }
    }
    return out;
}

Matrix stack(const Matrix& a, const Matrix& b) {
    check_fields(a, b);
    if (a.cols() != b.cols()) {
        raise(Errc::dimension_mismatch, "column counts disagree");
    }
    std::vector<Symbol> entries;
    entries.reserve((a.rows() + b.rows()) * a.cols());
    entries.insert(entries.end(), a.entries().begin(), a.entries().end());
    entries.insert(entries.end(), b.entries().begin(), b.entries().end());
    return Matrix(a.field(), a.rows() + b.rows(), a.cols(), std::move(entries));
}

Matrix stack(const std::vector<Matrix>& blocks) {
    if (blocks.empty()) raise(Errc::dimension_mismatch, "nothing to stack");
    Matrix out = blocks.front();
    for (std::size_t i = 1; i < blocks.size(); ++i) out = stack(out, blocks[i]);
    return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    check_fields(a, b);
    const PrimeField& f = a.field();
    Matrix out(f, a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i1 = 0; i1 < a.rows(); ++i1) {
        for (std::size_t j1 = 0; j1 < a.cols(); ++j1) {
            const Symbol v = a.at(i1, j1);
            if (v == 0) continue;
            for (std::size_t i2 = 0; i2 < b.rows(); ++i2) {
                for (std::size_t j2 = 0; j2 < b.cols(); ++j2) {
                    out.set(i1 * b.rows() + i2, j1 * b.cols() + j2,
                            f.mul(v, b.at(i2, j2)));
                }
            }
        }
    }
    return out;
}

Matrix kron(const std::vector<Matrix>& factors) {
    if (factors.empty()) raise(Errc::dimension_mismatch, "nothing to multiply");
    Matrix out = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
    return out;
}

Matrix matpow(const Matrix& a, std::uint64_t e) {
    if (a.rows() != a.cols()) raise(Errc::not_square, "matrix power needs a square base");
    Matrix result = Matrix::identity(a.field(), a.rows());
    Matrix base = a;
    while (e > 0) {
        if (e & 1) result = matmul(result, base);
        base = matmul(base, base);
        e >>= 1;
    }
    return result;
}

std::size_t rank(const Matrix& a) {
    std::vector<Symbol> buf = a.entries();
    return rref_in_place(a.field(), buf, a.rows(), a.cols(), a.cols()).pivots.size();
}

FieldElement det(const Matrix& a) {
    if (a.rows() != a.cols()) raise(Errc::not_square, "determinant needs a square matrix");
    const PrimeField& f = a.field();
    std::vector<Symbol> buf = a.entries();
    const RrefResult res = rref_in_place(f, buf, a.rows(), a.cols(), a.cols());
    if (res.pivots.size() < a.rows()) return f.element(0);
    Symbol d = res.pivot_product;
    if (res.swaps % 2 == 1) d = f.neg(d);
    return f.element(d);
}

Matrix solve(const Matrix& a, const Matrix& b) {
    check_fields(a, b);
    if (a.rows() != a.cols()) raise(Errc::not_square, "solve needs a square system");
    if (a.rows() != b.rows()) raise(Errc::dimension_mismatch, "rhs height disagrees");
    const std::size_t n = a.rows();
    const std::size_t w = n + b.cols();
    std::vector<Symbol> aug(n * w);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug[i * w + j] = a.at(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) aug[i * w + n + j] = b.at(i, j);
    }
    const RrefResult res = rref_in_place(a.field(), aug, n, w, n);
    if (res.pivots.size() < n) raise(Errc::singular, "coefficient matrix is singular");
    Matrix x(a.field(), n, b.cols());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) x.set(i, j, aug[i * w + n + j]);
    }
    return x;
}

Matrix inverse(const Matrix& a) {
    return solve(a, Matrix::identity(a.field(), a.rows()));
}

Matrix solve_any(const Matrix& a, const Matrix& b) {
    check_fields(a, b);
    if (a.rows() != b.rows()) raise(Errc::dimension_mismatch, "rhs height disagrees");
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();
    const std::size_t w = m + b.cols();
    std::vector<Symbol> aug(n * w);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) aug[i * w + j] = a.at(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) aug[i * w + m + j] = b.at(i, j);
    }
    const RrefResult res = rref_in_place(a.field(), aug, n, w, m);
    for (std::size_t i = res.pivots.size(); i < n; ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            if (aug[i * w + m + j] != 0) {
                raise(Errc::singular, "system is inconsistent");
            }
        }
    }
    Matrix x(a.field(), m, b.cols());
    for (std::size_t t = 0; t < res.pivots.size(); ++t) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            x.set(res.pivots[t], j, aug[t * w + m + j]);
        }
    }
    return x;
}

std::vector<std::vector<Symbol>> nullspace_basis(const Matrix& a) {
    const PrimeField& f = a.field();
    std::vector<Symbol> buf = a.entries();
    const RrefResult res = rref_in_place(f, buf, a.rows(), a.cols(), a.cols());
    std::vector<bool> is_pivot(a.cols(), false);
    for (std::size_t c : res.pivots) is_pivot[c] = true;
    std::vector<std::vector<Symbol>> basis;
    for (std::size_t fc = 0; fc < a.cols(); ++fc) {
        if (is_pivot[fc]) continue;
        std::vector<Symbol> v(a.cols(), 0);
        v[fc] = 1;
        for (std::size_t t = 0; t < res.pivots.size(); ++t) {
            v[res.pivots[t]] = f.neg(buf[t * a.cols() + fc]);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

bool rowspan_equal(const Matrix& a, const Matrix& b) {
    check_fields(a, b);
    if (a.cols() != b.cols()) {
        raise(Errc::dimension_mismatch, "ambient dimensions disagree");
    }
    const std::size_t ra = rank(a);
    const std::size_t rb = rank(b);
    return ra == rb && rank(stack(a, b)) == ra;
}

bool rowspan_independent(const Matrix& a, const Matrix& b) {
    check_fields(a, b);
    if (a.cols() != b.cols()) {
        raise(Errc::dimension_mismatch, "ambient dimensions disagree");
    }
    return rank(stack(a, b)) == rank(a) + rank(b);
}

std::vector<Eigenpair> eigen_scan(const Matrix& a, std::uint32_t scan_bound) {
    if (a.rows() != a.cols()) raise(Errc::not_square, "eigenvalues need a square matrix");
    const PrimeField& f = a.field();
    if (f.modulus() > scan_bound) {
        raise(Errc::scan_bound_exceeded,
              "field has " + std::to_string(f.modulus()) +
                  " elements, scan bound is " + std::to_string(scan_bound));
    }
    const std::size_t n = a.rows();
    std::vector<Eigenpair> out;
    for (std::uint32_t lam = 0; lam < f.modulus(); ++lam) {
        Matrix shifted = a;
        for (std::size_t i = 0; i < n; ++i) {
            shifted.set(i, i, f.sub(shifted.at(i, i), static_cast<Symbol>(lam)));
        }
        auto basis = nullspace_basis(shifted);
        if (basis.empty()) continue;
        Matrix space(f, n, basis.size());
        for (std::size_t c = 0; c < basis.size(); ++c) {
            std::vector<Symbol>& v = basis[c];
            Symbol lead = 0;
            for (Symbol s : v) {
                if (s != 0) {
                    lead = s;
                    break;
                }
            }
            const Symbol norm = f.inv(lead);
            for (std::size_t r = 0; r < n; ++r) {
                space.set(r, c, f.mul(v[r], norm));
            }
        }
        out.push_back({static_cast<Symbol>(lam), std::move(space)});
    }
    return out;
}

}  // namespace mdsr
