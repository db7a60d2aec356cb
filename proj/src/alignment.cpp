#include "mdsr/alignment.hpp"

#include <string>
#include <utility>

#include "mdsr/errors.hpp"
#include "mdsr/rng.hpp"

namespace mdsr {

namespace {

constexpr std::uint32_t kRetryLimit = 64;

Matrix random_invertible(Rng& rng, const PrimeField& f, std::size_t n) {
    while (true) {
        Matrix m(f, n, n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                m.set(r, c, rng.uniform(f));
            }
        }
        if (rank(m) == n) return m;
    }
}

/// v is a column; true when m v stays on the line spanned by v.
bool is_eigen_column(const Matrix& m, const Matrix& v) {
    Matrix image = matmul(m, v);
    Matrix pair(m.field(), v.rows(), 2);
    for (std::size_t r = 0; r < v.rows(); ++r) {
        pair.set(r, 0, v.at(r, 0));
        pair.set(r, 1, image.at(r, 0));
    }
    return rank(pair) == 1;
}

/// Columns of the eigenspaces of `of`, filtered to those that are NOT
/// eigenvectors of `not_of`.
std::vector<Matrix> eigen_candidates(const Matrix& of, const Matrix& not_of) {
    std::vector<Matrix> out;
    for (const Eigenpair& pair : eigen_scan(of)) {
        for (std::size_t c = 0; c < pair.space.cols(); ++c) {
            Matrix column(of.field(), of.rows(), 1);
            for (std::size_t r = 0; r < of.rows(); ++r) {
                column.set(r, 0, pair.space.at(r, c));
            }
            if (!is_eigen_column(not_of, column)) out.push_back(column);
        }
    }
    return out;
}

Matrix slot_kron(const Matrix& filler, const Matrix& factor, std::uint32_t slot,
                 std::uint32_t count) {
    std::vector<Matrix> chain;
    chain.reserve(count);
    for (std::uint32_t t = 1; t <= count; ++t) {
        chain.push_back(t == slot ? factor : filler);
    }
    return kron(chain);
}

}  // namespace

const char* preset_name(Preset p) {
    switch (p) {
        case Preset::permutation: return "permutation";
        case Preset::ergodic: return "ergodic";
        case Preset::search: return "search";
    }
    return "unknown";
}

std::optional<Preset> preset_from_name(std::string_view name) {
    if (name == "permutation") return Preset::permutation;
    if (name == "ergodic") return Preset::ergodic;
    if (name == "search") return Preset::search;
    return std::nullopt;
}

AlignmentInstance solve_problem1(std::uint32_t q) {
    PrimeField f(q);
    Rng rng(0x70726f626c656d31ULL ^ q);
    for (std::uint32_t attempt = 0; attempt < kRetryLimit; ++attempt) {
        Matrix h1 = random_invertible(rng, f, 2);
        Matrix h2 = random_invertible(rng, f, 2);
        std::vector<Matrix> v1s = eigen_candidates(h2.transposed(), h1.transposed());
        std::vector<Matrix> v2s = eigen_candidates(h1.transposed(), h2.transposed());
        if (v1s.empty() || v2s.empty()) continue;
        AlignmentInstance inst;
        inst.constraints = 2;
        inst.size = 2;
        inst.h = {std::move(h1), std::move(h2)};
        inst.v = {v1s.front().transposed(), v2s.front().transposed()};
        if (verify_instance(inst)) return inst;
    }
    raise(Errc::no_solution_found,
          "no aligned pair in " + std::to_string(kRetryLimit) +
              " draws over F_" + std::to_string(q) + "; use a larger field");
}

SimpleTriple solve_simple(std::uint32_t q, Preset preset) {
    PrimeField f(q);
    switch (preset) {
        case Preset::permutation:
            return {Matrix::from_rows(f, {{1, 0}}), Matrix::identity(f, 2),
                    Matrix::from_rows(f, {{0, 1}, {1, 0}})};
        case Preset::ergodic:
            if (q == 2) {
                raise(Errc::bad_field,
                      "diag(1,-1) is the identity over F_2; use q >= 3");
            }
            return {Matrix::from_rows(f, {{1, -1}}), Matrix::identity(f, 2),
                    Matrix::from_rows(f, {{1, 0}, {0, -1}})};
        case Preset::search: {
            Rng rng(0x73696d706c65ULL ^ q);
            for (std::uint32_t attempt = 0; attempt < kRetryLimit; ++attempt) {
                Matrix g0 = random_invertible(rng, f, 2);
                Matrix g1 = random_invertible(rng, f, 2);
                std::vector<Matrix> u0s =
                    eigen_candidates(g0.transposed(), g1.transposed());
                if (u0s.empty()) continue;
                return {u0s.front().transposed(), std::move(g0), std::move(g1)};
            }
            raise(Errc::no_solution_found,
                  "no basis triple in " + std::to_string(kRetryLimit) +
                      " draws over F_" + std::to_string(q));
        }
    }
    raise(Errc::bad_field, "unknown preset");
}

AlignmentInstance solve_problem2(std::uint32_t n_constraints, std::uint32_t q,
                                 Preset preset) {
    if (n_constraints < 2) {
        raise(Errc::dimension_mismatch, "need at least two constraints");
    }
    if (n_constraints > 20) {
        raise(Errc::dimension_mismatch, "constraint count too large for L = 2^N");
    }
    SimpleTriple triple = solve_simple(q, preset);
    const PrimeField& f = triple.u0.field();
    const Matrix u1 = Matrix::identity(f, 2);
    AlignmentInstance inst;
    inst.constraints = n_constraints;
    inst.size = std::uint64_t{1} << n_constraints;
    for (std::uint32_t i = 1; i <= n_constraints; ++i) {
        inst.h.push_back(slot_kron(triple.g0, triple.g1, i, n_constraints));
        inst.v.push_back(slot_kron(u1, triple.u0, i, n_constraints));
    }
    return inst;
}

bool verify_instance(const AlignmentInstance& inst) {
    const std::uint32_t n = inst.constraints;
    if (n < 2 || inst.h.size() != n || inst.v.size() != n) {
        raise(Errc::dimension_mismatch, "malformed instance");
    }
    const std::uint64_t L = inst.size;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (inst.h[i].rows() != L || inst.h[i].cols() != L) {
            raise(Errc::dimension_mismatch, "constraint matrices must be L x L");
        }
        if (inst.v[i].rows() != L / 2 || inst.v[i].cols() != L) {
            raise(Errc::dimension_mismatch, "download matrices must be L/2 x L");
        }
    }
    for (std::uint32_t i = 0; i < n; ++i) {
        if (rank(inst.h[i]) != L) return false;
        if (rank(inst.v[i]) != L / 2) return false;
        for (std::uint32_t j = 0; j < n; ++j) {
            if (j == i) continue;
            if (!rowspan_equal(matmul(inst.v[i], inst.h[j]), inst.v[i])) return false;
        }
        if (!rowspan_independent(inst.v[i], matmul(inst.v[i], inst.h[i]))) {
            return false;
        }
    }
    return true;
}

TensorBasis tensor_basis(const PrimeField& field, Preset preset, std::uint32_t base) {
    if (base < 2) raise(Errc::bad_field, "basis needs base >= 2");
    if (preset == Preset::permutation) {
        Matrix u0(field, 1, base);
        u0.set(0, 0, 1);
        std::vector<Matrix> g;
        for (std::uint32_t m = 0; m < base; ++m) {
            // cyclic shift by m: row i has its 1 at column (i + m) mod base
            std::vector<std::size_t> map(base);
            for (std::uint32_t i = 0; i < base; ++i) map[i] = (i + m) % base + 1;
            g.push_back(Matrix::permutation(field, map));
        }
        return {std::move(u0), Matrix::identity(field, base), std::move(g)};
    }
    if (base != 2) {
        raise(Errc::bad_field,
              std::string(preset_name(preset)) + " basis is two-dimensional only");
    }
    SimpleTriple triple = solve_simple(field.modulus(), preset);
    return {triple.u0, Matrix::identity(field, 2), {triple.g0, triple.g1}};
}

}  // namespace mdsr
