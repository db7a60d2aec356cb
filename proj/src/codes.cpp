#include "mdsr/codes.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "mdsr/errors.hpp"
#include "mdsr/rng.hpp"

namespace mdsr {

namespace {

void validate_shape(std::uint32_t n, std::uint32_t k) {
    if (k < 1) raise(Errc::dimension_mismatch, "need at least one systematic node");
    if (n <= k) raise(Errc::dimension_mismatch, "need n > k");
    if (n - k < 2) raise(Errc::dimension_mismatch, "need at least two parity nodes");
    if (n > 255) raise(Errc::dimension_mismatch, "node indices must fit one byte");
}

std::vector<Matrix> permutation_blocks(const PrimeField& f, const IndexSystem& idx,
                                       const std::vector<Symbol>& lambdas) {
    const std::uint32_t b = idx.base();
    const std::uint32_t k = idx.k();
    std::vector<Matrix> powers;  // P_i^r at index (i-1)*b + r
    powers.reserve(static_cast<std::size_t>(k) * b);
    for (std::uint32_t i = 1; i <= k; ++i) {
        for (std::uint32_t r = 0; r < b; ++r) {
            powers.push_back(build_P(f, idx, i, r));
        }
    }
    std::vector<Matrix> blocks;
    blocks.reserve(lambdas.size());
    for (std::uint32_t r = 0; r < b; ++r) {
        for (std::uint32_t i = 1; i <= k; ++i) {
            blocks.push_back(scale(lambdas[r * k + (i - 1)], powers[(i - 1) * b + r]));
        }
    }
    return blocks;
}

void validate_lambdas(const PrimeField& f, std::uint32_t n, std::uint32_t k,
                      const std::vector<Symbol>& lambdas) {
    if (lambdas.size() != static_cast<std::size_t>(n - k) * k) {
        raise(Errc::bad_format, "scalar table has the wrong size");
    }
    for (Symbol l : lambdas) {
        if (l == 0 || l >= f.modulus()) {
            raise(Errc::bad_format, "scalar table entry outside 1..q-1");
        }
    }
}

void validate_basis(const PrimeField& f, std::uint32_t b, const TensorBasis& basis) {
    if (!(basis.u0.field() == f) || !(basis.u1.field() == f)) {
        raise(Errc::field_mismatch, "basis matrices live over a different field");
    }
    if (basis.u0.rows() != 1 || basis.u0.cols() != b) {
        raise(Errc::framework_condition_violated, "u0 must be 1 x (n-k)");
    }
    if (rank(basis.u0) != 1) {
        raise(Errc::framework_condition_violated, "u0 must be nonzero");
    }
    if (basis.u1.rows() != b || basis.u1.cols() != b || rank(basis.u1) != b) {
        raise(Errc::framework_condition_violated, "u1 must be full-rank (n-k) x (n-k)");
    }
    if (basis.g.size() != b) {
        raise(Errc::framework_condition_violated, "need n-k basis matrices g");
    }
    for (std::size_t m = 0; m < basis.g.size(); ++m) {
        const Matrix& g = basis.g[m];
        if (!(g.field() == f)) {
            raise(Errc::field_mismatch, "basis matrices live over a different field");
        }
        if (g.rows() != b || g.cols() != b || rank(g) != b) {
            raise(Errc::framework_condition_violated,
                  "g" + std::to_string(m) + " must be full-rank (n-k) x (n-k)");
        }
    }
    if (!rowspan_equal(matmul(basis.u0, basis.g[0]), basis.u0)) {
        raise(Errc::framework_condition_violated, "u0 g0 must span u0");
    }
    Matrix stacked = basis.u0;
    for (std::uint32_t m = 1; m < b; ++m) {
        stacked = stack(stacked, matmul(basis.u0, basis.g[m]));
    }
    if (rank(stacked) != b) {
        raise(Errc::framework_condition_violated,
              "u0, u0 g1, ..., u0 g_{n-k-1} must have rank n-k");
    }
}

/// Kronecker chain with `factor` at 1-based slot j and `filler` elsewhere.
Matrix slot_kron(const Matrix& filler, const Matrix& factor, std::uint32_t j,
                 std::uint32_t k) {
    std::vector<Matrix> chain;
    chain.reserve(k);
    for (std::uint32_t t = 1; t <= k; ++t) {
        chain.push_back(t == j ? factor : filler);
    }
    return kron(chain);
}

std::vector<Matrix> tensor_blocks(const PrimeField& f, const IndexSystem& idx,
                                  const TensorBasis& basis,
                                  const std::vector<Symbol>& lambdas) {
    const std::uint32_t b = idx.base();
    const std::uint32_t k = idx.k();
    const std::size_t L = idx.length();
    std::vector<Matrix> blocks;
    blocks.reserve(lambdas.size());
    for (std::uint32_t r = 0; r < b; ++r) {
        for (std::uint32_t j = 1; j <= k; ++j) {
            Matrix base = r == 0 ? Matrix::identity(f, L)
                                 : slot_kron(basis.g[0], basis.g[r], j, k);
            blocks.push_back(scale(lambdas[r * k + (j - 1)], base));
        }
    }
    return blocks;
}

std::vector<Matrix> tensor_repair(const IndexSystem& idx, const TensorBasis& basis) {
    std::vector<Matrix> repair;
    repair.reserve(idx.k());
    for (std::uint32_t j = 1; j <= idx.k(); ++j) {
        repair.push_back(slot_kron(basis.u1, basis.u0, j, idx.k()));
    }
    return repair;
}

void append_le(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) {
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
}

}  // namespace

const char* construction_name(Construction c) {
    switch (c) {
        case Construction::random_permutation: return "random";
        case Construction::explicit_2parity: return "explicit2";
        case Construction::explicit_3parity: return "explicit3";
        case Construction::tensor: return "tensor";
        case Construction::custom: return "custom";
    }
    return "unknown";
}

std::optional<Construction> construction_from_name(std::string_view name) {
    if (name == "random") return Construction::random_permutation;
    if (name == "explicit2") return Construction::explicit_2parity;
    if (name == "explicit3") return Construction::explicit_3parity;
    if (name == "tensor") return Construction::tensor;
    return std::nullopt;
}

CodeSpec::CodeSpec(Construction c, std::uint32_t n, std::uint32_t k, PrimeField field,
                   std::uint64_t seed, std::vector<Symbol> lambdas,
                   std::vector<Matrix> blocks, std::vector<Matrix> repair,
                   std::uint32_t resamples, std::uint64_t length)
    : construction_(c),
      n_(n),
      k_(k),
      field_(field),
      index_(n - k, k),
      length_(length),
      seed_(seed),
      lambdas_(std::move(lambdas)),
      blocks_(std::move(blocks)),
      repair_(std::move(repair)),
      resamples_used_(resamples) {}

CodeSpec CodeSpec::build_random(std::uint32_t n, std::uint32_t k, std::uint32_t q,
                                std::uint64_t seed) {
    validate_shape(n, k);
    PrimeField f(q);
    IndexSystem idx(n - k, k);
    Rng rng(seed);
    const std::size_t count = static_cast<std::size_t>(n - k) * k;
    for (std::uint32_t attempt = 0; attempt < 32; ++attempt) {
        std::vector<Symbol> lambdas(count);
        for (Symbol& l : lambdas) l = rng.nonzero(f);
        CodeSpec candidate(Construction::random_permutation, n, k, f, seed,
                           std::move(lambdas), {}, {}, attempt, idx.length());
        candidate.blocks_ = permutation_blocks(f, idx, candidate.lambdas_);
        if (verify_mds(candidate).verified) return candidate;
    }
    raise(Errc::resample_limit_exceeded,
          "no MDS draw in 32 attempts over F_" + std::to_string(q) +
              "; use a larger field");
}

CodeSpec CodeSpec::build_explicit_2parity(std::uint32_t k, std::uint32_t q) {
    const std::uint32_t n = k + 2;
    validate_shape(n, k);
    PrimeField f(q);
    if (q < 2 * k + 1) {
        raise(Errc::field_too_small, "need q >= " + std::to_string(2 * k + 1) +
                                         " for distinct scalars with nonzero sums");
    }
    IndexSystem idx(2, k);
    std::vector<Symbol> lambdas(2 * static_cast<std::size_t>(k));
    for (std::uint32_t i = 1; i <= k; ++i) {
        lambdas[i - 1] = 1;
        lambdas[k + i - 1] = static_cast<Symbol>(i);
    }
    std::vector<Matrix> blocks = permutation_blocks(f, idx, lambdas);
    return CodeSpec(Construction::explicit_2parity, n, k, f, 0, std::move(lambdas),
                    std::move(blocks), {}, 0, idx.length());
}

CodeSpec CodeSpec::build_explicit_3parity(std::uint32_t k, std::uint32_t q) {
    const std::uint32_t n = k + 3;
    validate_shape(n, k);
    PrimeField f(q);
    if (q < 2 * k + 1) {
        raise(Errc::field_too_small, "need q >= " + std::to_string(2 * k + 1) +
                                         " for distinct scalars with nonzero sums");
    }
    if (q % 3 == 1) {
        raise(Errc::bad_field_for_cube_roots,
              "F_" + std::to_string(q) + " contains nontrivial cube roots of 1");
    }
    IndexSystem idx(3, k);
    std::vector<Symbol> lambdas(3 * static_cast<std::size_t>(k));
    for (std::uint32_t i = 1; i <= k; ++i) {
        for (std::uint32_t r = 0; r < 3; ++r) {
            lambdas[r * k + i - 1] = f.pow(static_cast<Symbol>(i), r);
        }
    }
    std::vector<Matrix> blocks = permutation_blocks(f, idx, lambdas);
    return CodeSpec(Construction::explicit_3parity, n, k, f, 0, std::move(lambdas),
                    std::move(blocks), {}, 0, idx.length());
}

CodeSpec CodeSpec::build_tensor(std::uint32_t n, std::uint32_t k, std::uint32_t q,
                                const TensorBasis& basis, std::uint64_t seed) {
    validate_shape(n, k);
    PrimeField f(q);
    validate_basis(f, n - k, basis);
    IndexSystem idx(n - k, k);
    std::vector<Matrix> repair = tensor_repair(idx, basis);
    Rng rng(seed);
    const std::size_t count = static_cast<std::size_t>(n - k) * k;
    for (std::uint32_t attempt = 0; attempt < 32; ++attempt) {
        std::vector<Symbol> lambdas(count);
        for (Symbol& l : lambdas) l = rng.nonzero(f);
        CodeSpec candidate(Construction::tensor, n, k, f, seed, std::move(lambdas),
                           {}, repair, attempt, idx.length());
        candidate.blocks_ = tensor_blocks(f, idx, basis, candidate.lambdas_);
        if (verify_mds(candidate).verified) return candidate;
    }
    raise(Errc::resample_limit_exceeded,
          "no MDS draw in 32 attempts over F_" + std::to_string(q) +
              "; use a larger field");
}

CodeSpec CodeSpec::random_from_lambdas(std::uint32_t n, std::uint32_t k,
                                       std::uint32_t q, std::uint64_t seed,
                                       std::vector<Symbol> lambdas) {
    validate_shape(n, k);
    PrimeField f(q);
    validate_lambdas(f, n, k, lambdas);
    IndexSystem idx(n - k, k);
    std::vector<Matrix> blocks = permutation_blocks(f, idx, lambdas);
    return CodeSpec(Construction::random_permutation, n, k, f, seed,
                    std::move(lambdas), std::move(blocks), {}, 0, idx.length());
}

CodeSpec CodeSpec::tensor_from_lambdas(std::uint32_t n, std::uint32_t k,
                                       std::uint32_t q, const TensorBasis& basis,
                                       std::uint64_t seed,
                                       std::vector<Symbol> lambdas) {
    validate_shape(n, k);
    PrimeField f(q);
    validate_basis(f, n - k, basis);
    validate_lambdas(f, n, k, lambdas);
    IndexSystem idx(n - k, k);
    std::vector<Matrix> blocks = tensor_blocks(f, idx, basis, lambdas);
    return CodeSpec(Construction::tensor, n, k, f, seed, std::move(lambdas),
                    std::move(blocks), tensor_repair(idx, basis), 0, idx.length());
}

CodeSpec CodeSpec::from_blocks(std::uint32_t n, std::uint32_t k, PrimeField field,
                               std::vector<Matrix> parity_blocks,
                               std::vector<Matrix> repair) {
    validate_shape(n, k);
    if (parity_blocks.size() != static_cast<std::size_t>(n - k) * k) {
        raise(Errc::dimension_mismatch, "need (n-k)*k parity blocks");
    }
    const std::size_t L = parity_blocks.front().rows();
    for (const Matrix& m : parity_blocks) {
        if (!(m.field() == field)) raise(Errc::field_mismatch, "block field differs");
        if (m.rows() != L || m.cols() != L) {
            raise(Errc::dimension_mismatch, "parity blocks must all be L x L");
        }
    }
    if (!repair.empty()) {
        if (repair.size() != k) {
            raise(Errc::dimension_mismatch, "need one repair matrix per source");
        }
        for (const Matrix& m : repair) {
            if (!(m.field() == field)) {
                raise(Errc::field_mismatch, "repair matrix field differs");
            }
            if (m.cols() != L) {
                raise(Errc::dimension_mismatch, "repair matrices must have L columns");
            }
        }
    } else if (L != IndexSystem(n - k, k).length()) {
        raise(Errc::dimension_mismatch,
              "custom codes with L != (n-k)^k need explicit repair matrices");
    }
    return CodeSpec(Construction::custom, n, k, field, 0, {},
                    std::move(parity_blocks), std::move(repair), 0, L);
}

const Matrix& CodeSpec::submatrix(std::uint32_t j, std::uint32_t i) const {
    if (j <= k_ || j > n_) {
        raise(Errc::bad_node, "parity node index outside k+1..n");
    }
    if (i < 1 || i > k_) {
        raise(Errc::bad_node, "source index outside 1..k");
    }
    return blocks_[static_cast<std::size_t>(j - k_ - 1) * k_ + (i - 1)];
}

Symbol CodeSpec::lambda_of(std::uint32_t j, std::uint32_t i) const {
    if (lambdas_.empty()) {
        raise(Errc::bad_format, "this code has no scalar table");
    }
    if (j <= k_ || j > n_ || i < 1 || i > k_) {
        raise(Errc::bad_node, "scalar index outside the parity table");
    }
    return lambdas_[static_cast<std::size_t>(j - k_ - 1) * k_ + (i - 1)];
}

bool CodeSpec::permutation_structured() const {
    return construction_ == Construction::random_permutation ||
           construction_ == Construction::explicit_2parity ||
           construction_ == Construction::explicit_3parity;
}

std::vector<std::uint8_t> CodeSpec::canonical_bytes() const {
    if (construction_ == Construction::custom) {
        raise(Errc::bad_format, "custom codes have no canonical form");
    }
    std::vector<std::uint8_t> out;
    out.reserve(15 + 2 * lambdas_.size());
    out.push_back(static_cast<std::uint8_t>(construction_));
    out.push_back(static_cast<std::uint8_t>(n_));
    out.push_back(static_cast<std::uint8_t>(k_));
    append_le(out, field_.modulus(), 4);
    append_le(out, seed_, 8);
    for (Symbol l : lambdas_) append_le(out, l, 2);
    return out;
}

Matrix build_P(const PrimeField& field, const IndexSystem& sys, std::uint32_t i,
               std::uint32_t r) {
    return Matrix::permutation(field, sys.shift_map(i, r));
}

Matrix repair_matrix(const CodeSpec& code, std::uint32_t l) {
    if (l < 1 || l > code.k()) {
        raise(Errc::not_systematic,
              "repair matrices exist for systematic nodes 1.." +
                  std::to_string(code.k()) + " only");
    }
    if (!code.stored_repair().empty()) {
        return code.stored_repair()[l - 1];
    }
    const IndexSystem& idx = code.index();
    const std::uint64_t L = idx.length();
    if (L != code.length()) {
        raise(Errc::dimension_mismatch,
              "no stored repair matrices and no digit structure to derive them");
    }
    // Digit-set default: rows e(m) with digit l of phi(m) equal to 0.
    Matrix v(code.field(), L / idx.base(), L);
    std::size_t row = 0;
    for (std::uint64_t m = 1; m <= L; ++m) {
        if (idx.phi(m)[l - 1] == 0) {
            v.set(row, m - 1, 1);
            ++row;
        }
    }
    return v;
}

MdsReport verify_mds(const CodeSpec& code) {
    const std::uint32_t n = code.n();
    const std::uint32_t k = code.k();
    const std::uint64_t L = code.length();
    const PrimeField& f = code.field();
    MdsReport report;
    report.resamples_used = code.resamples_used();
    std::vector<std::uint32_t> subset(k);
    for (std::uint32_t i = 0; i < k; ++i) subset[i] = i + 1;
    while (true) {
        ++report.subsets_checked;
        std::vector<std::uint32_t> parities;
        std::vector<bool> present(k + 1, false);
        for (std::uint32_t node : subset) {
            if (node > k) {
                parities.push_back(node);
            } else {
                present[node] = true;
            }
        }
        std::vector<std::uint32_t> missing;
        for (std::uint32_t i = 1; i <= k; ++i) {
            if (!present[i]) missing.push_back(i);
        }
        const std::size_t p = parities.size();
        if (p > 0) {
            Matrix minor(f, p * L, p * L);
            for (std::size_t bj = 0; bj < p; ++bj) {
                for (std::size_t bi = 0; bi < p; ++bi) {
                    const Matrix& block = code.submatrix(parities[bj], missing[bi]);
                    for (std::size_t r = 0; r < L; ++r) {
                        for (std::size_t c = 0; c < L; ++c) {
                            minor.set(bj * L + r, bi * L + c, block.at(r, c));
                        }
                    }
                }
            }
            if (rank(minor) != p * L) {
                report.verified = false;
                report.failing_subset = subset;
                return report;
            }
        }
        // advance to the next k-combination of 1..n
        std::size_t pos = k;
        while (pos > 0 && subset[pos - 1] == n - (k - pos)) --pos;
        if (pos == 0) break;
        ++subset[pos - 1];
        for (std::size_t t = pos; t < k; ++t) subset[t] = subset[t - 1] + 1;
    }
    report.verified = true;
    return report;
}

bool verify_repair_conditions(const CodeSpec& code) {
    const std::uint64_t L = code.length();
    for (std::uint32_t l = 1; l <= code.k(); ++l) {
        const Matrix v = repair_matrix(code, l);
        std::vector<Matrix> own_blocks;
        for (std::uint32_t j = code.k() + 1; j <= code.n(); ++j) {
            for (std::uint32_t i = 1; i <= code.k(); ++i) {
                const Matrix vc = matmul(v, code.submatrix(j, i));
                if (i == l) {
                    own_blocks.push_back(vc);
                } else if (!rowspan_equal(vc, v)) {
                    return false;
                }
            }
        }
        if (rank(stack(own_blocks)) != L) return false;
    }
    return true;
}

}  // namespace mdsr
