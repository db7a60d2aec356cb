#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mdsr/field.hpp"
#include "mdsr/indexing.hpp"
#include "mdsr/matrix.hpp"

namespace mdsr {

/// Wire identifiers; the first four appear in chunk headers.
enum class Construction : std::uint8_t {
    random_permutation = 0,
    explicit_2parity = 1,
    explicit_3parity = 2,
    tensor = 3,
    custom = 255,
};

const char* construction_name(Construction c);
std::optional<Construction> construction_from_name(std::string_view name);

/// Basis matrices for the tensor-product builder: u0 is 1 x b, u1 and every
/// g[m] are full-rank b x b, where b = n - k.
struct TensorBasis {
    Matrix u0;
    Matrix u1;
    std::vector<Matrix> g;
};

struct MdsReport {
    bool verified = false;
    std::uint64_t subsets_checked = 0;
    std::optional<std::vector<std::uint32_t>> failing_subset;
    std::uint32_t resamples_used = 0;
};

/// An (n,k) systematic code over F_q storing L = (n-k)^k symbols per node.
/// Parity node j holds sum_i C_{j,i} a_i; the C blocks live here together
/// with the scalar table lambda_{j,i} and, for tensor codes, the repair
/// matrices. Immutable once built.
class CodeSpec {
public:
    /// lambda_{j,i} drawn uniformly from the nonzero field elements;
    /// C_{j,i} = lambda_{j,i} P_i^{j-k-1}. Redrawn until the code verifies
    /// as MDS, at most 32 draws, then ResampleLimitExceeded.
    static CodeSpec build_random(std::uint32_t n, std::uint32_t k, std::uint32_t q,
                                 std::uint64_t seed);

    /// n = k+2, C_{k+1,i} = I, C_{k+2,i} = i * P_i. Needs q >= 2k+1 so the
    /// scalars 1..k stay distinct with pairwise nonzero sums.
    static CodeSpec build_explicit_2parity(std::uint32_t k, std::uint32_t q);

    /// n = k+3, C_{k+1+r,i} = (i * P_i)^r for r = 0,1,2. Needs q >= 2k+1
    /// and q != 1 (mod 3) so x^3 = 1 has no root besides 1.
    static CodeSpec build_explicit_3parity(std::uint32_t k, std::uint32_t q);

    /// C_{k+1,j} = lambda * I; C_{k+1+r,j} = lambda * g0^(j-1) (x) g_r (x)
    /// g0^(k-j) for r >= 1; repair matrix V_j = u1^(j-1) (x) u0 (x) u1^(k-j).
    /// Scalars sampled from seed until the code verifies as MDS.
    static CodeSpec build_tensor(std::uint32_t n, std::uint32_t k, std::uint32_t q,
                                 const TensorBasis& basis, std::uint64_t seed);

    /// Deterministic rebuilds from a stored scalar table (chunk headers).
    static CodeSpec random_from_lambdas(std::uint32_t n, std::uint32_t k,
                                        std::uint32_t q, std::uint64_t seed,
                                        std::vector<Symbol> lambdas);
    static CodeSpec tensor_from_lambdas(std::uint32_t n, std::uint32_t k,
                                        std::uint32_t q, const TensorBasis& basis,
                                        std::uint64_t seed,
                                        std::vector<Symbol> lambdas);

    /// Arbitrary parity blocks (row-major by parity node, then source); used
    /// for hand-built and adversarial codes. Not serializable. repair, when
    /// given, overrides the default digit-set repair matrices. L is inferred
    /// from the blocks and may differ from (n-k)^k, in which case repair
    /// matrices are mandatory.
    static CodeSpec from_blocks(std::uint32_t n, std::uint32_t k, PrimeField field,
                                std::vector<Matrix> parity_blocks,
                                std::vector<Matrix> repair = {});

    std::uint32_t n() const { return n_; }
    std::uint32_t k() const { return k_; }
    std::uint32_t parity_count() const { return n_ - k_; }
    const PrimeField& field() const { return field_; }
    const IndexSystem& index() const { return index_; }
    std::uint64_t length() const { return length_; }
    Construction construction() const { return construction_; }
    std::uint64_t seed() const { return seed_; }
    std::uint32_t resamples_used() const { return resamples_used_; }

    /// C blocks are only materialized for parity nodes (systematic rows are
    /// implicitly identity/zero); j in k+1..n, i in 1..k.
    const Matrix& submatrix(std::uint32_t j, std::uint32_t i) const;
    Symbol lambda_of(std::uint32_t j, std::uint32_t i) const;
    const std::vector<Symbol>& lambdas() const { return lambdas_; }

    /// Nonempty for tensor codes and for custom codes built with overrides;
    /// repair_matrix() falls back to digit-set rows when empty.
    const std::vector<Matrix>& stored_repair() const { return repair_; }

    /// Closed-form digit-shift repair applies; false for tensor and custom
    /// codes, which go through the generic span-cancellation path.
    bool permutation_structured() const;

    /// construction id, n, k (1 byte each after the id), q (4 LE), seed
    /// (8 LE), scalar table row-major (2 LE each). Custom codes have no
    /// canonical form.
    std::vector<std::uint8_t> canonical_bytes() const;

private:
    CodeSpec(Construction c, std::uint32_t n, std::uint32_t k, PrimeField field,
             std::uint64_t seed, std::vector<Symbol> lambdas,
             std::vector<Matrix> blocks, std::vector<Matrix> repair,
             std::uint32_t resamples, std::uint64_t length);

    Construction construction_;
    std::uint32_t n_;
    std::uint32_t k_;
    PrimeField field_;
    IndexSystem index_;
    std::uint64_t length_;
    std::uint64_t seed_;
    std::vector<Symbol> lambdas_;
    std::vector<Matrix> blocks_;
    std::vector<Matrix> repair_;
    std::uint32_t resamples_used_;
};

/// Permutation matrix P_i^r: row m is e(digit_shift(m, i, r)).
Matrix build_P(const PrimeField& field, const IndexSystem& sys, std::uint32_t i,
               std::uint32_t r);

/// Repair matrix V_l for a systematic node l. Permutation-structured codes
/// use the rows {e(m): digit l of phi(m) is 0} in ascending m; tensor and
/// custom codes return their stored matrices.
Matrix repair_matrix(const CodeSpec& code, std::uint32_t l);

/// Checks every k-subset of nodes; the systematic structure reduces each
/// check to a rank test on the complementary parity minor. Stops at the
/// first failing subset.
MdsReport verify_mds(const CodeSpec& code);

/// Alignment: rowspan(V_l C_{j,i}) = rowspan(V_l) for every parity j and
/// every source i != l. Reconstruction: the V_l C_{j,l} stacked over parity
/// j have rank L.
bool verify_repair_conditions(const CodeSpec& code);

}  // namespace mdsr
