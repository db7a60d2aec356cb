#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mdsr/codes.hpp"
#include "mdsr/matrix.hpp"

namespace mdsr {

/// N full-rank L x L constraint matrices h[i] together with L/2 x L
/// download matrices v[i] such that every v[i] h[j] with j != i falls back
/// into rowspan(v[i]) while v[i] h[i] escapes it.
struct AlignmentInstance {
    std::uint32_t constraints = 0;  // N
    std::uint64_t size = 0;         // L
    std::vector<Matrix> h;
    std::vector<Matrix> v;
};

/// The 2x2 seed of the Kronecker constructions: rowspan(u0 g0) = rowspan(u0)
/// and u0 g1 independent of u0.
struct SimpleTriple {
    Matrix u0;
    Matrix g0;
    Matrix g1;
};

enum class Preset { permutation, ergodic, search };

const char* preset_name(Preset p);
std::optional<Preset> preset_from_name(std::string_view name);

/// Two constraints at L = 2: each v[i] is a transposed eigenvector of the
/// other constraint matrix. Seeded draws, at most 64; guaranteed to land
/// for q >= 5, NoSolutionFound signals the field is too small.
AlignmentInstance solve_problem1(std::uint32_t q);

/// permutation: u0 = (1 0), g1 swaps; ergodic: u0 = (1 -1), g1 = diag(1,-1)
/// (needs q >= 3); search: seeded eigenvector hunt.
SimpleTriple solve_simple(std::uint32_t q, Preset preset);

/// N constraints at L = 2^N by Kronecker stitching: h[i] puts g1 at slot i
/// and g0 elsewhere; v[i] puts u0 at slot i and the identity elsewhere.
AlignmentInstance solve_problem2(std::uint32_t n_constraints, std::uint32_t q,
                                 Preset preset);

bool verify_instance(const AlignmentInstance& inst);

/// Widens a preset to base b = n-k for the tensor code builder: u0 is 1 x b,
/// u1 b x b, g has b entries. The permutation preset generalizes to cyclic
/// shifts for any base; ergodic and search are two-dimensional.
TensorBasis tensor_basis(const PrimeField& field, Preset preset, std::uint32_t base);

}  // namespace mdsr
