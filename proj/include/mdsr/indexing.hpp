#pragma once

#include <cstdint>
#include <vector>

namespace mdsr {

/// Base-b positional indexing of the symbols inside a node vector.
/// Vector indices m are 1-based (1..L, L = b^k); digit vectors have k
/// digits, digit 1 being the most significant.
class IndexSystem {
public:
    /// base = n - k of the code, so base >= 2; k >= 1.
    IndexSystem(std::uint32_t base, std::uint32_t k);

    std::uint32_t base() const { return base_; }
    std::uint32_t k() const { return k_; }
    std::uint64_t length() const { return length_; }

    /// Digits (r_1,...,r_k) of m-1 in base b, r_1 most significant.
    std::vector<std::uint32_t> phi(std::uint64_t m) const;

    /// The <r_1,...,r_k> notation: inverse of phi, returning a 1-based m.
    std::uint64_t phi_inv(const std::vector<std::uint32_t>& digits) const;

    /// Replaces digit i of phi(m) by (digit + r) mod base. Positions i are
    /// 1-based; r in [0, base). digit_shift(m, i, 1) iterated base times is
    /// the identity.
    std::uint64_t digit_shift(std::uint64_t m, std::uint32_t i, std::uint32_t r) const;

    /// The whole map m -> digit_shift(m, i, r) as a 1-based table of
    /// length L; each such table is a permutation of 1..L.
    std::vector<std::size_t> shift_map(std::uint32_t i, std::uint32_t r) const;

private:
    std::uint32_t base_;
    std::uint32_t k_;
    std::uint64_t length_;
};

}  // namespace mdsr
