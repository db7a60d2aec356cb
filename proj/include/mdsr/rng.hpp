#pragma once

#include <cstdint>
#include <random>

#include "mdsr/field.hpp"

namespace mdsr {

/// Seeded draws over a prime field. mt19937_64 output is pinned by the
/// standard and the range reduction is explicit, so a given seed produces
/// the same code on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    Symbol uniform(const PrimeField& f) {
        return static_cast<Symbol>(next() % f.modulus());
    }

    Symbol nonzero(const PrimeField& f) {
        return static_cast<Symbol>(1 + next() % (f.modulus() - 1));
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace mdsr
