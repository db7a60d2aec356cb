#pragma once

#include <cstdint>

#include "mdsr/errors.hpp"

namespace mdsr {

/// One residue modulo a prime q <= 65521, so every symbol fits a
/// 2-byte storage cell.
using Symbol = std::uint16_t;

inline constexpr std::uint32_t kMaxModulus = 65521;  // largest 16-bit prime

struct FieldElement;

/// Arithmetic in the prime field F_q. Immutable after construction and
/// cheap to copy; operations take and return raw residues in [0, q).
class PrimeField {
public:
    /// Validates 2 <= q <= 65521 and primality (trial division).
    explicit PrimeField(std::uint32_t q);

    std::uint32_t modulus() const { return q_; }

    bool operator==(const PrimeField& other) const = default;

    Symbol reduce(std::uint64_t v) const { return static_cast<Symbol>(v % q_); }

    Symbol add(Symbol a, Symbol b) const {
        std::uint32_t s = std::uint32_t(a) + b;
        return static_cast<Symbol>(s >= q_ ? s - q_ : s);
    }

    Symbol sub(Symbol a, Symbol b) const {
        return static_cast<Symbol>(a >= b ? a - b : a + q_ - b);
    }

    Symbol neg(Symbol a) const { return a == 0 ? 0 : static_cast<Symbol>(q_ - a); }

    Symbol mul(Symbol a, Symbol b) const {
        return static_cast<Symbol>(std::uint32_t(a) * b % q_);
    }

    /// Multiplicative inverse via extended Euclid. DivisionByZero on a = 0.
    Symbol inv(Symbol a) const;

    /// Repeated product; pow(0, 0) is defined as 1.
    Symbol pow(Symbol a, std::uint64_t e) const;

    FieldElement element(std::uint64_t v) const;

private:
    std::uint32_t q_;
};

/// A residue tagged with its modulus. Operations between elements of
/// different fields are rejected with FieldMismatch.
struct FieldElement {
    Symbol value;
    Symbol modulus;

    PrimeField field() const { return PrimeField(modulus); }

    bool operator==(const FieldElement& other) const = default;
};

namespace detail {
inline void require_same_field(const FieldElement& a, const FieldElement& b) {
    if (a.modulus != b.modulus)
        raise(Errc::field_mismatch, "elements of F_" + std::to_string(a.modulus) +
                                        " and F_" + std::to_string(b.modulus));
}
}  // namespace detail

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    detail::require_same_field(a, b);
    return {a.field().add(a.value, b.value), a.modulus};
}

inline FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    detail::require_same_field(a, b);
    return {a.field().sub(a.value, b.value), a.modulus};
}

inline FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    detail::require_same_field(a, b);
    return {a.field().mul(a.value, b.value), a.modulus};
}

inline FieldElement inv(const FieldElement& a) {
    return {a.field().inv(a.value), a.modulus};
}

inline FieldElement pow(const FieldElement& a, std::uint64_t e) {
    return {a.field().pow(a.value, e), a.modulus};
}

}  // namespace mdsr
