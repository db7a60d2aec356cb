#include "mdsr/field.hpp"

namespace mdsr {

namespace {

bool is_prime(std::uint32_t q) {
    if (q < 2) return false;
    if (q % 2 == 0) return q == 2;
    for (std::uint32_t d = 3; d * d <= q; d += 2)
        if (q % d == 0) return false;
    return true;
}

}  // namespace

PrimeField::PrimeField(std::uint32_t q) : q_(q) {
    if (q < 2 || q > kMaxModulus)
        raise(Errc::out_of_range, "modulus " + std::to_string(q) + " outside [2, 65521]");
    if (!is_prime(q))
        raise(Errc::not_prime, "modulus " + std::to_string(q) + " is not prime");
}

Symbol PrimeField::inv(Symbol a) const {
    if (a == 0) raise(Errc::division_by_zero, "inverse of 0 in F_" + std::to_string(q_));
    // Extended Euclid on (a, q); the Bezout coefficient of a is the inverse.
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = q_, new_r = a;
    while (new_r != 0) {
        std::int64_t quot = r / new_r;
        std::int64_t tmp = t - quot * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - quot * new_r;
        r = new_r;
        new_r = tmp;
    }
    if (t < 0) t += q_;
    return static_cast<Symbol>(t);
}

Symbol PrimeField::pow(Symbol a, std::uint64_t e) const {
    std::uint64_t base = a % q_;
    std::uint64_t acc = 1;
    while (e > 0) {
        if (e & 1) acc = acc * base % q_;
        base = base * base % q_;
        e >>= 1;
    }
    return static_cast<Symbol>(acc);
}

FieldElement PrimeField::element(std::uint64_t v) const {
    return {reduce(v), static_cast<Symbol>(q_)};
}

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::not_prime: return "NotPrime";
        case Errc::out_of_range: return "OutOfRange";
        case Errc::field_mismatch: return "FieldMismatch";
        case Errc::division_by_zero: return "DivisionByZero";
        case Errc::dimension_mismatch: return "DimensionMismatch";
        case Errc::not_square: return "NotSquare";
        case Errc::singular: return "Singular";
        case Errc::not_a_permutation: return "NotAPermutation";
        case Errc::scan_bound_exceeded: return "ScanBoundExceeded";
        case Errc::index_out_of_range: return "IndexOutOfRange";
        case Errc::bad_digit: return "BadDigit";
        case Errc::bad_position: return "BadPosition";
        case Errc::resample_limit_exceeded: return "ResampleLimitExceeded";
        case Errc::field_too_small: return "FieldTooSmall";
        case Errc::bad_field_for_cube_roots: return "BadFieldForCubeRoots";
        case Errc::framework_condition_violated: return "FrameworkConditionViolated";
        case Errc::not_systematic: return "NotSystematic";
        case Errc::wrong_share_count: return "WrongShareCount";
        case Errc::bad_node: return "BadNode";
        case Errc::plan_mismatch: return "PlanMismatch";
        case Errc::no_solution_found: return "NoSolutionFound";
        case Errc::bad_field: return "BadField";
        case Errc::field_too_small_for_bytes: return "FieldTooSmallForBytes";
        case Errc::already_failed: return "AlreadyFailed";
        case Errc::too_many_failures: return "TooManyFailures";
        case Errc::node_alive: return "NodeAlive";
        case Errc::missing_survivor: return "MissingSurvivor";
        case Errc::not_enough_nodes: return "NotEnoughNodes";
        case Errc::checksum_mismatch: return "ChecksumMismatch";
        case Errc::bad_format: return "BadFormat";
        case Errc::io_error: return "IoError";
    }
    return "UnknownError";
}

int exit_code(Errc code) {
    switch (code) {
        case Errc::not_prime: return 10;
        case Errc::out_of_range: return 11;
        case Errc::field_mismatch: return 12;
        case Errc::division_by_zero: return 13;
        case Errc::dimension_mismatch: return 20;
        case Errc::not_square: return 21;
        case Errc::singular: return 22;
        case Errc::not_a_permutation: return 23;
        case Errc::scan_bound_exceeded: return 24;
        case Errc::index_out_of_range: return 30;
        case Errc::bad_digit: return 31;
        case Errc::bad_position: return 32;
        case Errc::resample_limit_exceeded: return 40;
        case Errc::field_too_small: return 41;
        case Errc::bad_field_for_cube_roots: return 42;
        case Errc::framework_condition_violated: return 43;
        case Errc::not_systematic: return 44;
        case Errc::wrong_share_count: return 50;
        case Errc::bad_node: return 51;
        case Errc::plan_mismatch: return 52;
        case Errc::no_solution_found: return 60;
        case Errc::bad_field: return 61;
        case Errc::field_too_small_for_bytes: return 70;
        case Errc::already_failed: return 71;
        case Errc::too_many_failures: return 72;
        case Errc::node_alive: return 73;
        case Errc::missing_survivor: return 74;
        case Errc::not_enough_nodes: return 75;
        case Errc::checksum_mismatch: return 76;
        case Errc::bad_format: return 77;
        case Errc::io_error: return 78;
    }
    return 1;
}

}  // namespace mdsr
