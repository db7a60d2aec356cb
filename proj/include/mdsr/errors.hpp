#pragma once

#include <stdexcept>
#include <string>

namespace mdsr {

/// Every failure the library reports, one value per error class.
/// The CLI maps these to stable process exit codes (see exit_code).
enum class Errc {
    // field
    not_prime,
    out_of_range,
    field_mismatch,
    division_by_zero,
    // matrix
    dimension_mismatch,
    not_square,
    singular,
    not_a_permutation,
    scan_bound_exceeded,
    // indexing
    index_out_of_range,
    bad_digit,
    bad_position,
    // codes
    resample_limit_exceeded,
    field_too_small,
    bad_field_for_cube_roots,
    framework_condition_violated,
    not_systematic,
    // repair
    wrong_share_count,
    bad_node,
    plan_mismatch,
    // alignment
    no_solution_found,
    bad_field,
    // cluster
    field_too_small_for_bytes,
    already_failed,
    too_many_failures,
    node_alive,
    missing_survivor,
    not_enough_nodes,
    checksum_mismatch,
    bad_format,
    io_error,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
    throw Error(code, what);
}

const char* errc_name(Errc code);

/// Stable nonzero exit code per error class, for the CLI contract.
int exit_code(Errc code);

}  // namespace mdsr
