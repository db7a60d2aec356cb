#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "mdsr/codes.hpp"

namespace mdsr {

/// One codeword of payload: k source vectors of L symbols each.
struct Stripe {
    std::vector<std::vector<Symbol>> sources;
};

struct NodeVector {
    std::uint32_t node = 0;  // 1..n
    std::vector<Symbol> data;
};

/// What to read for a repair. fetch maps each survivor to the 1-based
/// symbol positions it must read from disk; for systematic repair the list
/// is the same for every survivor (the nonzero columns of V_l).
struct RepairPlan {
    std::uint32_t failed = 0;
    std::map<std::uint32_t, std::vector<std::uint64_t>> fetch;
    std::uint64_t expected_bandwidth_symbols = 0;
    std::uint64_t expected_disk_access_symbols = 0;
    bool optimal = false;
};

/// downloaded counts symbols sent to the replacement node (survivors ship
/// V_l d_j, not raw cells); accessed counts symbol cells read from disk.
/// optimal holds when the total download is (n-1) L/(n-k).
struct RepairMetrics {
    std::map<std::uint32_t, std::uint64_t> downloaded;
    std::map<std::uint32_t, std::uint64_t> accessed;
    std::uint64_t downloaded_total = 0;
    std::uint64_t accessed_total = 0;
    bool optimal = false;
};

struct RepairResult {
    NodeVector node;
    RepairMetrics metrics;
};

/// d_i = a_i for i <= k; d_j = sum_i C_{j,i} a_i for parity j.
std::vector<NodeVector> encode(const CodeSpec& code, const Stripe& stripe);

/// Recovers the stripe from any k distinct shares; straight copy when all
/// shares are systematic.
Stripe decode(const CodeSpec& code, const std::vector<NodeVector>& shares);

/// The kL x kL block matrix mapping a stacked stripe to the stacked data of
/// `nodes`; reconstructing many stripes from a fixed node set amounts to one
/// multi-column solve against this matrix.
Matrix assemble_decode_matrix(const CodeSpec& code,
                              const std::vector<std::uint32_t>& nodes);

/// Systematic nodes get the bandwidth-optimal plan reading L/(n-k) cells
/// per survivor; parity nodes fall back to fetching everything from nodes
/// 1..k (optimal = false).
RepairPlan plan_repair(const CodeSpec& code, std::uint32_t l);

/// fetched must supply, per survivor, exactly the symbol values at the
/// plan's positions. Interference from other sources is cancelled and the
/// failed vector re-solved; metrics report the measured traffic.
RepairResult execute_repair(const CodeSpec& code, const RepairPlan& plan,
                            const std::map<std::uint32_t, std::vector<Symbol>>& fetched);

}  // namespace mdsr
