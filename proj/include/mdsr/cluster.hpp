#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "mdsr/codes.hpp"
#include "mdsr/repair.hpp"

namespace mdsr {

/// Everything needed to rebuild the code and check a reconstruction:
/// the canonical code description plus file length and CRC32.
struct Manifest {
    Construction construction = Construction::random_permutation;
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    std::uint32_t q = 0;
    std::uint64_t seed = 0;
    std::uint32_t stripe_count = 0;
    std::uint64_t file_length = 0;
    std::uint32_t checksum = 0;
    std::vector<Symbol> lambdas;
};

/// A directory of chunk files node_1..node_n plus a manifest. A failed
/// node is an absent chunk file; repair reads only the planned symbol
/// offsets from the survivors (seek-based, metered).
class Cluster {
public:
    /// Splits the file into stripes of k*L bytes (zero padded), one symbol
    /// per byte, and encodes each stripe onto the n chunk files. Needs
    /// q >= 257 so byte values survive the field.
    static Cluster ingest(const std::filesystem::path& input, std::uint32_t n,
                          std::uint32_t k, std::uint32_t q,
                          Construction construction, std::uint64_t seed,
                          const std::filesystem::path& root);

    static Cluster open(const std::filesystem::path& root);

    const Manifest& manifest() const { return manifest_; }
    const std::filesystem::path& root() const { return root_; }

    /// Rebuilds the CodeSpec from the manifest's canonical fields.
    CodeSpec code() const;

    bool alive(std::uint32_t node) const;
    std::vector<std::uint32_t> live_nodes() const;
    std::filesystem::path chunk_path(std::uint32_t node) const;

    /// Deletes the chunk file. Refuses once n-k nodes are already down.
    void fail(std::uint32_t node);

    /// Restores the chunk of the single failed node, reading only the
    /// planned offsets from every survivor. Metrics are aggregated over all
    /// stripes.
    RepairMetrics repair_node(std::uint32_t node);

    /// Decodes every stripe from k live nodes (the given set, or the first
    /// k live ones), strips the padding and verifies the checksum.
    void reconstruct(const std::filesystem::path& out,
                     const std::optional<std::vector<std::uint32_t>>& nodes =
                         std::nullopt) const;

private:
    Cluster(std::filesystem::path root, Manifest manifest);

    std::filesystem::path root_;
    Manifest manifest_;
};

}  // namespace mdsr
