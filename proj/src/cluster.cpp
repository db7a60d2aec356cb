#include "mdsr/cluster.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>

#include "mdsr/alignment.hpp"
#include "mdsr/errors.hpp"

namespace mdsr {

namespace {

constexpr char kMagic[4] = {'M', 'D', 'S', 'R'};
constexpr std::uint8_t kVersion = 0x01;
constexpr std::size_t kHeaderSize = 25;

void put_le(std::string& out, std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
}

std::uint64_t get_le(const std::string& in, std::size_t off, int bytes) {
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[off + i]))
             << (8 * i);
    }
    return v;
}

/// Common 25-byte header of chunk files and the manifest; node is 0 in the
/// manifest.
std::string make_header(const Manifest& m, std::uint8_t node) {
    std::string h;
    h.append(kMagic, 4);
    h.push_back(static_cast<char>(kVersion));
    h.push_back(static_cast<char>(m.n));
    h.push_back(static_cast<char>(m.k));
    put_le(h, m.q, 4);
    h.push_back(static_cast<char>(static_cast<std::uint8_t>(m.construction)));
    put_le(h, m.seed, 8);
    h.push_back(static_cast<char>(node));
    put_le(h, m.stripe_count, 4);
    return h;
}

struct Header {
    std::uint32_t n, k, q;
    Construction construction;
    std::uint64_t seed;
    std::uint8_t node;
    std::uint32_t stripe_count;
};

Header parse_header(const std::string& raw, const std::string& what) {
    if (raw.size() < kHeaderSize || raw.compare(0, 4, kMagic, 4) != 0) {
        raise(Errc::bad_format, what + ": bad magic");
    }
    if (static_cast<std::uint8_t>(raw[4]) != kVersion) {
        raise(Errc::bad_format, what + ": unsupported version");
    }
    Header h;
    h.n = static_cast<std::uint8_t>(raw[5]);
    h.k = static_cast<std::uint8_t>(raw[6]);
    h.q = static_cast<std::uint32_t>(get_le(raw, 7, 4));
    const std::uint8_t cid = static_cast<std::uint8_t>(raw[11]);
    if (cid > 3) raise(Errc::bad_format, what + ": unknown construction id");
    h.construction = static_cast<Construction>(cid);
    h.seed = get_le(raw, 12, 8);
    h.node = static_cast<std::uint8_t>(raw[20]);
    h.stripe_count = static_cast<std::uint32_t>(get_le(raw, 21, 4));
    return h;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) raise(Errc::io_error, "cannot open " + p.string());
    std::string data((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    if (in.bad()) raise(Errc::io_error, "read failed for " + p.string());
    return data;
}

/// Write-temp-then-rename; readers never observe a half-written file.
void write_file_atomic(const std::filesystem::path& p, const std::string& data) {
    const std::filesystem::path tmp = p.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) raise(Errc::io_error, "cannot create " + tmp.string());
        out.write(data.data(), static_cast<std::streamsize>(data.size()));
        if (!out) raise(Errc::io_error, "write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, p, ec);
    if (ec) raise(Errc::io_error, "rename failed for " + p.string());
}

std::uint32_t crc32_of(const std::string& data) {
    return static_cast<std::uint32_t>(
        ::crc32(0L, reinterpret_cast<const Bytef*>(data.data()),
                static_cast<uInt>(data.size())));
}

CodeSpec build_for(Construction c, std::uint32_t n, std::uint32_t k,
                   std::uint32_t q, std::uint64_t seed) {
    switch (c) {
        case Construction::random_permutation:
            return CodeSpec::build_random(n, k, q, seed);
        case Construction::explicit_2parity:
            if (n != k + 2) {
                raise(Errc::dimension_mismatch, "explicit2 requires n = k+2");
            }
            return CodeSpec::build_explicit_2parity(k, q);
        case Construction::explicit_3parity:
            if (n != k + 3) {
                raise(Errc::dimension_mismatch, "explicit3 requires n = k+3");
            }
            return CodeSpec::build_explicit_3parity(k, q);
        case Construction::tensor:
            return CodeSpec::build_tensor(
                n, k, q, tensor_basis(PrimeField(q), Preset::permutation, n - k),
                seed);
        case Construction::custom: break;
    }
    raise(Errc::bad_format, "construction cannot be built from parameters");
}

}  // namespace

Cluster::Cluster(std::filesystem::path root, Manifest manifest)
    : root_(std::move(root)), manifest_(std::move(manifest)) {}

std::filesystem::path Cluster::chunk_path(std::uint32_t node) const {
    return root_ / ("node_" + std::to_string(node));
}

bool Cluster::alive(std::uint32_t node) const {
    return std::filesystem::exists(chunk_path(node));
}

std::vector<std::uint32_t> Cluster::live_nodes() const {
    std::vector<std::uint32_t> live;
    for (std::uint32_t i = 1; i <= manifest_.n; ++i) {
        if (alive(i)) live.push_back(i);
    }
    return live;
}

CodeSpec Cluster::code() const {
    const Manifest& m = manifest_;
    switch (m.construction) {
        case Construction::random_permutation:
            return CodeSpec::random_from_lambdas(m.n, m.k, m.q, m.seed, m.lambdas);
        case Construction::explicit_2parity: {
            CodeSpec c = CodeSpec::build_explicit_2parity(m.k, m.q);
            if (c.lambdas() != m.lambdas) {
                raise(Errc::bad_format, "manifest scalars disagree with explicit2");
            }
            return c;
        }
        case Construction::explicit_3parity: {
            CodeSpec c = CodeSpec::build_explicit_3parity(m.k, m.q);
            if (c.lambdas() != m.lambdas) {
                raise(Errc::bad_format, "manifest scalars disagree with explicit3");
            }
            return c;
        }
        case Construction::tensor:
            return CodeSpec::tensor_from_lambdas(
                m.n, m.k, m.q,
                tensor_basis(PrimeField(m.q), Preset::permutation, m.n - m.k),
                m.seed, m.lambdas);
        case Construction::custom: break;
    }
    raise(Errc::bad_format, "manifest has no buildable construction");
}

Cluster Cluster::ingest(const std::filesystem::path& input, std::uint32_t n,
                        std::uint32_t k, std::uint32_t q,
                        Construction construction, std::uint64_t seed,
                        const std::filesystem::path& root) {
    PrimeField f(q);
    if (q < 257) {
        raise(Errc::field_too_small_for_bytes,
              "need q >= 257 to store byte values; got " + std::to_string(q));
    }
    const std::string data = read_file(input);
    CodeSpec code = build_for(construction, n, k, q, seed);
    const std::uint64_t L = code.length();
    const std::uint64_t stripe_bytes = static_cast<std::uint64_t>(k) * L;
    const std::uint64_t stripes = (data.size() + stripe_bytes - 1) / stripe_bytes;
    if (stripes > 0xffffffffULL) {
        raise(Errc::out_of_range, "file needs more than 2^32 stripes");
    }

    Manifest m;
    m.construction = construction;
    m.n = n;
    m.k = k;
    m.q = q;
    m.seed = seed;
    m.stripe_count = static_cast<std::uint32_t>(stripes);
    m.file_length = data.size();
    m.checksum = crc32_of(data);
    m.lambdas = code.lambdas();

    std::vector<std::string> payload(n);
    for (std::uint32_t j = 0; j < n; ++j) {
        payload[j].reserve(static_cast<std::size_t>(stripes) * L * 2);
    }
    Stripe stripe;
    stripe.sources.assign(k, std::vector<Symbol>(L, 0));
    for (std::uint64_t s = 0; s < stripes; ++s) {
        for (std::uint32_t i = 0; i < k; ++i) {
            for (std::uint64_t t = 0; t < L; ++t) {
                const std::uint64_t off = s * stripe_bytes + i * L + t;
                stripe.sources[i][t] =
                    off < data.size()
                        ? static_cast<Symbol>(static_cast<unsigned char>(data[off]))
                        : 0;
            }
        }
        for (const NodeVector& nv : encode(code, stripe)) {
            std::string& out = payload[nv.node - 1];
            for (Symbol sym : nv.data) put_le(out, sym, 2);
        }
    }

    std::error_code ec;
    std::filesystem::create_directories(root, ec);
    if (ec) raise(Errc::io_error, "cannot create " + root.string());
    for (std::uint32_t j = 1; j <= n; ++j) {
        write_file_atomic(root / ("node_" + std::to_string(j)),
                          make_header(m, static_cast<std::uint8_t>(j)) +
                              payload[j - 1]);
    }
    std::string manifest_bytes = make_header(m, 0);
    put_le(manifest_bytes, m.file_length, 8);
    put_le(manifest_bytes, m.checksum, 4);
    for (Symbol l : m.lambdas) put_le(manifest_bytes, l, 2);
    write_file_atomic(root / "manifest", manifest_bytes);
    return Cluster(root, std::move(m));
}

Cluster Cluster::open(const std::filesystem::path& root) {
    const std::string raw = read_file(root / "manifest");
    Header h = parse_header(raw, "manifest");
    if (h.node != 0) raise(Errc::bad_format, "manifest: nonzero node field");
    const std::size_t lambda_count =
        static_cast<std::size_t>(h.n - h.k) * h.k;
    if (raw.size() != kHeaderSize + 12 + 2 * lambda_count) {
        raise(Errc::bad_format, "manifest: truncated");
    }
    Manifest m;
    m.construction = h.construction;
    m.n = h.n;
    m.k = h.k;
    m.q = h.q;
    m.seed = h.seed;
    m.stripe_count = h.stripe_count;
    m.file_length = get_le(raw, kHeaderSize, 8);
    m.checksum = static_cast<std::uint32_t>(get_le(raw, kHeaderSize + 8, 4));
    for (std::size_t t = 0; t < lambda_count; ++t) {
        m.lambdas.push_back(static_cast<Symbol>(
            get_le(raw, kHeaderSize + 12 + 2 * t, 2)));
    }
    return Cluster(root, std::move(m));
}

void Cluster::fail(std::uint32_t node) {
    if (node < 1 || node > manifest_.n) {
        raise(Errc::bad_node, "node " + std::to_string(node) + " outside 1.." +
                                  std::to_string(manifest_.n));
    }
    if (!alive(node)) {
        raise(Errc::already_failed, "node " + std::to_string(node) + " is down");
    }
    const std::uint32_t down = manifest_.n - static_cast<std::uint32_t>(live_nodes().size());
    if (down >= manifest_.n - manifest_.k) {
        raise(Errc::too_many_failures,
              "already " + std::to_string(down) + " nodes down; the code tolerates " +
                  std::to_string(manifest_.n - manifest_.k));
    }
    std::error_code ec;
    std::filesystem::remove(chunk_path(node), ec);
    if (ec) raise(Errc::io_error, "cannot remove " + chunk_path(node).string());
}

RepairMetrics Cluster::repair_node(std::uint32_t node) {
    if (node < 1 || node > manifest_.n) {
        raise(Errc::bad_node, "node " + std::to_string(node) + " outside 1.." +
                                  std::to_string(manifest_.n));
    }
    if (alive(node)) {
        raise(Errc::node_alive, "node " + std::to_string(node) + " is not failed");
    }
    for (std::uint32_t j = 1; j <= manifest_.n; ++j) {
        if (j != node && !alive(j)) {
            raise(Errc::missing_survivor,
                  "survivor " + std::to_string(j) + " is down too");
        }
    }
    const CodeSpec spec = code();
    const std::uint64_t L = spec.length();
    const RepairPlan plan = plan_repair(spec, node);

    struct Reader {
        std::ifstream stream;
        std::uint64_t cells_read = 0;
    };
    std::map<std::uint32_t, Reader> readers;
    for (const auto& [survivor, positions] : plan.fetch) {
        (void)positions;
        const std::filesystem::path p = chunk_path(survivor);
        Reader r;
        r.stream.open(p, std::ios::binary);
        if (!r.stream) raise(Errc::io_error, "cannot open " + p.string());
        std::string head(kHeaderSize, '\0');
        r.stream.read(head.data(), kHeaderSize);
        if (!r.stream) raise(Errc::bad_format, p.string() + ": truncated header");
        const Header h = parse_header(head, p.string());
        if (h.n != manifest_.n || h.k != manifest_.k || h.q != manifest_.q ||
            h.seed != manifest_.seed || h.construction != manifest_.construction ||
            h.stripe_count != manifest_.stripe_count || h.node != survivor) {
            raise(Errc::bad_format, p.string() + ": header disagrees with manifest");
        }
        readers.emplace(survivor, std::move(r));
    }

    std::string restored = make_header(manifest_, static_cast<std::uint8_t>(node));
    RepairMetrics total;
    total.optimal = plan.optimal;
    for (std::uint32_t s = 0; s < manifest_.stripe_count; ++s) {
        std::map<std::uint32_t, std::vector<Symbol>> fetched;
        for (const auto& [survivor, positions] : plan.fetch) {
            Reader& r = readers.at(survivor);
            std::vector<Symbol> values;
            values.reserve(positions.size());
            char buf[2];
            for (std::uint64_t m : positions) {
                const std::uint64_t off =
                    kHeaderSize + (static_cast<std::uint64_t>(s) * L + (m - 1)) * 2;
                r.stream.seekg(static_cast<std::streamoff>(off));
                r.stream.read(buf, 2);
                if (!r.stream) {
                    raise(Errc::io_error,
                          "short read from " + chunk_path(survivor).string());
                }
                values.push_back(static_cast<Symbol>(
                    static_cast<unsigned char>(buf[0]) |
                    (static_cast<unsigned char>(buf[1]) << 8)));
                ++r.cells_read;
            }
            fetched.emplace(survivor, std::move(values));
        }
        RepairResult res = execute_repair(spec, plan, fetched);
        for (Symbol sym : res.node.data) put_le(restored, sym, 2);
        for (const auto& [survivor, count] : res.metrics.downloaded) {
            total.downloaded[survivor] += count;
        }
        for (const auto& [survivor, count] : res.metrics.accessed) {
            total.accessed[survivor] += count;
        }
        total.downloaded_total += res.metrics.downloaded_total;
        total.accessed_total += res.metrics.accessed_total;
        total.optimal = total.optimal && res.metrics.optimal;
    }
    // the meter and the actual file reads must agree cell for cell
    for (const auto& [survivor, r] : readers) {
        if (total.accessed.count(survivor) &&
            total.accessed.at(survivor) != r.cells_read) {
            raise(Errc::plan_mismatch, "disk meter drifted from plan");
        }
    }
    write_file_atomic(chunk_path(node), restored);
    return total;
}

void Cluster::reconstruct(
    const std::filesystem::path& out,
    const std::optional<std::vector<std::uint32_t>>& nodes) const {
    const CodeSpec spec = code();
    const std::uint32_t k = manifest_.k;
    const std::uint64_t L = spec.length();

    std::vector<std::uint32_t> chosen;
    if (nodes) {
        chosen = *nodes;
        if (chosen.size() != k) {
            raise(Errc::not_enough_nodes,
                  "need exactly " + std::to_string(k) + " nodes");
        }
        std::vector<bool> seen(manifest_.n + 1, false);
        for (std::uint32_t nd : chosen) {
            if (nd < 1 || nd > manifest_.n) {
                raise(Errc::bad_node, "node " + std::to_string(nd) + " outside 1..n");
            }
            if (seen[nd]) raise(Errc::not_enough_nodes, "duplicate node in set");
            seen[nd] = true;
            if (!alive(nd)) {
                raise(Errc::not_enough_nodes,
                      "node " + std::to_string(nd) + " is down");
            }
        }
    } else {
        for (std::uint32_t nd = 1; nd <= manifest_.n && chosen.size() < k; ++nd) {
            if (alive(nd)) chosen.push_back(nd);
        }
        if (chosen.size() < k) {
            raise(Errc::not_enough_nodes,
                  "only " + std::to_string(chosen.size()) + " nodes alive");
        }
    }

    std::vector<std::string> chunks;
    chunks.reserve(k);
    for (std::uint32_t nd : chosen) {
        const std::filesystem::path p = chunk_path(nd);
        std::string raw = read_file(p);
        const Header h = parse_header(raw, p.string());
        if (h.node != nd || h.stripe_count != manifest_.stripe_count ||
            h.n != manifest_.n || h.k != manifest_.k || h.q != manifest_.q) {
            raise(Errc::bad_format, p.string() + ": header disagrees with manifest");
        }
        if (raw.size() != kHeaderSize + static_cast<std::size_t>(manifest_.stripe_count) * L * 2) {
            raise(Errc::bad_format, p.string() + ": truncated payload");
        }
        chunks.push_back(std::move(raw));
    }

    auto symbol_at = [&](std::size_t chunk, std::uint64_t stripe,
                         std::uint64_t pos) -> Symbol {
        const std::size_t off = kHeaderSize + (stripe * L + pos) * 2;
        return static_cast<Symbol>(
            static_cast<unsigned char>(chunks[chunk][off]) |
            (static_cast<unsigned char>(chunks[chunk][off + 1]) << 8));
    };

    const std::uint64_t stripes = manifest_.stripe_count;
    std::string bytes;
    bytes.resize(static_cast<std::size_t>(stripes) * k * L, '\0');
    bool systematic = true;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        if (chosen[i] != i + 1) systematic = false;
    }
    if (systematic) {
        for (std::uint64_t s = 0; s < stripes; ++s) {
            for (std::uint32_t i = 0; i < k; ++i) {
                for (std::uint64_t t = 0; t < L; ++t) {
                    bytes[s * k * L + i * L + t] =
                        static_cast<char>(symbol_at(i, s, t) & 0xff);
                }
            }
        }
    } else if (stripes > 0) {
        Matrix a = assemble_decode_matrix(spec, chosen);
        Matrix rhs(spec.field(), k * L, stripes);
        for (std::uint64_t s = 0; s < stripes; ++s) {
            for (std::size_t c = 0; c < k; ++c) {
                for (std::uint64_t t = 0; t < L; ++t) {
                    rhs.set(c * L + t, s, symbol_at(c, s, t));
                }
            }
        }
        Matrix x = solve(a, rhs);
        for (std::uint64_t s = 0; s < stripes; ++s) {
            for (std::uint32_t i = 0; i < k; ++i) {
                for (std::uint64_t t = 0; t < L; ++t) {
                    bytes[s * k * L + i * L + t] =
                        static_cast<char>(x.at(i * L + t, s) & 0xff);
                }
            }
        }
    }

    bytes.resize(manifest_.file_length);
    if (crc32_of(bytes) != manifest_.checksum) {
        raise(Errc::checksum_mismatch,
              "reconstructed data fails the manifest checksum");
    }
    write_file_atomic(out, bytes);
}

}  // namespace mdsr
