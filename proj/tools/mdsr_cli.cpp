#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mdsr/alignment.hpp"
#include "mdsr/cluster.hpp"
#include "mdsr/errors.hpp"

namespace {

using nlohmann::json;

std::vector<std::uint32_t> parse_node_list(const std::string& list) {
    std::vector<std::uint32_t> nodes;
    std::size_t pos = 0;
    while (pos < list.size()) {
        std::size_t next = list.find(',', pos);
        if (next == std::string::npos) next = list.size();
        const std::string token = list.substr(pos, next - pos);
        try {
            std::size_t used = 0;
            const unsigned long v = std::stoul(token, &used);
            if (used != token.size() || v < 1 || v > 255) throw std::invalid_argument(token);
            nodes.push_back(static_cast<std::uint32_t>(v));
        } catch (const std::exception&) {
            mdsr::raise(mdsr::Errc::bad_node, "bad node list entry '" + token + "'");
        }
        pos = next + 1;
    }
    return nodes;
}

void print_matrix(const mdsr::Matrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        std::cout << "    [";
        for (std::size_t c = 0; c < m.cols(); ++c) {
            std::cout << (c ? " " : "") << m.at(r, c);
        }
        std::cout << "]\n";
    }
}

void report_repair_text(const mdsr::Cluster& cluster, std::uint32_t node,
                        const mdsr::RepairMetrics& metrics) {
    const mdsr::Manifest& m = cluster.manifest();
    std::cout << "repaired node " << node << " (" << m.stripe_count << " stripes)\n";
    std::cout << "downloaded symbols: " << metrics.downloaded_total << "\n";
    std::cout << "accessed symbols:   " << metrics.accessed_total << "\n";
    for (const auto& [survivor, count] : metrics.downloaded) {
        std::cout << "  from node " << survivor << ": " << count << " downloaded, "
                  << metrics.accessed.at(survivor) << " read\n";
    }
    std::cout << "bandwidth-optimal:  " << (metrics.optimal ? "yes" : "no") << "\n";
}

void report_repair_json(const mdsr::Cluster& cluster, std::uint32_t node,
                        const mdsr::RepairMetrics& metrics) {
    json j;
    j["node"] = node;
    j["stripes"] = cluster.manifest().stripe_count;
    j["downloaded_total"] = metrics.downloaded_total;
    j["accessed_total"] = metrics.accessed_total;
    j["optimal"] = metrics.optimal;
    json per;
    for (const auto& [survivor, count] : metrics.downloaded) {
        per[std::to_string(survivor)] = {{"downloaded", count},
                                         {"accessed", metrics.accessed.at(survivor)}};
    }
    j["survivors"] = per;
    std::cout << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"(n,k) erasure coding with bandwidth-optimal node repair"};
    app.require_subcommand(1);

    std::string in_path, out_path, dir, construction = "explicit2";
    std::string report = "text", preset = "permutation", nodes_arg;
    std::uint32_t n = 0, k = 0, q = 0, node = 0, constraints = 3;
    std::uint64_t seed = 0;

    CLI::App* cmd_encode = app.add_subcommand("encode", "split a file onto n chunk files");
    cmd_encode->add_option("--in", in_path, "input file")->required();
    cmd_encode->add_option("--out", dir, "cluster directory")->required();
    cmd_encode->add_option("--n", n, "total nodes")->required();
    cmd_encode->add_option("--k", k, "systematic nodes")->required();
    cmd_encode->add_option("--q", q, "field modulus (prime, >= 257)")->required();
    cmd_encode->add_option("--construction", construction,
                           "random | explicit2 | explicit3 | tensor")->required();
    cmd_encode->add_option("--seed", seed, "seed for sampled scalars");

    CLI::App* cmd_fail = app.add_subcommand("fail", "take a node down");
    cmd_fail->add_option("--dir", dir, "cluster directory")->required();
    cmd_fail->add_option("--node", node, "node to fail")->required();

    CLI::App* cmd_repair = app.add_subcommand("repair", "restore the failed node");
    cmd_repair->add_option("--dir", dir, "cluster directory")->required();
    cmd_repair->add_option("--node", node, "node to repair")->required();
    cmd_repair->add_option("--report", report, "json | text");

    CLI::App* cmd_decode = app.add_subcommand("decode", "reconstruct the original file");
    cmd_decode->add_option("--dir", dir, "cluster directory")->required();
    cmd_decode->add_option("--out", out_path, "output file")->required();
    cmd_decode->add_option("--nodes", nodes_arg, "comma-separated k nodes to use");

    CLI::App* cmd_verify = app.add_subcommand("verify-mds", "check every k-subset of nodes");
    cmd_verify->add_option("--dir", dir, "cluster directory")->required();

    CLI::App* cmd_align = app.add_subcommand("align-demo",
                                             "print a verified alignment instance");
    cmd_align->add_option("--N", constraints, "number of constraints (>= 2)")->required();
    cmd_align->add_option("--q", q, "field modulus (prime)")->required();
    cmd_align->add_option("--preset", preset, "permutation | ergodic | search");

    try {
        app.parse(argc, argv);

        if (app.got_subcommand(cmd_encode)) {
            auto kind = mdsr::construction_from_name(construction);
            if (!kind) {
                mdsr::raise(mdsr::Errc::bad_format,
                            "unknown construction '" + construction + "'");
            }
            mdsr::Cluster cluster =
                mdsr::Cluster::ingest(in_path, n, k, q, *kind, seed, dir);
            const mdsr::Manifest& m = cluster.manifest();
            std::cout << "encoded " << m.file_length << " bytes into " << m.n
                      << " chunks (" << m.stripe_count << " stripes, "
                      << cluster.code().length() << " symbols per node per stripe)\n";
        } else if (app.got_subcommand(cmd_fail)) {
            mdsr::Cluster::open(dir).fail(node);
            std::cout << "node " << node << " failed\n";
        } else if (app.got_subcommand(cmd_repair)) {
            if (report != "json" && report != "text") {
                mdsr::raise(mdsr::Errc::bad_format, "--report must be json or text");
            }
            mdsr::Cluster cluster = mdsr::Cluster::open(dir);
            const mdsr::RepairMetrics metrics = cluster.repair_node(node);
            if (report == "json") {
                report_repair_json(cluster, node, metrics);
            } else {
                report_repair_text(cluster, node, metrics);
            }
        } else if (app.got_subcommand(cmd_decode)) {
            mdsr::Cluster cluster = mdsr::Cluster::open(dir);
            std::optional<std::vector<std::uint32_t>> nodes;
            if (!nodes_arg.empty()) nodes = parse_node_list(nodes_arg);
            cluster.reconstruct(out_path, nodes);
            std::cout << "wrote " << cluster.manifest().file_length << " bytes to "
                      << out_path << "\n";
        } else if (app.got_subcommand(cmd_verify)) {
            mdsr::Cluster cluster = mdsr::Cluster::open(dir);
            const mdsr::MdsReport rep = mdsr::verify_mds(cluster.code());
            std::cout << "subsets checked: " << rep.subsets_checked << "\n";
            if (rep.verified) {
                std::cout << "MDS: verified\n";
            } else {
                std::cout << "MDS: FAILED on subset {";
                for (std::size_t i = 0; i < rep.failing_subset->size(); ++i) {
                    std::cout << (i ? "," : "") << (*rep.failing_subset)[i];
                }
                std::cout << "}\n";
                return 1;
            }
        } else if (app.got_subcommand(cmd_align)) {
            auto p = mdsr::preset_from_name(preset);
            if (!p) {
                mdsr::raise(mdsr::Errc::bad_format, "unknown preset '" + preset + "'");
            }
            const mdsr::AlignmentInstance inst =
                mdsr::solve_problem2(constraints, q, *p);
            std::cout << "instance with N = " << inst.constraints
                      << ", L = " << inst.size << " over F_" << q << "\n";
            for (std::uint32_t i = 0; i < inst.constraints; ++i) {
                std::cout << "  H_" << (i + 1) << ":\n";
                print_matrix(inst.h[i]);
                std::cout << "  V_" << (i + 1) << ":\n";
                print_matrix(inst.v[i]);
            }
            const bool ok = mdsr::verify_instance(inst);
            std::cout << "verified: " << (ok ? "true" : "false") << "\n";
            if (!ok) return 1;
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const mdsr::Error& e) {
        std::cerr << "error: " << mdsr::errc_name(e.code()) << ": " << e.what()
                  << "\n";
        return mdsr::exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
