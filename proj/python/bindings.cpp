#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdsr/alignment.hpp"
#include "mdsr/cluster.hpp"
#include "mdsr/codes.hpp"
#include "mdsr/errors.hpp"
#include "mdsr/repair.hpp"

namespace py = pybind11;

namespace {

using namespace mdsr;

Construction construction_arg(const std::string& name) {
    const auto c = construction_from_name(name);
    if (!c) throw py::value_error("unknown construction '" + name + "'");
    return *c;
}

Preset preset_arg(const std::string& name) {
    const auto p = preset_from_name(name);
    if (!p) throw py::value_error("unknown preset '" + name + "'");
    return *p;
}

Matrix matrix_from_rows(const PrimeField& field,
                        const std::vector<std::vector<long long>>& rows) {
    if (rows.empty() || rows.front().empty()) {
        raise(Errc::dimension_mismatch, "matrix needs at least one row and column");
    }
    Matrix a(field, rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows.front().size()) {
            raise(Errc::dimension_mismatch, "ragged rows");
        }
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            const long long q = field.modulus();
            const long long v = ((rows[r][c] % q) + q) % q;
            a.set(r, c, static_cast<Symbol>(v));
        }
    }
    return a;
}

std::vector<std::vector<Symbol>> matrix_rows(const Matrix& a) {
    std::vector<std::vector<Symbol>> rows(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        rows[r].resize(a.cols());
        for (std::size_t c = 0; c < a.cols(); ++c) rows[r][c] = a.at(r, c);
    }
    return rows;
}

py::dict metrics_dict(const RepairMetrics& metrics) {
    py::dict d;
    d["downloaded_total"] = metrics.downloaded_total;
    d["accessed_total"] = metrics.accessed_total;
    d["optimal"] = metrics.optimal;
    d["downloaded"] = metrics.downloaded;
    d["accessed"] = metrics.accessed;
    return d;
}

py::dict plan_dict(const RepairPlan& plan) {
    py::dict d;
    d["failed"] = plan.failed;
    d["fetch"] = plan.fetch;
    d["expected_bandwidth_symbols"] = plan.expected_bandwidth_symbols;
    d["expected_disk_access_symbols"] = plan.expected_disk_access_symbols;
    d["optimal"] = plan.optimal;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "(n,k) erasure codes with bandwidth-optimal node repair";

    static py::exception<Error> exc(m, "Error");
    py::register_exception_translator([](std::exception_ptr p) {
        if (!p) return;
        try {
            std::rethrow_exception(p);
        } catch (const Error& e) {
            const std::string msg =
                std::string(errc_name(e.code())) + ": " + e.what();
            PyErr_SetString(exc.ptr(), msg.c_str());
        }
    });

    py::class_<PrimeField>(m, "PrimeField")
        .def(py::init<std::uint32_t>(), py::arg("q"))
        .def_property_readonly("modulus", &PrimeField::modulus)
        .def("add", &PrimeField::add)
        .def("sub", &PrimeField::sub)
        .def("neg", &PrimeField::neg)
        .def("mul", &PrimeField::mul)
        .def("inv", &PrimeField::inv)
        .def("pow", &PrimeField::pow)
        .def("reduce", &PrimeField::reduce)
        .def("__eq__", [](const PrimeField& a, const PrimeField& b) { return a == b; })
        .def("__repr__", [](const PrimeField& f) {
            return "PrimeField(" + std::to_string(f.modulus()) + ")";
        });

    py::class_<Matrix>(m, "Matrix")
        .def(py::init(&matrix_from_rows), py::arg("field"), py::arg("rows"))
        .def_static("identity", &Matrix::identity, py::arg("field"), py::arg("n"))
        .def_property_readonly("rows", &Matrix::rows)
        .def_property_readonly("cols", &Matrix::cols)
        .def("at", &Matrix::at, py::arg("r"), py::arg("c"))
        .def("tolist", &matrix_rows)
        .def("__mul__", [](const Matrix& a, const Matrix& b) { return a * b; })
        .def("__add__", [](const Matrix& a, const Matrix& b) { return a + b; })
        .def("__sub__", [](const Matrix& a, const Matrix& b) { return a - b; })
        .def("__eq__", [](const Matrix& a, const Matrix& b) { return a == b; });

    m.def("rank", &rank, py::arg("a"));
    m.def("det", [](const Matrix& a) { return det(a).value; }, py::arg("a"));
    m.def("matpow", &matpow, py::arg("a"), py::arg("e"));
    m.def("kron", py::overload_cast<const Matrix&, const Matrix&>(&kron),
          py::arg("a"), py::arg("b"));

    py::class_<CodeSpec>(m, "CodeSpec")
        .def_static("build_random", &CodeSpec::build_random, py::arg("n"),
                    py::arg("k"), py::arg("q"), py::arg("seed"))
        .def_static("build_explicit_2parity", &CodeSpec::build_explicit_2parity,
                    py::arg("k"), py::arg("q"))
        .def_static("build_explicit_3parity", &CodeSpec::build_explicit_3parity,
                    py::arg("k"), py::arg("q"))
        .def_static(
            "build_tensor",
            [](std::uint32_t n, std::uint32_t k, std::uint32_t q,
               const std::string& preset, std::uint64_t seed) {
                return CodeSpec::build_tensor(
                    n, k, q, tensor_basis(PrimeField(q), preset_arg(preset), n - k),
                    seed);
            },
            py::arg("n"), py::arg("k"), py::arg("q"),
            py::arg("preset") = "permutation", py::arg("seed") = 0)
        .def_property_readonly("n", &CodeSpec::n)
        .def_property_readonly("k", &CodeSpec::k)
        .def_property_readonly("q",
                               [](const CodeSpec& c) { return c.field().modulus(); })
        .def_property_readonly("length", &CodeSpec::length)
        .def_property_readonly("seed", &CodeSpec::seed)
        .def_property_readonly("lambdas",
                               [](const CodeSpec& c) { return c.lambdas(); })
        .def_property_readonly("construction", [](const CodeSpec& c) {
            return std::string(construction_name(c.construction()));
        })
        .def_property_readonly("resamples_used", &CodeSpec::resamples_used)
        .def("submatrix", &CodeSpec::submatrix, py::arg("j"), py::arg("i"))
        .def("lambda_of", &CodeSpec::lambda_of, py::arg("j"), py::arg("i"))
        .def("__repr__", [](const CodeSpec& c) {
            return "CodeSpec(" + std::string(construction_name(c.construction())) +
                   ", n=" + std::to_string(c.n()) + ", k=" + std::to_string(c.k()) +
                   ", q=" + std::to_string(c.field().modulus()) + ")";
        });

    m.def(
        "verify_mds",
        [](const CodeSpec& code) {
            const MdsReport rep = verify_mds(code);
            py::dict d;
            d["verified"] = rep.verified;
            d["subsets_checked"] = rep.subsets_checked;
            d["failing_subset"] =
                rep.failing_subset ? py::cast(*rep.failing_subset) : py::none();
            d["resamples_used"] = rep.resamples_used;
            return d;
        },
        py::arg("code"));
    m.def("verify_repair_conditions", &verify_repair_conditions, py::arg("code"));
    m.def("repair_matrix", &repair_matrix, py::arg("code"), py::arg("l"));

    m.def(
        "encode",
        [](const CodeSpec& code, const std::vector<std::vector<Symbol>>& sources) {
            Stripe s;
            s.sources = sources;
            std::vector<std::vector<Symbol>> out;
            for (const NodeVector& nv : encode(code, s)) out.push_back(nv.data);
            return out;
        },
        py::arg("code"), py::arg("sources"),
        "Returns the n node vectors (index 0 is node 1).");

    m.def(
        "decode",
        [](const CodeSpec& code,
           const std::map<std::uint32_t, std::vector<Symbol>>& shares) {
            std::vector<NodeVector> vec;
            for (const auto& [node, data] : shares) vec.push_back({node, data});
            return decode(code, vec).sources;
        },
        py::arg("code"), py::arg("shares"),
        "Recovers the k source vectors from any k node -> data shares.");

    m.def(
        "plan_repair",
        [](const CodeSpec& code, std::uint32_t l) {
            return plan_dict(plan_repair(code, l));
        },
        py::arg("code"), py::arg("l"));

    m.def(
        "repair_from_nodes",
        [](const CodeSpec& code, std::uint32_t l,
           const std::map<std::uint32_t, std::vector<Symbol>>& nodes) {
            const RepairPlan plan = plan_repair(code, l);
            std::map<std::uint32_t, std::vector<Symbol>> fetched;
            for (const auto& [survivor, positions] : plan.fetch) {
                const auto it = nodes.find(survivor);
                if (it == nodes.end()) {
                    raise(Errc::plan_mismatch,
                          "missing survivor " + std::to_string(survivor));
                }
                std::vector<Symbol> vals;
                vals.reserve(positions.size());
                for (std::uint64_t pos : positions) {
                    if (pos < 1 || pos > it->second.size()) {
                        raise(Errc::plan_mismatch, "node vector too short");
                    }
                    vals.push_back(it->second[pos - 1]);
                }
                fetched.emplace(survivor, std::move(vals));
            }
            const RepairResult res = execute_repair(code, plan, fetched);
            py::dict d = metrics_dict(res.metrics);
            d["node"] = res.node.node;
            d["data"] = res.node.data;
            return d;
        },
        py::arg("code"), py::arg("l"), py::arg("nodes"),
        "Repairs node l reading only the planned cells of the given survivor "
        "vectors; returns the rebuilt data plus traffic metrics.");

    py::class_<AlignmentInstance>(m, "AlignmentInstance")
        .def_readonly("constraints", &AlignmentInstance::constraints)
        .def_readonly("size", &AlignmentInstance::size)
        .def_readonly("h", &AlignmentInstance::h)
        .def_readonly("v", &AlignmentInstance::v);

    m.def("solve_problem1", &solve_problem1, py::arg("q"));
    m.def(
        "solve_problem2",
        [](std::uint32_t n_constraints, std::uint32_t q, const std::string& preset) {
            return solve_problem2(n_constraints, q, preset_arg(preset));
        },
        py::arg("n_constraints"), py::arg("q"), py::arg("preset") = "permutation");
    m.def("verify_instance", &verify_instance, py::arg("instance"));

    py::class_<Cluster>(m, "Cluster")
        .def_static(
            "ingest",
            [](const std::filesystem::path& input, std::uint32_t n, std::uint32_t k,
               std::uint32_t q, const std::string& construction, std::uint64_t seed,
               const std::filesystem::path& root) {
                return Cluster::ingest(input, n, k, q, construction_arg(construction),
                                       seed, root);
            },
            py::arg("input"), py::arg("n"), py::arg("k"), py::arg("q"),
            py::arg("construction"), py::arg("seed"), py::arg("root"))
        .def_static("open", &Cluster::open, py::arg("root"))
        .def_property_readonly("manifest",
                               [](const Cluster& c) {
                                   const Manifest& m_ = c.manifest();
                                   py::dict d;
                                   d["construction"] = std::string(
                                       construction_name(m_.construction));
                                   d["n"] = m_.n;
                                   d["k"] = m_.k;
                                   d["q"] = m_.q;
                                   d["seed"] = m_.seed;
                                   d["stripe_count"] = m_.stripe_count;
                                   d["file_length"] = m_.file_length;
                                   d["checksum"] = m_.checksum;
                                   d["lambdas"] = m_.lambdas;
                                   return d;
                               })
        .def("code", &Cluster::code)
        .def("alive", &Cluster::alive, py::arg("node"))
        .def("live_nodes", &Cluster::live_nodes)
        .def("chunk_path", &Cluster::chunk_path, py::arg("node"))
        .def("fail", &Cluster::fail, py::arg("node"))
        .def(
            "repair_node",
            [](Cluster& c, std::uint32_t node) {
                return metrics_dict(c.repair_node(node));
            },
            py::arg("node"))
        .def("reconstruct", &Cluster::reconstruct, py::arg("out"),
             py::arg("nodes") = std::nullopt);
}
