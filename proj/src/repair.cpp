#include "mdsr/repair.hpp"

#include <algorithm>
#include <string>

#include "mdsr/errors.hpp"

namespace mdsr {

namespace {

std::vector<Symbol> matvec(const Matrix& m, const std::vector<Symbol>& x) {
    const PrimeField& f = m.field();
    const auto q = static_cast<std::uint64_t>(f.modulus());
    std::vector<Symbol> y(m.rows(), 0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        std::uint64_t acc = 0;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            acc += static_cast<std::uint64_t>(m.at(r, c)) * x[c];
            if (acc >= (std::uint64_t{1} << 62)) acc %= q;
        }
        y[r] = static_cast<Symbol>(acc % q);
    }
    return y;
}

void accumulate(const PrimeField& f, std::vector<Symbol>& into,
                const std::vector<Symbol>& add) {
    for (std::size_t i = 0; i < into.size(); ++i) {
        into[i] = f.add(into[i], add[i]);
    }
}

void check_vector(const CodeSpec& code, const std::vector<Symbol>& v,
                  const char* what) {
    if (v.size() != code.length()) {
        raise(Errc::dimension_mismatch, std::string(what) + " must have L symbols");
    }
    for (Symbol s : v) {
        if (s >= code.field().modulus()) {
            raise(Errc::out_of_range, std::string(what) + " symbol not reduced mod q");
        }
    }
}

/// Solves T V = W row-space-wise: returns T with T V = W, assuming
/// rowspan(W) is contained in rowspan(V).
Matrix span_factor(const Matrix& v, const Matrix& w) {
    return solve_any(v.transposed(), w.transposed()).transposed();
}

}  // namespace

std::vector<NodeVector> encode(const CodeSpec& code, const Stripe& stripe) {
    if (stripe.sources.size() != code.k()) {
        raise(Errc::dimension_mismatch, "stripe must have k source vectors");
    }
    for (const auto& src : stripe.sources) check_vector(code, src, "source");
    std::vector<NodeVector> out;
    out.reserve(code.n());
    for (std::uint32_t i = 1; i <= code.k(); ++i) {
        out.push_back({i, stripe.sources[i - 1]});
    }
    for (std::uint32_t j = code.k() + 1; j <= code.n(); ++j) {
        std::vector<Symbol> data(code.length(), 0);
        for (std::uint32_t i = 1; i <= code.k(); ++i) {
            accumulate(code.field(), data,
                       matvec(code.submatrix(j, i), stripe.sources[i - 1]));
        }
        out.push_back({j, std::move(data)});
    }
    return out;
}

Matrix assemble_decode_matrix(const CodeSpec& code,
                              const std::vector<std::uint32_t>& nodes) {
    const std::uint64_t L = code.length();
    const std::uint32_t k = code.k();
    if (nodes.size() != k) {
        raise(Errc::wrong_share_count, "need exactly k node indices");
    }
    Matrix a(code.field(), k * L, k * L);
    for (std::size_t row = 0; row < nodes.size(); ++row) {
        const std::uint32_t node = nodes[row];
        if (node < 1 || node > code.n()) {
            raise(Errc::bad_node, "node index outside 1..n");
        }
        if (node <= k) {
            for (std::uint64_t t = 0; t < L; ++t) {
                a.set(row * L + t, (node - 1) * L + t, 1);
            }
        } else {
            for (std::uint32_t i = 1; i <= k; ++i) {
                const Matrix& block = code.submatrix(node, i);
                for (std::uint64_t r = 0; r < L; ++r) {
                    for (std::uint64_t c = 0; c < L; ++c) {
                        a.set(row * L + r, (i - 1) * L + c, block.at(r, c));
                    }
                }
            }
        }
    }
    return a;
}

Stripe decode(const CodeSpec& code, const std::vector<NodeVector>& shares) {
    const std::uint32_t k = code.k();
    const std::uint64_t L = code.length();
    if (shares.size() != k) {
        raise(Errc::wrong_share_count,
              "need exactly " + std::to_string(k) + " shares");
    }
    std::vector<bool> seen(code.n() + 1, false);
    bool all_systematic = true;
    for (const NodeVector& s : shares) {
        if (s.node < 1 || s.node > code.n()) {
            raise(Errc::bad_node, "share from node outside 1..n");
        }
        if (seen[s.node]) {
            raise(Errc::wrong_share_count, "duplicate share from node " +
                                               std::to_string(s.node));
        }
        seen[s.node] = true;
        check_vector(code, s.data, "share");
        if (s.node > k) all_systematic = false;
    }
    Stripe stripe;
    stripe.sources.assign(k, std::vector<Symbol>(L, 0));
    if (all_systematic) {
        for (const NodeVector& s : shares) stripe.sources[s.node - 1] = s.data;
        return stripe;
    }
    std::vector<std::uint32_t> nodes;
    nodes.reserve(k);
    for (const NodeVector& s : shares) nodes.push_back(s.node);
    Matrix a = assemble_decode_matrix(code, nodes);
    Matrix rhs(code.field(), k * L, 1);
    for (std::size_t row = 0; row < shares.size(); ++row) {
        for (std::uint64_t t = 0; t < L; ++t) {
            rhs.set(row * L + t, 0, shares[row].data[t]);
        }
    }
    Matrix x = solve(a, rhs);
    for (std::uint32_t i = 0; i < k; ++i) {
        for (std::uint64_t t = 0; t < L; ++t) {
            stripe.sources[i][t] = x.at(i * L + t, 0);
        }
    }
    return stripe;
}

RepairPlan plan_repair(const CodeSpec& code, std::uint32_t l) {
    if (l < 1 || l > code.n()) {
        raise(Errc::bad_node, "node index outside 1..n");
    }
    const std::uint64_t L = code.length();
    const std::uint32_t b = code.parity_count();
    RepairPlan plan;
    plan.failed = l;
    if (l > code.k()) {
        // no bandwidth-optimal parity repair; fetch whole vectors from the
        // systematic nodes and re-encode
        std::vector<std::uint64_t> all(L);
        for (std::uint64_t m = 1; m <= L; ++m) all[m - 1] = m;
        for (std::uint32_t i = 1; i <= code.k(); ++i) plan.fetch[i] = all;
        plan.expected_bandwidth_symbols = static_cast<std::uint64_t>(code.k()) * L;
        plan.expected_disk_access_symbols = plan.expected_bandwidth_symbols;
        plan.optimal = false;
        return plan;
    }
    const Matrix v = repair_matrix(code, l);
    std::vector<std::uint64_t> positions;
    for (std::uint64_t c = 0; c < L; ++c) {
        for (std::size_t r = 0; r < v.rows(); ++r) {
            if (v.at(r, c) != 0) {
                positions.push_back(c + 1);
                break;
            }
        }
    }
    for (std::uint32_t node = 1; node <= code.n(); ++node) {
        if (node != l) plan.fetch[node] = positions;
    }
    plan.expected_bandwidth_symbols =
        static_cast<std::uint64_t>(code.n() - 1) * v.rows();
    plan.expected_disk_access_symbols =
        static_cast<std::uint64_t>(code.n() - 1) * positions.size();
    plan.optimal = plan.expected_bandwidth_symbols ==
                   static_cast<std::uint64_t>(code.n() - 1) * (L / b);
    return plan;
}

namespace {

void check_fetch(const RepairPlan& plan,
                 const std::map<std::uint32_t, std::vector<Symbol>>& fetched) {
    if (fetched.size() != plan.fetch.size()) {
        raise(Errc::plan_mismatch, "fetched data does not cover the plan");
    }
    for (const auto& [node, positions] : plan.fetch) {
        auto it = fetched.find(node);
        if (it == fetched.end()) {
            raise(Errc::plan_mismatch,
                  "no data fetched from node " + std::to_string(node));
        }
        if (it->second.size() != positions.size()) {
            raise(Errc::plan_mismatch,
                  "fetched size differs from plan for node " + std::to_string(node));
        }
    }
}

RepairResult repair_parity(const CodeSpec& code, const RepairPlan& plan,
                           const std::map<std::uint32_t, std::vector<Symbol>>& fetched) {
    const std::uint64_t L = code.length();
    std::vector<NodeVector> shares;
    for (const auto& [node, values] : fetched) shares.push_back({node, values});
    Stripe stripe = decode(code, shares);
    std::vector<Symbol> data(L, 0);
    for (std::uint32_t i = 1; i <= code.k(); ++i) {
        accumulate(code.field(), data,
                   matvec(code.submatrix(plan.failed, i), stripe.sources[i - 1]));
    }
    RepairResult res;
    res.node = {plan.failed, std::move(data)};
    for (const auto& [node, values] : fetched) {
        res.metrics.downloaded[node] = values.size();
        res.metrics.accessed[node] = values.size();
        res.metrics.downloaded_total += values.size();
        res.metrics.accessed_total += values.size();
    }
    res.metrics.optimal = false;
    return res;
}

/// Digit-identity cancellation: every fetched position x has digit l equal
/// to 0, so each interference term a_i(digit_shift(x, i, r)) with i != l was
/// itself fetched from survivor i, and the residue of the parity symbol is
/// lambda_{j,l} a_l(digit_shift(x, l, r)).
RepairResult repair_systematic_closed_form(
    const CodeSpec& code, const RepairPlan& plan,
    const std::map<std::uint32_t, std::vector<Symbol>>& fetched) {
    const PrimeField& f = code.field();
    const IndexSystem& idx = code.index();
    const std::uint64_t L = code.length();
    const std::uint32_t l = plan.failed;
    const std::vector<std::uint64_t>& positions = plan.fetch.begin()->second;
    std::vector<std::size_t> slot_of(L + 1, SIZE_MAX);
    for (std::size_t s = 0; s < positions.size(); ++s) slot_of[positions[s]] = s;
    std::vector<Symbol> a_l(L, 0);
    for (std::uint32_t r = 0; r < code.parity_count(); ++r) {
        const std::uint32_t j = code.k() + 1 + r;
        const Symbol lam_inv = f.inv(code.lambda_of(j, l));
        const std::vector<Symbol>& parity = fetched.at(j);
        for (std::size_t s = 0; s < positions.size(); ++s) {
            const std::uint64_t x = positions[s];
            Symbol residue = parity[s];
            for (std::uint32_t i = 1; i <= code.k(); ++i) {
                if (i == l) continue;
                const std::uint64_t pos = idx.digit_shift(x, i, r);
                const Symbol value = fetched.at(i)[slot_of[pos]];
                residue = f.sub(residue, f.mul(code.lambda_of(j, i), value));
            }
            a_l[idx.digit_shift(x, l, r) - 1] = f.mul(lam_inv, residue);
        }
    }
    RepairResult res;
    res.node = {l, std::move(a_l)};
    for (const auto& [node, values] : fetched) {
        res.metrics.downloaded[node] = values.size();
        res.metrics.accessed[node] = values.size();
        res.metrics.downloaded_total += values.size();
        res.metrics.accessed_total += values.size();
    }
    res.metrics.optimal =
        res.metrics.downloaded_total ==
        static_cast<std::uint64_t>(code.n() - 1) * (L / code.parity_count());
    return res;
}

/// Span cancellation for repair matrices whose rows are not basis vectors:
/// survivors ship w = V y; interference V C_{j,i} a_i equals T_{j,i} w_i
/// because rowspan(V C_{j,i}) = rowspan(V); the cancelled parity residues
/// stack into a full-rank system for a_l.
RepairResult repair_systematic_generic(
    const CodeSpec& code, const RepairPlan& plan,
    const std::map<std::uint32_t, std::vector<Symbol>>& fetched) {
    const PrimeField& f = code.field();
    const std::uint64_t L = code.length();
    const std::uint32_t l = plan.failed;
    const Matrix v = repair_matrix(code, l);
    const std::vector<std::uint64_t>& positions = plan.fetch.begin()->second;

    // w_node = V d_node, computable from the read cells alone
    std::map<std::uint32_t, std::vector<Symbol>> w;
    for (const auto& [node, values] : fetched) {
        std::vector<Symbol> combo(v.rows(), 0);
        for (std::size_t r = 0; r < v.rows(); ++r) {
            std::uint64_t acc = 0;
            for (std::size_t s = 0; s < positions.size(); ++s) {
                acc += static_cast<std::uint64_t>(v.at(r, positions[s] - 1)) * values[s];
                if (acc >= (std::uint64_t{1} << 62)) acc %= f.modulus();
            }
            combo[r] = static_cast<Symbol>(acc % f.modulus());
        }
        w[node] = std::move(combo);
    }

    std::vector<Matrix> system_blocks;
    std::vector<Symbol> rhs;
    for (std::uint32_t j = code.k() + 1; j <= code.n(); ++j) {
        std::vector<Symbol> residue = w.at(j);
        for (std::uint32_t i = 1; i <= code.k(); ++i) {
            if (i == l) continue;
            const Matrix t = span_factor(v, matmul(v, code.submatrix(j, i)));
            const std::vector<Symbol> cancel = matvec(t, w.at(i));
            for (std::size_t s = 0; s < residue.size(); ++s) {
                residue[s] = f.sub(residue[s], cancel[s]);
            }
        }
        system_blocks.push_back(matmul(v, code.submatrix(j, l)));
        rhs.insert(rhs.end(), residue.begin(), residue.end());
    }
    Matrix a = stack(system_blocks);
    const std::size_t rhs_rows = rhs.size();  // read before the move
    Matrix b(f, rhs_rows, 1, std::move(rhs));
    if (a.rows() != L) {
        raise(Errc::plan_mismatch, "repair system is not square");
    }
    Matrix x = solve(a, b);
    std::vector<Symbol> a_l(L, 0);
    for (std::uint64_t t = 0; t < L; ++t) a_l[t] = x.at(t, 0);

    RepairResult res;
    res.node = {l, std::move(a_l)};
    for (const auto& [node, values] : fetched) {
        res.metrics.downloaded[node] = v.rows();
        res.metrics.accessed[node] = values.size();
        res.metrics.downloaded_total += v.rows();
        res.metrics.accessed_total += values.size();
    }
    res.metrics.optimal =
        res.metrics.downloaded_total ==
        static_cast<std::uint64_t>(code.n() - 1) * (L / code.parity_count());
    return res;
}

}  // namespace

RepairResult execute_repair(const CodeSpec& code, const RepairPlan& plan,
                            const std::map<std::uint32_t, std::vector<Symbol>>& fetched) {
    if (plan.failed < 1 || plan.failed > code.n()) {
        raise(Errc::bad_node, "plan repairs a node outside 1..n");
    }
    check_fetch(plan, fetched);
    for (const auto& [node, values] : fetched) {
        for (Symbol s : values) {
            if (s >= code.field().modulus()) {
                raise(Errc::out_of_range, "fetched symbol not reduced mod q");
            }
        }
    }
    if (plan.failed > code.k()) {
        return repair_parity(code, plan, fetched);
    }
    if (code.permutation_structured()) {
        return repair_systematic_closed_form(code, plan, fetched);
    }
    return repair_systematic_generic(code, plan, fetched);
}

}  // namespace mdsr
