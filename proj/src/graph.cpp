#include "monotone_mas/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "monotone_mas/errors.hpp"
#include "monotone_mas/parallel.hpp"

namespace mas {

EdgeList read_edge_list(std::istream& in) {
    EdgeList out;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        if (!have_header) {
            long long n = 0;
            if (!(ls >> n) || n < 1) throw Error(fmt::format("edge list line {}: expected node count", line_no));
            out.n = static_cast<std::size_t>(n);
            have_header = true;
        } else {
            long long i = 0, j = 0;
            if (!(ls >> i >> j)) throw Error(fmt::format("edge list line {}: expected 'i j'", line_no));
            if (i < 1 || j < 1 || static_cast<std::size_t>(i) > out.n || static_cast<std::size_t>(j) > out.n) {
                throw Error(fmt::format("edge list line {}: node index out of range 1..{}", line_no, out.n));
            }
            out.edges.emplace_back(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1));
        }
        std::string rest;
        if (ls >> rest) throw Error(fmt::format("edge list line {}: trailing content '{}'", line_no, rest));
    }
    if (!have_header) throw Error("edge list is empty");
    return out;
}

void write_edge_list(std::ostream& out, const EdgeList& list) {
    out << list.n << '\n';
    for (const auto& [i, j] : list.edges) out << (i + 1) << ' ' << (j + 1) << '\n';
}

InferenceGraph::InferenceGraph(std::size_t n) : adjacency_(n), support_(n) {}

InferenceGraph InferenceGraph::from_edges(std::size_t n, const std::vector<Edge>& edges) {
    InferenceGraph g(n);
    for (const auto& [i, j] : edges) g.add_edge(i, j, 1.0);
    return g;
}

void InferenceGraph::add_edge(std::size_t i, std::size_t j, double support) {
    if (i >= size() || j >= size()) throw PreconditionError(fmt::format("edge ({}, {}) out of range", i + 1, j + 1));
    if (!(support > 0.0 && support <= 1.0)) throw PreconditionError("edge support must lie in (0, 1]");
    auto& adj = adjacency_[i];
    auto it = std::lower_bound(adj.begin(), adj.end(), j);
    const auto pos = static_cast<std::size_t>(it - adj.begin());
    if (it != adj.end() && *it == j) {
        support_[i][pos] = support;
        return;
    }
    adj.insert(it, j);
    support_[i].insert(support_[i].begin() + static_cast<std::ptrdiff_t>(pos), support);
}

bool InferenceGraph::has_edge(std::size_t i, std::size_t j) const {
    const auto& adj = adjacency_.at(i);
    return std::binary_search(adj.begin(), adj.end(), j);
}

double InferenceGraph::support(std::size_t i, std::size_t j) const {
    const auto& adj = adjacency_.at(i);
    auto it = std::lower_bound(adj.begin(), adj.end(), j);
    if (it == adj.end() || *it != j) return 0.0;
    return support_[i][static_cast<std::size_t>(it - adj.begin())];
}

std::vector<Edge> InferenceGraph::edges() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < adjacency_.size(); ++i)
        for (std::size_t j : adjacency_[i]) out.emplace_back(i, j);
    return out;
}

InferenceGraph infer_graph(const SystemMap& f, const SampleSpec& spec, double edge_tol) {
    if (!(edge_tol > 0.0)) throw PreconditionError("edge_tol must be > 0");
    spec.validate();
    const std::size_t n = f.dimension();
    const std::size_t total = spec.total();
    const std::uint64_t purpose = hash_label("infer_graph");

    std::vector<std::optional<Eigen::MatrixXd>> jacobians(total);
    parallel_for(total, [&](std::size_t k) {
        try {
            jacobians[k] = jacobian(f, draw_sample(spec, n, purpose, k)).values;
        } catch (const Error&) {
            jacobians[k].reset();
        }
    });

    std::vector<std::size_t> hits(n * n, 0);
    std::size_t valid = 0;
    for (const auto& j : jacobians) {
        if (!j) continue;
        ++valid;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                if (std::abs((*j)(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))) > edge_tol) ++hits[r * n + c];
    }
    const std::size_t failed = total - valid;
    if (failed * 10 > total) {
        throw EvaluationError(fmt::format("{}: {} of {} Jacobian evaluations failed", f.name(), failed, total));
    }

    InferenceGraph g(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (hits[r * n + c] > 0) {
                g.add_edge(r, c, static_cast<double>(hits[r * n + c]) / static_cast<double>(valid));
            }
    return g;
}

SccDecomposition strongly_connected_components(const InferenceGraph& g) {
    const std::size_t n = g.size();
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    SccDecomposition out;
    out.component.assign(n, unvisited);
    std::size_t counter = 0;

    // Explicit DFS stack of (node, next successor position).
    std::vector<std::pair<std::size_t, std::size_t>> dfs;
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        dfs.emplace_back(root, 0);
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!dfs.empty()) {
            auto& [v, pos] = dfs.back();
            const auto& succ = g.successors(v);
            if (pos < succ.size()) {
                const std::size_t w = succ[pos++];
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    dfs.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            const std::size_t node = v;
            dfs.pop_back();
            if (!dfs.empty()) low[dfs.back().first] = std::min(low[dfs.back().first], low[node]);
            if (low[node] == index[node]) {
                std::vector<std::size_t> members;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    out.component[w] = out.members.size();
                    members.push_back(w);
                } while (w != node);
                std::sort(members.begin(), members.end());
                out.members.push_back(std::move(members));
            }
        }
    }
    return out;
}

std::optional<std::size_t> has_globally_reachable_node(const InferenceGraph& g) {
    const SccDecomposition scc = strongly_connected_components(g);
    std::vector<bool> is_sink(scc.members.size(), true);
    for (const auto& [i, j] : g.edges()) {
        if (scc.component[i] != scc.component[j]) is_sink[scc.component[i]] = false;
    }
    std::optional<std::size_t> sink;
    for (std::size_t c = 0; c < is_sink.size(); ++c) {
        if (!is_sink[c]) continue;
        if (sink) return std::nullopt;
        sink = c;
    }
    if (!sink) return std::nullopt;
    return scc.members[*sink].front();
}

bool is_aperiodic_by_self_loops(const InferenceGraph& g) {
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!g.has_self_loop(i)) return false;
    return true;
}

}  // namespace mas
