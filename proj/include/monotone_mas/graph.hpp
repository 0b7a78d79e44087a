#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "monotone_mas/sampling.hpp"
#include "monotone_mas/system.hpp"

namespace mas {

using Edge = std::pair<std::size_t, std::size_t>;

/// Plain edge list, 0-based in memory. The text form is 1-based:
///   n
///   i j
///   ...
struct EdgeList {
    std::size_t n = 0;
    std::vector<Edge> edges;
};

EdgeList read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const EdgeList& list);

/// Directed dependency graph: edge (i, j) when dF_i/dx_j is not identically
/// zero. Each edge keeps the fraction of samples on which it was observed.
class InferenceGraph {
public:
    explicit InferenceGraph(std::size_t n);
    /// Graph with the given edges, all with support 1.
    static InferenceGraph from_edges(std::size_t n, const std::vector<Edge>& edges);

    std::size_t size() const noexcept { return adjacency_.size(); }

    /// support must be in (0, 1]. Re-adding an edge overwrites its support.
    void add_edge(std::size_t i, std::size_t j, double support = 1.0);
    bool has_edge(std::size_t i, std::size_t j) const;
    bool has_self_loop(std::size_t i) const { return has_edge(i, i); }
    double support(std::size_t i, std::size_t j) const;

    const std::vector<std::size_t>& successors(std::size_t i) const { return adjacency_.at(i); }
    std::vector<Edge> edges() const;
    EdgeList edge_list() const { return {size(), edges()}; }

private:
    std::vector<std::vector<std::size_t>> adjacency_;  // sorted successor lists
    std::vector<std::vector<double>> support_;         // parallel to adjacency_
};

inline constexpr double kDefaultEdgeTol = 1e-7;

/// Samples the Jacobian over `spec` and keeps every entry whose magnitude
/// exceeds edge_tol at least once. Throws EvaluationError when more than 10%
/// of the Jacobian evaluations fail.
InferenceGraph infer_graph(const SystemMap& f, const SampleSpec& spec, double edge_tol = kDefaultEdgeTol);

/// Tarjan's algorithm; component ids are in reverse topological order of
/// the condensation (sink components first).
struct SccDecomposition {
    std::vector<std::size_t> component;          // node -> component id
    std::vector<std::vector<std::size_t>> members;  // component id -> sorted nodes
};

SccDecomposition strongly_connected_components(const InferenceGraph& g);

/// A node reachable from every node, taken from the unique sink component of
/// the condensation (smallest id in it). None when zero or several sinks.
std::optional<std::size_t> has_globally_reachable_node(const InferenceGraph& g);

/// Sufficient aperiodicity test: every node carries a self-loop.
bool is_aperiodic_by_self_loops(const InferenceGraph& g);

}  // namespace mas
