#pragma once

#include <compare>
#include <map>
#include <vector>

namespace skeletor {

// Dense node index, 0..n-1 within the owning graph.
using NodeId = int;

// Unordered node pair stored in canonical order a < b, usable as a map key.
struct ArcPair {
    NodeId a = 0;
    NodeId b = 0;

    ArcPair() = default;
    ArcPair(NodeId x, NodeId y) : a(x < y ? x : y), b(x < y ? y : x) {}

    NodeId other(NodeId v) const { return v == a ? b : a; }
    bool contains(NodeId v) const { return v == a || v == b; }

    auto operator<=>(const ArcPair&) const = default;
};

// Directed acyclic graph over dense node ids. Parent lists are kept sorted
// and duplicate-free; acyclicity is the caller's obligation during
// construction and is validated by from_parents / checked via is_acyclic.
class Dag {
public:
    Dag() = default;
    explicit Dag(int n) : parents_(n), children_(n) {}

    // Validates indices, self-arcs, duplicates and acyclicity; throws
    // std::invalid_argument on violation.
    static Dag from_parents(std::vector<std::vector<NodeId>> parents);

    int node_count() const { return static_cast<int>(parents_.size()); }
    int arc_count() const;

    void add_arc(NodeId from, NodeId to);
    bool has_arc(NodeId from, NodeId to) const;
    bool adjacent(NodeId a, NodeId b) const { return has_arc(a, b) || has_arc(b, a); }

    const std::vector<NodeId>& parents(NodeId v) const { return parents_.at(v); }
    const std::vector<NodeId>& children(NodeId v) const { return children_.at(v); }

    std::vector<ArcPair> skeleton() const;

    bool operator==(const Dag&) const = default;

private:
    std::vector<std::vector<NodeId>> parents_;
    std::vector<std::vector<NodeId>> children_;
};

// True iff the parent lists describe a graph with a topological order.
// Throws std::invalid_argument on out-of-range indices.
bool is_acyclic(const std::vector<std::vector<NodeId>>& parents);

// Deterministic topological order: every node after all of its parents,
// ties broken by ascending index. Throws std::invalid_argument on cycles.
std::vector<NodeId> topological_order(const Dag& dag);

// Ancestors of the seed set, including the seeds themselves.
std::vector<bool> ancestral_set(const Dag& dag, const std::vector<NodeId>& seeds);

// Exact d-separation: true iff every path between x and y is blocked by z.
// Implemented as reachability over the moralized ancestral subgraph of
// {x, y} ∪ z. Throws std::invalid_argument if x == y or x/y is in z.
bool d_separated(const Dag& dag, NodeId x, NodeId y, const std::vector<NodeId>& z);

// Edge mark of a Pdag entry, relative to the canonical pair (a < b).
enum class EdgeMark {
    undirected,
    forward,   // a -> b
    backward,  // b -> a
};

// Partially directed graph: at most one mark per node pair, no self loops,
// and the directed subgraph stays acyclic (orientations that would close a
// directed cycle are refused at mutation time).
class Pdag {
public:
    Pdag() = default;
    explicit Pdag(int n) : n_(n) {}

    int node_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    void add_undirected(NodeId a, NodeId b);

    // Orients an existing edge as from -> to. Returns false (and leaves the
    // edge untouched) if the orientation would create a directed cycle.
    // Re-orienting in the same direction is a no-op; the opposite direction
    // throws std::logic_error.
    bool set_direction(NodeId from, NodeId to);

    void make_undirected(NodeId a, NodeId b);

    bool adjacent(NodeId a, NodeId b) const;
    bool has_directed(NodeId from, NodeId to) const;
    bool has_undirected(NodeId a, NodeId b) const;

    std::vector<NodeId> adjacent_nodes(NodeId v) const;
    // Nodes u with u -> v.
    std::vector<NodeId> parent_nodes(NodeId v) const;
    // Nodes u with v -> u.
    std::vector<NodeId> child_nodes(NodeId v) const;
    // Nodes u with u -- v (undirected).
    std::vector<NodeId> neighbor_nodes(NodeId v) const;

    bool has_directed_path(NodeId from, NodeId to) const;

    const std::map<ArcPair, EdgeMark>& edges() const { return edges_; }

    bool operator==(const Pdag&) const = default;

private:
    int n_ = 0;
    std::map<ArcPair, EdgeMark> edges_;
};

}  // namespace skeletor
